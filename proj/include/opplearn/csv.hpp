#ifndef OPPLEARN_CSV_HPP
#define OPPLEARN_CSV_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "opplearn/mining.hpp"

namespace opplearn {

/// Shortest decimal text that parses back to exactly `v`. Non-finite values
/// raise NumericError: every emitted number must be finite.
std::string format_double(double v);

/// Header plus all-numeric body. Blank lines are skipped; parse failures
/// raise ParseError naming the 1-based line and column.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_numeric_csv(const std::filesystem::path& path);

/// Columns x1..xn,y.
struct SampleTable {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd outputs;
};

SampleTable read_sample_csv(const std::filesystem::path& path);

/// Bounds spanning each input column, widened by 0.5 either side when a
/// column is constant. Requires at least one row.
std::vector<Bounds> observed_bounds(const Eigen::MatrixXd& inputs);

/// Columns x1..xn,y,ox1..oxn,match_error.
void write_mined_csv(const std::filesystem::path& path, const std::vector<MinedPair>& pairs);
MiningDataset read_mined_csv(const std::filesystem::path& path);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream os_;
  std::size_t columns_;
};

}  // namespace opplearn

#endif  // OPPLEARN_CSV_HPP
