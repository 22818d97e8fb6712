#ifndef OPPLEARN_MINING_HPP
#define OPPLEARN_MINING_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "opplearn/opposition.hpp"

namespace opplearn {

/// Observed points <x_1..x_n, y> together with the declared input bounds and
/// the running range of the outputs.
class SampleSet {
 public:
  /// Validates dimensions and bounds; the output range is built from `outputs`.
  SampleSet(Eigen::MatrixXd inputs, Eigen::VectorXd outputs, std::vector<Bounds> input_bounds);

  /// Empty set of dimension `bounds.size()`.
  explicit SampleSet(std::vector<Bounds> input_bounds);

  void add_row(const Eigen::Ref<const Eigen::VectorXd>& x, double y);

  std::size_t size() const { return static_cast<std::size_t>(outputs_.size()); }
  std::size_t dimension() const { return input_bounds_.size(); }

  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::VectorXd& outputs() const { return outputs_; }
  const std::vector<Bounds>& input_bounds() const { return input_bounds_; }
  const RunningRange& output_range() const { return output_range_; }

 private:
  void check_row(const Eigen::Ref<const Eigen::VectorXd>& x, double y, Eigen::Index row) const;

  Eigen::MatrixXd inputs_;
  Eigen::VectorXd outputs_;
  std::vector<Bounds> input_bounds_;
  RunningRange output_range_;
};

/// One row of a sample set paired with the input of its nearest-output
/// opposite.
struct MinedPair {
  Eigen::VectorXd inputs;
  double output = 0;
  Eigen::VectorXd opposite_inputs;
  double opposite_output_target = 0;
  double match_error = 0;
  std::size_t matched_row = 0;
};

/// For every row, reflects its output under `scheme` and records the input
/// of the row whose output lies nearest to that target. All rows compete,
/// including the row itself; ties go to the lowest index.
std::vector<MinedPair> mine_opposites(const SampleSet& samples, OppositionScheme scheme);

struct MiningDataset {
  Eigen::MatrixXd inputs;   // n_s x (n + 1): x_1..x_n, y
  Eigen::MatrixXd targets;  // n_s x n: opposite inputs
};

MiningDataset mining_dataset(const std::vector<MinedPair>& pairs);

}  // namespace opplearn

#endif  // OPPLEARN_MINING_HPP
