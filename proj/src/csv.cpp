#include "opplearn/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace opplearn {

namespace {

std::string where(std::size_t line, std::size_t col) {
  return "row " + std::to_string(line) + ", column " + std::to_string(col);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view text, std::size_t line, std::size_t col) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(where(line, col) + ": '" + std::string(text) + "' is not a number");
  if (!std::isfinite(v)) throw ParseError(where(line, col) + ": value is not finite");
  return v;
}

// Checks that `header` reads prefix1..prefixN starting at `first`.
bool numbered(const std::vector<std::string>& header, std::size_t first, std::size_t n,
              std::string_view prefix) {
  for (std::size_t i = 0; i < n; ++i)
    if (header[first + i] != std::string(prefix) + std::to_string(i + 1)) return false;
  return true;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) throw NumericError("refusing to emit non-finite value");
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericError("failed to format value");
  return std::string(buf, ptr);
}

CsvTable read_numeric_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split(text);
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(trim(f));
      continue;
    }
    if (fields.size() != table.header.size())
      throw ParseError("row " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " columns, found " +
                       std::to_string(fields.size()));
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c)
      row.push_back(parse_field(fields[c], line_no, c + 1));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError(path.string() + ": missing header");
  return table;
}

SampleTable read_sample_csv(const std::filesystem::path& path) {
  const CsvTable t = read_numeric_csv(path);
  const std::size_t n = t.header.size() - 1;
  if (t.header.size() < 2 || !numbered(t.header, 0, n, "x") || t.header.back() != "y")
    throw ParseError(path.string() + ": header must read x1,...,xn,y");
  SampleTable out;
  out.inputs.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(n));
  out.outputs.resize(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t c = 0; c < n; ++c)
      out.inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = t.rows[i][c];
    out.outputs(static_cast<Eigen::Index>(i)) = t.rows[i][n];
  }
  return out;
}

std::vector<Bounds> observed_bounds(const Eigen::MatrixXd& inputs) {
  if (inputs.rows() == 0) throw InsufficientDataError("no rows to take bounds from");
  std::vector<Bounds> bounds;
  for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
    const double lo = inputs.col(c).minCoeff();
    const double hi = inputs.col(c).maxCoeff();
    bounds.push_back(hi > lo ? Bounds(lo, hi) : Bounds(lo - 0.5, hi + 0.5));
  }
  return bounds;
}

void write_mined_csv(const std::filesystem::path& path, const std::vector<MinedPair>& pairs) {
  if (pairs.empty()) throw InsufficientDataError("no mined pairs to write");
  const Eigen::Index n = pairs.front().inputs.size();
  std::vector<std::string> header;
  for (Eigen::Index i = 1; i <= n; ++i) header.push_back("x" + std::to_string(i));
  header.push_back("y");
  for (Eigen::Index i = 1; i <= n; ++i) header.push_back("ox" + std::to_string(i));
  header.push_back("match_error");

  CsvWriter out(path, header);
  for (const auto& p : pairs) {
    std::vector<std::string> fields;
    for (Eigen::Index i = 0; i < n; ++i) fields.push_back(format_double(p.inputs(i)));
    fields.push_back(format_double(p.output));
    for (Eigen::Index i = 0; i < n; ++i) fields.push_back(format_double(p.opposite_inputs(i)));
    fields.push_back(format_double(p.match_error));
    out.row(fields);
  }
  out.close();
}

MiningDataset read_mined_csv(const std::filesystem::path& path) {
  const CsvTable t = read_numeric_csv(path);
  const std::size_t cols = t.header.size();
  if (cols < 4 || (cols - 2) % 2 != 0)
    throw ParseError(path.string() + ": header must read x1..xn,y,ox1..oxn,match_error");
  const std::size_t n = (cols - 2) / 2;
  if (!numbered(t.header, 0, n, "x") || t.header[n] != "y" || !numbered(t.header, n + 1, n, "ox") ||
      t.header.back() != "match_error")
    throw ParseError(path.string() + ": header must read x1..xn,y,ox1..oxn,match_error");
  if (t.rows.empty()) throw InsufficientDataError(path.string() + ": no data rows");
  MiningDataset ds;
  const auto rows = static_cast<Eigen::Index>(t.rows.size());
  ds.inputs.resize(rows, static_cast<Eigen::Index>(n + 1));
  ds.targets.resize(rows, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& r = t.rows[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c <= n; ++c) ds.inputs(i, static_cast<Eigen::Index>(c)) = r[c];
    for (std::size_t c = 0; c < n; ++c) ds.targets(i, static_cast<Eigen::Index>(c)) = r[n + 1 + c];
  }
  return ds;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), os_(path), columns_(header.size()) {
  if (!os_) throw Error("cannot open " + path.string() + " for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw ContractError("CSV row width does not match the header");
  for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << fields[i];
  os_ << '\n';
}

void CsvWriter::close() {
  os_.close();
  if (!os_) throw Error("failed writing " + path_.string());
}

}  // namespace opplearn
