#include "opplearn/mining.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace opplearn {

SampleSet::SampleSet(std::vector<Bounds> input_bounds) : input_bounds_(std::move(input_bounds)) {
  if (input_bounds_.empty()) throw ContractError("sample set needs at least one input dimension");
  inputs_.resize(0, static_cast<Eigen::Index>(input_bounds_.size()));
}

SampleSet::SampleSet(Eigen::MatrixXd inputs, Eigen::VectorXd outputs,
                     std::vector<Bounds> input_bounds)
    : SampleSet(std::move(input_bounds)) {
  if (inputs.cols() != static_cast<Eigen::Index>(dimension()))
    throw ContractError("sample inputs have " + std::to_string(inputs.cols()) +
                        " columns but " + std::to_string(dimension()) + " bounds were given");
  if (inputs.rows() != outputs.size())
    throw ContractError("sample inputs and outputs differ in row count");
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    check_row(inputs.row(i).transpose(), outputs(i), i);
    output_range_ = update_range(output_range_, outputs(i));
  }
  inputs_ = std::move(inputs);
  outputs_ = std::move(outputs);
}

void SampleSet::check_row(const Eigen::Ref<const Eigen::VectorXd>& x, double y,
                          Eigen::Index row) const {
  if (x.size() != static_cast<Eigen::Index>(dimension()))
    throw ContractError("row " + std::to_string(row) + " has dimension " +
                        std::to_string(x.size()) + ", expected " + std::to_string(dimension()));
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    if (!input_bounds_[static_cast<std::size_t>(d)].contains(x(d)))
      throw DomainError("row " + std::to_string(row) + " input " + std::to_string(d + 1) +
                        " = " + detail::format_value(x(d)) + " outside its bounds");
  }
  if (!std::isfinite(y))
    throw DomainError("row " + std::to_string(row) + " has a non-finite output");
}

void SampleSet::add_row(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  const Eigen::Index n = inputs_.rows();
  check_row(x, y, n);
  inputs_.conservativeResize(n + 1, Eigen::NoChange);
  inputs_.row(n) = x.transpose();
  outputs_.conservativeResize(n + 1);
  outputs_(n) = y;
  output_range_ = update_range(output_range_, y);
}

std::vector<MinedPair> mine_opposites(const SampleSet& samples, OppositionScheme scheme) {
  const std::size_t ns = samples.size();
  if (ns < 2)
    throw InsufficientDataError("opposition mining needs at least 2 samples, got " +
                                std::to_string(ns));
  const Eigen::VectorXd& y = samples.outputs();
  const RunningRange& range = samples.output_range();

  std::vector<MinedPair> pairs;
  pairs.reserve(ns);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double target = scheme_opposite(y(i), scheme, range);
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index best_j = 0;
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      const double diff = std::abs(target - y(j));
      if (diff < best) {
        best = diff;
        best_j = j;
      }
    }
    MinedPair p;
    p.inputs = samples.inputs().row(i).transpose();
    p.output = y(i);
    p.opposite_inputs = samples.inputs().row(best_j).transpose();
    p.opposite_output_target = target;
    p.match_error = best;
    p.matched_row = static_cast<std::size_t>(best_j);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

MiningDataset mining_dataset(const std::vector<MinedPair>& pairs) {
  if (pairs.empty()) throw InsufficientDataError("no mined pairs to lay out");
  const Eigen::Index n = pairs.front().inputs.size();
  MiningDataset out;
  out.inputs.resize(static_cast<Eigen::Index>(pairs.size()), n + 1);
  out.targets.resize(static_cast<Eigen::Index>(pairs.size()), n);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const MinedPair& p = pairs[i];
    if (p.inputs.size() != n || p.opposite_inputs.size() != n)
      throw ContractError("mined pair " + std::to_string(i) + " has inconsistent dimension");
    const auto row = static_cast<Eigen::Index>(i);
    out.inputs.row(row).head(n) = p.inputs.transpose();
    out.inputs(row, n) = p.output;
    out.targets.row(row) = p.opposite_inputs.transpose();
  }
  return out;
}

}  // namespace opplearn
