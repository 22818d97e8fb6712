#ifndef OPPLEARN_FIS_HPP
#define OPPLEARN_FIS_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opplearn/errors.hpp"
#include "opplearn/fcm.hpp"

namespace opplearn {

/// Smallest Gaussian sigma a rule may carry, in normalized units.
inline constexpr double kWidthFloor = 0.01;
/// Above this eigenvalue ratio the weighted normal equations count as singular.
inline constexpr double kMaxNormalCondition = 1e12;

/// Min-max normalization of one column: normalized = (v - offset) / scale.
template <typename Scalar>
struct Normalization {
  Scalar offset = 0;
  Scalar scale = 1;
  // set when the column had zero range and `scale` was clamped to 1
  bool degenerate = false;

  Scalar apply(Scalar v) const { return (v - offset) / scale; }
  Scalar invert(Scalar v) const { return offset + scale * v; }

  friend bool operator==(const Normalization&, const Normalization&) = default;
};

/// IF x_1 is A_1 AND ... AND x_d is A_d THEN y = w_0 + w_1 x_1 + ... + w_d x_d,
/// with Gaussian A_i, all in normalized units.
template <typename Scalar>
struct FuzzyRule {
  VectorX<Scalar> centers;
  VectorX<Scalar> widths;
  MatrixX<Scalar> consequents;  // n_out x (d + 1), column 0 is the intercept

  /// Consequent outputs at normalized input z.
  template <typename Derived>
  VectorX<Scalar> evaluate(const Eigen::MatrixBase<Derived>& z) const {
    return consequents.col(0) + consequents.rightCols(consequents.cols() - 1) * z;
  }

  /// Product of the per-dimension Gaussian memberships.
  template <typename Derived>
  Scalar firing_strength(const Eigen::MatrixBase<Derived>& z) const {
    Scalar w = 1;
    for (Eigen::Index d = 0; d < centers.size(); ++d) {
      const Scalar t = (z(d) - centers(d)) / widths(d);
      w *= std::exp(Scalar(-0.5) * t * t);
    }
    return w;
  }
};

template <typename Scalar>
struct FisModel {
  std::vector<FuzzyRule<Scalar>> rules;
  std::vector<Normalization<Scalar>> input_norms;
  std::vector<Normalization<Scalar>> output_norms;
  TrainConfig config;

  Eigen::Index n_inputs() const { return static_cast<Eigen::Index>(input_norms.size()); }
  Eigen::Index n_outputs() const { return static_cast<Eigen::Index>(output_norms.size()); }
  std::size_t n_rules() const { return rules.size(); }

  /// Throws ContractError unless every structural invariant holds.
  void validate() const {
    if (rules.empty()) throw ContractError("model has no rules");
    if (input_norms.empty() || output_norms.empty())
      throw ContractError("model needs at least one input and one output");
    for (const auto& n : input_norms)
      if (!(n.scale > 0)) throw ContractError("input scale must be positive");
    for (const auto& n : output_norms)
      if (!(n.scale > 0)) throw ContractError("output scale must be positive");
    for (const auto& r : rules) {
      if (r.centers.size() != n_inputs() || r.widths.size() != n_inputs())
        throw ContractError("rule antecedent dimension does not match the model");
      if (r.consequents.rows() != n_outputs() || r.consequents.cols() != n_inputs() + 1)
        throw ContractError("rule consequent shape does not match the model");
      if (!(r.widths.array() > Scalar(0)).all())
        throw ContractError("rule widths must be strictly positive");
    }
  }
};

using FisModelXd = FisModel<double>;

/// Rows seen so far by an evolving model.
template <typename Scalar>
struct TrainingHistory {
  MatrixX<Scalar> inputs;
  MatrixX<Scalar> targets;

  Eigen::Index rows() const { return inputs.rows(); }
};

namespace detail {

template <typename Derived>
std::vector<Normalization<typename Derived::Scalar>> column_norms(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  std::vector<Normalization<Scalar>> norms;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const Scalar lo = m.col(c).minCoeff();
    const Scalar hi = m.col(c).maxCoeff();
    if (hi > lo)
      norms.push_back({lo, hi - lo, false});
    else
      norms.push_back({lo, Scalar(1), true});
  }
  return norms;
}

template <typename Scalar, typename Derived>
MatrixX<Scalar> normalize_columns(const Eigen::MatrixBase<Derived>& m,
                                  const std::vector<Normalization<Scalar>>& norms) {
  MatrixX<Scalar> out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const auto& n = norms[static_cast<std::size_t>(c)];
    out.col(c) = (m.col(c).array() - n.offset) / n.scale;
  }
  return out;
}

// Weighted least squares of `targets` on (1, inputs). Well-conditioned normal
// equations are solved directly; otherwise the minimum-norm solution of the
// rank-deficient system is returned. nullopt when no finite fit exists.
template <typename Scalar>
std::optional<MatrixX<Scalar>> weighted_linear_fit(const MatrixX<Scalar>& inputs,
                                                   const MatrixX<Scalar>& targets,
                                                   const VectorX<Scalar>& weights) {
  const Eigen::Index d = inputs.cols();
  MatrixX<Scalar> design(inputs.rows(), d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = inputs;
  const MatrixX<Scalar> weighted = weights.asDiagonal() * design;
  const MatrixX<Scalar> normal = design.transpose() * weighted;
  const MatrixX<Scalar> rhs = weighted.transpose() * targets;

  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> eig(normal, Eigen::EigenvaluesOnly);
  const Scalar lo = eig.eigenvalues().minCoeff();
  const Scalar hi = eig.eigenvalues().maxCoeff();
  if (!(hi > Scalar(0))) return std::nullopt;

  // n_out x (d + 1)
  MatrixX<Scalar> coeffs;
  if (lo > Scalar(0) && hi / lo <= Scalar(kMaxNormalCondition)) {
    coeffs = normal.ldlt().solve(rhs).transpose();
  } else {
    const VectorX<Scalar> root = weights.cwiseSqrt();
    Eigen::CompleteOrthogonalDecomposition<MatrixX<Scalar>> cod(root.asDiagonal() * design);
    cod.setThreshold(Scalar(1) / std::sqrt(Scalar(kMaxNormalCondition)));
    if (cod.rank() == 0) return std::nullopt;
    coeffs = cod.solve(root.asDiagonal() * targets).transpose();
  }
  if (!coeffs.allFinite()) return std::nullopt;
  return coeffs;
}

}  // namespace detail

/// Fits a Takagi-Sugeno rule base mapping `inputs` to `targets`.
///
/// Both sides are min-max normalized per column; fuzzy c-means runs on the
/// joint (input | target) space and each cluster becomes one rule. Antecedent
/// widths are the u^m-weighted standard deviations (floored at kWidthFloor)
/// and consequents are u^m-weighted least-squares planes (minimum-norm when
/// the local inputs are collinear), replaced by the cluster's target center
/// when no finite fit exists.
///
/// `init_centers` (raw data units, n_clusters x (inputs + targets) columns)
/// warm-starts the clustering.
template <typename DerivedX, typename DerivedY>
FisModel<typename DerivedX::Scalar> build_fis(
    const Eigen::MatrixBase<DerivedX>& inputs, const Eigen::MatrixBase<DerivedY>& targets,
    const TrainConfig& cfg,
    const std::optional<MatrixX<typename DerivedX::Scalar>>& init_centers = std::nullopt) {
  using Scalar = typename DerivedX::Scalar;
  if (inputs.rows() != targets.rows())
    throw ContractError("inputs and targets differ in row count");
  if (inputs.cols() < 1 || targets.cols() < 1)
    throw ContractError("need at least one input and one target column");
  cfg.validate(inputs.rows());

  FisModel<Scalar> model;
  model.config = cfg;
  model.input_norms = detail::column_norms(inputs);
  model.output_norms = detail::column_norms(targets);

  const Eigen::Index d = inputs.cols();
  const Eigen::Index n_out = targets.cols();
  const MatrixX<Scalar> xn = detail::normalize_columns(inputs, model.input_norms);
  const MatrixX<Scalar> tn = detail::normalize_columns(targets, model.output_norms);
  MatrixX<Scalar> joint(xn.rows(), d + n_out);
  joint << xn, tn;

  std::optional<MatrixX<Scalar>> init;
  if (init_centers) {
    if (init_centers->cols() != d + n_out)
      throw ContractError("warm-start centers must span inputs and targets");
    init = MatrixX<Scalar>(init_centers->rows(), d + n_out);
    init->leftCols(d) = detail::normalize_columns(init_centers->leftCols(d), model.input_norms);
    init->rightCols(n_out) =
        detail::normalize_columns(init_centers->rightCols(n_out), model.output_norms);
  }

  const FcmResult<Scalar> fcm = fcm_cluster(joint, cfg, init);
  const Scalar m = static_cast<Scalar>(cfg.fuzzy_exponent_m);
  const MatrixX<Scalar> um = detail::weights_pow(fcm.memberships, m);

  for (Eigen::Index j = 0; j < fcm.centers.rows(); ++j) {
    FuzzyRule<Scalar> rule;
    const VectorX<Scalar> w = um.col(j);
    const Scalar mass = w.sum();
    rule.centers = fcm.centers.row(j).head(d).transpose();
    rule.widths.resize(d);
    for (Eigen::Index c = 0; c < d; ++c) {
      Scalar var = 0;
      if (mass > Scalar(0))
        var = (w.array() * (xn.col(c).array() - rule.centers(c)).square()).sum() / mass;
      rule.widths(c) = std::max(std::sqrt(var), Scalar(kWidthFloor));
    }
    if (auto fit = detail::weighted_linear_fit<Scalar>(xn, tn, w)) {
      rule.consequents = std::move(*fit);
    } else {
      rule.consequents = MatrixX<Scalar>::Zero(n_out, d + 1);
      rule.consequents.col(0) = fcm.centers.row(j).tail(n_out).transpose();
    }
    model.rules.push_back(std::move(rule));
  }
  return model;
}

/// Evaluates the rule base at `input` (raw units): normalized firing
/// strengths weight each rule's linear consequent. When every firing strength
/// underflows, the rule with the nearest antecedent center answers alone.
template <typename Scalar, typename Derived>
VectorX<Scalar> fis_predict(const FisModel<Scalar>& model,
                            const Eigen::MatrixBase<Derived>& input) {
  if (input.size() != model.n_inputs())
    throw ContractError("input has dimension " + std::to_string(input.size()) +
                        ", model expects " + std::to_string(model.n_inputs()));
  if (model.rules.empty()) throw ContractError("model has no rules");
  VectorX<Scalar> z(input.size());
  for (Eigen::Index c = 0; c < z.size(); ++c)
    z(c) = model.input_norms[static_cast<std::size_t>(c)].apply(input(c));

  VectorX<Scalar> numer = VectorX<Scalar>::Zero(model.n_outputs());
  Scalar denom = 0;
  for (const auto& rule : model.rules) {
    const Scalar w = rule.firing_strength(z);
    if (w > Scalar(0)) {
      numer += w * rule.evaluate(z);
      denom += w;
    }
  }

  VectorX<Scalar> yn;
  if (denom > Scalar(0)) {
    yn = numer / denom;
  } else {
    std::size_t nearest = 0;
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (std::size_t j = 0; j < model.rules.size(); ++j) {
      const Scalar dist = (z - model.rules[j].centers).squaredNorm();
      if (dist < best) {
        best = dist;
        nearest = j;
      }
    }
    yn = model.rules[nearest].evaluate(z);
  }

  VectorX<Scalar> y(yn.size());
  for (Eigen::Index c = 0; c < y.size(); ++c)
    y(c) = model.output_norms[static_cast<std::size_t>(c)].invert(yn(c));
  return y;
}

/// Row-wise fis_predict.
template <typename Scalar, typename Derived>
MatrixX<Scalar> fis_predict_rows(const FisModel<Scalar>& model,
                                 const Eigen::MatrixBase<Derived>& inputs) {
  MatrixX<Scalar> out(inputs.rows(), model.n_outputs());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i)
    out.row(i) = fis_predict(model, inputs.row(i).transpose()).transpose();
  return out;
}

/// Joint (input | target) rule centers in raw data units. The target part is
/// the rule's consequent evaluated at its own antecedent center.
template <typename Scalar>
MatrixX<Scalar> rule_centers_raw(const FisModel<Scalar>& model) {
  const Eigen::Index d = model.n_inputs();
  const Eigen::Index n_out = model.n_outputs();
  MatrixX<Scalar> out(static_cast<Eigen::Index>(model.rules.size()), d + n_out);
  for (std::size_t j = 0; j < model.rules.size(); ++j) {
    const auto& rule = model.rules[j];
    const auto row = static_cast<Eigen::Index>(j);
    for (Eigen::Index c = 0; c < d; ++c)
      out(row, c) = model.input_norms[static_cast<std::size_t>(c)].invert(rule.centers(c));
    const VectorX<Scalar> yn = rule.evaluate(rule.centers);
    for (Eigen::Index c = 0; c < n_out; ++c)
      out(row, d + c) = model.output_norms[static_cast<std::size_t>(c)].invert(yn(c));
  }
  return out;
}

/// Folds a batch of new rows (one or many) into the model: the rows are
/// appended to `history`, normalization is recomputed over everything seen,
/// and the rule base is re-extracted with clustering warm-started from the
/// current rule centers. An empty batch returns the model unchanged.
template <typename Scalar, typename DerivedX, typename DerivedY>
FisModel<Scalar> evolve_update(const FisModel<Scalar>& model,
                               const Eigen::MatrixBase<DerivedX>& new_inputs,
                               const Eigen::MatrixBase<DerivedY>& new_targets,
                               TrainingHistory<Scalar>& history) {
  if (new_inputs.rows() != new_targets.rows())
    throw ContractError("new inputs and targets differ in row count");
  if (new_inputs.rows() == 0) return model;
  if (new_inputs.cols() != model.n_inputs() || new_targets.cols() != model.n_outputs())
    throw ContractError("new rows do not match the model dimensionality");
  if (history.rows() > 0 &&
      (history.inputs.cols() != model.n_inputs() || history.targets.cols() != model.n_outputs() ||
       history.targets.rows() != history.inputs.rows()))
    throw ContractError("history does not match the model dimensionality");

  const Eigen::Index old_rows = history.rows();
  const Eigen::Index add = new_inputs.rows();
  MatrixX<Scalar> inputs(old_rows + add, model.n_inputs());
  MatrixX<Scalar> targets(old_rows + add, model.n_outputs());
  if (old_rows > 0) {
    inputs.topRows(old_rows) = history.inputs;
    targets.topRows(old_rows) = history.targets;
  }
  inputs.bottomRows(add) = new_inputs;
  targets.bottomRows(add) = new_targets;

  const MatrixX<Scalar> warm = rule_centers_raw(model);
  FisModel<Scalar> next = build_fis(inputs, targets, model.config, std::optional(warm));
  history.inputs = std::move(inputs);
  history.targets = std::move(targets);
  return next;
}

}  // namespace opplearn

#endif  // OPPLEARN_FIS_HPP
