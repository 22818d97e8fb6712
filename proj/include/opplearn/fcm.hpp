#ifndef OPPLEARN_FCM_HPP
#define OPPLEARN_FCM_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "opplearn/errors.hpp"

namespace opplearn {

/// Clustering and rule-extraction settings. Defaults follow the reference
/// experiments: 30 clusters, fuzzifier 2, 5000 iterations, shift tolerance 1e-5.
struct TrainConfig {
  int n_clusters = 30;
  double fuzzy_exponent_m = 2.0;
  int max_iter = 5000;
  double epsilon = 1e-5;
  std::uint64_t seed = 0;

  /// Throws ConfigError if the settings are unusable for `rows` data rows.
  void validate(Eigen::Index rows) const {
    if (n_clusters < 1) throw ConfigError("n_clusters must be >= 1");
    if (!(fuzzy_exponent_m > 1.0)) throw ConfigError("fuzzy exponent m must be > 1");
    if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
    if (n_clusters > rows)
      throw ConfigError("n_clusters (" + std::to_string(n_clusters) + ") exceeds data rows (" +
                        std::to_string(rows) + ")");
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

template <typename Scalar>
struct FcmResult {
  MatrixX<Scalar> centers;      // n_c x d
  MatrixX<Scalar> memberships;  // n_rows x n_c, consistent with `centers`
  int iterations_used = 0;
  Scalar final_shift = 0;
  // Objective sum(u^m d^2) evaluated after every membership update.
  std::vector<Scalar> objective_history;
};

namespace detail {

// Squared Euclidean distance of every row to every center (n x c). Computed
// by direct differences so coincident points give an exact zero.
template <typename DerivedX, typename DerivedC>
MatrixX<typename DerivedX::Scalar> squared_distances(const Eigen::MatrixBase<DerivedX>& data,
                                                     const Eigen::MatrixBase<DerivedC>& centers) {
  using Scalar = typename DerivedX::Scalar;
  MatrixX<Scalar> d2(data.rows(), centers.rows());
  for (Eigen::Index j = 0; j < centers.rows(); ++j)
    d2.col(j) = (data.rowwise() - centers.row(j)).rowwise().squaredNorm().transpose();
  return d2;
}

// u_ij = 1 / sum_k (d_ij / d_ik)^(2/(m-1)), written against the nearest center
// so the ratios stay in (0, 1]. Rows with exact-zero distances share their
// membership equally among those centers.
template <typename Scalar>
MatrixX<Scalar> memberships_from_distances(const MatrixX<Scalar>& d2, Scalar m) {
  const Scalar power = Scalar(1) / (m - Scalar(1));
  MatrixX<Scalar> u(d2.rows(), d2.cols());
  for (Eigen::Index i = 0; i < d2.rows(); ++i) {
    const Scalar nearest = d2.row(i).minCoeff();
    if (nearest == Scalar(0)) {
      const auto zeros = (d2.row(i).array() == Scalar(0)).template cast<Scalar>();
      u.row(i) = zeros / zeros.sum();
      continue;
    }
    auto ratio = (nearest / d2.row(i).array());
    if (power == Scalar(1))
      u.row(i) = ratio;
    else
      u.row(i) = ratio.pow(power);
    u.row(i) /= u.row(i).sum();
  }
  return u;
}

template <typename Scalar>
MatrixX<Scalar> weights_pow(const MatrixX<Scalar>& u, Scalar m) {
  if (m == Scalar(2)) return u.array().square().matrix();
  return u.array().pow(m).matrix();
}

template <typename Scalar>
Scalar fcm_objective(const MatrixX<Scalar>& um, const MatrixX<Scalar>& d2) {
  return (um.array() * d2.array()).sum();
}

}  // namespace detail

/// Seeded choice of `count` distinct data rows as initial centers.
template <typename Derived>
MatrixX<typename Derived::Scalar> fcm_initial_centers(const Eigen::MatrixBase<Derived>& data,
                                                      int count, std::uint64_t seed) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates: the first `count` slots become the sample
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  MatrixX<typename Derived::Scalar> centers(count, data.cols());
  for (int j = 0; j < count; ++j) centers.row(j) = data.row(order[static_cast<std::size_t>(j)]);
  return centers;
}

/// Fuzzy c-means by alternating membership and center updates until the
/// largest absolute center coordinate change drops below `cfg.epsilon` or
/// `cfg.max_iter` rounds have run.
///
/// `init_centers`, when given, replaces the seeded random choice of data rows
/// (warm start). The returned memberships are recomputed against the final
/// centers.
template <typename Derived>
FcmResult<typename Derived::Scalar> fcm_cluster(
    const Eigen::MatrixBase<Derived>& data, const TrainConfig& cfg,
    const std::optional<MatrixX<typename Derived::Scalar>>& init_centers = std::nullopt) {
  using Scalar = typename Derived::Scalar;
  cfg.validate(data.rows());
  if (!data.allFinite()) throw DomainError("clustering data contains non-finite values");

  const Scalar m = static_cast<Scalar>(cfg.fuzzy_exponent_m);
  const Scalar eps = static_cast<Scalar>(cfg.epsilon);

  FcmResult<Scalar> out;
  if (init_centers) {
    if (init_centers->rows() != cfg.n_clusters || init_centers->cols() != data.cols())
      throw ContractError("initial centers must be n_clusters x data dimension");
    if (!init_centers->allFinite()) throw DomainError("initial centers contain non-finite values");
    out.centers = *init_centers;
  } else {
    out.centers = fcm_initial_centers(data, cfg.n_clusters, cfg.seed);
  }

  const MatrixX<Scalar> x = data;
  MatrixX<Scalar> u;
  out.final_shift = std::numeric_limits<Scalar>::infinity();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const MatrixX<Scalar> d2 = detail::squared_distances(x, out.centers);
    u = detail::memberships_from_distances(d2, m);
    const MatrixX<Scalar> um = detail::weights_pow(u, m);
    out.objective_history.push_back(detail::fcm_objective(um, d2));
    assert(out.objective_history.size() < 2 ||
           out.objective_history.back() <=
               out.objective_history[out.objective_history.size() - 2] *
                   (Scalar(1) + Scalar(64) * std::numeric_limits<Scalar>::epsilon()));

    MatrixX<Scalar> next = out.centers;
    const RowVectorX<Scalar> mass = um.colwise().sum();
    const MatrixX<Scalar> weighted = um.transpose() * x;
    for (Eigen::Index j = 0; j < next.rows(); ++j) {
      // a center that attracts no mass keeps its position
      if (mass(j) > Scalar(0)) next.row(j) = weighted.row(j) / mass(j);
    }
    out.final_shift = (next - out.centers).cwiseAbs().maxCoeff();
    out.centers = std::move(next);
    out.iterations_used = it;
    if (out.final_shift < eps) break;
  }
  out.memberships =
      detail::memberships_from_distances(detail::squared_distances(x, out.centers), m);
  return out;
}

}  // namespace opplearn

#endif  // OPPLEARN_FCM_HPP
