#ifndef OPPLEARN_STATS_HPP
#define OPPLEARN_STATS_HPP

#include <cstddef>
#include <span>

namespace opplearn {

/// Mean and sample standard deviation (divisor count - 1) of an error
/// population. A single observation has std 0.
struct ErrorStats {
  double mean = 0;
  double std = 0;
  std::size_t count = 0;

  friend bool operator==(const ErrorStats&, const ErrorStats&) = default;
};

/// Throws InsufficientDataError for an empty population.
ErrorStats summarize(std::span<const double> values);

struct KsResult {
  double statistic;  // sup |F_a - F_b|
  double p_value;    // asymptotic Kolmogorov approximation

  bool rejects(double alpha) const { return p_value < alpha; }
};

/// Two-sample Kolmogorov-Smirnov test.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace opplearn

#endif  // OPPLEARN_STATS_HPP
