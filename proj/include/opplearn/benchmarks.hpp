#ifndef OPPLEARN_BENCHMARKS_HPP
#define OPPLEARN_BENCHMARKS_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "opplearn/opposition.hpp"

namespace opplearn {

/// Invertible scalar test function f1..f9 on a monotone domain.
///
/// `lower_limit` is the edge of the natural domain (pole or branch point);
/// a domain may start there, but the limit point itself is excluded unless
/// `limit_inclusive`.
struct TestFunction {
  std::string id;
  Bounds domain;
  double (*forward)(double);
  double (*inverse)(double);
  double lower_limit;
  bool limit_inclusive;

  bool admits(double x) const {
    return domain.contains(x) && (limit_inclusive ? x >= lower_limit : x > lower_limit);
  }
};

/// Interval f(domain); an endpoint may be infinite at a pole.
struct FunctionImage {
  double lo;
  double hi;

  bool contains(double y) const { return lo <= y && y <= hi; }
};

struct TwoDim {
  double x1;
  double x2;

  friend bool operator==(const TwoDim&, const TwoDim&) = default;
};

/// Two-dimensional optimization benchmark with known minimum value 0.
struct OptFunction {
  std::string id;
  std::array<Bounds, 2> domain;
  double (*eval)(double, double);

  TwoDim clamp(TwoDim p) const { return {domain[0].clamp(p.x1), domain[1].clamp(p.x2)}; }
  bool contains(TwoDim p) const { return domain[0].contains(p.x1) && domain[1].contains(p.x2); }
};

/// f1..f9 with their default domains. Throws ConfigError for unknown ids.
const TestFunction& test_function(std::string_view id);
/// ackley | booth | bukin4. Throws ConfigError for unknown ids.
const OptFunction& opt_function(std::string_view id);

bool is_test_function(std::string_view id);
bool is_opt_function(std::string_view id);
std::vector<std::string> test_function_ids();
std::vector<std::string> opt_function_ids();

/// Copy of `f` on a different domain. Throws ConfigError if the domain leaves
/// the region where f is defined and monotone.
TestFunction with_domain(const TestFunction& f, const Bounds& domain);

FunctionImage forward_image(const TestFunction& f);

double eval_test_function(const TestFunction& f, double x);

/// Analytic inverse on the forward image. Values within 1e-12 (relative) of an
/// image endpoint are snapped onto it; anything further out is a DomainError.
double eval_inverse(const TestFunction& f, double y);

struct TrueOpposite {
  double value;
  // set when the opposite output left the forward image and was clamped
  bool flagged;
};

/// f^-1(scheme_opposite(f(x))): the exact type-II opposite of x.
TrueOpposite true_opposite(const TestFunction& f, double x, OppositionScheme scheme,
                           const RunningRange& y_range);

double eval_opt_function(const OptFunction& g, double x1, double x2);
inline double eval_opt_function(const OptFunction& g, TwoDim p) {
  return eval_opt_function(g, p.x1, p.x2);
}

/// Real root of x^3 + x^2 + 1 = y by Cardano's formula in the printed
/// closed form. Uses the complex principal branch when the radicand is
/// negative and checks the root by substitution (InversionError on failure).
double f7_inverse(double y);

}  // namespace opplearn

#endif  // OPPLEARN_BENCHMARKS_HPP
