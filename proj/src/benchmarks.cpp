#include "opplearn/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace opplearn {

namespace {

double f1(double x) { return std::pow(2 * x + 8, 3); }
double f1_inv(double y) { return (std::cbrt(y) - 8) / 2; }

double f2(double x) { return std::log(x + 3); }
double f2_inv(double y) { return std::exp(y) - 3; }

double f3(double x) { return 2 * x; }
double f3_inv(double y) { return y / 2; }

double f4(double x) { return x * x; }
double f4_inv(double y) { return std::sqrt(y); }

double f5(double x) { return std::sqrt(x); }
double f5_inv(double y) { return y * y; }

double f6(double x) { return std::pow(x, 1.5); }
double f6_inv(double y) { return std::pow(y, 2.0 / 3.0); }

double f7(double x) { return x * x * x + x * x + 1; }

double f8(double x) { return 1 / x; }
double f8_inv(double y) { return 1 / y; }

double f9(double x) { return std::sqrt(x + 1) / 3; }
double f9_inv(double y) { return 9 * y * y - 1; }

double ackley(double x1, double x2) {
  constexpr double two_pi = 2 * std::numbers::pi;
  const double e = std::exp(1.0);
  return 20 * (1 - std::exp(-0.2 * std::sqrt(0.5 * (x1 * x1 + x2 * x2)))) -
         std::exp(0.5 * (std::cos(two_pi * x1) + std::cos(two_pi * x2))) + e;
}

double booth(double x1, double x2) {
  const double a = x1 + 2 * x2 - 7;
  const double b = 2 * x1 + x2 - 5;
  return a * a + b * b;
}

// Double bars in the printed formula are absolute values of scalars.
double bukin4(double x1, double x2) {
  return 100 * std::sqrt(std::abs(x2 - 0.01 * x1 * x1)) + 0.01 * std::abs(x1 + 10);
}

constexpr double kNoLimit = -std::numeric_limits<double>::infinity();

const std::vector<TestFunction>& test_registry() {
  static const std::vector<TestFunction> fns = {
      {"f1", Bounds(0, 100), f1, f1_inv, kNoLimit, true},
      {"f2", Bounds(-2.9, 100), f2, f2_inv, -3.0, false},
      {"f3", Bounds(0, 500), f3, f3_inv, kNoLimit, true},
      {"f4", Bounds(0, 100), f4, f4_inv, 0.0, true},
      {"f5", Bounds(0, 1000), f5, f5_inv, 0.0, true},
      {"f6", Bounds(0, 100), f6, f6_inv, 0.0, true},
      {"f7", Bounds(0, 10), f7, f7_inverse, 0.0, true},
      {"f8", Bounds(0, 100), f8, f8_inv, 0.0, false},
      {"f9", Bounds(-1, 1000), f9, f9_inv, -1.0, true},
  };
  return fns;
}

const std::vector<OptFunction>& opt_registry() {
  static const std::vector<OptFunction> fns = {
      {"ackley", {Bounds(-35, 35), Bounds(-35, 35)}, ackley},
      {"booth", {Bounds(-10, 10), Bounds(-10, 10)}, booth},
      {"bukin4", {Bounds(-15, -5), Bounds(-3, 3)}, bukin4},
  };
  return fns;
}

std::string known_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : "|") + id;
  return out;
}

}  // namespace

double f7_inverse(double y) {
  const double a = y / 2 - 29.0 / 54.0;
  const double radicand = a * a - 1.0 / 729.0;
  double x;
  if (radicand >= 0 && a > 0) {
    const double c = std::cbrt(a + std::sqrt(radicand));
    x = 1 / (9 * c) + c - 1.0 / 3.0;
  } else {
    // three real roots: the principal complex cube root picks the one in [0, 1/3]
    const std::complex<double> big = a + std::sqrt(std::complex<double>(radicand, 0.0));
    const std::complex<double> c = std::pow(big, 1.0 / 3.0);
    x = (1.0 / (9.0 * c) + c).real() - 1.0 / 3.0;
  }
  if (!std::isfinite(x) || std::abs(f7(x) - y) >= 1e-6 * std::max(1.0, std::abs(y)))
    throw InversionError("f7 inverse failed round-trip check at y = " + detail::format_value(y));
  return x;
}

const TestFunction& test_function(std::string_view id) {
  for (const auto& f : test_registry())
    if (f.id == id) return f;
  throw ConfigError("unknown test function '" + std::string(id) + "', expected " +
                    known_ids(test_function_ids()));
}

const OptFunction& opt_function(std::string_view id) {
  for (const auto& g : opt_registry())
    if (g.id == id) return g;
  throw ConfigError("unknown optimization function '" + std::string(id) + "', expected " +
                    known_ids(opt_function_ids()));
}

bool is_test_function(std::string_view id) {
  return std::any_of(test_registry().begin(), test_registry().end(),
                     [&](const TestFunction& f) { return f.id == id; });
}

bool is_opt_function(std::string_view id) {
  return std::any_of(opt_registry().begin(), opt_registry().end(),
                     [&](const OptFunction& g) { return g.id == id; });
}

std::vector<std::string> test_function_ids() {
  std::vector<std::string> ids;
  for (const auto& f : test_registry()) ids.push_back(f.id);
  return ids;
}

std::vector<std::string> opt_function_ids() {
  std::vector<std::string> ids;
  for (const auto& g : opt_registry()) ids.push_back(g.id);
  return ids;
}

TestFunction with_domain(const TestFunction& f, const Bounds& domain) {
  if (domain.lo() < f.lower_limit)
    throw ConfigError("domain [" + detail::format_value(domain.lo()) + ", " +
                      detail::format_value(domain.hi()) + "] leaves the region where " + f.id +
                      " is defined and monotone (x >= " + detail::format_value(f.lower_limit) +
                      ")");
  TestFunction out = f;
  out.domain = domain;
  return out;
}

FunctionImage forward_image(const TestFunction& f) {
  // the limit point is evaluated unchecked so poles show up as infinities
  const double a = f.forward(f.domain.lo());
  const double b = f.forward(f.domain.hi());
  return {std::min(a, b), std::max(a, b)};
}

double eval_test_function(const TestFunction& f, double x) {
  if (!f.domain.contains(x))
    throw DomainError(f.id + " evaluated at " + detail::format_value(x) + " outside its domain");
  if (!f.admits(x)) {
    if (f.id == "f8") throw PoleError("f8 has a pole at x = 0");
    throw DomainError(f.id + " is undefined at x = " + detail::format_value(x));
  }
  return f.forward(x);
}

double eval_inverse(const TestFunction& f, double y) {
  const FunctionImage img = forward_image(f);
  auto near = [](double v, double edge) {
    return std::isfinite(edge) && std::abs(v - edge) <= 1e-12 * std::max(1.0, std::abs(edge));
  };
  if (!std::isfinite(y))
    throw DomainError(f.id + " inverse requested at non-finite y");
  if (!img.contains(y)) {
    if (near(y, img.lo))
      y = img.lo;
    else if (near(y, img.hi))
      y = img.hi;
    else
      throw DomainError("y = " + detail::format_value(y) + " outside the image [" +
                        detail::format_value(img.lo) + ", " + detail::format_value(img.hi) +
                        "] of " + f.id);
  }
  return f.inverse(y);
}

TrueOpposite true_opposite(const TestFunction& f, double x, OppositionScheme scheme,
                           const RunningRange& y_range) {
  const double y = eval_test_function(f, x);
  double target = scheme_opposite(y, scheme, y_range);
  const FunctionImage img = forward_image(f);
  bool flagged = false;
  if (!img.contains(target)) {
    const double clamped = std::clamp(target, img.lo, img.hi);
    flagged = std::abs(clamped - target) > 1e-12 * std::max(1.0, std::abs(clamped));
    target = clamped;
  }
  double value = eval_inverse(f, target);
  // an infinite image edge (pole) maps back onto the excluded limit point
  value = f.domain.clamp(value);
  return {value, flagged};
}

double eval_opt_function(const OptFunction& g, double x1, double x2) {
  if (!g.contains({x1, x2}))
    throw DomainError(g.id + " evaluated outside its domain at (" + detail::format_value(x1) +
                      ", " + detail::format_value(x2) + ")");
  return g.eval(x1, x2);
}

}  // namespace opplearn
