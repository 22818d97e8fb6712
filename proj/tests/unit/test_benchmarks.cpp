#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "opplearn/benchmarks.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace opplearn;

namespace {

RunningRange span(double lo, double hi) {
  return update_range(update_range(RunningRange{}, lo), hi);
}

}  // namespace

TEST(TestFunctions, ForwardExamples) {
  EXPECT_EQ(eval_test_function(test_function("f1"), 0.0), 512.0);
  EXPECT_EQ(eval_test_function(test_function("f3"), 7.0), 14.0);
  EXPECT_EQ(eval_test_function(test_function("f7"), 1.0), 3.0);
}

TEST(TestFunctions, InverseExamples) {
  EXPECT_NEAR(eval_inverse(test_function("f1"), 512.0), 0.0, 1e-12);
  const double root =
      oracle::bisect([](double x) { return x * x * x + x * x + 1; }, 3.0, 0.0, 10.0);
  EXPECT_NEAR(eval_inverse(test_function("f7"), 3.0), root, 1e-9);
  EXPECT_NEAR(root, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(eval_inverse(test_function("f8"), 0.25), 4.0);
}

TEST(TestFunctions, F7InverseAgreesWithBisectionAcrossBothBranches) {
  auto f7 = [](double x) { return x * x * x + x * x + 1; };
  // y near 1 exercises the three-real-root branch
  for (double x : {0.0, 1e-4, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0, 9.99, 10.0}) {
    const double y = f7(x);
    const double expected = oracle::bisect(f7, y, 0.0, 10.0);
    EXPECT_NEAR(f7_inverse(y), expected, 1e-6 * std::max(1.0, expected)) << "x=" << x;
  }
}

TEST(TestFunctions, F7InverseRejectsUnreachableValues) {
  EXPECT_THROW(f7_inverse(0.5), InversionError);
}

TEST(TestFunctions, DomainErrors) {
  EXPECT_THROW(eval_test_function(test_function("f8"), 0.0), PoleError);
  EXPECT_THROW(eval_test_function(test_function("f1"), 101.0), DomainError);
  EXPECT_THROW(eval_inverse(test_function("f4"), -1.0), DomainError);
  EXPECT_THROW(eval_inverse(test_function("f4"), 1e4 + 1), DomainError);
  // snapping onto an image edge within relative rounding
  EXPECT_DOUBLE_EQ(eval_inverse(test_function("f4"), 1e4 * (1 + 1e-14)), 100.0);
}

TEST(TestFunctions, WithDomain) {
  const auto f2 = with_domain(test_function("f2"), Bounds(-2.5, 10));
  EXPECT_EQ(f2.domain, Bounds(-2.5, 10));
  EXPECT_THROW(with_domain(test_function("f2"), Bounds(-4, 10)), ConfigError);
  EXPECT_THROW(with_domain(test_function("f4"), Bounds(-1, 10)), ConfigError);
  const auto f9 = with_domain(test_function("f9"), Bounds(-1, 1000));
  EXPECT_TRUE(f9.admits(-1.0));
}

TEST(TestFunctions, Registry) {
  EXPECT_EQ(test_function_ids().size(), 9u);
  EXPECT_EQ(opt_function_ids().size(), 3u);
  EXPECT_TRUE(is_test_function("f5"));
  EXPECT_FALSE(is_test_function("ackley"));
  EXPECT_TRUE(is_opt_function("bukin4"));
  EXPECT_THROW(test_function("f10"), ConfigError);
  EXPECT_THROW(opt_function("rastrigin"), ConfigError);
}

TEST(TestFunctions, RoundTripProperty) {
  const auto o = props::inverse_round_trips(1000, 41);
  EXPECT_TRUE(o.passed) << o.detail;
}

TEST(TrueOpposite, Examples) {
  const auto f3 = with_domain(test_function("f3"), Bounds(0, 10));
  const auto r3 = true_opposite(f3, 3.0, OppositionScheme::T1, span(0, 20));
  EXPECT_DOUBLE_EQ(r3.value, 7.0);
  EXPECT_FALSE(r3.flagged);

  const auto f4 = with_domain(test_function("f4"), Bounds(0, 10));
  EXPECT_DOUBLE_EQ(true_opposite(f4, 0.0, OppositionScheme::T1, span(0, 100)).value, 10.0);
  const double root = oracle::bisect([](double x) { return x * x; }, 64.0, 0.0, 10.0);
  EXPECT_NEAR(true_opposite(f4, 6.0, OppositionScheme::T1, span(0, 100)).value, root, 1e-12);
}

TEST(TrueOpposite, LinearDegeneracy) {
  const auto& f3 = test_function("f3");
  const Bounds d = f3.domain;
  const RunningRange y = span(f3.forward(d.lo()), f3.forward(d.hi()));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(d.lo(), d.hi());
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_NEAR(true_opposite(f3, x, OppositionScheme::T1, y).value, type1_opposite(x, d), 1e-9);
  }
}

TEST(TrueOpposite, OutsideImageIsClampedAndFlagged) {
  const auto f4 = with_domain(test_function("f4"), Bounds(0, 10));
  // observed range wider than the image
  const auto r = true_opposite(f4, 1.0, OppositionScheme::T1, span(0, 200));
  EXPECT_TRUE(r.flagged);
  EXPECT_DOUBLE_EQ(r.value, 10.0);
}

TEST(OptFunctions, Examples) {
  EXPECT_EQ(eval_opt_function(opt_function("booth"), 1.0, 3.0), 0.0);
  EXPECT_NEAR(eval_opt_function(opt_function("ackley"), 0.0, 0.0), 0.0, 1e-12);
  EXPECT_EQ(eval_opt_function(opt_function("bukin4"), -10.0, 1.0), 0.0);
}

TEST(OptFunctions, AckleyAgainstDirectFormula) {
  const double x1 = 1.3;
  const double x2 = -2.7;
  const double expected = 20 * (1 - std::exp(-0.2 * std::sqrt(0.5 * (x1 * x1 + x2 * x2)))) -
                          std::exp(0.5 * (std::cos(2 * std::numbers::pi * x1) +
                                          std::cos(2 * std::numbers::pi * x2))) +
                          std::numbers::e;
  EXPECT_NEAR(eval_opt_function(opt_function("ackley"), x1, x2), expected, 1e-12);
}

TEST(OptFunctions, NonNegativeOnDomains) {
  std::mt19937_64 rng(2);
  for (const auto& id : opt_function_ids()) {
    const auto& g = opt_function(id);
    std::uniform_real_distribution<double> a(g.domain[0].lo(), g.domain[0].hi());
    std::uniform_real_distribution<double> b(g.domain[1].lo(), g.domain[1].hi());
    for (int i = 0; i < 1000; ++i) EXPECT_GE(eval_opt_function(g, a(rng), b(rng)), 0.0) << id;
  }
}

TEST(OptFunctions, OutsideDomainIsDomainError) {
  EXPECT_THROW(eval_opt_function(opt_function("bukin4"), 0.0, 0.0), DomainError);
}
