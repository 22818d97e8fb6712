#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "opplearn/errors.hpp"
#include "opplearn/stats.hpp"

using namespace opplearn;

TEST(Summarize, MeanAndSampleStd) {
  const std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  // sum of squared deviations is 32 over n - 1 = 7
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(32.0 / 7.0));
  EXPECT_EQ(s.count, 8u);
  EXPECT_EQ(summarize(std::vector<double>{3.5}).std, 0.0);
  EXPECT_THROW(summarize(std::vector<double>{}), InsufficientDataError);
}

TEST(KsTest, IdenticalSamplesNeverReject) {
  const std::vector<double> a = {1, 2, 3, 4, 5, 6, 7, 8};
  const auto r = ks_two_sample(a, a);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.rejects(0.01));
}

TEST(KsTest, StatisticMatchesHandComputation) {
  // ecdf gap peaks at 0.6 between x = 3 and x = 4
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {4, 5, 6, 7, 8};
  EXPECT_DOUBLE_EQ(ks_two_sample(a, b).statistic, 0.6);
}

TEST(KsTest, PValueMatchesKolmogorovSeries) {
  const std::vector<double> a = {0.1, 0.4, 0.7, 1.1, 1.5, 1.6, 2.2, 2.9, 3.1, 3.3};
  const std::vector<double> b = {0.9, 1.8, 2.5, 2.6, 3.4, 3.9, 4.2, 4.4, 5.0, 5.5};
  const auto r = ks_two_sample(a, b);
  const double ne = std::sqrt(10.0 * 10.0 / 20.0);
  const double lambda = (ne + 0.12 + 0.11 / ne) * r.statistic;
  double q = 0;
  for (int k = 1; k <= 200; ++k) q += 2 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
  EXPECT_NEAR(r.p_value, q, 1e-12);
}

TEST(KsTest, ShiftedDistributionsReject) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n0(0, 1);
  std::normal_distribution<double> n1(1, 1);
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  for (int i = 0; i < 1000; ++i) {
    a.push_back(n0(rng));
    b.push_back(n1(rng));
    c.push_back(n0(rng));
  }
  EXPECT_TRUE(ks_two_sample(a, b).rejects(0.01));
  EXPECT_FALSE(ks_two_sample(a, c).rejects(0.01));
}

TEST(KsTest, EmptySample) {
  EXPECT_THROW(ks_two_sample(std::vector<double>{}, std::vector<double>{1.0}),
               InsufficientDataError);
}
