#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "opplearn/fis.hpp"
#include "opplearn/fis_json.hpp"
#include "oracles.hpp"
#include "properties.hpp"
#include "scratch.hpp"

using namespace opplearn;

namespace {

// Model in raw units: identity normalization on every column.
FisModelXd bare_model(int n_in, int n_out) {
  FisModelXd m;
  for (int i = 0; i < n_in; ++i) m.input_norms.push_back({0.0, 1.0, false});
  for (int i = 0; i < n_out; ++i) m.output_norms.push_back({0.0, 1.0, false});
  return m;
}

FuzzyRule<double> rule(std::initializer_list<double> centers, double width,
                       const Eigen::MatrixXd& consequents) {
  FuzzyRule<double> r;
  r.centers = Eigen::VectorXd::Map(centers.begin(), static_cast<Eigen::Index>(centers.size()));
  r.widths = Eigen::VectorXd::Constant(r.centers.size(), width);
  r.consequents = consequents;
  return r;
}

Eigen::MatrixXd row(std::initializer_list<double> v) {
  return Eigen::RowVectorXd::Map(v.begin(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST(FisPredict, SingleRuleReturnsItsPlane) {
  FisModelXd m = bare_model(1, 1);
  m.rules.push_back(rule({0.3}, 0.2, row({1.0, 2.0})));
  m.config.n_clusters = 1;
  for (double x : {-5.0, 0.0, 0.3, 2.5, 40.0})
    EXPECT_NEAR(fis_predict(m, Eigen::VectorXd::Constant(1, x))(0), 2 * x + 1, 1e-12);
}

TEST(FisPredict, EqualFiringAveragesConstants) {
  FisModelXd m = bare_model(1, 1);
  m.rules.push_back(rule({-1.0}, 0.7, row({3.0, 0.0})));
  m.rules.push_back(rule({1.0}, 0.7, row({8.0, 0.0})));
  m.config.n_clusters = 2;
  EXPECT_DOUBLE_EQ(fis_predict(m, Eigen::VectorXd::Zero(1))(0), 5.5);
}

TEST(FisPredict, InputAtNarrowRuleCenter) {
  FisModelXd m = bare_model(2, 1);
  m.rules.push_back(rule({0.0, 0.0}, 0.01, row({1.0, 2.0, -1.0})));
  m.rules.push_back(rule({1.0, 1.0}, 0.01, row({-4.0, 0.5, 0.5})));
  m.config.n_clusters = 2;
  const Eigen::Vector2d at(1.0, 1.0);
  // explicit weights: the far rule fires at exp(-0.5 * 2 / 0.01^2)
  const double w_far = std::exp(-0.5 * 2 / 1e-4);
  const double c_near = -4.0 + 0.5 + 0.5;
  const double c_far = 1.0 + 2.0 - 1.0;
  const double expected = (c_near + w_far * c_far) / (1 + w_far);
  EXPECT_NEAR(fis_predict(m, at)(0), expected, 1e-12);
  EXPECT_NEAR(fis_predict(m, at)(0), c_near, 1e-6);
}

TEST(FisPredict, UnderflowFallsBackToNearestRule) {
  FisModelXd m = bare_model(1, 1);
  m.rules.push_back(rule({0.0}, 0.01, row({1.0, 0.0})));
  m.rules.push_back(rule({10.0}, 0.01, row({2.0, 0.0})));
  m.config.n_clusters = 2;
  EXPECT_EQ(fis_predict(m, Eigen::VectorXd::Constant(1, 7.0))(0), 2.0);
  EXPECT_EQ(fis_predict(m, Eigen::VectorXd::Constant(1, -50.0))(0), 1.0);
}

TEST(FisPredict, DimensionMismatch) {
  FisModelXd m = bare_model(2, 1);
  m.rules.push_back(rule({0.0, 0.0}, 1, row({1.0, 0.0, 0.0})));
  EXPECT_THROW(fis_predict(m, Eigen::VectorXd::Zero(3)), ContractError);
}

TEST(FisPredict, ConvexityProperty) {
  const auto o = props::fis_convexity(1000, 31);
  EXPECT_TRUE(o.passed) << o.detail;
}

TEST(BuildFis, ReproducesLinearMap) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3, 7);
  Eigen::MatrixXd x(80, 2);
  Eigen::MatrixXd y(80, 1);
  for (int i = 0; i < 80; ++i) {
    x(i, 0) = u(rng);
    x(i, 1) = u(rng);
    y(i, 0) = 4 - 2 * x(i, 0) + 0.5 * x(i, 1);
  }
  TrainConfig cfg;
  cfg.n_clusters = 2;
  const auto model = build_fis(x, y, cfg);
  const Eigen::MatrixXd pred = fis_predict_rows(model, x);
  EXPECT_LT((pred - y).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(BuildFis, ConsequentMatchesLeastSquaresOracleForOneRule) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd x(40, 2);
  Eigen::MatrixXd y(40, 1);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = u(rng);
    x(i, 1) = u(rng);
    y(i, 0) = std::sin(3 * x(i, 0)) + x(i, 1) * x(i, 1);
  }
  TrainConfig cfg;
  cfg.n_clusters = 1;
  const auto model = build_fis(x, y, cfg);
  // one cluster: all weights are 1, so the consequent is plain OLS in normalized units
  const Eigen::MatrixXd xn = detail::normalize_columns(x, model.input_norms);
  const Eigen::MatrixXd yn = detail::normalize_columns(y, model.output_norms);
  const Eigen::MatrixXd expected = oracle::ols_fit(xn, yn);
  EXPECT_LT((model.rules[0].consequents - expected).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(BuildFis, ConstantTargetSingleCluster) {
  Eigen::MatrixXd x(12, 1);
  for (int i = 0; i < 12; ++i) x(i, 0) = i * 0.5;
  const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(12, 1, 3.25);
  TrainConfig cfg;
  cfg.n_clusters = 1;
  const auto model = build_fis(x, y, cfg);
  EXPECT_TRUE(model.output_norms[0].degenerate);
  for (double q : {-3.0, 0.0, 2.2, 5.5, 100.0})
    EXPECT_NEAR(fis_predict(model, Eigen::VectorXd::Constant(1, q))(0), 3.25, 1e-9);
}

TEST(BuildFis, NearInterpolationWithOneRulePerRow) {
  Eigen::MatrixXd x(10, 1);
  Eigen::MatrixXd y(10, 1);
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = i;
    y(i, 0) = (i % 3) * 2.0 - i * 0.1;
  }
  TrainConfig cfg;
  cfg.n_clusters = 10;
  const auto model = build_fis(x, y, cfg);
  const Eigen::MatrixXd pred = fis_predict_rows(model, x);
  const double scale = model.output_norms[0].scale;
  EXPECT_LT((pred - y).cwiseAbs().maxCoeff() / scale, 1e-3);
}

TEST(BuildFis, CollinearInputsStillFitLinearMap) {
  // the second input is an exact multiple of the first
  Eigen::MatrixXd x(50, 2);
  Eigen::MatrixXd y(50, 1);
  for (int i = 0; i < 50; ++i) {
    x(i, 0) = i;
    x(i, 1) = 2.0 * i;
    y(i, 0) = 100 - i;
  }
  TrainConfig cfg;
  cfg.n_clusters = 5;
  const auto model = build_fis(x, y, cfg);
  EXPECT_LT((fis_predict_rows(model, x) - y).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(BuildFis, SeededDeterminism) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd x(60, 2);
  Eigen::MatrixXd y(60, 1);
  for (int i = 0; i < 60; ++i) {
    x(i, 0) = u(rng);
    x(i, 1) = u(rng);
    y(i, 0) = x(i, 0) * x(i, 1);
  }
  TrainConfig cfg;
  cfg.n_clusters = 6;
  cfg.seed = 5;
  const auto a = build_fis(x, y, cfg);
  const auto b = build_fis(x, y, cfg);
  EXPECT_EQ(fis_to_json(a), fis_to_json(b));
}

TEST(BuildFis, Errors) {
  TrainConfig cfg;
  cfg.n_clusters = 2;
  EXPECT_THROW(build_fis(Eigen::MatrixXd::Zero(4, 1), Eigen::MatrixXd::Zero(3, 1), cfg),
               ContractError);
  cfg.n_clusters = 5;
  EXPECT_THROW(build_fis(Eigen::MatrixXd::Zero(4, 1), Eigen::MatrixXd::Zero(4, 1), cfg),
               ConfigError);
}

TEST(BuildFis, FloatInstantiation) {
  Eigen::MatrixXf x(20, 1);
  Eigen::MatrixXf y(20, 1);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = static_cast<float>(i);
    y(i, 0) = 3.0f * static_cast<float>(i) - 1.0f;
  }
  TrainConfig cfg;
  cfg.n_clusters = 3;
  const FisModel<float> model = build_fis(x, y, cfg);
  const Eigen::VectorXf q = Eigen::VectorXf::Constant(1, 7.5f);
  EXPECT_NEAR(fis_predict(model, q)(0), 21.5f, 1e-2f);
}

TEST(EvolveUpdate, EmptyBatchIsIdentity) {
  Eigen::MatrixXd x(30, 1);
  Eigen::MatrixXd y(30, 1);
  for (int i = 0; i < 30; ++i) {
    x(i, 0) = i;
    y(i, 0) = std::sqrt(i);
  }
  TrainConfig cfg;
  cfg.n_clusters = 4;
  const auto model = build_fis(x, y, cfg);
  TrainingHistory<double> history{x, y};
  const auto same = evolve_update(model, Eigen::MatrixXd(0, 1), Eigen::MatrixXd(0, 1), history);
  EXPECT_EQ(fis_to_json(same), fis_to_json(model));
  EXPECT_EQ(history.rows(), 30);
}

TEST(EvolveUpdate, BlockUpdateKeepsRuleCountAndGrowsHistory) {
  Eigen::MatrixXd x(60, 1);
  Eigen::MatrixXd y(60, 1);
  for (int i = 0; i < 60; ++i) {
    x(i, 0) = i * 0.25;
    y(i, 0) = std::log(1 + x(i, 0));
  }
  TrainConfig cfg;
  cfg.n_clusters = 7;
  const auto model = build_fis(x.topRows(40), y.topRows(40), cfg);
  TrainingHistory<double> history{x.topRows(40), y.topRows(40)};
  const auto evolved = evolve_update(model, x.bottomRows(20), y.bottomRows(20), history);
  const auto scratch_model = build_fis(x, y, cfg);
  EXPECT_EQ(evolved.n_rules(), scratch_model.n_rules());
  EXPECT_EQ(history.rows(), 60);
  EXPECT_EQ(evolved.input_norms, scratch_model.input_norms);
}

TEST(EvolveUpdate, OneByOneImprovesHeldOutError) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 4);
  auto target = [](double v) { return std::exp(v / 2) + std::sin(2 * v); };
  Eigen::MatrixXd x(200, 1);
  Eigen::MatrixXd y(200, 1);
  for (int i = 0; i < 200; ++i) {
    x(i, 0) = u(rng);
    y(i, 0) = target(x(i, 0));
  }
  Eigen::MatrixXd held(100, 1);
  for (int i = 0; i < 100; ++i) held(i, 0) = u(rng);
  auto error = [&](const FisModelXd& m) {
    double e = 0;
    for (int i = 0; i < 100; ++i) e += std::abs(fis_predict(m, held.row(i).transpose())(0) - target(held(i, 0)));
    return e / 100;
  };
  TrainConfig cfg;
  cfg.n_clusters = 8;
  FisModelXd model = build_fis(x.topRows(100), y.topRows(100), cfg);
  TrainingHistory<double> history{x.topRows(100), y.topRows(100)};
  double after_101 = 0;
  for (int n = 100; n < 200; ++n) {
    model = evolve_update(model, x.middleRows(n, 1), y.middleRows(n, 1), history);
    if (n == 100) after_101 = error(model);
  }
  EXPECT_LE(error(model), after_101);
}

TEST(EvolveUpdate, RuleCentersRawRoundTrip) {
  FisModelXd m = bare_model(1, 1);
  m.input_norms[0] = {10.0, 2.0, false};
  m.output_norms[0] = {-1.0, 4.0, false};
  m.rules.push_back(rule({0.5}, 0.3, row({0.25, 1.0})));
  m.config.n_clusters = 1;
  const Eigen::MatrixXd c = rule_centers_raw(m);
  EXPECT_DOUBLE_EQ(c(0, 0), 11.0);
  // consequent at z = 0.5 is 0.75, denormalized: -1 + 4 * 0.75
  EXPECT_DOUBLE_EQ(c(0, 1), 2.0);
}

TEST(FisJson, RoundTripPreservesPredictions) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  Eigen::MatrixXd x(50, 3);
  Eigen::MatrixXd y(50, 2);
  for (int i = 0; i < 50; ++i) {
    for (int c = 0; c < 3; ++c) x(i, c) = u(rng);
    y(i, 0) = x(i, 0) * x(i, 1);
    y(i, 1) = std::cos(x(i, 2));
  }
  TrainConfig cfg;
  cfg.n_clusters = 5;
  cfg.seed = 11;
  const auto model = build_fis(x, y, cfg);
  const auto dir = scratch::fresh_dir("fis_json");
  save_fis(model, dir / "model.json");
  const auto loaded = load_fis(dir / "model.json");
  EXPECT_EQ(loaded.config, model.config);
  EXPECT_EQ(fis_predict_rows(loaded, x), fis_predict_rows(model, x));
}

TEST(FisJson, RejectsMalformedDocuments) {
  EXPECT_THROW(fis_from_json(nlohmann::json::object()), ParseError);
  EXPECT_THROW(fis_from_json(nlohmann::json{{"format", "something-else"}}), ParseError);
  const auto dir = scratch::fresh_dir("fis_json_bad");
  {
    std::ofstream os(dir / "bad.json");
    os << "{ not json";
  }
  EXPECT_THROW(load_fis(dir / "bad.json"), ParseError);
}
