#ifndef OPPLEARN_EXPERIMENTS_HPP
#define OPPLEARN_EXPERIMENTS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "opplearn/benchmarks.hpp"
#include "opplearn/fcm.hpp"
#include "opplearn/opposition.hpp"
#include "opplearn/stats.hpp"

namespace opplearn {

struct ExperimentConfig {
  int n_samples = 100;
  int n_runs = 30;
  OppositionScheme scheme = OppositionScheme::T1;
  std::uint64_t seed = 0;
  TrainConfig train_config;
  std::string function_id = "f1";
  // evaluation set size as a fraction of n_samples
  double test_fraction = 1.0;
  // replaces the default domain of f1..f9
  std::optional<Bounds> domain;

  void validate() const;
  std::size_t eval_count() const;
};

/// Error populations of one run, over its evaluation set.
struct Series1Run {
  ErrorStats type1;
  ErrorStats type2;
  std::size_t flagged = 0;
};

struct Series1Result {
  std::vector<Series1Run> runs;
  // statistics over the run means
  ErrorStats type1;
  ErrorStats type2;
};

/// Inverse-validated comparison of type-I and learned type-II opposites.
///
/// Each run samples n_samples points uniformly from the domain, mines their
/// opposites, trains a rule base on (x, y) -> opposite, and scores a fresh
/// evaluation set against f^-1(scheme_opposite(f(x))). The reference ranges
/// for both the ground truth and the type-I opposite are those observed in
/// the run's training sample.
Series1Result run_series1(const ExperimentConfig& cfg);
Series1Result run_series1(const ExperimentConfig& cfg, const TestFunction& f);

struct CurvePoint {
  int n_seen = 0;
  ErrorStats stats;
};

struct Series2Result {
  std::vector<std::vector<CurvePoint>> runs;
  // per n_seen: statistics over the run means
  std::vector<CurvePoint> aggregate;
};

/// Evolving-rule error curves: train on `initial_n` samples, then fold in one
/// sample at a time up to `final_n`, scoring a fixed held-out set after every
/// update. Mining is repeated over all accumulated samples at each step.
Series2Result run_series2(const ExperimentConfig& cfg, int initial_n, int final_n);
Series2Result run_series2(const ExperimentConfig& cfg, const TestFunction& f, int initial_n,
                          int final_n);

struct Selection {
  TwoDim chosen;
  double err_x;
  double err_opp;
};

/// Keeps whichever of a guess and its (domain-clamped) opposite has the
/// lower function value; ties keep the guess.
Selection obl_select(const OptFunction& g, TwoDim x, TwoDim x_opp);

struct Series3Run {
  ErrorStats random;
  ErrorStats type2;
  ErrorStats type1;
  ErrorStats select_type2;
  ErrorStats select_type1;
  std::vector<double> random_errors;
  std::vector<double> type2_errors;
  std::vector<double> type1_errors;
};

struct Series3Result {
  std::vector<Series3Run> runs;
  ErrorStats random;
  ErrorStats type2;
  ErrorStats type1;
  ErrorStats select_type2;
  ErrorStats select_type1;
};

/// Random guesses against their learned type-II and type-I opposites on a 2D
/// optimization benchmark; the error of a point is its function value.
Series3Result run_series3(const ExperimentConfig& cfg);

/// Uniform draw on (lo, hi]. Never returns lo, which may be an excluded pole.
double uniform_draw(std::mt19937_64& rng, double lo, double hi);

/// Worker count for independent runs: OPPLEARN_THREADS if set to a positive
/// integer, otherwise the number of logical processors.
std::size_t harness_threads();

}  // namespace opplearn

#endif  // OPPLEARN_EXPERIMENTS_HPP
