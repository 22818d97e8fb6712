#include "opplearn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <thread>

#include "opplearn/fis.hpp"
#include "opplearn/mining.hpp"

namespace opplearn {

namespace {

using Rng = std::mt19937_64;

double draw(Rng& rng, double lo, double hi) { return uniform_draw(rng, lo, hi); }

template <typename Fn>
auto run_parallel(int n_runs, Fn fn) -> std::vector<decltype(fn(0))> {
  using Result = decltype(fn(0));
  std::vector<std::optional<Result>> slots(static_cast<std::size_t>(n_runs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < n_runs; r = next++) {
      try {
        slots[static_cast<std::size_t>(r)] = fn(r);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(harness_threads(), static_cast<std::size_t>(n_runs));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<Result> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

TestFunction resolve_test_function(const ExperimentConfig& cfg) {
  const TestFunction& base = test_function(cfg.function_id);
  return cfg.domain ? with_domain(base, *cfg.domain) : base;
}

TrainConfig run_train_config(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  TrainConfig tc = cfg.train_config;
  tc.seed = run_seed;
  return tc;
}

SampleSet sample_test_function(const TestFunction& f, int n, Rng& rng) {
  SampleSet samples({f.domain});
  Eigen::VectorXd x(1);
  for (int i = 0; i < n; ++i) {
    x(0) = draw(rng, f.domain.lo(), f.domain.hi());
    samples.add_row(x, eval_test_function(f, x(0)));
  }
  return samples;
}

RunningRange column_range(const Eigen::MatrixXd& m, Eigen::Index col) {
  RunningRange r;
  for (Eigen::Index i = 0; i < m.rows(); ++i) r = update_range(r, m(i, col));
  return r;
}

void check_flagged(std::size_t flagged, std::size_t total, OppositionScheme scheme) {
  if (2 * flagged > total)
    throw SchemeMismatchError(std::to_string(flagged) + " of " + std::to_string(total) +
                              " true opposites fell outside the function image under scheme " +
                              std::string(to_string(scheme)));
}

ErrorStats stats_of_means(const std::vector<ErrorStats>& per_run) {
  std::vector<double> means;
  for (const auto& s : per_run) means.push_back(s.mean);
  return summarize(means);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (!(test_fraction > 0.0 && test_fraction <= 1.0))
    throw ConfigError("test_fraction must lie in (0, 1]");
  if (n_samples < train_config.n_clusters)
    throw ConfigError("n_samples (" + std::to_string(n_samples) + ") is below n_clusters (" +
                      std::to_string(train_config.n_clusters) + ")");
}

std::size_t ExperimentConfig::eval_count() const {
  return static_cast<std::size_t>(
      std::max(1L, std::lround(test_fraction * static_cast<double>(n_samples))));
}

double uniform_draw(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return hi - unit(rng) * (hi - lo);
}

std::size_t harness_threads() {
  if (const char* env = std::getenv("OPPLEARN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Series1Result run_series1(const ExperimentConfig& cfg) {
  return run_series1(cfg, resolve_test_function(cfg));
}

Series1Result run_series1(const ExperimentConfig& cfg, const TestFunction& f) {
  cfg.validate();
  const std::size_t n_eval = cfg.eval_count();

  auto one_run = [&](int run) {
    const std::uint64_t run_seed = cfg.seed + static_cast<std::uint64_t>(run);
    Rng rng(run_seed);
    const SampleSet samples = sample_test_function(f, cfg.n_samples, rng);
    const MiningDataset ds = mining_dataset(mine_opposites(samples, cfg.scheme));
    const FisModelXd model = build_fis(ds.inputs, ds.targets, run_train_config(cfg, run_seed));

    const RunningRange x_range = column_range(samples.inputs(), 0);
    const RunningRange& y_range = samples.output_range();
    if (x_range.degenerate()) throw RangeError("training inputs span a single point");

    std::vector<double> err1;
    std::vector<double> err2;
    Series1Run out;
    Eigen::Vector2d query;
    for (std::size_t k = 0; k < n_eval; ++k) {
      const double x = draw(rng, x_range.min_seen, x_range.max_seen);
      const TrueOpposite truth = true_opposite(f, x, cfg.scheme, y_range);
      if (truth.flagged) {
        ++out.flagged;
        continue;
      }
      const double type1 = scheme_opposite(x, cfg.scheme, x_range);
      query << x, eval_test_function(f, x);
      const double type2 = fis_predict(model, query)(0);
      err1.push_back(std::abs(truth.value - type1));
      err2.push_back(std::abs(truth.value - type2));
    }
    check_flagged(out.flagged, n_eval, cfg.scheme);
    out.type1 = summarize(err1);
    out.type2 = summarize(err2);
    return out;
  };

  Series1Result result;
  result.runs = run_parallel(cfg.n_runs, one_run);
  std::vector<ErrorStats> t1;
  std::vector<ErrorStats> t2;
  for (const auto& r : result.runs) {
    t1.push_back(r.type1);
    t2.push_back(r.type2);
  }
  result.type1 = stats_of_means(t1);
  result.type2 = stats_of_means(t2);
  return result;
}

Series2Result run_series2(const ExperimentConfig& cfg, int initial_n, int final_n) {
  return run_series2(cfg, resolve_test_function(cfg), initial_n, final_n);
}

Series2Result run_series2(const ExperimentConfig& cfg, const TestFunction& f, int initial_n,
                          int final_n) {
  if (cfg.n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (initial_n < cfg.train_config.n_clusters)
    throw ConfigError("initial sample count must be >= n_clusters");
  if (final_n <= initial_n) throw ConfigError("final sample count must exceed the initial count");
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction <= 1.0))
    throw ConfigError("test_fraction must lie in (0, 1]");
  const std::size_t n_eval = static_cast<std::size_t>(
      std::max(1L, std::lround(cfg.test_fraction * static_cast<double>(initial_n))));

  auto one_run = [&](int run) {
    const std::uint64_t run_seed = cfg.seed + static_cast<std::uint64_t>(run);
    Rng rng(run_seed);
    SampleSet samples = sample_test_function(f, initial_n, rng);
    const RunningRange x_range = column_range(samples.inputs(), 0);
    std::vector<double> held_out(n_eval);
    for (double& x : held_out) x = draw(rng, x_range.min_seen, x_range.max_seen);

    MiningDataset ds = mining_dataset(mine_opposites(samples, cfg.scheme));
    FisModelXd model = build_fis(ds.inputs, ds.targets, run_train_config(cfg, run_seed));

    std::vector<CurvePoint> curve;
    Eigen::VectorXd x_new(1);
    Eigen::Vector2d query;
    for (int n = initial_n + 1; n <= final_n; ++n) {
      x_new(0) = draw(rng, f.domain.lo(), f.domain.hi());
      samples.add_row(x_new, eval_test_function(f, x_new(0)));
      ds = mining_dataset(mine_opposites(samples, cfg.scheme));
      const Eigen::Index old_rows = ds.inputs.rows() - 1;
      TrainingHistory<double> history{ds.inputs.topRows(old_rows), ds.targets.topRows(old_rows)};
      model = evolve_update(model, ds.inputs.bottomRows(1), ds.targets.bottomRows(1), history);

      std::vector<double> errors;
      std::size_t flagged = 0;
      for (double x : held_out) {
        const TrueOpposite truth = true_opposite(f, x, cfg.scheme, samples.output_range());
        if (truth.flagged) {
          ++flagged;
          continue;
        }
        query << x, eval_test_function(f, x);
        errors.push_back(std::abs(truth.value - fis_predict(model, query)(0)));
      }
      check_flagged(flagged, n_eval, cfg.scheme);
      curve.push_back({n, summarize(errors)});
    }
    return curve;
  };

  Series2Result result;
  result.runs = run_parallel(cfg.n_runs, one_run);
  const std::size_t steps = static_cast<std::size_t>(final_n - initial_n);
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<ErrorStats> per_run;
    for (const auto& curve : result.runs) per_run.push_back(curve[s].stats);
    result.aggregate.push_back({result.runs.front()[s].n_seen, stats_of_means(per_run)});
  }
  return result;
}

Selection obl_select(const OptFunction& g, TwoDim x, TwoDim x_opp) {
  const TwoDim opp = g.clamp(x_opp);
  const double err_x = eval_opt_function(g, x);
  const double err_opp = eval_opt_function(g, opp);
  return {err_opp < err_x ? opp : x, err_x, err_opp};
}

Series3Result run_series3(const ExperimentConfig& cfg) {
  cfg.validate();
  const OptFunction& g = opt_function(cfg.function_id);
  const std::size_t n_eval = cfg.eval_count();

  auto one_run = [&](int run) {
    const std::uint64_t run_seed = cfg.seed + static_cast<std::uint64_t>(run);
    Rng rng(run_seed);
    SampleSet samples({g.domain[0], g.domain[1]});
    Eigen::Vector2d p;
    for (int i = 0; i < cfg.n_samples; ++i) {
      p << draw(rng, g.domain[0].lo(), g.domain[0].hi()),
          draw(rng, g.domain[1].lo(), g.domain[1].hi());
      samples.add_row(p, eval_opt_function(g, p(0), p(1)));
    }
    const MiningDataset ds = mining_dataset(mine_opposites(samples, cfg.scheme));
    const FisModelXd model = build_fis(ds.inputs, ds.targets, run_train_config(cfg, run_seed));

    // type-I opposites live in the declared domain; T3 reflects about the sample mean
    std::array<RunningRange, 2> coord_range;
    for (int c = 0; c < 2; ++c) {
      const double mean = std::clamp(samples.inputs().col(c).mean(), g.domain[c].lo(),
                                     g.domain[c].hi());
      coord_range[c] = RunningRange::from_stats(g.domain[c].lo(), g.domain[c].hi(), mean,
                                                samples.size());
    }

    Series3Run out;
    std::vector<double> sel2;
    std::vector<double> sel1;
    Eigen::Vector3d query;
    for (std::size_t k = 0; k < n_eval; ++k) {
      const TwoDim x{draw(rng, g.domain[0].lo(), g.domain[0].hi()),
                     draw(rng, g.domain[1].lo(), g.domain[1].hi())};
      const double fx = eval_opt_function(g, x);
      query << x.x1, x.x2, fx;
      const Eigen::VectorXd learned = fis_predict(model, query);
      const TwoDim opp2{learned(0), learned(1)};
      const TwoDim opp1{scheme_opposite(x.x1, cfg.scheme, coord_range[0]),
                        scheme_opposite(x.x2, cfg.scheme, coord_range[1])};
      const Selection s2 = obl_select(g, x, opp2);
      const Selection s1 = obl_select(g, x, opp1);
      out.random_errors.push_back(fx);
      out.type2_errors.push_back(s2.err_opp);
      out.type1_errors.push_back(s1.err_opp);
      sel2.push_back(std::min(s2.err_x, s2.err_opp));
      sel1.push_back(std::min(s1.err_x, s1.err_opp));
    }
    out.random = summarize(out.random_errors);
    out.type2 = summarize(out.type2_errors);
    out.type1 = summarize(out.type1_errors);
    out.select_type2 = summarize(sel2);
    out.select_type1 = summarize(sel1);
    return out;
  };

  Series3Result result;
  result.runs = run_parallel(cfg.n_runs, one_run);
  auto across = [&](auto member) {
    std::vector<ErrorStats> per_run;
    for (const auto& r : result.runs) per_run.push_back(r.*member);
    return stats_of_means(per_run);
  };
  result.random = across(&Series3Run::random);
  result.type2 = across(&Series3Run::type2);
  result.type1 = across(&Series3Run::type1);
  result.select_type2 = across(&Series3Run::select_type2);
  result.select_type1 = across(&Series3Run::select_type1);
  return result;
}

}  // namespace opplearn
