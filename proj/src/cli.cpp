#include "opplearn/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "opplearn/benchmarks.hpp"
#include "opplearn/csv.hpp"
#include "opplearn/experiments.hpp"
#include "opplearn/fis.hpp"
#include "opplearn/fis_json.hpp"
#include "opplearn/mining.hpp"

namespace opplearn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Records what produced a set of outputs; written after the outputs exist.
void write_manifest(const fs::path& path, const std::string& command, const json& config,
                    const std::vector<fs::path>& outputs) {
  json paths = json::array();
  for (const auto& p : outputs) {
    if (!fs::exists(p)) throw Error("expected output " + p.string() + " was not written");
    paths.push_back(p.string());
  }
  const json manifest = {{"command", command},
                         {"config", config},
                         {"started_at", utc_now()},
                         {"tool_version", kToolVersion},
                         {"output_paths", paths}};
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << manifest.dump(2) << '\n';
}

fs::path sidecar_manifest(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

Bounds parse_domain(const std::string& text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw ConfigError("--domain expects LO:HI, got '" + text + "'");
  try {
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    const std::string lo_text = text.substr(0, colon);
    const std::string hi_text = text.substr(colon + 1);
    const double lo = std::stod(lo_text, &used_lo);
    const double hi = std::stod(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument("");
    return Bounds(lo, hi);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("--domain: ") + e.what());
  } catch (const std::exception&) {
    throw ConfigError("--domain expects LO:HI, got '" + text + "'");
  }
}

OppositionScheme scheme_flag(const std::string& text) {
  try {
    return parse_scheme(text);
  } catch (const ConfigError&) {
    throw ConfigError("--scheme must be one of t1|t2|t3, got '" + text + "'");
  }
}

json domain_json(const std::optional<Bounds>& d) {
  if (!d) return nullptr;
  return json::array({d->lo(), d->hi()});
}

struct SampleArgs {
  std::string function;
  int samples = 100;
  std::uint64_t seed = 0;
  std::string domain;
  std::string output;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  std::mt19937_64 rng(a.seed);
  std::optional<Bounds> domain;
  if (!a.domain.empty()) domain = parse_domain(a.domain);
  if (a.samples < 1) throw ConfigError("--samples must be >= 1");

  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  if (is_test_function(a.function)) {
    const TestFunction f =
        domain ? with_domain(test_function(a.function), *domain) : test_function(a.function);
    header = {"x1", "y"};
    for (int i = 0; i < a.samples; ++i) {
      const double x = uniform_draw(rng, f.domain.lo(), f.domain.hi());
      rows.push_back({x, eval_test_function(f, x)});
    }
  } else if (is_opt_function(a.function)) {
    if (domain) throw ConfigError("--domain applies only to f1..f9");
    const OptFunction& g = opt_function(a.function);
    header = {"x1", "x2", "y"};
    for (int i = 0; i < a.samples; ++i) {
      const double x1 = uniform_draw(rng, g.domain[0].lo(), g.domain[0].hi());
      const double x2 = uniform_draw(rng, g.domain[1].lo(), g.domain[1].hi());
      rows.push_back({x1, x2, eval_opt_function(g, x1, x2)});
    }
  } else {
    throw ConfigError("unknown function '" + a.function + "'");
  }

  CsvWriter w(a.output, header);
  for (const auto& r : rows) {
    std::vector<std::string> fields;
    for (double v : r) fields.push_back(format_double(v));
    w.row(fields);
  }
  w.close();
  write_manifest(sidecar_manifest(a.output), "sample",
                 {{"function", a.function},
                  {"samples", a.samples},
                  {"seed", a.seed},
                  {"domain", domain_json(domain)}},
                 {a.output});
  out << "wrote " << rows.size() << " samples to " << a.output << '\n';
  return kExitOk;
}

struct MineArgs {
  std::string input;
  std::string scheme = "t1";
  std::string output;
};

int cmd_mine(const MineArgs& a, std::ostream& out) {
  const OppositionScheme scheme = scheme_flag(a.scheme);
  SampleTable table = read_sample_csv(a.input);
  if (table.inputs.rows() == 0) throw InsufficientDataError(a.input + ": no data rows");
  std::vector<Bounds> bounds = observed_bounds(table.inputs);
  const SampleSet samples(std::move(table.inputs), std::move(table.outputs), std::move(bounds));
  const std::vector<MinedPair> pairs = mine_opposites(samples, scheme);
  write_mined_csv(a.output, pairs);
  write_manifest(sidecar_manifest(a.output), "mine",
                 {{"input", a.input}, {"scheme", to_string(scheme)}}, {a.output});
  out << "mined " << pairs.size() << " opposites into " << a.output << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string input;
  std::string output;
  TrainConfig cfg;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const MiningDataset ds = read_mined_csv(a.input);
  const FisModelXd model = build_fis(ds.inputs, ds.targets, a.cfg);
  save_fis(model, a.output);
  write_manifest(sidecar_manifest(a.output), "train", train_config_to_json(a.cfg), {a.output});
  out << "trained " << model.n_rules() << " rules into " << a.output << '\n';
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string input;
  std::string output;
};

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const FisModelXd model = load_fis(a.model);
  const SampleTable table = read_sample_csv(a.input);
  const Eigen::Index n = table.inputs.cols();
  if (n + 1 != model.n_inputs())
    throw ContractError("model expects " + std::to_string(model.n_inputs() - 1) +
                        " input columns plus y, file has " + std::to_string(n));
  std::vector<std::string> header;
  for (Eigen::Index i = 1; i <= n; ++i) header.push_back("x" + std::to_string(i));
  header.push_back("y");
  for (Eigen::Index i = 1; i <= model.n_outputs(); ++i) header.push_back("ox" + std::to_string(i));

  CsvWriter w(a.output, header);
  Eigen::VectorXd query(n + 1);
  for (Eigen::Index r = 0; r < table.inputs.rows(); ++r) {
    query << table.inputs.row(r).transpose(), table.outputs(r);
    const Eigen::VectorXd opp = fis_predict(model, query);
    std::vector<std::string> fields;
    for (Eigen::Index c = 0; c <= n; ++c) fields.push_back(format_double(query(c)));
    for (Eigen::Index c = 0; c < opp.size(); ++c) fields.push_back(format_double(opp(c)));
    w.row(fields);
  }
  w.close();
  write_manifest(sidecar_manifest(a.output), "predict",
                 {{"model", a.model}, {"input", a.input}}, {a.output});
  out << "predicted " << table.inputs.rows() << " opposites into " << a.output << '\n';
  return kExitOk;
}

struct ExperimentArgs {
  int series = 0;
  std::string function;
  std::string scheme = "t1";
  std::optional<int> samples;
  std::optional<int> runs;
  int clusters = 30;
  std::uint64_t seed = 0;
  int initial = 100;
  int final_n = 200;
  std::string output = ".";
  std::string domain;
};

std::vector<std::string> result_row(int series, const ExperimentConfig& cfg,
                                    const std::string& type, int run, const ErrorStats& s) {
  return {std::to_string(series), cfg.function_id, std::string(to_string(cfg.scheme)), type,
          std::to_string(run), format_double(s.mean), format_double(s.std)};
}

void print_stats(std::ostream& out, const std::string& label, const ErrorStats& s) {
  out << "  " << std::left << std::setw(14) << label << format_double(s.mean) << " +- "
      << format_double(s.std) << '\n';
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out) {
  if (a.series < 1 || a.series > 3) throw ConfigError("--series must be 1, 2 or 3");
  if (a.series <= 2 && !is_test_function(a.function))
    throw ConfigError("series " + std::to_string(a.series) + " needs one of f1..f9, got '" +
                      a.function + "'");
  if (a.series == 3 && !is_opt_function(a.function))
    throw ConfigError("series 3 needs one of ackley|booth|bukin4, got '" + a.function + "'");
  if (a.series == 3 && !a.domain.empty()) throw ConfigError("--domain applies only to f1..f9");

  ExperimentConfig cfg;
  cfg.function_id = a.function;
  cfg.scheme = scheme_flag(a.scheme);
  cfg.seed = a.seed;
  cfg.train_config.n_clusters = a.clusters;
  cfg.n_samples = a.samples.value_or(a.series == 3 ? 1000 : 100);
  cfg.n_runs = a.runs.value_or(a.series == 1 ? 30 : a.series == 2 ? 3 : 5);
  cfg.test_fraction = a.series == 3 ? 0.1 : 1.0;
  if (!a.domain.empty()) cfg.domain = parse_domain(a.domain);

  const fs::path dir(a.output);
  fs::create_directories(dir);
  const std::string stem = "series" + std::to_string(a.series) + "_" + cfg.function_id + "_" +
                           std::string(to_string(cfg.scheme));
  const fs::path results_path = dir / (stem + ".csv");
  std::vector<fs::path> outputs{results_path};
  const std::vector<std::string> header = {"series",       "function", "scheme",   "opposite_type",
                                           "run",          "mean_error", "std_error"};

  json config = {{"series", a.series},
                 {"function", cfg.function_id},
                 {"scheme", to_string(cfg.scheme)},
                 {"n_runs", cfg.n_runs},
                 {"seed", cfg.seed},
                 {"test_fraction", cfg.test_fraction},
                 {"domain", domain_json(cfg.domain)},
                 {"train_config", train_config_to_json(cfg.train_config)}};

  out << "series " << a.series << ", " << cfg.function_id << ", scheme "
      << to_string(cfg.scheme) << ", " << cfg.n_runs << " runs\n";

  if (a.series == 1) {
    config["n_samples"] = cfg.n_samples;
    const Series1Result r = run_series1(cfg);
    CsvWriter w(results_path, header);
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
      const int run = static_cast<int>(i) + 1;
      w.row(result_row(1, cfg, "type1", run, r.runs[i].type1));
      w.row(result_row(1, cfg, "type2", run, r.runs[i].type2));
    }
    w.close();
    print_stats(out, "type-I", r.type1);
    print_stats(out, "type-II", r.type2);
  } else if (a.series == 2) {
    config["initial"] = a.initial;
    config["final"] = a.final_n;
    const Series2Result r = run_series2(cfg, a.initial, a.final_n);
    CsvWriter w(results_path, header);
    for (std::size_t i = 0; i < r.runs.size(); ++i)
      w.row(result_row(2, cfg, "type2", static_cast<int>(i) + 1, r.runs[i].back().stats));
    w.close();
    const fs::path plot_path = dir / (stem + "_plot.csv");
    CsvWriter plot(plot_path, {"n_seen", "mean", "std"});
    for (const auto& p : r.aggregate)
      plot.row({std::to_string(p.n_seen), format_double(p.stats.mean), format_double(p.stats.std)});
    plot.close();
    outputs.push_back(plot_path);
    print_stats(out, "first update", r.aggregate.front().stats);
    print_stats(out, "last update", r.aggregate.back().stats);
  } else {
    config["n_samples"] = cfg.n_samples;
    const Series3Result r = run_series3(cfg);
    CsvWriter w(results_path, header);
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
      const int run = static_cast<int>(i) + 1;
      const Series3Run& s = r.runs[i];
      w.row(result_row(3, cfg, "random", run, s.random));
      w.row(result_row(3, cfg, "type2", run, s.type2));
      w.row(result_row(3, cfg, "type1", run, s.type1));
      w.row(result_row(3, cfg, "select_type2", run, s.select_type2));
      w.row(result_row(3, cfg, "select_type1", run, s.select_type1));
    }
    w.close();
    print_stats(out, "random", r.random);
    print_stats(out, "type-II", r.type2);
    print_stats(out, "type-I", r.type1);
  }

  write_manifest(dir / "manifest.json", "experiment", config, outputs);
  for (const auto& p : outputs) out << "wrote " << p.string() << '\n';
  return kExitOk;
}

int exit_code_for(std::exception_ptr ep, std::ostream& err) {
  try {
    std::rethrow_exception(ep);
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const SchemeMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const InversionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const Error& e) {
    // parse, config, contract, insufficient data, unreadable paths
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn type-II opposites by opposition mining and evolving fuzzy rules"};
  app.name(args.empty() ? "opplearn" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Draw uniform samples of a benchmark function");
  sample->add_option("--function", sample_args.function, "f1..f9 | ackley | booth | bukin4")
      ->required();
  sample->add_option("--samples", sample_args.samples, "Number of samples");
  sample->add_option("--seed", sample_args.seed, "RNG seed");
  sample->add_option("--domain", sample_args.domain, "LO:HI domain override for f1..f9");
  sample->add_option("--output", sample_args.output, "Output CSV")->required();

  MineArgs mine_args;
  auto* mine = app.add_subcommand("mine", "Mine type-II opposites from a sample CSV");
  mine->add_option("--input", mine_args.input, "CSV with header x1..xn,y")->required();
  mine->add_option("--scheme", mine_args.scheme, "t1|t2|t3");
  mine->add_option("--output", mine_args.output, "Output CSV")->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Fit a fuzzy rule base to mined opposites");
  train->add_option("--input", train_args.input, "Mined CSV")->required();
  train->add_option("--clusters", train_args.cfg.n_clusters, "Number of rules");
  train->add_option("--exponent", train_args.cfg.fuzzy_exponent_m, "Fuzzy exponent m");
  train->add_option("--max-iter", train_args.cfg.max_iter, "Clustering iteration cap");
  train->add_option("--epsilon", train_args.cfg.epsilon, "Center shift tolerance");
  train->add_option("--seed", train_args.cfg.seed, "Center initialization seed");
  train->add_option("--output", train_args.output, "Model JSON")->required();

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "Approximate opposites with a trained model");
  predict->add_option("--model", predict_args.model, "Model JSON")->required();
  predict->add_option("--input", predict_args.input, "CSV with header x1..xn,y")->required();
  predict->add_option("--output", predict_args.output, "Output CSV")->required();

  ExperimentArgs exp_args;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment series");
  experiment->add_option("--series", exp_args.series, "1 | 2 | 3")->required();
  experiment->add_option("--function", exp_args.function, "f1..f9 | ackley | booth | bukin4")
      ->required();
  experiment->add_option("--scheme", exp_args.scheme, "t1|t2|t3");
  experiment->add_option("--samples", exp_args.samples, "Training samples per run");
  experiment->add_option("--clusters", exp_args.clusters, "Number of rules");
  experiment->add_option("--runs", exp_args.runs, "Independent runs");
  experiment->add_option("--seed", exp_args.seed, "Base seed; run r uses seed + r");
  experiment->add_option("--initial", exp_args.initial, "Series 2: offline training samples");
  experiment->add_option("--final", exp_args.final_n, "Series 2: samples after evolving");
  experiment->add_option("--output", exp_args.output, "Output directory");
  experiment->add_option("--domain", exp_args.domain, "LO:HI domain override for f1..f9");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("opplearn");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sample) return cmd_sample(sample_args, out);
    if (*mine) return cmd_mine(mine_args, out);
    if (*train) return cmd_train(train_args, out);
    if (*predict) return cmd_predict(predict_args, out);
    if (*experiment) return cmd_experiment(exp_args, out);
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
  return kExitUsage;
}

}  // namespace opplearn
