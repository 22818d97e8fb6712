#include "opplearn/fis_json.hpp"

#include <fstream>

namespace opplearn {

namespace {

constexpr const char* kFormat = "opplearn-fis";
constexpr int kVersion = 1;

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

nlohmann::json norms_to_json(const std::vector<Normalization<double>>& norms) {
  auto arr = nlohmann::json::array();
  for (const auto& n : norms)
    arr.push_back({{"offset", n.offset}, {"scale", n.scale}, {"degenerate", n.degenerate}});
  return arr;
}

std::vector<Normalization<double>> norms_from_json(const nlohmann::json& j) {
  std::vector<Normalization<double>> norms;
  for (const auto& n : j)
    norms.push_back({n.at("offset").get<double>(), n.at("scale").get<double>(),
                     n.value("degenerate", false)});
  return norms;
}

}  // namespace

nlohmann::json train_config_to_json(const TrainConfig& cfg) {
  return {{"n_clusters", cfg.n_clusters},
          {"fuzzy_exponent_m", cfg.fuzzy_exponent_m},
          {"max_iter", cfg.max_iter},
          {"epsilon", cfg.epsilon},
          {"seed", cfg.seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig cfg;
  cfg.n_clusters = j.at("n_clusters").get<int>();
  cfg.fuzzy_exponent_m = j.at("fuzzy_exponent_m").get<double>();
  cfg.max_iter = j.at("max_iter").get<int>();
  cfg.epsilon = j.at("epsilon").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

nlohmann::json fis_to_json(const FisModelXd& model) {
  auto rules = nlohmann::json::array();
  for (const auto& r : model.rules) {
    auto consequents = nlohmann::json::array();
    for (Eigen::Index o = 0; o < r.consequents.rows(); ++o)
      consequents.push_back(vector_to_json(r.consequents.row(o).transpose()));
    rules.push_back({{"centers", vector_to_json(r.centers)},
                     {"widths", vector_to_json(r.widths)},
                     {"consequents", consequents}});
  }
  return {{"format", kFormat},
          {"version", kVersion},
          {"config", train_config_to_json(model.config)},
          {"input_norms", norms_to_json(model.input_norms)},
          {"output_norms", norms_to_json(model.output_norms)},
          {"rules", rules}};
}

FisModelXd fis_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kFormat)
      throw ParseError("not an opplearn fuzzy model document");
    if (j.at("version").get<int>() != kVersion)
      throw ParseError("unsupported model version " + j.at("version").dump());
    FisModelXd model;
    model.config = train_config_from_json(j.at("config"));
    model.input_norms = norms_from_json(j.at("input_norms"));
    model.output_norms = norms_from_json(j.at("output_norms"));
    for (const auto& r : j.at("rules")) {
      FuzzyRule<double> rule;
      rule.centers = vector_from_json(r.at("centers"));
      rule.widths = vector_from_json(r.at("widths"));
      const auto& rows = r.at("consequents");
      rule.consequents.resize(static_cast<Eigen::Index>(rows.size()), rule.centers.size() + 1);
      for (std::size_t o = 0; o < rows.size(); ++o) {
        const Eigen::VectorXd row = vector_from_json(rows[o]);
        if (row.size() != rule.consequents.cols())
          throw ParseError("consequent row has the wrong length");
        rule.consequents.row(static_cast<Eigen::Index>(o)) = row.transpose();
      }
      model.rules.push_back(std::move(rule));
    }
    model.validate();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model document: ") + e.what());
  } catch (const ContractError& e) {
    throw ParseError(std::string("inconsistent model document: ") + e.what());
  }
}

void save_fis(const FisModelXd& model, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << fis_to_json(model).dump(2) << '\n';
  if (!os) throw Error("failed writing " + path.string());
}

FisModelXd load_fis(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return fis_from_json(j);
}

}  // namespace opplearn
