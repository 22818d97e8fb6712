#ifndef OPPLEARN_FIS_JSON_HPP
#define OPPLEARN_FIS_JSON_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "opplearn/fis.hpp"

namespace opplearn {

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

// Doubles are written in shortest round-trip form, so a save/load cycle is exact.
nlohmann::json fis_to_json(const FisModelXd& model);
FisModelXd fis_from_json(const nlohmann::json& j);

void save_fis(const FisModelXd& model, const std::filesystem::path& path);
FisModelXd load_fis(const std::filesystem::path& path);

}  // namespace opplearn

#endif  // OPPLEARN_FIS_JSON_HPP
