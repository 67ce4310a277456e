#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "sdp/model.hpp"

namespace sdp {

inline constexpr int kCheckpointVersion = 1;

nlohmann::json model_config_json(const ModelConfig& config);
// Throws ConfigError listing every missing, unknown or mistyped key.
ModelConfig model_config_from_json(const nlohmann::json& j);

// Config echo, vocabularies, pretrained table and every parameter array as a
// JSON document. Doubles are written with round-trip precision.
nlohmann::json checkpoint_json(const ParserModel& model, const nlohmann::json& extra = {});
ParserModel model_from_checkpoint(const nlohmann::json& j);

void save_checkpoint(const std::string& path, const ParserModel& model,
                     const nlohmann::json& extra = {});
// DataError for unreadable or malformed files, ConfigError for config mismatches.
ParserModel load_checkpoint(const std::string& path);

}  // namespace sdp
