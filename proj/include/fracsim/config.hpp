#pragma once

#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "fracsim/scenarios.hpp"

namespace fracsim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates a scenario configuration file. Unknown keys,
/// out-of-range values and unknown scheme/scenario names are rejected.
ScenarioConfig load_config(const std::filesystem::path& path);

ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

void validate_config(const ScenarioConfig& cfg);

}  // namespace fracsim
