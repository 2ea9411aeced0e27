#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ldce/eval.hpp"

namespace ldce {

// Flat "key = value" text, '#' starts a comment. Duplicate keys are rejected.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& path);

// Every key accepted by experiment_from_keys.
const std::vector<std::string>& experiment_config_keys();

/// Builds an ExperimentConfig from key/values. Unknown keys and bad values
/// raise ConfigError listing every offending key.
ExperimentConfig experiment_from_keys(const KeyValues& kv);

// Canonical key/value view of a config, used as the report's config_echo.
KeyValues echo_config(const ExperimentConfig& config);

}  // namespace ldce
