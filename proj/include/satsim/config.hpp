#pragma once

#include <string>

#include "satsim/scenario.hpp"

namespace satsim {

// Applies one `key = value` setting. Throws std::invalid_argument on an
// unknown key or a malformed value.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

// Flat `key = value` config file; '#' starts a comment, blank lines ignored.
ScenarioConfig load_config_file(const std::string& path);

}  // namespace satsim
