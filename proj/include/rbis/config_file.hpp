#pragma once

#include <map>
#include <string>
#include <vector>

#include "rbis/scenario.hpp"

namespace rbis {

// Flat key-value scenario files: one "section.key = value" per line, '#'
// comments, unknown keys rejected. Every key has a default, so an empty
// file is a valid scenario.
//
// Parsing collects all errors; the result is meaningful only when the
// error list comes back empty.
ScenarioConfig parse_config_text(const std::string& text,
                                 std::vector<std::string>& errors);

// Parse + validate; throws ConfigError listing every problem. IoError if
// the file cannot be read.
ScenarioConfig load_config_file(const std::string& path);

// Complete dotted-key snapshot of a config (defaults included); parsing the
// snapshot back yields an identical scenario.
std::map<std::string, std::string> config_snapshot(const ScenarioConfig& cfg);
std::string config_text(const ScenarioConfig& cfg);

}  // namespace rbis
