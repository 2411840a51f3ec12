#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsqkd/scenario.hpp"

// JSON config files. Sections: constellation, channel, source, detector,
// postselection, reconciliation, numerics, plus an optional sweep section
// and a free-text description. Unknown keys are errors.
namespace tsqkd::scenario {

struct SweepSection {
  std::optional<Axis> axis;
  std::vector<double> values;  // empty when the section gives none
};

struct Config {
  std::string description;
  Scenario scenario;
  std::optional<SweepSection> sweep;
};

// Throws ConfigError listing every malformed or invalid field.
Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);

// Full config with every field spelled out; parse_config round-trips it.
std::string to_json(const Scenario& s, int indent = 2);

// Version string written into every dataset row.
std::string version_string();

}  // namespace tsqkd::scenario
