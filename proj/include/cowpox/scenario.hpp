#pragma once

// Scenario files: a flat key/value document (YAML; nested maps are flattened
// to dotted keys, so `score: {benign_low: 0}` and `score.benign_low: 0` are
// the same). Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cowpox/engine.hpp"

namespace cowpox {

struct Scenario {
  EngineConfig engine;
  std::uint32_t replicates = 1;
  std::string output_dir = "out";
  /// adaptive.* values; copied into the engine only while adaptive.enabled is true.
  AdaptiveConfig adaptive_params;

  /// Seed of replicate `index`: the scenario seed plus the index.
  std::uint64_t replicate_seed(std::uint32_t index) const { return engine.seed + index; }

  /// Engine and replicate checks; throws ConfigError.
  void validate() const;
};

/// Every accepted key, in canonical order.
const std::vector<std::string>& scenario_keys();

/// Sets one key from its textual value. Throws ConfigError for unknown keys
/// or unparsable values. Does not run cross-field validation.
void set_scenario_value(Scenario& s, const std::string& key, const std::string& value);

/// Resolved configuration as canonical key -> text.
std::map<std::string, std::string> scenario_values(const Scenario& s);

/// Parses a YAML/JSON document. A top-level `config` map (as found in a run
/// manifest) is used in place of the document itself.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

/// Canonical YAML rendering; parse_scenario(to_yaml(s)) reproduces `s`.
std::string to_yaml(const Scenario& s);

}  // namespace cowpox
