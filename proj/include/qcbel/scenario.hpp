#pragma once
// Named, reproducible experiment runs: registry, validation, CSV/manifest
// emission.

#include <cstdint>
#include <functional>

#include "qcbel/config.hpp"

namespace qcbel {

struct ScenarioContext {
    Config cfg;
    std::string outdir;
    std::uint64_t seed = 2026;
    int resolution = 256;
};

struct Scenario {
    std::string name;
    std::string description;
    std::vector<std::string> param_keys;    // allowed keys in [params]
    std::vector<std::string> schema_lines;  // produced files and columns
    std::function<void(const ScenarioContext&)> run;
};

const std::vector<Scenario>& scenario_registry();
const Scenario* find_scenario(const std::string& name);

/// One line per scenario, optionally filtered by substring.
std::string list_scenarios(const std::string& filter = "");

/// Reject unknown sections/keys, bad types, missing scenario name, and
/// out-of-range resolution.  Throws ConfigError.
void validate_config(const Config& cfg);

/// Validate, then execute the named scenario, writing CSVs, SCHEMA.txt and
/// manifest.txt under the output directory.  output_root_override (from the
/// environment) replaces the configured output root when non-empty.
void run_config(const Config& cfg, const std::string& output_root_override);

}  // namespace qcbel
