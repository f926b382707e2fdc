#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wpmap/clairaut.hpp"
#include "wpmap/curvature.hpp"

namespace wpmap {

// A scenario file is line-oriented "key = value" text with repeatable
// "launch { ... }" blocks, '#' comments, and repeated "check =" lines.
struct Scenario {
    std::string name;
    std::string warped = "spheremodel";
    std::string map = "pi1";  // pi1 | pi2 | identity | heisenberg
    std::string clairaut_g = "auto";
    std::uint64_t seed = 42;
    bool write_traces = true;
    std::vector<Launch> launches;
    std::vector<std::string> checks;
    std::map<std::string, double> tolerances;  // keyed "tolerance.<name>"

    double tol(const std::string& key, double fallback) const;
};

Scenario parse_scenario_text(const std::string& text, const std::string& source_name);
Scenario parse_scenario_file(const std::string& path);

// "key=value" override of a scalar scenario field (--set).
void apply_override(Scenario& sc, const std::string& assignment);

struct CheckOutcome {
    std::string name;
    bool passed = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::vector<std::string> stamps;
    std::string detail;
};

struct RunResult {
    std::vector<CheckOutcome> checks;
    bool all_passed = false;
    int exit_code = 1;  // 0 pass, 1 check failure (2 = config, raised as ConfigError)
    std::string report_path;
    std::vector<std::string> trace_paths;
};

// Executes the scenario's checks, writes per-launch trace CSVs and report.json
// under out_dir (created if missing). Deterministic for a fixed seed apart
// from the report's timestamp field.
RunResult run_scenario(const Scenario& sc, const std::string& out_dir);

std::vector<std::string> check_names();      // alphabetized
std::string describe_check(const std::string& name);  // UnknownCheck
std::string list_catalog_text();

}  // namespace wpmap
