#pragma once

#include "dwlab/grid.hpp"
#include "dwlab/params.hpp"
#include "dwlab/reports.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dwlab {

/// Flat "key = value" scenario configuration.  Defaults are the
/// verification-suite parameters, so running with no config reproduces it.
struct ScenarioConfig {
    ModelParams params;
    double dx = 0.05;
    double dt = 0.0;  // 0 selects 0.9 * dx
    double t_final = 200.0;
    std::vector<double> q_list = {1.0, 2.0, q_infinity};
    std::string simulate_mode = "linear-consistency";  // apriori-sandwich | decay-rates
    double rates_eps = 0.5;  // data amplitude for the decay-rates run
    int jobs = 1;
    std::vector<std::string> checks;  // run_all selection; empty = everything

    void validate() const;  // throws std::invalid_argument
};

/// Parses "key = value" lines; '#' starts a comment.  Unknown keys throw.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::filesystem::path& path);
/// Every run writes this back next to its outputs for reproducibility.
std::string resolved_config_text(const ScenarioConfig& cfg);

struct ScenarioOutcome {
    std::string name;
    bool passed = false;
    std::vector<CheckReport> reports;
    std::vector<std::string> lines;  // human-readable summary
    double elapsed_seconds = 0.0;    // filled by run_all
};

ScenarioOutcome run_bessel_check(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
ScenarioOutcome run_kernel_check(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
ScenarioOutcome run_ode_check(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
ScenarioOutcome run_heat_rates(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
ScenarioOutcome run_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
ScenarioOutcome run_main_theorem(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
ScenarioOutcome run_comparison(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);
ScenarioOutcome run_lemma_ratios(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Runs every scenario (the three simulate modes included) under
/// out_dir/<scenario>/.  jobs > 1 fans the independent scenarios out to a
/// worker pool; outputs and returned order do not depend on jobs.
std::vector<ScenarioOutcome> run_all(const ScenarioConfig& cfg,
                                     const std::filesystem::path& out_dir);

}  // namespace dwlab
