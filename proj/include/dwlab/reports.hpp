#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

namespace dwlab {

/// Outcome of one verification: the extremal quantity the check monitors,
/// where it occurred, and the empirically fitted constant when the claim is
/// existential ("there exists C such that ...").
struct CheckReport {
    std::string name;
    bool passed = false;
    double worst_value = 0.0;
    double worst_t = 0.0;
    double worst_x = 0.0;
    std::optional<double> empirical_constant;
};

/// Fitted log-log slope over a time window against a theoretical target.
struct DecayFit {
    double q = 1.0;
    double t_min = 0.0;
    double t_max = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double target = 0.0;
};

/// Result of a pointwise domination check u <= bound over snapshots.
struct DominationReport {
    double max_ratio = 0.0;
    double argmax_t = 0.0;
    double argmax_x = 0.0;
    long violations = 0;  // grid points with ratio > 1 + tolerance
    double tolerance = 0.0;
};

/// CSV rows "check,passed,worst_value,t,x,constant" (constant empty if absent).
void write_reports_csv(std::span<const CheckReport> reports, const std::filesystem::path& path);

std::string format_report_line(const CheckReport& r);

}  // namespace dwlab
