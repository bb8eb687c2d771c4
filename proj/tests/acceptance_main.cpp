// Acceptance suite: runs the full verification pipeline twice, checks every
// criterion at its stated tolerance and runtime budget, and byte-compares the
// two runs' outputs.  One PASS/FAIL line per criterion; exit 0 iff all pass.

#include "dwlab/grid.hpp"
#include "dwlab/scenarios.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using dwlab::ScenarioOutcome;

namespace {

int g_failures = 0;

void criterion(int number, bool passed, const std::string& title, const std::string& detail) {
    std::printf("criterion %2d [%s] %s: %s\n", number, passed ? "PASS" : "FAIL", title.c_str(),
                detail.c_str());
    if (!passed) ++g_failures;
}

const ScenarioOutcome& outcome(const std::vector<ScenarioOutcome>& all, const std::string& name) {
    for (const auto& o : all)
        if (o.name == name) return o;
    throw std::runtime_error("missing scenario outcome " + name);
}

const dwlab::CheckReport& report(const ScenarioOutcome& o, const std::string& name) {
    for (const auto& r : o.reports)
        if (r.name == name) return r;
    throw std::runtime_error("missing report " + name + " in " + o.name);
}

bool reports_pass(const ScenarioOutcome& o, std::initializer_list<const char*> names) {
    for (const char* n : names)
        if (!report(o, n).passed) return false;
    return true;
}

std::string fmt(double v) { return dwlab::format_double(v); }

std::string runtime_note(const ScenarioOutcome& o, double budget) {
    std::ostringstream s;
    s << " (runtime " << fmt(o.elapsed_seconds) << "s <= " << fmt(budget) << "s)";
    return s.str();
}

bool within_budget(const ScenarioOutcome& o, double budget) {
    return o.elapsed_seconds <= budget;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files[fs::relative(entry.path(), root).string()] = s.str();
    }
    return files;
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path base = argc > 1 ? fs::path(argv[1])
                                   : fs::temp_directory_path() / "dwlab_acceptance";
    fs::remove_all(base);
    const dwlab::ScenarioConfig cfg;  // defaults are the acceptance parameters

    std::printf("running the verification suite (pass 1 of 2) ...\n");
    const auto run1 = dwlab::run_all(cfg, base / "run1");
    std::printf("running the verification suite (pass 2 of 2, determinism) ...\n");
    const auto run2 = dwlab::run_all(cfg, base / "run2");

    {  // 1. Bessel conformance: oracle agreement 1e-10 on [0, 30], I0 lower bounds on (0, 50]
        const auto& o = outcome(run1, "bessel-check");
        const auto& agree = report(o, "bessel_oracle_agreement");
        const auto& lower = report(o, "bessel_lower_bounds");
        criterion(1, agree.passed && lower.passed && within_budget(o, 1.0), "bessel conformance",
                  "oracle rel err " + fmt(agree.worst_value) + " <= 1e-10, worst bound margin " +
                      fmt(lower.worst_value) + " >= 0" + runtime_note(o, 1.0));
    }
    {  // 2./3. kernel identities within 1e-6 and K2 cone limit within 1e-6 relative
        const auto& o = outcome(run1, "kernel-check");
        const auto& mass = report(o, "kernel_mass_identities");
        const auto& cone = report(o, "light_cone_stability");
        criterion(2, mass.passed && within_budget(o, 10.0), "kernel identities",
                  "worst |error| " + fmt(mass.worst_value) + " <= 1e-6 over t in {1,2,5,10,20}" +
                      runtime_note(o, 10.0));
        criterion(3, cone.passed && within_budget(o, 10.0 + 1.0), "light-cone stability",
                  "K2 vs cone limit rel err " + fmt(cone.worst_value) + " <= 1e-6");
    }
    {  // 4. ODE supersolution: residuals >= 0 on the sweep, derivatives vs FD 1e-6
        const auto& o = outcome(run1, "ode-check");
        const auto& sweep = report(o, "ode_residual_sweep");
        const auto& fd = report(o, "ode_derivative_fd");
        criterion(4, sweep.passed && fd.passed && within_budget(o, 1.0), "ode supersolution",
                  "worst residual " + fmt(sweep.worst_value) + " >= 0, derivative rel err " +
                      fmt(fd.worst_value) + " <= 1e-6" + runtime_note(o, 1.0));
    }
    {  // 5. linear solver vs kernel within 1e-3, error factor >= 3 at halved steps
        const auto& o = outcome(run1, "simulate-linear");
        const auto& linf = report(o, "linear_consistency_linf");
        const auto& conv = report(o, "linear_consistency_convergence");
        criterion(5, linf.passed && conv.passed && within_budget(o, 120.0),
                  "linear solver consistency",
                  "L^inf error " + fmt(linf.worst_value) + " <= 1e-3, halving factor " +
                      fmt(conv.worst_value) + " >= 3" + runtime_note(o, 120.0));
    }
    {  // 6. a priori sandwich with violations only below 10 dx^2
        const auto& o = outcome(run1, "simulate-sandwich");
        const auto& sand = report(o, "apriori_sandwich");
        criterion(6, sand.passed && within_budget(o, 120.0), "a priori sandwich",
                  "worst bound excess " + fmt(sand.worst_value) + ", violations 0 at tolerance " +
                      fmt(10.0 * cfg.dx * cfg.dx) + runtime_note(o, 120.0));
    }
    {  // 7. main theorem domination with zero violations at tolerance 1e-2
        const auto& o = outcome(run1, "main-theorem");
        const auto& dom = report(o, "main_theorem_domination");
        criterion(7, dom.passed && within_budget(o, 300.0), "main theorem domination",
                  "zero violations; smallest passing t0 = " + fmt(dom.worst_value) +
                      runtime_note(o, 300.0));
    }
    {  // 8. nonlinear decay rates within 0.1 of {-1/3, -2/3, -1} over t in [1e2, 1e3]
        const auto& o = outcome(run1, "simulate-rates");
        const bool ok =
            reports_pass(o, {"nonlinear_rate_q1", "nonlinear_rate_q2", "nonlinear_rate_qinf"});
        criterion(8, ok && within_budget(o, 900.0), "nonlinear decay rates",
                  "slope errors {q1 " + fmt(report(o, "nonlinear_rate_q1").worst_value) + ", q2 " +
                      fmt(report(o, "nonlinear_rate_q2").worst_value) + ", qinf " +
                      fmt(report(o, "nonlinear_rate_qinf").worst_value) + "} <= 0.1" +
                      runtime_note(o, 900.0));
    }
    {  // 9. heat supersolution rates within 0.05 and the sqrt(log) factor-4 band
        const auto& o = outcome(run1, "heat-rates");
        const bool ok = reports_pass(
            o, {"heat_rate_q1", "heat_rate_q2", "heat_rate_qinf", "heat_rate_sqrtlog_band"});
        criterion(9, ok && within_budget(o, 60.0), "heat supersolution rates",
                  "slope errors {" + fmt(report(o, "heat_rate_q1").worst_value) + ", " +
                      fmt(report(o, "heat_rate_q2").worst_value) + ", " +
                      fmt(report(o, "heat_rate_qinf").worst_value) + "} <= 0.05, band factor " +
                      fmt(report(o, "heat_rate_sqrtlog_band").worst_value) + " <= 4" +
                      runtime_note(o, 60.0));
    }
    {  // 10. comparison principle preserved to 1e-6 through t = 100
        const auto& o = outcome(run1, "comparison");
        const bool ok = reports_pass(
            o, {"comparison_ordering_scaled_data", "comparison_ode_supersolution"});
        criterion(10, ok && within_budget(o, 300.0), "comparison principle",
                  "max ordering defect " +
                      fmt(report(o, "comparison_ordering_scaled_data").worst_value) +
                      " <= 1e-6" + runtime_note(o, 300.0));
    }
    {  // 11. determinism: the two full runs produced bit-identical files
        const auto a = read_tree(base / "run1");
        const auto b = read_tree(base / "run2");
        bool same = a.size() == b.size() && !a.empty();
        std::string detail = std::to_string(a.size()) + " files compared";
        if (same) {
            for (const auto& [name, content] : a) {
                const auto it = b.find(name);
                if (it == b.end() || it->second != content) {
                    same = false;
                    detail = "mismatch at " + name;
                    break;
                }
            }
        } else {
            detail = "file sets differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")";
        }
        criterion(11, same, "determinism", detail + (same ? ", bit-identical" : ""));
    }

    // not a numbered criterion: the kernel-derivative ratio bounds
    {
        const auto& o = outcome(run1, "lemma-ratios");
        std::printf("info: lemma-ratios %s (max/median ratio %s)\n", o.passed ? "PASS" : "FAIL",
                    fmt(o.reports.front().worst_value).c_str());
        if (!o.passed) ++g_failures;
    }

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return 1;
}
