#include "dwlab/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    int jobs = 0;
    double dx = -1.0, dt = -1.0, p = -1.0, rho = -1.0, alpha = -1.0, sigma = -1.0, eps = -1.0,
           t0 = -1.0, t_final = -1.0;
    std::vector<std::string> q;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "scenario config file (key = value lines)");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--jobs", opt.jobs, "worker pool size for independent checks");
    cmd->add_option("--dx", opt.dx, "grid spacing");
    cmd->add_option("--dt", opt.dt, "time step (default 0.9 dx)");
    cmd->add_option("--p", opt.p, "nonlinearity exponent");
    cmd->add_option("--rho", opt.rho, "data decay rate");
    cmd->add_option("--alpha", opt.alpha, "supersolution alpha");
    cmd->add_option("--sigma", opt.sigma, "kernel estimate sigma");
    cmd->add_option("--eps", opt.eps, "data amplitude");
    cmd->add_option("--t0", opt.t0, "comparison shift t0");
    cmd->add_option("--t-final", opt.t_final, "final time");
    cmd->add_option("--q", opt.q, "norm exponent, repeatable (number or inf)")->allow_extra_args(false);
}

dwlab::ScenarioConfig build_config(const CliOptions& opt, const std::string& simulate_mode) {
    dwlab::ScenarioConfig cfg;
    if (!opt.config_path.empty()) cfg = dwlab::load_config_file(opt.config_path);
    if (!simulate_mode.empty()) cfg.simulate_mode = simulate_mode;
    if (opt.jobs > 0) cfg.jobs = opt.jobs;
    if (opt.dx > 0.0) cfg.dx = opt.dx;
    if (opt.dt > 0.0) cfg.dt = opt.dt;
    if (opt.p > 0.0) cfg.params.p = opt.p;
    if (opt.rho > 0.0) cfg.params.rho = opt.rho;
    if (opt.alpha > 0.0) cfg.params.alpha = opt.alpha;
    if (opt.sigma > 0.0) cfg.params.sigma = opt.sigma;
    if (opt.eps > 0.0) cfg.params.eps = opt.eps;
    if (opt.t0 >= 0.0) cfg.params.t0 = opt.t0;
    if (opt.t_final > 0.0) cfg.t_final = opt.t_final;
    if (!opt.q.empty()) {
        cfg.q_list.clear();
        for (const auto& s : opt.q)
            cfg.q_list.push_back(s == "inf" || s == "infinity" ? dwlab::q_infinity : std::stod(s));
    }
    cfg.validate();
    return cfg;
}

int report_outcome(const dwlab::ScenarioOutcome& o) {
    std::cout << o.name << ": " << (o.passed ? "PASS" : "FAIL") << '\n';
    for (const auto& l : o.lines) std::cout << "  " << l << '\n';
    if (!o.passed) {
        for (const auto& r : o.reports)
            if (!r.passed) std::cout << "  failing check: " << r.name << '\n';
    }
    return o.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification laboratory for the 1D semilinear damped wave equation"};
    app.require_subcommand(1);

    CliOptions opt;
    using Runner = dwlab::ScenarioOutcome (*)(const dwlab::ScenarioConfig&,
                                              const std::filesystem::path&);
    struct Sub {
        const char* name;
        const char* help;
        Runner runner;
        const char* simulate_mode;
    };
    const Sub subs[] = {
        {"bessel-check", "Bessel series vs integral oracle and I0 lower bounds",
         &dwlab::run_bessel_check, ""},
        {"kernel-check", "kernel mass identities and light-cone stability",
         &dwlab::run_kernel_check, ""},
        {"ode-check", "ODE supersolution residuals and derivative checks", &dwlab::run_ode_check,
         ""},
        {"heat-rates", "heat supersolution L^q decay rates", &dwlab::run_heat_rates, ""},
        {"simulate", "finite-difference run (mode from simulate_mode)", &dwlab::run_simulate, ""},
        {"main-theorem", "supersolution domination of the nonlinear solution",
         &dwlab::run_main_theorem, ""},
        {"comparison", "ordered-data comparison principle experiment", &dwlab::run_comparison,
         ""},
        {"lemma-ratios", "kernel time-derivative ratio bounds", &dwlab::run_lemma_ratios, ""},
    };

    std::string simulate_mode_flag;
    for (const auto& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        add_common_flags(cmd, opt);
        if (std::string(s.name) == "simulate")
            cmd->add_option("--mode", simulate_mode_flag,
                            "linear-consistency | apriori-sandwich | decay-rates");
    }
    CLI::App* all = app.add_subcommand("all", "run every scenario (the full verification suite)");
    add_common_flags(all, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (all->parsed()) {
            const auto cfg = build_config(opt, "");
            const auto outcomes = dwlab::run_all(cfg, opt.out_dir);
            int rc = 0;
            for (const auto& o : outcomes) rc |= report_outcome(o);
            return rc;
        }
        for (const auto& s : subs) {
            if (app.get_subcommand(s.name)->parsed()) {
                const auto cfg = build_config(opt, simulate_mode_flag);
                return report_outcome(s.runner(cfg, opt.out_dir));
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
