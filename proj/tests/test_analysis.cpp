#include "dwlab/analysis.hpp"

#include "dwlab/kernel_ops.hpp"
#include "dwlab/ode_supersolution.hpp"

#include <doctest.h>

#include <cmath>

using namespace dwlab;

TEST_SUITE_BEGIN("analysis");

TEST_CASE("phi conditions: admissible and inadmissible profiles") {
    const Grid g = Grid::centered(50.0, 0.05);

    CHECK(check_phi_conditions(japanese_bracket_profile(1.5, g)).passed);
    CHECK(check_phi_conditions(GridFunction::constant(g, 1.0)).passed);

    // e^{-x^2} decays too fast: the exponential lower bound diverges at the
    // edge (narrower grid keeps the samples above the underflow floor)
    const Grid gg = Grid::centered(6.0, 0.01);
    const GridFunction gauss =
        GridFunction::sampled(gg, [](double x) { return std::exp(-x * x); });
    const CheckReport r = check_phi_conditions(gauss);
    CHECK(!r.passed);
    bool exp_lower_flagged = false;
    for (const auto& e : phi_condition_entries(gauss))
        if (e.name.starts_with("exp_lower") && e.divergent) exp_lower_flagged = true;
    CHECK(exp_lower_flagged);

    CHECK_THROWS_AS(check_phi_conditions(GridFunction::constant(g, 0.0)), std::domain_error);
}

TEST_CASE("phi constants for the constant profile are all 1") {
    const Grid g = Grid::centered(20.0, 0.1);
    for (const auto& e : phi_condition_entries(GridFunction::constant(g, 1.0))) {
        CHECK(!e.divergent);
        if (e.name.starts_with("exp_lower"))
            CHECK(e.constant <= 1.0);  // e^{-delta|x|} <= 1 = phi
        else if (e.name.starts_with("log_derivative"))
            CHECK(e.constant == 0.0);  // phi' = 0
        else
            CHECK(e.constant == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("main theorem bound forms") {
    const Grid g = Grid::centered(5.0, 0.1);
    const double p = 2.0;

    // t + t0 = 0 reduces to u_L
    const GridFunction uL = japanese_bracket_profile(1.5, g);
    const MainTheoremBound b0 = main_theorem_bound(0.0, uL, 0.0, p);
    CHECK((b0.closed_form.values() - uL.values()).abs().maxCoeff() < 1e-14);

    // constant u_L: value decreasing in t
    const GridFunction c = GridFunction::constant(g, 0.5);
    const MainTheoremBound b1 = main_theorem_bound(1.0, c, 0.0, p);
    const MainTheoremBound b2 = main_theorem_bound(4.0, c, 0.0, p);
    CHECK(b2.closed_form[0] < b1.closed_form[0]);

    // large (t + t0) u_L^{p-1}: bound flattens to (t+t0)^{-1/(p-1)}
    const MainTheoremBound b3 = main_theorem_bound(1e6, c, 0.0, p);
    CHECK(b3.closed_form[0] == doctest::Approx(std::pow(1e6, -1.0)).epsilon(1e-5));

    // the two algebraic forms stay within a bounded ratio
    const MainTheoremBound b4 = main_theorem_bound(30.0, uL, 50.0, p);
    CHECK(b4.ratio_min > 0.05);
    CHECK(b4.ratio_max < 1.0);

    Array neg = uL.values();
    neg[0] = -0.1;
    CHECK_THROWS_AS(main_theorem_bound(1.0, GridFunction(g, neg), 0.0, p), std::domain_error);
}

TEST_CASE("check_domination") {
    const Grid g = Grid::centered(2.0, 0.5);
    const GridFunction bound = GridFunction::constant(g, 1.0);
    const GridFunction half = GridFunction::constant(g, 0.5);
    const GridFunction zero = GridFunction::constant(g, 0.0);
    const std::vector<Snapshot> u = {{0.0, half}, {1.0, half}};
    const std::vector<Snapshot> b = {{0.0, bound}, {1.0, bound}};

    DominationReport rep = check_domination(u, b, 1e-2);
    CHECK(rep.max_ratio == doctest::Approx(0.5));
    CHECK(rep.violations == 0);

    const std::vector<Snapshot> uz = {{0.0, zero}, {1.0, zero}};
    CHECK(check_domination(uz, b, 1e-2).max_ratio == 0.0);

    // invariant under simultaneous positive scaling
    const std::vector<Snapshot> u3 = {{0.0, 3.0 * half}, {1.0, 3.0 * half}};
    const std::vector<Snapshot> b3 = {{0.0, 3.0 * bound}, {1.0, 3.0 * bound}};
    const DominationReport rep3 = check_domination(u3, b3, 1e-2);
    CHECK(rep3.max_ratio == doctest::Approx(rep.max_ratio).epsilon(1e-14));
    CHECK(rep3.violations == rep.violations);

    const std::vector<Snapshot> mismatch = {{0.0, half}, {2.0, half}};
    CHECK_THROWS_AS(check_domination(mismatch, b, 1e-2), std::invalid_argument);
}

TEST_CASE("fit_decay") {
    std::vector<double> ts, ns;
    for (double t = 10.0; t <= 1e4; t *= 1.5) {
        ts.push_back(t);
        ns.push_back(2.7 * std::pow(t, -0.5));
    }
    const DecayFit f = fit_decay(ts, ns, 10.0, 1e4, -0.5);
    CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(f.slope_stderr < 1e-12);

    // perturbed power law c t^{-1/3} (1 + t^{-1/2}) on [1e3, 1e5]
    std::vector<double> ts2, ns2;
    for (double t = 1e3; t <= 1e5; t *= 1.3)
        ts2.push_back(t), ns2.push_back(0.4 * std::pow(t, -1.0 / 3.0) * (1.0 + std::pow(t, -0.5)));
    const DecayFit f2 = fit_decay(ts2, ns2, 1e3, 1e5, -1.0 / 3.0);
    CHECK(std::fabs(f2.slope - (-1.0 / 3.0)) < 0.02);

    CHECK_THROWS_AS(fit_decay(ts, ns, 1.0, 2.0, 0.0), std::domain_error);
    std::vector<double> bad = ns;
    bad[3] = 0.0;
    CHECK_THROWS_AS(fit_decay(ts, bad, 10.0, 1e4, 0.0), std::domain_error);
}

TEST_CASE("a priori bounds at t = 0 and small t") {
    const Grid data = Grid::centered(20.0, 0.05);
    const Grid obs = Grid::centered(3.0, 0.05);
    const GridFunction u0 = 0.05 * japanese_bracket_profile(1.5, data);
    const GridFunction u1 = GridFunction::constant(data, 0.0);

    const GridFunction lo0 = apriori_lower(0.0, u0, u1, obs);
    const GridFunction up0 = apriori_upper(0.0, u0, u1, 0.01, obs);
    for (Index i = 0; i < obs.n; ++i) {
        CHECK(lo0[i] == doctest::Approx(u0.interpolate(obs.x(i))).epsilon(1e-12));
        CHECK(up0[i] == doctest::Approx(u0.interpolate(obs.x(i))).epsilon(1e-12));
    }

    // constant data, linear flow: lower = e^{-t/2}(1 + t/2) <= 1 = solution = upper
    const GridFunction one = GridFunction::constant(data, 1.0);
    const GridFunction zero = GridFunction::constant(data, 0.0);
    const GridFunction lo = apriori_lower(2.0, one, zero, obs);
    const GridFunction up = apriori_upper(2.0, one, zero, 0.002, obs);
    CHECK(lo[0] == doctest::Approx(std::exp(-1.0) * 2.0).epsilon(1e-12));
    CHECK(lo[0] <= 1.0);
    CHECK(up[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("comparison experiment") {
    SolverConfig cfg;
    cfg.grid = Grid::centered(15.0, 0.1);
    cfg.t_final = 5.0;
    cfg.p = 2.0;
    cfg.nonlinear = true;
    const GridFunction phi = japanese_bracket_profile(1.5, cfg.grid);
    const GridFunction zero = GridFunction::constant(cfg.grid, 0.0);

    // identical data: identical trajectories, difference exactly zero
    const ComparisonResult same =
        comparison_experiment(0.01 * phi, zero, 0.01 * phi, zero, cfg, 1e-6);
    CHECK(same.report.worst_value == 0.0);
    CHECK(same.report.passed);

    // ordered data stays ordered
    const ComparisonResult ord =
        comparison_experiment(0.01 * phi, zero, 0.02 * phi, zero, cfg, 1e-6);
    CHECK(ord.report.passed);
    CHECK(ord.report.worst_value <= 0.0);

    // violated ordering precondition
    CHECK_THROWS_AS(comparison_experiment(0.02 * phi, zero, 0.01 * phi, zero, cfg, 1e-6),
                    std::invalid_argument);
}

TEST_CASE("ode supersolution dominates the pde run") {
    SolverConfig cfg;
    cfg.grid = Grid::centered(15.0, 0.1);
    cfg.t_final = 5.0;
    cfg.p = 2.0;
    cfg.nonlinear = true;
    const GridFunction phi = japanese_bracket_profile(1.5, cfg.grid);
    const GridFunction zero = GridFunction::constant(cfg.grid, 0.0);
    const ComparisonResult r =
        ode_supersolution_domination(0.01 * phi, zero, cfg, 0.01, 1.0, 1e-6);
    CHECK(r.report.passed);
}

TEST_CASE("kernel lemma ratios") {
    // constant profile: dS/dt / S = e^{-t}/(1 - e^{-t}) exactly
    const Grid data = Grid::centered(60.0, 0.1);
    const Grid obs = Grid::centered(2.0, 0.5);
    const GridFunction one = GridFunction::constant(data, 1.0);
    const std::vector<double> ts = {2.0, 5.0, 10.0, 20.0, 50.0};
    const LemmaRatioResult r = kernel_lemma_ratios(one, 0.6, ts, 0.02, obs);
    REQUIRE(r.samples.size() == 5);
    const double expect =
        std::exp(-2.0) / (1.0 - std::exp(-2.0)) * std::pow(2.0, 2.0 * (1.0 - 0.6));
    CHECK(r.samples.front().ratio_dt == doctest::Approx(expect).epsilon(1e-4));
    CHECK(r.report.passed);

    // weaker claim as sigma -> 1: ratios shrink
    const std::vector<double> ts3 = {2.0, 5.0, 10.0};
    const LemmaRatioResult r_hi = kernel_lemma_ratios(one, 0.7, ts3, 0.02, obs);
    const LemmaRatioResult r_lo = kernel_lemma_ratios(one, 0.55, ts3, 0.02, obs);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(r_hi.samples[k].ratio_dt < r_lo.samples[k].ratio_dt);
        CHECK(r_hi.samples[k].ratio_dtt < r_lo.samples[k].ratio_dtt);
    }

    const std::vector<double> t_bad = {1.0};
    CHECK_THROWS_AS(kernel_lemma_ratios(one, 0.4, ts, 0.02, obs), std::domain_error);
    CHECK_THROWS_AS(kernel_lemma_ratios(one, 0.6, t_bad, 0.02, obs), std::domain_error);
}

TEST_CASE("lemma ratios bounded over the profile sweep") {
    const Grid obs = Grid::centered(15.0, 0.25);
    const Grid data = Grid::centered(15.0 + 50.0 + 2.0, 0.05);
    const std::vector<double> ts = {2.0, 5.0, 20.0, 50.0};
    for (double rho : {1.2, 1.5, 2.0})
        for (double sigma : {0.55, 0.6, 0.7}) {
            const GridFunction phi = japanese_bracket_profile(rho, data);
            const LemmaRatioResult r = kernel_lemma_ratios(phi, sigma, ts, 0.05, obs);
            CHECK(r.report.passed);
        }
}

TEST_SUITE_END();
