#pragma once

#include "dwlab/grid.hpp"
#include "dwlab/pde_solver.hpp"
#include "dwlab/reports.hpp"

#include <span>
#include <vector>

namespace dwlab {

/// Per-condition empirical constants for the data-profile hypotheses:
///   local Harnack   phi(x) <= C inf_{|y-x|<1} phi(y)
///   doubling        phi(x) <= C inf_{|y|<2|x|} phi(y)
///   log-derivative  |phi'(x)| <= C phi(x)
///   exp lower bound e^{-delta|x|} <= C_delta phi(x), delta in {0.1, 0.5, 1}.
/// On a finite grid every constant is finite, so divergence is detected by
/// growth: a condition fails when its constant on the full grid exceeds the
/// constant on the central half by more than 20%.
struct PhiConditionEntry {
    std::string name;
    double constant;       // over the full grid
    double inner_constant; // over the central half
    bool divergent;
};

std::vector<PhiConditionEntry> phi_condition_entries(const GridFunction& phi);

/// Summary report: passed iff no condition diverges; worst_value is the
/// largest full/half growth ratio, empirical_constant the largest constant.
CheckReport check_phi_conditions(const GridFunction& phi);

/// The main-theorem bound in both of its algebraic forms.
struct MainTheoremBound {
    GridFunction closed_form;  // (u_L^{p-1} / ((t+t0) u_L^{p-1} + 1))^{1/(p-1)}
    GridFunction h_pullback;   // H(t+t0, u_L(t+t0, x)) = w(t+t0) g(t+t0, u_L)
    double ratio_min = 0.0;    // closed_form / h_pullback over positive entries
    double ratio_max = 0.0;
};

/// u_L_shifted must be the linear solution evaluated at time t + t0.
/// Negative u_L entries are a domain error.
MainTheoremBound main_theorem_bound(double t, const GridFunction& u_L_shifted, double t0,
                                    double p, double alpha = 1.0);

/// Max of u/bound over matching snapshots; violations counted above 1 + tol.
DominationReport check_domination(std::span<const Snapshot> u,
                                  std::span<const Snapshot> bound, double tolerance);

/// Closed-form least squares of log(norm) against log(t) inside the window.
DecayFit fit_decay(std::span<const double> t_list, std::span<const double> norms,
                   double window_t_min, double window_t_max, double target);

/// Two-sided a priori bounds for the defocusing problem.
/// Lower: e^{-t/2} [ (u0(x+t)+u0(x-t))/2 + (1/2) int_{x-t}^{x+t} (u1 + u0/2) ].
/// Upper: S(t)(u0+u1) + dS/dt(t) u0 (the linear solution with the same data).
GridFunction apriori_lower(double t, const GridFunction& u0, const GridFunction& u1,
                           const Grid& out);
GridFunction apriori_upper(double t, const GridFunction& u0, const GridFunction& u1,
                           double quad_dx, const Grid& out);

struct ComparisonResult {
    CheckReport report;       // worst_value = max over time/space of (u_low - u_high)
    double sup_sum_seen = 0.0;  // max over the run of sup (u_low + u_high)
};

/// Evolves ordered data with the same solver configuration and verifies the
/// ordering is preserved at every step.  Preconditions: u0_low <= u0_high,
/// u1_low + u0_low/2 <= u1_high + u0_high/2 pointwise, both data sets satisfy
/// the sign condition, and the smallness sup(u_low+u_high)^{p-1} <= 1/(4p)
/// (monitored over the whole run).
ComparisonResult comparison_experiment(const GridFunction& u0_low, const GridFunction& u1_low,
                                       const GridFunction& u0_high, const GridFunction& u1_high,
                                       const SolverConfig& cfg, double tolerance);

/// Evolves u from (u0, u1) and checks u(t,x) <= H(t) for the spatially
/// constant ODE supersolution trajectory H(t) = h_fn(t, eps, p, alpha).
ComparisonResult ode_supersolution_domination(const GridFunction& u0, const GridFunction& u1,
                                              const SolverConfig& cfg, double eps, double alpha,
                                              double tolerance);

struct LemmaRatioSample {
    double t;
    double ratio_dt;   // sup_x |dS/dt phi|   / (t^{-2(1-sigma)} S phi)
    double ratio_dtt;  // sup_x |d2S/dt2 phi| / (t^{-4(1-sigma)} S phi)
};

struct LemmaRatioResult {
    std::vector<LemmaRatioSample> samples;
    CheckReport report;  // passed iff max over t within 10x of the median, both ratios
};

/// Empirical constants of the kernel-derivative estimates
///   |d^k/dt^k S(t) phi| <= C_sigma t^{-2k(1-sigma)} S(t) phi,  k = 1, 2,
/// over t_list in [2, inf), sigma in (1/2, 1).
LemmaRatioResult kernel_lemma_ratios(const GridFunction& phi, double sigma,
                                     std::span<const double> t_list, double quad_dx,
                                     const Grid& obs);

}  // namespace dwlab
