#pragma once

#include "dwlab/grid.hpp"

#include <filesystem>
#include <vector>

namespace dwlab {

/// Explicit finite-difference scheme for
///   u_tt + u_t - u_xx + u^p = 0
/// (nonlinearity switchable).  Second-order central in space and time with
/// the damping term at (n+1, n-1); the u^{n+1} coefficient 1/dt^2 + 1/(2 dt)
/// is always positive, so the update is explicit.  Boundary values are held
/// at the initial data (Dirichlet); with grid half-width >= observation
/// half-width + t_final the boundary never influences the observations
/// (propagation speed 1).
struct SolverConfig {
    Grid grid;
    double dt = 0.0;  // <= 0 selects the default 0.9 * dx
    double t_final = 1.0;
    double p = 2.0;
    bool nonlinear = true;
    std::vector<double> snapshot_times;   // sorted, each <= t_final
    bool require_sign_condition = false;  // enforce u0 >= 0 and u1 + u0/2 >= 0

    double effective_dt() const { return dt > 0.0 ? dt : 0.9 * grid.dx; }
    void validate() const;  // CFL dt <= dx and the invariants above
};

struct SimulationState {
    GridFunction u_prev;  // time level t - dt
    GridFunction u_curr;  // time level t
    double t = 0.0;
    long step_index = 0;
    double min_value_seen = 0.0;
};

/// u_prev = u0, u_curr = Taylor start
///   u0 + dt u1 + (dt^2/2)(u0'' - u1 - [nonlinear] u0^p).
SimulationState init_state(const GridFunction& u0, const GridFunction& u1,
                           const SolverConfig& cfg);

/// One explicit update of the interior; boundary held at the data profile.
/// Throws on non-finite values, naming the step.
void step(SimulationState& state, const SolverConfig& cfg);

struct Snapshot {
    double t;
    GridFunction u;
};

struct SimulationResult {
    std::vector<Snapshot> snapshots;  // at the nearest step to each requested time
    double min_value_seen = 0.0;      // positivity monitor (never clipped)
    double boundary_influence_radius = 0.0;  // = t_final
};

SimulationResult simulate(const GridFunction& u0, const GridFunction& u1,
                          const SolverConfig& cfg);

/// Key-value run metadata block (dx, dt, domain, p, min_value_seen, ...).
void write_run_metadata(const SolverConfig& cfg, const SimulationResult& res,
                        const std::filesystem::path& path);

}  // namespace dwlab
