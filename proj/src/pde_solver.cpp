#include "dwlab/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dwlab {

namespace {

// u^p: the literal monomial for integer p; fractional p gets the odd
// extension |u|^{p-1} u, which agrees on u >= 0 and stays defined for the
// tiny negative undershoots the positivity monitor tolerates.
template <typename Expr>
Array nonlinear_power(const Expr& u, double p) {
    if (p == 2.0) return u * u;
    if (p == 3.0) return u * u * u;
    return u.abs().pow(p - 1.0) * u;
}

}  // namespace

void SolverConfig::validate() const {
    const double dte = effective_dt();
    if (!(dte > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (dte > grid.dx * (1.0 + 1e-12))
        throw std::invalid_argument("SolverConfig: CFL violated, needs dt <= dx");
    if (!(t_final > 0.0)) throw std::invalid_argument("SolverConfig: t_final must be positive");
    if (!(p > 1.0)) throw std::invalid_argument("SolverConfig: p must exceed 1");
    if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
        throw std::invalid_argument("SolverConfig: snapshot_times must be sorted");
    if (!snapshot_times.empty() &&
        snapshot_times.back() > t_final * (1.0 + 1e-12) + 0.5 * dte)
        throw std::invalid_argument("SolverConfig: snapshot beyond t_final");
}

SimulationState init_state(const GridFunction& u0, const GridFunction& u1,
                           const SolverConfig& cfg) {
    cfg.validate();
    if (!u0.grid().same_as(cfg.grid) || !u1.grid().same_as(cfg.grid))
        throw std::invalid_argument("init_state: data grids must match the solver grid");
    if (cfg.require_sign_condition) {
        if (u0.values().minCoeff() < 0.0)
            throw std::invalid_argument("init_state: sign condition u0 >= 0 violated");
        if ((u1.values() + 0.5 * u0.values()).minCoeff() < 0.0)
            throw std::invalid_argument("init_state: sign condition u1 + u0/2 >= 0 violated");
    }
    const Index n = cfg.grid.n;
    const double dt = cfg.effective_dt();
    const double idx2 = 1.0 / (cfg.grid.dx * cfg.grid.dx);
    const auto& v0 = u0.values();
    const auto& v1 = u1.values();

    // Taylor start: u(dt) = u0 + dt u1 + (dt^2/2) (u0'' - u1 - [nl] u0^p)
    Array acc = Array::Zero(n);
    acc.segment(1, n - 2) =
        idx2 * (v0.segment(0, n - 2) - 2.0 * v0.segment(1, n - 2) + v0.segment(2, n - 2)) -
        v1.segment(1, n - 2);
    if (cfg.nonlinear) acc.segment(1, n - 2) -= nonlinear_power(v0.segment(1, n - 2), cfg.p);
    Array next = v0 + dt * v1 + 0.5 * dt * dt * acc;
    next[0] = v0[0];
    next[n - 1] = v0[n - 1];

    SimulationState st{u0, GridFunction(cfg.grid, std::move(next)), dt, 1, 0.0};
    st.min_value_seen = std::min(v0.minCoeff(), st.u_curr.values().minCoeff());
    return st;
}

void step(SimulationState& st, const SolverConfig& cfg) {
    const Index n = cfg.grid.n;
    const double dt = cfg.effective_dt();
    const double idt2 = 1.0 / (dt * dt);
    const double ihalf = 0.5 / dt;
    const double idx2 = 1.0 / (cfg.grid.dx * cfg.grid.dx);
    const double inv = 1.0 / (idt2 + ihalf);
    const auto& u = st.u_curr.values();
    const auto& up = st.u_prev.values();

    Array next(n);
    auto um = u.segment(0, n - 2);
    auto uc = u.segment(1, n - 2);
    auto upl = u.segment(2, n - 2);
    auto pc = up.segment(1, n - 2);
    next.segment(1, n - 2) = idt2 * (2.0 * uc - pc) + ihalf * pc + idx2 * (um - 2.0 * uc + upl);
    if (cfg.nonlinear) next.segment(1, n - 2) -= nonlinear_power(uc, cfg.p);
    next.segment(1, n - 2) *= inv;
    next[0] = u[0];
    next[n - 1] = u[n - 1];

    if (!next.allFinite()) {
        std::ostringstream msg;
        msg << "pde_solver: non-finite value produced at step " << (st.step_index + 1)
            << " (t = " << format_double((st.step_index + 1) * dt) << ")";
        throw std::runtime_error(msg.str());
    }
    st.min_value_seen = std::min(st.min_value_seen, next.minCoeff());
    st.u_prev = std::move(st.u_curr);
    st.u_curr = GridFunction(cfg.grid, std::move(next));
    st.step_index += 1;
    st.t = static_cast<double>(st.step_index) * dt;
}

SimulationResult simulate(const GridFunction& u0, const GridFunction& u1,
                          const SolverConfig& cfg) {
    const double dt = cfg.effective_dt();
    const long total = std::max<long>(1, std::lround(std::ceil(cfg.t_final / dt - 1e-9)));

    // requested times -> nearest step index
    std::vector<long> want;
    want.reserve(cfg.snapshot_times.size());
    for (double ts : cfg.snapshot_times)
        want.push_back(std::clamp<long>(std::lround(ts / dt), 0, total));

    SimulationResult res;
    res.boundary_influence_radius = cfg.t_final;
    std::size_t next_want = 0;
    auto emit = [&](long k, const GridFunction& u) {
        while (next_want < want.size() && want[next_want] == k) {
            res.snapshots.push_back({static_cast<double>(k) * dt, u});
            ++next_want;
        }
    };

    SimulationState st = init_state(u0, u1, cfg);
    emit(0, u0);
    emit(1, st.u_curr);
    while (st.step_index < total) {
        step(st, cfg);
        emit(st.step_index, st.u_curr);
    }
    res.min_value_seen = st.min_value_seen;
    return res;
}

void write_run_metadata(const SolverConfig& cfg, const SimulationResult& res,
                        const std::filesystem::path& path) {
    std::ostringstream s;
    s << "dx = " << format_double(cfg.grid.dx) << '\n'
      << "dt = " << format_double(cfg.effective_dt()) << '\n'
      << "x_min = " << format_double(cfg.grid.x_min()) << '\n'
      << "x_max = " << format_double(cfg.grid.x_max()) << '\n'
      << "n = " << cfg.grid.n << '\n'
      << "t_final = " << format_double(cfg.t_final) << '\n'
      << "p = " << format_double(cfg.p) << '\n'
      << "nonlinear = " << (cfg.nonlinear ? "true" : "false") << '\n'
      << "min_value_seen = " << format_double(res.min_value_seen) << '\n'
      << "boundary_influence_radius = " << format_double(res.boundary_influence_radius) << '\n';
    write_file_atomic(path, s.str());
}

}  // namespace dwlab
