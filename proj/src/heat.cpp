#include "dwlab/heat.hpp"

#include "dwlab/analysis.hpp"
#include "dwlab/ode_supersolution.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace dwlab {

namespace {

constexpr double window_sigmas = 8.0;  // integrate over |y| <= 8 sqrt(t)

}  // namespace

GridFunction heat_apply(double t, const GridFunction& f, double quad_dx, const Grid& out) {
    if (t < 0.0 || !std::isfinite(t)) throw std::domain_error("heat_apply: t must be >= 0");
    if (!(quad_dx > 0.0)) throw std::domain_error("heat_apply: quad_dx must be positive");
    if (t == 0.0) {
        if (out.same_as(f.grid())) return f;
        Array v(out.n);
        for (Index i = 0; i < out.n; ++i) v[i] = f.interpolate(out.x(i));
        return GridFunction(out, std::move(v));
    }
    const double reach = window_sigmas * std::sqrt(t);
    const double tail_mass = std::erfc(0.5 * window_sigmas);
    {
        const double slack = 1e-9 * std::max(1.0, reach);
        const double have = std::min(out.x_min() - f.grid().x_min(),
                                     f.grid().x_max() - out.x_max());
        if (have + slack < reach) {
            std::ostringstream msg;
            msg << "heat_apply: data grid must extend " << format_double(reach)
                << " beyond every output point (has " << format_double(have)
                << "); truncated kernel tail mass bound " << format_double(tail_mass);
            throw TruncationError(msg.str(), reach, have);
        }
    }
    const long panels = std::max<long>(2, static_cast<long>(std::ceil(2.0 * reach / quad_dx)));
    const double h = 2.0 * reach / static_cast<double>(panels);
    const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
    std::vector<double> y(panels + 1), wk(panels + 1);
    for (long k = 0; k <= panels; ++k) {
        y[k] = -reach + static_cast<double>(k) * h;
        const double w = (k == 0 || k == panels) ? 0.5 * h : h;
        wk[k] = w * norm * std::exp(-y[k] * y[k] / (4.0 * t));
    }
    Array v(out.n);
    for (Index i = 0; i < out.n; ++i) {
        const double x = out.x(i);
        double acc = 0.0;
        for (long k = 0; k <= panels; ++k) acc += wk[k] * f.interpolate(x - y[k]);
        // reassign the truncated Gaussian tail erfc(4) at the local value, so
        // constants propagate exactly and mass is conserved
        v[i] = acc + tail_mass * f.interpolate(x);
    }
    return GridFunction(out, std::move(v));
}

GridFunction heat_supersolution(double t, const GridFunction& phi, double p, double quad_dx,
                                const Grid& out) {
    if (phi.values().minCoeff() < 0.0)
        throw std::domain_error("heat_supersolution: phi must be nonnegative");
    if (phi.values().maxCoeff() <= 0.0)
        throw std::domain_error("heat_supersolution: phi must be nontrivial");
    GridFunction e = heat_apply(t, phi, quad_dx, out);
    Array v = e.values();
    for (Index i = 0; i < v.size(); ++i) v[i] = heat_g(t, std::max(0.0, v[i]), p);
    return GridFunction(out, std::move(v));
}

HeatRateResult heat_rate_check(double p, double rho, double q, const std::vector<double>& t_list,
                               const Grid& obs) {
    if (!(p > 1.0) || !(rho > 1.0)) throw std::domain_error("heat_rate_check: needs p > 1, rho > 1");
    if (t_list.size() < 3) throw std::domain_error("heat_rate_check: needs >= 3 samples");
    for (std::size_t i = 0; i + 1 < t_list.size(); ++i)
        if (!(t_list[i] < t_list[i + 1]))
            throw std::domain_error("heat_rate_check: t_list must be increasing");

    const double t_max = t_list.back();
    const Grid data_grid = obs.extended(window_sigmas * std::sqrt(t_max) + 2.0 * obs.dx);
    const GridFunction phi = japanese_bracket_profile(rho, data_grid);
    const double x_edge = std::min(-obs.x_min(), obs.x_max());

    HeatRateResult res;
    res.sqrt_log_regime = rho >= 2.0 / (p - 1.0);
    res.ratio_min = std::numeric_limits<double>::infinity();
    res.ratio_max = 0.0;
    std::vector<double> ts, norms;
    for (double t : t_list) {
        const double quad_dx = std::sqrt(t) / 64.0;
        GridFunction gstar = heat_supersolution(t, phi, p, quad_dx, obs);
        double norm = lq_norm(gstar, q);
        // the profile tail beyond the window carries O(1) of the L^1 norm;
        // G(t, f) <= f makes the analytic profile tail an accurate stand-in
        if (q == 1.0) norm += japanese_bracket_l1_tail(rho, x_edge);
        res.samples.push_back({t, norm});
        ts.push_back(t);
        norms.push_back(norm);
        const double qinv = (q == q_infinity) ? 0.0 : 1.0 / q;
        const double denom = std::pow(t, 0.5 * qinv - 1.0 / (p - 1.0)) * std::sqrt(std::log(t));
        const double ratio = norm / denom;
        res.ratio_min = std::min(res.ratio_min, ratio);
        res.ratio_max = std::max(res.ratio_max, ratio);
    }
    const double qinv = (q == q_infinity) ? 0.0 : 1.0 / q;
    const double target = res.sqrt_log_regime ? 0.5 * qinv - 1.0 / (p - 1.0)
                                              : qinv / (rho * (p - 1.0)) - 1.0 / (p - 1.0);
    res.fit = fit_decay(ts, norms, t_list.front(), t_list.back(), target);
    res.fit.q = q;
    return res;
}

void write_rate_csv(const HeatRateResult& r, const std::filesystem::path& path) {
    std::ostringstream s;
    s << "t,q,norm,target_exponent\n";
    for (const auto& smp : r.samples)
        s << format_double(smp.t) << ',' << format_double(r.fit.q) << ','
          << format_double(smp.norm) << ',' << format_double(r.fit.target) << '\n';
    write_file_atomic(path, s.str());
}

}  // namespace dwlab
