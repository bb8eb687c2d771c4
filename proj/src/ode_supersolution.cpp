#include "dwlab/ode_supersolution.hpp"

#include <cmath>
#include <stdexcept>

namespace dwlab {

namespace {

void check_twe(double t, double eps, double p) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("supersolution: t must be >= 0");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::domain_error("supersolution: eps must be positive");
    if (!(p > 1.0)) throw std::domain_error("supersolution: p must exceed 1");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("supersolution: alpha must be in (0, 1]");
}

}  // namespace

void OdeSupersolutionParams::validate() const {
    check_twe(0.0, eps, p);
    check_alpha(alpha);
    if (!(p < 4.0)) throw std::invalid_argument("supersolution: p restricted to (1, 4)");
    // sufficient for the half-damping inequality Hd + H/2 >= 0
    if ((p - 1.0) / (p * (p + 1.0)) * std::pow(eps, p - 1.0) > 0.5)
        throw std::invalid_argument("supersolution: eps too large, needs (p-1)/(p(p+1)) eps^{p-1} <= 1/2");
}

double g_fn(double t, double eps, double p) {
    check_twe(t, eps, p);
    const double ep = std::pow(eps, p - 1.0);
    return std::pow(p * (p + 1.0) * ep / ((p - 1.0) * (p - 1.0) * ep * t + p * p + p),
                    1.0 / (p - 1.0));
}

double w_fn(double t, double alpha, double p) {
    check_twe(t, 1.0, p);
    check_alpha(alpha);
    return std::pow(0.5 + std::pow(std::pow(2.0, 1.0 / alpha) + t, -alpha), -1.0 / (p - 1.0));
}

double h_fn(double t, double eps, double p, double alpha) {
    return w_fn(t, alpha, p) * g_fn(t, eps, p);
}

HDerivatives h_derivs(double t, double eps, double p, double alpha) {
    check_twe(t, eps, p);
    check_alpha(alpha);
    const double S = std::pow(2.0, 1.0 / alpha) + t;
    const double w = w_fn(t, alpha, p);
    const double g = g_fn(t, eps, p);

    const double wd = alpha / (p - 1.0) * std::pow(S, -(alpha + 1.0)) * std::pow(w, p);
    const double wdd =
        (p * alpha / (p - 1.0) * std::pow(S, -(alpha + 1.0)) * std::pow(w, p - 1.0) -
         (alpha + 1.0) / S) *
        wd;

    const double k = (p - 1.0) / (p * (p + 1.0));
    const double gd = -k * std::pow(g, p);
    const double gdd = k * (p - 1.0) / (p + 1.0) * std::pow(g, 2.0 * p - 1.0);

    const double r = g / eps;  // in (0, 1]
    const double ge = std::pow(r, p);                                     // dg/deps
    const double gee = p * ge * (std::pow(r, p - 1.0) - 1.0) / eps;       // <= 0
    const double gte = -(p - 1.0) / (p + 1.0) * std::pow(g, p - 1.0) * ge;

    HDerivatives d;
    d.dt = wd * g + w * gd;
    d.deps = w * ge;
    d.dt2 = wdd * g + 2.0 * wd * gd + w * gdd;
    d.dt_deps = wd * ge + w * gte;
    d.deps2 = w * gee;
    return d;
}

OdeResiduals supersolution_residuals(double t, double eps, double p, double alpha) {
    const HDerivatives d = h_derivs(t, eps, p, alpha);
    const double w = w_fn(t, alpha, p);
    const double g = g_fn(t, eps, p);
    const double H = w * g;
    const double c1 = 2.0 / (p + 1.0) - 2.0 * alpha / (p * (p + 1.0) * std::pow(2.0, 1.0 / alpha));
    const double c2 = alpha / (p - 1.0);
    const double shift = std::pow(2.0, (alpha + 1.0) / alpha);
    OdeResiduals r;
    r.main = d.dt2 + d.dt + std::pow(H, p) - c1 * w * std::pow(g, p) -
             c2 * std::pow(shift + t, -(alpha + 1.0)) * H;
    r.half_damping = d.dt + 0.5 * H;
    return r;
}

double heat_g(double t, double f, double p) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::domain_error("heat_g: t must be >= 0");
    if (!(p > 1.0)) throw std::domain_error("heat_g: p must exceed 1");
    if (f < 0.0 || !std::isfinite(f)) throw std::domain_error("heat_g: f must be nonnegative");
    if (f == 0.0) return 0.0;
    // ((p-1) t + f^{1-p})^{-1/(p-1)} rearranged so small f cannot overflow
    return f * std::pow(1.0 + (p - 1.0) * t * std::pow(f, p - 1.0), -1.0 / (p - 1.0));
}

}  // namespace dwlab
