#pragma once

namespace dwlab {

/// Parameters of the explicit ODE supersolution H(t, eps) = w(t) g(t, eps).
struct OdeSupersolutionParams {
    double p;      // > 1 (values in [3, 4) are allowed but exploratory)
    double alpha;  // in (0, 1]
    double eps;    // > 0 and small: (p-1)/(p(p+1)) eps^{p-1} <= 1/2

    void validate() const;
    bool exploratory() const { return p >= 3.0; }
};

/// g(t, eps) = ( p(p+1) eps^{p-1} / ((p-1)^2 eps^{p-1} t + p^2 + p) )^{1/(p-1)}.
/// Positive, strictly decreasing in t, g(0) = eps, g <= eps.
double g_fn(double t, double eps, double p);

/// w(t) = ( 1/2 + (2^{1/alpha} + t)^{-alpha} )^{-1/(p-1)}.
/// w(0) = 1, strictly increasing, w -> 2^{1/(p-1)}.
double w_fn(double t, double alpha, double p);

/// H(t, eps) = w(t) g(t, eps).
double h_fn(double t, double eps, double p, double alpha);

struct HDerivatives {
    double dt;       // dH/dt
    double deps;     // dH/deps
    double dt_deps;  // d2H/(dt deps)
    double deps2;    // d2H/deps2  (<= 0 everywhere in domain)
    double dt2;      // d2H/dt2
};

/// All derivatives from the closed forms (chain/product rules on the exact
/// w, g derivatives), no finite differencing.
HDerivatives h_derivs(double t, double eps, double p, double alpha);

struct OdeResiduals {
    double main;          // Hdd + Hd + H^p - C1 w g^p - C2 (2^{(a+1)/a}+t)^{-(a+1)} H
    double half_damping;  // Hd + H/2
};

/// Signed residuals of the two differential inequalities satisfied by H, with
/// the explicit constants extracted from the construction:
///   C1 = 2/(p+1) - 2 alpha / (p (p+1) 2^{1/alpha}),   C2 = alpha/(p-1).
/// Both residuals are nonnegative for admissible parameters.
OdeResiduals supersolution_residuals(double t, double eps, double p, double alpha);

/// G(t, f) = ((p-1) t + f^{1-p})^{-1/(p-1)}, the decaying solution of
/// g' + g^p = 0, g(0) = f; continuously extended by G(t, 0) = 0.
double heat_g(double t, double f, double p);

}  // namespace dwlab
