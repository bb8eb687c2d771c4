#pragma once

#include "dwlab/grid.hpp"

namespace dwlab {

/// Point (t, y) inside the light cone |y| <= t together with the hyperbolic
/// distance omega = sqrt(t^2 - y^2) to the cone.
struct ConeCoordinate {
    double t;
    double y;
    double omega;

    static ConeCoordinate from_ty(double t, double y);
};

/// Wave kernel K1(t,y) = (1/4) e^{-t/2} ((t/w) I_1(w/2) - I_0(w/2)), w = omega.
/// Returns 0 outside the cone; the light-cone limit (1/4)e^{-t/2}(t/4 - 1) is
/// taken by a series branch near the cone.
double k1(double t, double y);

/// Wave kernel
///   K2(t,y) = e^{-t/2} ( t^2/(16 w^2) I_2(w/2)
///                        - (t/(4w) + y^2/(4w^3)) I_1(w/2)
///                        + (1/8 + t^2/(16 w^2)) I_0(w/2) ).
/// The individually divergent w^{-2}, w^{-3} terms cancel at the cone; a
/// combined series branch evaluates the limit e^{-t/2}(t^2/256 - t/16 + 3/16)
/// plus its second-order correction near the cone.
double k2(double t, double y);

/// Largest aligned subgrid of `data` whose points keep distance >= t from
/// both grid ends, i.e. where cone convolutions against `data` are exact.
Grid cone_safe_window(const Grid& data, double t);

/// S(t) f(x) = (e^{-t/2}/2) int_{-t}^{t} I_0(sqrt(t^2-y^2)/2) f(x-y) dy by
/// trapezoidal quadrature with +-t as endpoint nodes.  Output on `out`, whose
/// points must all keep distance >= t from the ends of f's grid (otherwise a
/// TruncationError describing the missing extension is thrown).
GridFunction apply_s(double t, const GridFunction& f, double quad_dx, const Grid& out);

/// dS/dt f(x) = e^{-t/2} (f(x+t)+f(x-t))/2  +  (K1(t,.) * f)(x), t > 0.
GridFunction apply_dt_s(double t, const GridFunction& f, double quad_dx, const Grid& out);

/// d2S/dt2 f(x) = e^{-t/2} (f'(x+t)-f'(x-t))/2
///              + e^{-t/2} (t/16 - 1/2) (f(x+t)+f(x-t))  +  (K2(t,.) * f)(x).
/// When f_prime is null it is formed by centered differences of f.
GridFunction apply_dtt_s(double t, const GridFunction& f, const GridFunction* f_prime,
                         double quad_dx, const Grid& out);

/// u_L(t) = eps (S(t) phi + dS/dt(t) phi); equals eps*phi at t = 0.
GridFunction linear_solution(double t, const GridFunction& phi, double eps, double quad_dx,
                             const Grid& out);

}  // namespace dwlab
