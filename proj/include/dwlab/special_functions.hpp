#pragma once

namespace dwlab {

/// Orders of the modified Bessel functions of the first kind used by the
/// damped-wave kernels.  No other orders are needed or constructible.
enum class BesselOrder { zero = 0, one = 1, two = 2 };

/// Scaled modified Bessel function e^{-x} I_n(x) for x >= 0.
///
/// Power series for x <= 20, asymptotic expansion above; the two regimes
/// agree to at least 12 digits at the seam.  The scaled value stays bounded
/// for arbitrarily large x (it decays like 1/sqrt(2 pi x)).
double bessel_i_scaled(BesselOrder n, double x);

/// Unscaled I_n(x).  Restricted to x <= 700, where e^x is representable.
double bessel_i(BesselOrder n, double x);

/// I_1(x)/x extended continuously through x = 0, where the value is 1/2.
double i1_over_z(double x);

/// Composite trapezoidal quadrature of (1/pi) int_0^pi e^{x cos theta} dtheta,
/// the integral representation of I_0.  Independent of the series/asymptotic
/// evaluation path; converges (spectrally) to I_0(x) as panels grows.
double i0_integral_oracle(double x, int panels);

namespace detail {
/// The two evaluation regimes individually, for seam-agreement tests.
double series_scaled(int n, double x);
double asymptotic_scaled(int n, double x);
}  // namespace detail

}  // namespace dwlab
