#include "dwlab/kernel_ops.hpp"

#include "dwlab/special_functions.hpp"

#include <cmath>
#include <vector>

namespace dwlab {

namespace {

// Below omega = 1e-3 max(1, t) the kernels are evaluated by their combined
// series in omega^2: the raw K2 formula loses all significant digits to the
// omega^{-2} cancellation there.
constexpr double cone_series_factor = 1e-3;

void check_kernel_t(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw std::domain_error("kernel: t must be positive and finite");
}

double omega_sq(double t, double y) { return (t - y) * (t + y); }

void require_extension(const GridFunction& f, const Grid& out, double reach, const char* op) {
    const double slack = 1e-9 * std::max(1.0, reach);
    const double have_lo = out.x_min() - f.grid().x_min();
    const double have_hi = f.grid().x_max() - out.x_max();
    if (have_lo + slack < reach || have_hi + slack < reach) {
        throw TruncationError(std::string(op) + ": data grid must extend " +
                                  format_double(reach) + " beyond every output point, has only " +
                                  format_double(std::min(have_lo, have_hi)),
                              reach, std::min(have_lo, have_hi));
    }
}

struct ConeNodes {
    double h;
    std::vector<double> y;
};

// Trapezoid nodes on [-t, t] with +-t as exact endpoints and >= 2 panels.
ConeNodes cone_nodes(double t, double quad_dx) {
    if (!(quad_dx > 0.0)) throw std::domain_error("quad_dx must be positive");
    const long panels = std::max<long>(2, static_cast<long>(std::ceil(2.0 * t / quad_dx - 1e-12)));
    ConeNodes nd;
    nd.h = 2.0 * t / static_cast<double>(panels);
    nd.y.resize(panels + 1);
    for (long k = 0; k <= panels; ++k) nd.y[k] = -t + static_cast<double>(k) * nd.h;
    nd.y.front() = -t;
    nd.y.back() = t;
    return nd;
}

// (e^{-t/2}/2) I_0(omega/2), evaluated as e^{(omega-t)/2} times the scaled
// Bessel value so neither factor can overflow.
double s_kernel(double t, double y) {
    const double w2 = omega_sq(t, y);
    if (w2 <= 0.0) return 0.5 * std::exp(-0.5 * t);
    const double om = std::sqrt(w2);
    return 0.5 * std::exp(0.5 * (om - t)) * bessel_i_scaled(BesselOrder::zero, 0.5 * om);
}

// Quadrature of kernel * f over the cone; kernel values are precomputed per
// node (they do not depend on x).
GridFunction convolve(double t, const GridFunction& f, double quad_dx, const Grid& out,
                      double (*kernel)(double, double)) {
    const ConeNodes nd = cone_nodes(t, quad_dx);
    const std::size_t m = nd.y.size();
    std::vector<double> kv(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double w = (k == 0 || k + 1 == m) ? 0.5 * nd.h : nd.h;
        kv[k] = w * kernel(t, nd.y[k]);
    }
    Array result(out.n);
    for (Index i = 0; i < out.n; ++i) {
        const double x = out.x(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < m; ++k) acc += kv[k] * f.interpolate(x - nd.y[k]);
        result[i] = acc;
    }
    return GridFunction(out, std::move(result));
}

Array centered_differences(const GridFunction& f) {
    const Index n = f.size();
    const double dx = f.grid().dx;
    Array d(n);
    d[0] = (f[1] - f[0]) / dx;
    d[n - 1] = (f[n - 1] - f[n - 2]) / dx;
    for (Index j = 1; j < n - 1; ++j) d[j] = (f[j + 1] - f[j - 1]) / (2.0 * dx);
    return d;
}

}  // namespace

ConeCoordinate ConeCoordinate::from_ty(double t, double y) {
    check_kernel_t(t);
    if (std::fabs(y) > t) throw std::domain_error("ConeCoordinate: |y| <= t required");
    return {t, y, std::sqrt(omega_sq(t, y))};
}

double k1(double t, double y) {
    check_kernel_t(t);
    const double w2 = omega_sq(t, y);
    if (w2 < 0.0) return 0.0;  // extended kernel vanishes outside the cone
    const double om = std::sqrt(w2);
    const double threshold = cone_series_factor * std::max(1.0, t);
    if (om < threshold) {
        // (t/w) I_1(w/2) - I_0(w/2) = (t/4 - 1) + w^2 (t/128 - 1/16)
        //                           + w^4 (t/12288 - 1/1024) + O(w^6)
        return 0.25 * std::exp(-0.5 * t) *
               ((0.25 * t - 1.0) + w2 * (t / 128.0 - 1.0 / 16.0) +
                w2 * w2 * (t / 12288.0 - 1.0 / 1024.0));
    }
    const double s0 = bessel_i_scaled(BesselOrder::zero, 0.5 * om);
    const double s1 = bessel_i_scaled(BesselOrder::one, 0.5 * om);
    return 0.25 * std::exp(0.5 * (om - t)) * ((t / om) * s1 - s0);
}

double k2(double t, double y) {
    check_kernel_t(t);
    const double w2 = omega_sq(t, y);
    if (w2 < 0.0) return 0.0;
    const double om = std::sqrt(w2);
    const double threshold = cone_series_factor * std::max(1.0, t);
    if (om < threshold) {
        // Combined series: the w^{-2}, w^{-3} poles cancel against the Bessel
        // series, leaving
        //   (t^2/256 - t/16 + 3/16) + w^2 (t^2/12288 - t/512 + 5/512) + O(w^4).
        return std::exp(-0.5 * t) *
               ((t * t / 256.0 - t / 16.0 + 3.0 / 16.0) +
                w2 * (t * t / 12288.0 - t / 512.0 + 5.0 / 512.0));
    }
    const double s0 = bessel_i_scaled(BesselOrder::zero, 0.5 * om);
    const double s1 = bessel_i_scaled(BesselOrder::one, 0.5 * om);
    const double s2 = bessel_i_scaled(BesselOrder::two, 0.5 * om);
    const double c = t * t / (16.0 * w2);
    return std::exp(0.5 * (om - t)) *
           (c * s2 - (t / (4.0 * om) + y * y / (4.0 * om * w2)) * s1 + (0.125 + c) * s0);
}

Grid cone_safe_window(const Grid& data, double t) { return data.shrunk(t); }

GridFunction apply_s(double t, const GridFunction& f, double quad_dx, const Grid& out) {
    if (t < 0.0 || !std::isfinite(t)) throw std::domain_error("apply_s: t must be >= 0");
    if (t == 0.0) return GridFunction(out, Array::Zero(out.n));
    require_extension(f, out, t, "apply_s");
    return convolve(t, f, quad_dx, out, &s_kernel);
}

GridFunction apply_dt_s(double t, const GridFunction& f, double quad_dx, const Grid& out) {
    check_kernel_t(t);
    require_extension(f, out, t, "apply_dt_s");
    GridFunction conv = convolve(t, f, quad_dx, out, &k1);
    const double e = std::exp(-0.5 * t);
    Array v = conv.values();
    for (Index i = 0; i < out.n; ++i) {
        const double x = out.x(i);
        v[i] += 0.5 * e * (f.interpolate(x + t) + f.interpolate(x - t));
    }
    return GridFunction(out, std::move(v));
}

GridFunction apply_dtt_s(double t, const GridFunction& f, const GridFunction* f_prime,
                         double quad_dx, const Grid& out) {
    check_kernel_t(t);
    require_extension(f, out, t, "apply_dtt_s");
    GridFunction fp = f_prime != nullptr ? *f_prime
                                         : GridFunction(f.grid(), centered_differences(f));
    if (!fp.grid().same_as(f.grid()))
        throw std::invalid_argument("apply_dtt_s: f_prime grid mismatch");
    GridFunction conv = convolve(t, f, quad_dx, out, &k2);
    const double e = std::exp(-0.5 * t);
    Array v = conv.values();
    for (Index i = 0; i < out.n; ++i) {
        const double x = out.x(i);
        v[i] += 0.5 * e * (fp.interpolate(x + t) - fp.interpolate(x - t)) +
                e * (t / 16.0 - 0.5) * (f.interpolate(x + t) + f.interpolate(x - t));
    }
    return GridFunction(out, std::move(v));
}

GridFunction linear_solution(double t, const GridFunction& phi, double eps, double quad_dx,
                             const Grid& out) {
    if (!(eps > 0.0)) throw std::domain_error("linear_solution: eps must be positive");
    if (t < 0.0 || !std::isfinite(t)) throw std::domain_error("linear_solution: t must be >= 0");
    if (t == 0.0) {
        Array v(out.n);
        for (Index i = 0; i < out.n; ++i) v[i] = eps * phi.interpolate(out.x(i));
        return GridFunction(out, std::move(v));
    }
    GridFunction s = apply_s(t, phi, quad_dx, out);
    GridFunction ds = apply_dt_s(t, phi, quad_dx, out);
    return GridFunction(out, eps * (s.values() + ds.values()));
}

}  // namespace dwlab
