#include "dwlab/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dwlab {

Grid::Grid(double x0_, double dx_, Index n_) : x0(x0_), dx(dx_), n(n_) {
    if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("Grid: dx must be positive");
    if (n < 2) throw std::invalid_argument("Grid: need at least 2 points");
    if (!std::isfinite(x0)) throw std::invalid_argument("Grid: x0 must be finite");
}

Array Grid::coords() const {
    Array xs(n);
    for (Index j = 0; j < n; ++j) xs[j] = x(j);
    return xs;
}

Grid Grid::centered(double half_width, double dx) {
    if (!(half_width > 0.0)) throw std::invalid_argument("Grid::centered: half_width must be positive");
    const Index half = static_cast<Index>(std::ceil(half_width / dx - 1e-12));
    return Grid(-static_cast<double>(half) * dx, dx, 2 * half + 1);
}

Grid Grid::shrunk(double margin) const {
    const Index cut = static_cast<Index>(std::ceil(margin / dx - 1e-12));
    if (2 * cut >= n - 1) throw std::invalid_argument("Grid::shrunk: margin leaves no points");
    return Grid(x(cut), dx, n - 2 * cut);
}

Grid Grid::extended(double margin) const {
    const Index add = static_cast<Index>(std::ceil(margin / dx - 1e-12));
    return Grid(x0 - static_cast<double>(add) * dx, dx, n + 2 * add);
}

bool Grid::same_as(const Grid& o, double tol) const {
    return n == o.n && std::fabs(x0 - o.x0) <= tol && std::fabs(dx - o.dx) <= tol;
}

TruncationError::TruncationError(const std::string& what, double required, double available)
    : std::runtime_error(what), required_(required), available_(available) {}

GridFunction::GridFunction(Grid grid, Array values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n)
        throw std::invalid_argument("GridFunction: values length does not match grid");
    if (!values_.allFinite())
        throw std::invalid_argument("GridFunction: values must be finite");
}

GridFunction GridFunction::constant(const Grid& g, double c) {
    return GridFunction(g, Array::Constant(g.n, c));
}

GridFunction GridFunction::sampled(const Grid& g, const std::function<double(double)>& f) {
    Array v(g.n);
    for (Index j = 0; j < g.n; ++j) v[j] = f(g.x(j));
    return GridFunction(g, std::move(v));
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    if (!a.grid().same_as(b.grid())) throw std::invalid_argument("GridFunction +: grid mismatch");
    return GridFunction(a.grid(), a.values() + b.values());
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    if (!a.grid().same_as(b.grid())) throw std::invalid_argument("GridFunction -: grid mismatch");
    return GridFunction(a.grid(), a.values() - b.values());
}

GridFunction operator*(double c, const GridFunction& f) {
    return GridFunction(f.grid(), c * f.values());
}

GridFunction japanese_bracket_profile(double rho, const Grid& grid) {
    if (!(rho > 0.0)) throw std::domain_error("japanese_bracket_profile: rho must be positive");
    Array v(grid.n);
    for (Index j = 0; j < grid.n; ++j) {
        const double x = grid.x(j);
        v[j] = std::pow(1.0 + x * x, -0.5 * rho);
    }
    return GridFunction(grid, std::move(v));
}

double lq_norm(const GridFunction& f, double q) {
    if (q == q_infinity) return f.values().abs().maxCoeff();
    if (!(q >= 1.0)) throw std::domain_error("lq_norm: q must be >= 1 or infinity");
    const Array a = f.values().abs().pow(q);
    // trapezoid: half weight at the two ends
    double s = a.sum() - 0.5 * (a[0] + a[a.size() - 1]);
    return std::pow(s * f.grid().dx, 1.0 / q);
}

double japanese_bracket_l1_tail(double rho, double x_max) {
    if (!(rho > 1.0)) throw std::domain_error("japanese_bracket_l1_tail: needs rho > 1");
    return 2.0 / (rho - 1.0) * std::pow(x_max, 1.0 - rho);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const GridFunction& f, std::ostream& out) {
    out << "x,value\n";
    for (Index j = 0; j < f.size(); ++j)
        out << format_double(f.grid().x(j)) << ',' << format_double(f[j]) << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

void write_csv(const GridFunction& f, const std::filesystem::path& path) {
    std::ostringstream s;
    write_csv(f, s);
    write_file_atomic(path, s.str());
}

void write_snapshot_csv(const GridFunction& f, double t, const std::filesystem::path& path) {
    std::ostringstream s;
    s << "# t=" << format_double(t) << '\n';
    write_csv(f, s);
    write_file_atomic(path, s.str());
}

}  // namespace dwlab
