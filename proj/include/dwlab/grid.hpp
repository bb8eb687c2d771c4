#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>

namespace dwlab {

using Array = Eigen::ArrayXd;
using Index = Eigen::Index;

/// Sentinel selecting the sup norm in lq_norm.
inline constexpr double q_infinity = std::numeric_limits<double>::infinity();

/// Uniform 1D grid x_j = x0 + j*dx, j = 0 .. n-1.
struct Grid {
    double x0 = 0.0;
    double dx = 1.0;
    Index n = 2;

    Grid() = default;
    Grid(double x0, double dx, Index n);

    double x(Index j) const { return x0 + static_cast<double>(j) * dx; }
    double x_min() const { return x0; }
    double x_max() const { return x(n - 1); }
    double half_width() const { return 0.5 * (x_max() - x_min()); }
    Array coords() const;

    /// Symmetric grid around 0 covering at least [-half_width, half_width].
    static Grid centered(double half_width, double dx);

    /// Largest aligned subgrid whose points keep distance >= margin from both ends.
    Grid shrunk(double margin) const;

    /// Aligned supergrid reaching at least margin beyond both ends.
    Grid extended(double margin) const;

    bool same_as(const Grid& other, double tol = 1e-10) const;
};

/// Thrown when a data grid is too small for the domain of dependence of an
/// operation.  Carries how much extension was required vs available.
class TruncationError : public std::runtime_error {
  public:
    TruncationError(const std::string& what, double required, double available);
    double required_extension() const { return required_; }
    double available_extension() const { return available_; }

  private:
    double required_;
    double available_;
};

/// A real-valued function sampled on a uniform grid.  Values are finite and
/// fixed after construction, so concurrent reads need no synchronization.
class GridFunction {
  public:
    GridFunction(Grid grid, Array values);

    const Grid& grid() const { return grid_; }
    const Array& values() const { return values_; }
    Index size() const { return values_.size(); }
    double operator[](Index j) const { return values_[j]; }

    /// Linear interpolation at x, which must lie within the grid.
    double interpolate(double x) const {
        const double s = (x - grid_.x0) / grid_.dx;
        Index j = static_cast<Index>(s);
        if (s < 0.0 || s > static_cast<double>(grid_.n - 1)) {
            if (s > -1e-9 && s < static_cast<double>(grid_.n - 1) + 1e-9) {
                j = std::min<Index>(std::max<Index>(j, 0), grid_.n - 2);
            } else {
                throw std::out_of_range("GridFunction::interpolate: x outside grid");
            }
        } else if (j > grid_.n - 2) {
            j = grid_.n - 2;
        }
        const double theta = s - static_cast<double>(j);
        return values_[j] + theta * (values_[j + 1] - values_[j]);
    }

    static GridFunction constant(const Grid& g, double c);
    static GridFunction sampled(const Grid& g, const std::function<double(double)>& f);

  private:
    Grid grid_;
    Array values_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& f);

/// phi(x) = <x>^{-rho} = (1 + x^2)^{-rho/2}.
GridFunction japanese_bracket_profile(double rho, const Grid& grid);

/// Trapezoidal L^q norm; pass q_infinity for the sup norm.  Requires q >= 1.
double lq_norm(const GridFunction& f, double q);

/// Analytic bound on the truncated L^1 tail of <x>^{-rho}:
/// int_{|x| > x_max} <x>^{-rho} dx <= 2 (rho-1)^{-1} x_max^{1-rho}, rho > 1.
double japanese_bracket_l1_tail(double rho, double x_max);

/// CSV with header "x,value", one row per point, 17 significant digits.
void write_csv(const GridFunction& f, std::ostream& out);
void write_csv(const GridFunction& f, const std::filesystem::path& path);
/// Same, preceded by a "# t=..." comment line.
void write_snapshot_csv(const GridFunction& f, double t, const std::filesystem::path& path);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Writes content to path atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace dwlab
