#pragma once

#include "dwlab/grid.hpp"
#include "dwlab/reports.hpp"

#include <filesystem>
#include <vector>

namespace dwlab {

/// Heat semigroup e^{t Delta} f by trapezoidal Gaussian convolution over
/// |y| <= 8 sqrt(t); the truncated kernel tail erfc(4) is reassigned at the
/// local value, so constants are propagated exactly and mass is conserved to
/// quadrature accuracy.  t = 0 is the identity.  f's grid must extend
/// 8 sqrt(t) beyond `out` or a TruncationError (with the tail mass bound in
/// its message) is thrown.
GridFunction heat_apply(double t, const GridFunction& f, double quad_dx, const Grid& out);

/// G*(t,x) = G(t, e^{t Delta} phi(x)), the heat supersolution.
GridFunction heat_supersolution(double t, const GridFunction& phi, double p, double quad_dx,
                                const Grid& out);

struct HeatRateSample {
    double t;
    double norm;
};

/// Outcome of the G* decay-rate check.  For rho < 2/(p-1) the fitted slope is
/// compared against the target exponent 1/(q rho (p-1)) - 1/(p-1).  For
/// rho >= 2/(p-1) (sqrt_log_regime) the meaningful output is instead the band
/// [ratio_min, ratio_max] of norm / (t^{1/(2q)-1/(p-1)} sqrt(log t)); the
/// matching upper bound is not claimed, so only the band is reported.
struct HeatRateResult {
    DecayFit fit;
    bool sqrt_log_regime = false;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    std::vector<HeatRateSample> samples;
};

/// Norms of G*(t) = G(t, e^{t Delta} <.>^{-rho}) over t_list (increasing),
/// evaluated on `obs`.  For q = 1 the analytic profile tail beyond the
/// observation window is added to the norm.  Needs >= 3 usable samples.
HeatRateResult heat_rate_check(double p, double rho, double q, const std::vector<double>& t_list,
                               const Grid& obs);

/// CSV rows "t,q,norm,target_exponent".
void write_rate_csv(const HeatRateResult& r, const std::filesystem::path& path);

}  // namespace dwlab
