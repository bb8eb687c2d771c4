#pragma once

namespace dwlab {

/// Model parameter bundle: nonlinearity exponent p, data decay rate rho, and
/// the supersolution tuning parameters (alpha, sigma), data amplitude eps and
/// comparison shift t0.
struct ModelParams {
    double p = 2.0;      // > 1; subcritical range is 1 < p < 3
    double rho = 1.5;    // > 1
    double alpha = 1.0;  // in (0, 1]
    double sigma = 0.6;  // in (1/2, 3/4)
    double eps = 0.01;   // > 0
    double t0 = 50.0;    // >= 0

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

}  // namespace dwlab
