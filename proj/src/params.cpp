#include "dwlab/params.hpp"

#include <cmath>
#include <stdexcept>

namespace dwlab {

void ModelParams::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("params: p must exceed 1");
    if (!(rho > 1.0) || !std::isfinite(rho)) throw std::invalid_argument("params: rho must exceed 1");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("params: alpha must be in (0, 1]");
    if (!(sigma > 0.5 && sigma < 0.75)) throw std::invalid_argument("params: sigma must be in (1/2, 3/4)");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("params: eps must be positive");
    if (!(t0 >= 0.0) || !std::isfinite(t0)) throw std::invalid_argument("params: t0 must be >= 0");
}

}  // namespace dwlab
