#include "wfbm/params.hpp"

#include <cmath>
#include <sstream>

#include "wfbm/special.hpp"

namespace wfbm {

ProcessParams ProcessParams::validate(double a, double b) {
  std::ostringstream msg;
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw ParamOutOfRegion("parameters must be finite");
  }
  if (!(a > -1.0)) {
    msg << "a > -1 violated (a = " << a << ")";
    throw ParamOutOfRegion(msg.str());
  }
  if (!(std::abs(b) < 1.0)) {
    msg << "|b| < 1 violated (b = " << b << ")";
    throw ParamOutOfRegion(msg.str());
  }
  if (!(std::abs(b) < 1.0 + a)) {
    msg << "|b| < 1 + a violated (|" << b << "| >= " << 1.0 + a << ")";
    throw ParamOutOfRegion(msg.str());
  }
  const double beta = beta_complete(a + 1.0, b + 1.0);
  const double kappa = 1.0 / ((1.0 + b) * beta);
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ParamOutOfRegion("derived kappa not positive finite");
  }
  RegimeFlags fl;
  fl.qcov_regime = (b > -1.0 && b < 0.0);
  fl.localtime_regime = (a + b > -1.0 && a + b < 3.0);
  return ProcessParams(a, b, beta, kappa, 0.5 * (1.0 + a + b), fl);
}

}  // namespace wfbm
