#pragma once

#include "wfbm/errors.hpp"

namespace wfbm {

struct RegimeFlags {
  bool qcov_regime = false;      // -1 < b < 0, the regime of the L2 existence theory
  bool localtime_regime = false; // -1 < a+b < 3, joint continuity of the local time
};

// Validated (a, b) pair plus derived constants.  Immutable after construction.
class ProcessParams {
 public:
  // Throws ParamOutOfRegion naming the violated inequality.
  static ProcessParams validate(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  // B(a+1, b+1)
  double beta_ab() const { return beta_; }
  // kappa = 1 / ((1+b) B(a+1, b+1)); equals 1 at a = 0
  double kappa() const { return kappa_; }
  // self-similarity exponent (1+a+b)/2
  double hurst_like() const { return hurst_like_; }
  // 1+a+b, the variance exponent E[B_t^2] = t^{1+a+b}
  double var_exponent() const { return 2.0 * hurst_like_; }
  RegimeFlags flags() const { return flags_; }

 private:
  ProcessParams(double a, double b, double beta, double kappa, double hl,
                RegimeFlags fl)
      : a_(a), b_(b), beta_(beta), kappa_(kappa), hurst_like_(hl), flags_(fl) {}

  double a_, b_, beta_, kappa_, hurst_like_;
  RegimeFlags flags_;
};

inline ProcessParams validate_params(double a, double b) {
  return ProcessParams::validate(a, b);
}

}  // namespace wfbm
