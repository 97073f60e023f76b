#pragma once

#include "wfbm/params.hpp"

namespace wfbm {

// Covariance R(t, s) = [1/(2 B(a+1,b+1))] int_0^{s^t} u^a ((t-u)^b + (s-u)^b) du.
// Reduced analytically to one weighted Beta integral:
//   R(t, s) = lo^{1+a+b}/2 + hi^{1+a+b} G(lo/hi; a, b) / (2 B(a+1, b+1)),
// lo = s^t, hi = s v t, so evaluation is symmetric by construction and no
// singular quadrature runs at the original endpoints.
double covariance(const ProcessParams& p, double t, double s);

// Q(t, s) = E (B_t - B_s)^2 = R(t,t) + R(s,s) - 2 R(t,s), evaluated through
// the algebraically identical complement form
//   Q = hi^{1+a+b} int_{lo/hi}^1 u^a (1-u)^b du / B(a+1, b+1)
// which does not cancel near the diagonal.  Always >= 0.
double increment_variance(const ProcessParams& p, double t, double s);

// rho^2_{t,s} = (ts)^{1+a+b} - R(t,s)^2, clamped to [0, inf); zero iff t == s.
// Requires t, s > 0.
double rho_squared(const ProcessParams& p, double t, double s);

// E |B_t - x| for B_t ~ N(0, t^{1+a+b}); closed-form Gaussian folded moment.
// Requires t > 0.
double expected_abs_deviation(const ProcessParams& p, double t, double x);

// E[L^{a,b}(x, t)] = (1+a+b) int_0^t phi(x; s^{1+a+b}) s^{a+b} ds.  The
// substitution s = v^{2/(1+a+b)} collapses the weighted clock, leaving
// sqrt(2/pi) int_0^{t^{(1+a+b)/2}} exp(-x^2/(2 v^2)) dv, evaluated by adaptive
// quadrature.  Requires t > 0 and the local-time regime.
double expected_weighted_local_time(const ProcessParams& p, double t, double x);

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace wfbm
