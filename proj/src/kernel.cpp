#include "wfbm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfbm/quadrature.hpp"
#include "wfbm/special.hpp"

namespace wfbm {

namespace {
constexpr double kTwoOverPiSqrt = 0.7978845608028654;  // sqrt(2/pi)
}

double covariance(const ProcessParams& p, double t, double s) {
  if (!(t >= 0.0) || !(s >= 0.0))
    throw std::domain_error("covariance requires t, s >= 0");
  const double lo = std::min(t, s);
  const double hi = std::max(t, s);
  if (lo == 0.0) return 0.0;
  const double e = p.var_exponent();
  if (lo == hi) return std::pow(hi, e);
  const double g = weighted_beta_integral(lo / hi, p.a(), p.b());
  return 0.5 * std::pow(lo, e) + 0.5 * std::pow(hi, e) * g / p.beta_ab();
}

double increment_variance(const ProcessParams& p, double t, double s) {
  if (!(t >= 0.0) || !(s >= 0.0))
    throw std::domain_error("increment_variance requires t, s >= 0");
  const double lo = std::min(t, s);
  const double hi = std::max(t, s);
  if (lo == hi) return 0.0;
  const double e = p.var_exponent();
  if (lo == 0.0) return std::pow(hi, e);
  const double gc = weighted_beta_complement(lo / hi, p.a(), p.b());
  return std::max(0.0, std::pow(hi, e) * gc / p.beta_ab());
}

double rho_squared(const ProcessParams& p, double t, double s) {
  if (!(t > 0.0) || !(s > 0.0))
    throw std::domain_error("rho_squared requires t, s > 0");
  const double mu = covariance(p, t, s);
  const double raw = std::pow(t * s, p.var_exponent()) - mu * mu;
  return std::max(0.0, raw);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double expected_abs_deviation(const ProcessParams& p, double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("expected_abs_deviation requires t > 0");
  const double sigma = std::pow(t, p.hurst_like());
  const double z = x / sigma;
  return sigma * kTwoOverPiSqrt * std::exp(-0.5 * z * z) +
         x * (1.0 - 2.0 * normal_cdf(-z));
}

double expected_weighted_local_time(const ProcessParams& p, double t, double x) {
  if (!(t > 0.0))
    throw std::domain_error("expected_weighted_local_time requires t > 0");
  if (!p.flags().localtime_regime)
    throw std::domain_error("expected_weighted_local_time requires -1 < a+b < 3");
  const double V = std::pow(t, p.hurst_like());
  const double c = 0.5 * x * x;
  if (c == 0.0) return kTwoOverPiSqrt * V;
  auto g = [c](double v) { return v > 0.0 ? std::exp(-c / (v * v)) : 0.0; };
  return kTwoOverPiSqrt * quad::adaptive(g, 0.0, V, {1e-15, 1e-12, 40});
}

}  // namespace wfbm
