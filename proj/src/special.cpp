#include "wfbm/special.hpp"

#include <cmath>
#include <stdexcept>

#include "wfbm/quadrature.hpp"

namespace wfbm {

namespace {

const quad::Options kBetaQuad{1e-15, 5e-13, 40};

// int_0^{xm} u^a (1-u)^b du for xm <= 1/2, via u = w^{1/(1+a)} which turns
// u^a du into dw/(1+a).
double left_piece(double xm, double a, double b) {
  if (xm <= 0.0) return 0.0;
  const double pa = 1.0 + a;
  const double wmax = std::pow(xm, pa);
  const double inv = 1.0 / pa;
  auto g = [=](double w) {
    const double u = std::pow(w, inv);
    return std::pow(1.0 - u, b);
  };
  return inv * quad::adaptive(g, 0.0, wmax, kBetaQuad);
}

// int_{x_lo}^{x_hi} u^a (1-u)^b du for 1/2 <= x_lo <= x_hi <= 1, via
// 1-u = z^{1/(1+b)}.
double right_piece(double x_lo, double x_hi, double a, double b) {
  if (x_hi <= x_lo) return 0.0;
  const double pb = 1.0 + b;
  const double z_hi = std::pow(1.0 - x_lo, pb);
  const double z_lo = std::pow(1.0 - x_hi, pb);
  const double inv = 1.0 / pb;
  auto g = [=](double z) {
    const double one_minus_u = std::pow(z, inv);
    return std::pow(1.0 - one_minus_u, a);
  };
  return inv * quad::adaptive(g, z_lo, z_hi, kBetaQuad);
}

// int_{x_lo}^{x_hi} u^a (1-u)^b du for x_lo <= x_hi <= 1/2, via the left
// substitution on a subinterval.
double left_piece_range(double x_lo, double x_hi, double a, double b) {
  if (x_hi <= x_lo) return 0.0;
  const double pa = 1.0 + a;
  const double inv = 1.0 / pa;
  auto g = [=](double w) {
    const double u = std::pow(w, inv);
    return std::pow(1.0 - u, b);
  };
  return inv * quad::adaptive(g, std::pow(x_lo, pa), std::pow(x_hi, pa),
                              kBetaQuad);
}

void check_exponents(double a, double b) {
  if (!(a > -1.0) || !(b > -1.0))
    throw std::domain_error("weighted beta integral requires a > -1 and b > -1");
}

}  // namespace

double beta_complete(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0))
    throw std::domain_error("beta_complete requires p > 0 and q > 0");
  return std::exp(std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q));
}

double weighted_beta_integral(double x, double a, double b) {
  check_exponents(a, b);
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("weighted_beta_integral requires 0 <= x <= 1");
  if (x <= 0.5) return left_piece(x, a, b);
  return left_piece(0.5, a, b) + right_piece(0.5, x, a, b);
}

double weighted_beta_complement(double x, double a, double b) {
  check_exponents(a, b);
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("weighted_beta_complement requires 0 <= x <= 1");
  if (x >= 0.5) return right_piece(x, 1.0, a, b);
  return left_piece_range(x, 0.5, a, b) + right_piece(0.5, 1.0, a, b);
}

}  // namespace wfbm
