#pragma once

namespace wfbm {

// Complete Beta function B(p, q), p, q > 0.  Relative accuracy ~1e-14.
double beta_complete(double p, double q);

// G(x; a, b) = int_0^x u^a (1-u)^b du for x in [0,1], a, b > -1.
// Endpoint singularities are removed by splitting at 1/2 and substituting
// u = w^{1/(1+a)} on the left half and 1-u = z^{1/(1+b)} on the right half;
// the transformed integrands are bounded and handled by adaptive quadrature.
double weighted_beta_integral(double x, double a, double b);

// int_x^1 u^a (1-u)^b du, computed without forming B - G(x) so the value
// stays accurate as x -> 1.
double weighted_beta_complement(double x, double a, double b);

}  // namespace wfbm
