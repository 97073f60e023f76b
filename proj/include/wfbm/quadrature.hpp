#pragma once

#include <functional>
#include <vector>

namespace wfbm::quad {

struct Options {
  double abs_tol = 1e-13;
  double rel_tol = 1e-12;
  int max_depth = 32;
};

// Adaptive Gauss-Kronrod (7,15) with recursive bisection.  The tolerance is
// split across subintervals; max_depth bounds the recursion so a bad integrand
// terminates with the best available estimate instead of hanging.
double adaptive(const std::function<double(double)>& f, double lo, double hi,
                const Options& opt = Options{});

// Nodes and weights of the n-point Gauss-Hermite rule for weight e^{-x^2}
// on (-inf, inf).  Cached per order; thread-safe.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussHermite& gauss_hermite(int n);

}  // namespace wfbm::quad
