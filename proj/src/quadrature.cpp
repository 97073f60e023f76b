#include "wfbm/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wfbm::quad {

namespace {

// QUADPACK dqk15 abscissae/weights (Kronrod 15 with embedded Gauss 7).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double kronrod;
  double err;
};

PanelResult gk15(const std::function<double(double)>& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double res_g = fc * kWg[3];
  double res_k = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    res_k += kWgk[j] * fsum;
    if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
  }
  res_k *= h;
  res_g *= h;
  return {res_k, std::abs(res_k - res_g)};
}

double adaptive_impl(const std::function<double(double)>& f, double lo,
                     double hi, double tol, int depth) {
  const PanelResult r = gk15(f, lo, hi);
  if (r.err <= tol || depth <= 0) return r.kronrod;
  const double mid = 0.5 * (lo + hi);
  return adaptive_impl(f, lo, mid, 0.5 * tol, depth - 1) +
         adaptive_impl(f, mid, hi, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive(const std::function<double(double)>& f, double lo, double hi,
                const Options& opt) {
  if (!(lo <= hi)) throw std::invalid_argument("quad::adaptive: lo > hi");
  if (lo == hi) return 0.0;
  const PanelResult first = gk15(f, lo, hi);
  const double tol =
      std::max(opt.abs_tol, opt.rel_tol * std::abs(first.kronrod));
  if (first.err <= tol) return first.kronrod;
  const double mid = 0.5 * (lo + hi);
  return adaptive_impl(f, lo, mid, 0.5 * tol, opt.max_depth) +
         adaptive_impl(f, mid, hi, 0.5 * tol, opt.max_depth);
}

namespace {

// Physicists' Hermite polynomials, Newton iteration on the standard
// asymptotic initial guesses (Numerical Recipes "gauher" scheme).
GaussHermite build_hermite(int n) {
  GaussHermite gh;
  gh.nodes.resize(n);
  gh.weights.resize(n);
  const double pim4 = 0.7511255444649425;  // pi^{-1/4}
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * gh.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * gh.nodes[1];
    } else {
      z = 2.0 * z - gh.nodes[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
             std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    gh.nodes[i] = z;
    gh.nodes[n - 1 - i] = -z;
    gh.weights[i] = 2.0 / (pp * pp);
    gh.weights[n - 1 - i] = gh.weights[i];
  }
  if (n % 2 == 1) gh.nodes[n / 2] = 0.0;
  return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(int n) {
  static std::mutex mu;
  static std::map<int, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_hermite(n)).first;
  return it->second;
}

}  // namespace wfbm::quad
