#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "test_oracles.hpp"
#include "wfbm/errors.hpp"
#include "wfbm/estimators.hpp"
#include "wfbm/kernel.hpp"
#include "wfbm/sampler.hpp"

using namespace wfbm;

TEST_SUITE_BEGIN("estimators");

namespace {

// One shared ensemble per parameter set; estimator tests are read-only.
const PathEnsemble& test_ensemble(double a, double b) {
  static std::map<std::pair<double, double>, PathEnsemble> cache;
  auto it = cache.find({a, b});
  if (it == cache.end()) {
    const auto p = validate_params(a, b);
    const SimGrid g = build_grid(1.0, 1.0 / 256, 64.0 / 256);
    it = cache.emplace(std::pair{a, b}, sample_paths(p, g, 300, 4242u)).first;
  }
  return it->second;
}

EstimatorConfig test_config(const PathEnsemble& e) {
  EstimatorConfig cfg;
  const double step = e.grid.step;
  cfg.eps_ladder = {32 * step, 16 * step, 8 * step};
  cfg.bandwidth = default_bandwidth(e.params, step, 1.0);
  cfg.x_grid = default_x_grid(e.params, 1.0, cfg.bandwidth);
  cfg.t_eval = {0.5, 1.0};
  return cfg;
}

double mean_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  return m / v.size();
}

double stderr_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  return std::sqrt(s2 / (v.size() - 1.0) / v.size());
}

}  // namespace

TEST_CASE("weighted_time_integral telescopes exactly for constant g") {
  const auto& e = test_ensemble(-0.3, -0.4);
  const auto& p = e.params;
  auto one = [](double) { return 1.0; };
  for (double t : {0.25, 0.7, 1.0}) {
    const double v = weighted_time_integral(p, e.grid, e.path(0), one, t);
    CHECK(v == doctest::Approx(std::pow(t, p.var_exponent())).epsilon(1e-12));
  }
  CHECK_THROWS_AS(weighted_time_integral(p, e.grid, e.path(0), one, 99.0),
                  std::invalid_argument);
}

TEST_CASE("weighted_time_integral ensemble moments") {
  const auto& e = test_ensemble(-0.3, -0.4);
  const auto& p = e.params;
  const double t = 1.0;
  std::vector<double> lin(e.n_paths), sq(e.n_paths);
  for (int i = 0; i < e.n_paths; ++i) {
    lin[i] = weighted_time_integral(p, e.grid, e.path(i),
                                    [](double x) { return x; }, t);
    sq[i] = weighted_time_integral(p, e.grid, e.path(i),
                                   [](double x) { return x * x; }, t);
  }
  CHECK(std::abs(mean_of(lin)) <= 3.0 * stderr_of(lin));

  // E int g(B_s) ds^{1+a+b} with g = x^2: closed form and independent
  // quadrature of (1+a+b) s^{a+b} E[B_s^2]
  const double e2 = p.var_exponent();
  const double closed = (1.0 + p.a() + p.b()) / (2.0 * e2) *
                        std::pow(t, 2.0 * e2);
  const double quad = oracle::tanh_sinh_d(
      [&](double s, double ds, double) {
        return (1.0 + p.a() + p.b()) * std::pow(ds, p.a() + p.b()) *
               std::pow(s, e2);
      },
      0.0, t);
  CHECK(closed == doctest::Approx(quad).epsilon(1e-10));
  CHECK(std::abs(mean_of(sq) - closed) <= 4.0 * stderr_of(sq) + 0.01 * closed);
}

TEST_CASE("qcov basics: constants, alignment, horizon, linearity") {
  const auto& e = test_ensemble(-0.3, -0.4);
  const auto& p = e.params;
  const double step = e.grid.step;
  auto path = e.path(3);

  CHECK(qcov_estimate(p, e.grid, path, [](double) { return 5.0; }, 1.0,
                      8 * step) == 0.0);
  CHECK_THROWS_AS(qcov_estimate(p, e.grid, path, [](double x) { return x; },
                                1.0, 8.3 * step),
                  std::invalid_argument);
  CHECK_THROWS_AS(qcov_estimate(p, e.grid, path, [](double x) { return x; },
                                1.0, step),
                  std::invalid_argument);
  CHECK_THROWS_AS(qcov_estimate(p, e.grid, path, [](double x) { return x; },
                                1.2, 32 * step),
                  std::invalid_argument);

  // pathwise linearity to 1e-12
  const double alpha = 1.7, beta = -0.9;
  auto f1 = [](double x) { return x * x; };
  auto f2 = [](double x) { return std::cos(x); };
  auto combo = [&](double x) { return alpha * f1(x) + beta * f2(x); };
  for (double eps : {8 * step, 16 * step}) {
    const double j1 = qcov_estimate(p, e.grid, path, f1, 1.0, eps);
    const double j2 = qcov_estimate(p, e.grid, path, f2, 1.0, eps);
    const double jc = qcov_estimate(p, e.grid, path, combo, 1.0, eps);
    CHECK(jc == doctest::Approx(alpha * j1 + beta * j2).epsilon(1e-12));
  }
}

TEST_CASE("qvar is monotone in t pathwise and matches Brownian oracle") {
  const auto& e = test_ensemble(-0.3, -0.4);
  const auto& p = e.params;
  const double step = e.grid.step;
  for (int i : {0, 5, 11}) {
    double prev = 0.0;
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
      const double v = qvar_estimate(p, e.grid, e.path(i), t, 8 * step);
      CHECK(v >= prev - 1e-14);
      prev = v;
    }
  }

  // Brownian case: E X_eps(t) = t exactly; oracle = direct sum of squared
  // increments with plain cell weights
  const auto& eb = test_ensemble(0.0, 0.0);
  const std::size_t k = 8, K = 256;
  std::vector<double> vals(eb.n_paths);
  for (int i = 0; i < eb.n_paths; ++i) {
    const auto path = eb.path(i);
    double acc = 0.0;
    for (std::size_t j = k; j < k + K; ++j)
      acc += (path[j - 1 + k] - path[j - 1]) * (path[j - 1 + k] - path[j - 1]) *
             eb.grid.step;
    const double oracle_val = acc / (8 * eb.grid.step);
    const double est = qvar_estimate(eb.params, eb.grid, path, 1.0,
                                     8 * eb.grid.step);
    CHECK(est == doctest::Approx(oracle_val).epsilon(1e-12));
    vals[i] = est;
  }
  CHECK(std::abs(mean_of(vals) - 1.0) <= 4.0 * stderr_of(vals));
}

TEST_CASE("local time field: masses, positivity, symmetry, level-0 value") {
  const auto& e = test_ensemble(-0.3, -0.4);
  const auto& p = e.params;
  const auto cfg = test_config(e);
  const LocalTimeField field = local_time_field(p, e, cfg);
  const double dx = field.x_grid[1] - field.x_grid[0];
  const std::size_t nt = field.t_eval.size();

  for (double v : field.raw) CHECK(v >= 0.0);
  for (double v : field.weighted) CHECK(v >= 0.0);

  for (std::size_t ti = 0; ti < nt; ++ti) {
    const double t = field.t_eval[ti];
    double mass_raw = 0.0, mass_w = 0.0;
    for (std::size_t xi = 0; xi < field.x_grid.size(); ++xi) {
      mass_raw += field.raw_at(xi, ti) * dx;
      mass_w += field.weighted_at(xi, ti) * dx;
    }
    CHECK(mass_raw == doctest::Approx(t).epsilon(0.02));
    CHECK(mass_w ==
          doctest::Approx(std::pow(t, p.var_exponent())).epsilon(0.02));
  }

  // ensemble symmetry in law: aggregate |L(x) - L(-x)| stays a small
  // fraction of the total mass
  const std::size_t n = field.x_grid.size();
  double asym = 0.0, scale = 0.0;
  for (std::size_t xi = 0; xi < n; ++xi) {
    asym += std::abs(field.weighted_at(xi, nt - 1) -
                     field.weighted_at(n - 1 - xi, nt - 1));
    scale += field.weighted_at(xi, nt - 1);
  }
  CHECK(asym / scale < 0.25);

  // E weighted(0, t) ~ sqrt(2/pi) t^{(1+a+b)/2} up to bandwidth bias
  const std::size_t mid = n / 2;
  CHECK(field.x_grid[mid] == doctest::Approx(0.0));
  const double target = expected_weighted_local_time(p, 1.0, 0.0);
  CHECK(std::abs(field.weighted_at(mid, nt - 1) - target) <
        cfg.bandwidth + 0.1);

  CHECK_THROWS_AS(
      [&] {
        auto bad = cfg;
        bad.bandwidth = -1.0;
        local_time_field(p, e, bad);
      }(),
      std::invalid_argument);
}

TEST_CASE("local time field is deterministic across thread counts") {
  const auto& e = test_ensemble(-0.3, -0.4);
  const auto cfg = test_config(e);
  const auto f1 = local_time_field(e.params, e, cfg, 1);
  const auto f4 = local_time_field(e.params, e, cfg, 4);
  REQUIRE(f1.weighted.size() == f4.weighted.size());
  for (std::size_t i = 0; i < f1.weighted.size(); ++i) {
    CHECK(f1.weighted[i] == f4.weighted[i]);
    CHECK(f1.raw[i] == f4.raw[i]);
  }
}

TEST_CASE("stieltjes against local time") {
  const auto& e = test_ensemble(-0.3, -0.4);
  const auto& p = e.params;
  const auto cfg = test_config(e);
  const LocalTimeField field = local_time_field(p, e, cfg);

  // constant f: telescoping differences vanish
  CHECK(stieltjes_against_local_time([](double) { return 3.0; }, field, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // identity f: integral equals minus the total weighted mass
  const double v_id =
      stieltjes_against_local_time([](double x) { return x; }, field, 1.0);
  CHECK(v_id == doctest::Approx(-std::pow(1.0, p.var_exponent())).epsilon(0.03));

  // smooth bump: summation-by-parts equals the direct -int f' L dx
  auto bump = [](double x) {
    const double u = (x - 0.3) / 1.0;
    if (std::abs(u) >= 1.0) return 0.0;
    const double q = 1.0 - u * u;
    return q * q * q;
  };
  auto dbump = [](double x) {
    const double u = (x - 0.3) / 1.0;
    if (std::abs(u) >= 1.0) return 0.0;
    const double q = 1.0 - u * u;
    return -6.0 * u * q * q / 1.0;
  };
  const double sbp = stieltjes_against_local_time(bump, field, 1.0);
  const double dx = field.x_grid[1] - field.x_grid[0];
  double direct = 0.0;
  const std::size_t nt = field.t_eval.size();
  for (std::size_t xi = 0; xi < field.x_grid.size(); ++xi)
    direct -= dbump(field.x_grid[xi]) * field.weighted_at(xi, nt - 1) * dx;
  CHECK(sbp == doctest::Approx(direct).epsilon(0.02));

  // t must be one of the evaluation times
  CHECK_THROWS_AS(
      stieltjes_against_local_time([](double x) { return x; }, field, 0.77),
      std::invalid_argument);

  // narrow x-grid triggers the edge check
  EstimatorConfig narrow = cfg;
  narrow.x_grid = {-0.2, -0.1, 0.0, 0.1, 0.2};
  const LocalTimeField fn = local_time_field(p, e, narrow);
  CHECK_THROWS_AS(
      stieltjes_against_local_time([](double x) { return x; }, fn, 1.0),
      EdgeMassError);
}

TEST_CASE("h_norm closed forms and oracle") {
  const auto p = validate_params(-0.3, -0.4);
  const double T = 1.0;
  const double e2 = p.var_exponent();

  const double n1 = h_norm([](double) { return 1.0; }, T, p);
  CHECK(n1 == doctest::Approx(std::sqrt(std::pow(T + 1.0, e2) / e2))
                  .epsilon(1e-8));

  const double nx = h_norm([](double x) { return x; }, T, p);
  const double closed = std::sqrt(std::pow(T + 1.0, 2.0 * e2) / (2.0 * e2));
  CHECK(nx == doctest::Approx(closed).epsilon(1e-8));
  // independent route: outer tanh-sinh of s^{a+b} E[B_s^2]
  const double quad = oracle::tanh_sinh_d(
      [&](double s, double ds, double) {
        return std::pow(ds, p.a() + p.b()) * std::pow(s, e2);
      },
      0.0, T + 1.0);
  CHECK(nx * nx == doctest::Approx(quad).epsilon(1e-9));

  // bump away from the origin: 2-D brute force (outer tanh-sinh, inner
  // tanh-sinh over the compact support)
  auto bumpf = [](double x) {
    const double u = (x - 1.0) / 0.5;
    if (std::abs(u) >= 1.0) return 0.0;
    const double q = 1.0 - u * u;
    return q * q * q;
  };
  const double nb = h_norm(bumpf, T, p);
  const double brute = oracle::tanh_sinh_d(
      [&](double s, double ds, double) {
        const double var = std::pow(s, e2);
        const double inner = oracle::tanh_sinh(
            [&](double x) {
              const double f = bumpf(x);
              return f * f * std::exp(-0.5 * x * x / var);
            },
            0.5, 1.5, 8);
        return inner * std::pow(ds, p.a() + p.b()) /
               std::sqrt(2.0 * 3.14159265358979323846 * var);
      },
      0.0, T + 1.0, 8);
  CHECK(nb * nb == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("h_norm additivity over disjoint supports and small-support scaling") {
  const auto p = validate_params(-0.3, -0.4);
  auto f = [](double x) { return x * std::exp(-x * x); };
  auto f_pos = [&](double x) { return x > 0.0 ? f(x) : 0.0; };
  auto f_neg = [&](double x) { return x < 0.0 ? f(x) : 0.0; };
  const double full = h_norm(f, 1.0, p);
  const double pos = h_norm(f_pos, 1.0, p);
  const double neg = h_norm(f_neg, 1.0, p);
  CHECK(pos * pos + neg * neg ==
        doctest::Approx(full * full).epsilon(1e-8));

  // ||f||^2 scales like the support measure for narrow bumps
  auto bump_w = [](double w) {
    return [w](double x) {
      const double u = (x - 0.5) / w;
      if (std::abs(u) >= 1.0) return 0.0;
      const double q = 1.0 - u * u;
      return q * q * q;
    };
  };
  const double r1 = std::pow(h_norm(bump_w(0.2), 1.0, p), 2) / 0.2;
  const double r2 = std::pow(h_norm(bump_w(0.1), 1.0, p), 2) / 0.1;
  const double r3 = std::pow(h_norm(bump_w(0.05), 1.0, p), 2) / 0.05;
  CHECK(r2 / r1 == doctest::Approx(1.0).epsilon(0.25));
  CHECK(r3 / r2 == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("h_norm divergence detection") {
  const auto p = validate_params(-0.3, -0.4);
  CHECK_THROWS_AS(h_norm([](double x) { return std::exp(x * x); }, 1.0, p),
                  NormInfinite);
}

TEST_SUITE_END();
