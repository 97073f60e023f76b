#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wfbm/errors.hpp"
#include "wfbm/kernel.hpp"
#include "wfbm/sampler.hpp"

using namespace wfbm;

TEST_SUITE_BEGIN("sampler");

TEST_CASE("build_grid") {
  const SimGrid g = build_grid(1.0, 0.25, 0.0);
  REQUIRE(g.size() == 4);
  CHECK(g.times == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  CHECK(g.horizon == 1.0);

  const SimGrid gp = build_grid(1.0, 0.25, 0.5);
  CHECK(gp.size() == 6);
  CHECK(gp.horizon == doctest::Approx(1.5));

  CHECK_THROWS_AS(build_grid(1.0, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(-1.0, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("gram matrix diagonal, b=0 form, scaling") {
  const auto p = validate_params(-0.3, -0.4);
  const SimGrid g = build_grid(1.0, 1.0 / 16, 0.0);
  const Eigen::MatrixXd sigma = gram_matrix(p, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(sigma(i, i) ==
          doctest::Approx(std::pow(g.times[i], p.var_exponent())).epsilon(1e-9));
  CHECK((sigma - sigma.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const auto pb0 = validate_params(0.7, 0.0);
  const Eigen::MatrixXd s0 = gram_matrix(pb0, g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      CHECK(s0(i, j) == doctest::Approx(std::pow(
                            std::min(g.times[i], g.times[j]), 1.7))
                            .epsilon(1e-9));

  const double c = 2.7;
  SimGrid gc = g;
  for (auto& t : gc.times) t *= c;
  gc.step *= c;
  gc.horizon *= c;
  const Eigen::MatrixXd sc = gram_matrix(p, gc);
  const double factor = std::pow(c, p.var_exponent());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      CHECK(sc(i, j) == doctest::Approx(factor * sigma(i, j)).epsilon(1e-9));
}

TEST_CASE("cholesky_with_jitter") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(5, 5);
  const auto r = cholesky_with_jitter(eye);
  CHECK(r.jitter == 0.0);
  CHECK((r.lower - eye).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // Brownian Gram matrix min(t_i, t_j) on 0.25..1: L[i][j] = sqrt(step)
  const auto pb = validate_params(0.0, 0.0);
  const SimGrid g = build_grid(1.0, 0.25, 0.0);
  const auto rb = cholesky_with_jitter(gram_matrix(pb, g));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      CHECK(rb.lower(i, j) == doctest::Approx(0.5).epsilon(1e-12));

  Eigen::MatrixXd indef = Eigen::MatrixXd::Identity(3, 3);
  indef(2, 2) = -1.0;
  CHECK_THROWS_AS(cholesky_with_jitter(indef), NotPositiveDefinite);

  // reconstruction residual on a hard case
  const auto ph = validate_params(-0.3, -0.4);
  const SimGrid gh = build_grid(1.0, 1.0 / 64, 0.0);
  const Eigen::MatrixXd sh = gram_matrix(ph, gh);
  const auto rh = cholesky_with_jitter(sh);
  const Eigen::MatrixXd recon = rh.lower * rh.lower.transpose();
  const double resid = (recon - sh).cwiseAbs().maxCoeff() - rh.jitter;
  CHECK(resid <= 1e-8 * sh.cwiseAbs().maxCoeff());
}

TEST_CASE("sampling is deterministic across runs and thread counts") {
  const auto p = validate_params(-0.3, -0.4);
  const SimGrid g = build_grid(0.5, 1.0 / 32, 0.0);
  const auto e1 = sample_paths(p, g, 7, 99u, 1);
  const auto e2 = sample_paths(p, g, 7, 99u, 1);
  const auto e4 = sample_paths(p, g, 7, 99u, 4);
  CHECK((e1.values - e2.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK((e1.values - e4.values).cwiseAbs().maxCoeff() == 0.0);
  const auto e_other = sample_paths(p, g, 7, 100u, 1);
  CHECK((e1.values - e_other.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("marginal moments at t = 1") {
  const auto p = validate_params(-0.3, -0.4);
  const SimGrid g = build_grid(1.0, 1.0 / 16, 0.0);
  const int n = 10000;
  const auto ens = sample_paths(p, g, n, 2024u);
  const std::size_t last = g.size() - 1;
  double mean = 0.0, var = 0.0;
  for (int i = 0; i < n; ++i) mean += ens.values(i, last);
  mean /= n;
  for (int i = 0; i < n; ++i) {
    const double d = ens.values(i, last) - mean;
    var += d * d;
  }
  var /= (n - 1);
  const double target = std::pow(1.0, p.var_exponent());
  CHECK(std::abs(var / target - 1.0) <= 4.0 / std::sqrt(2.0 * n));
  CHECK(std::abs(mean) <= 4.0 * std::sqrt(target / n));
  // start-near-zero invariant at the first grid time
  double mean0 = 0.0;
  for (int i = 0; i < n; ++i) mean0 += ens.values(i, 0);
  mean0 /= n;
  CHECK(std::abs(mean0) <=
        4.0 * std::sqrt(std::pow(g.times[0], p.var_exponent()) / n));
}

TEST_CASE("Kolmogorov-Smirnov of normalized marginals") {
  const auto p = validate_params(-0.3, -0.4);
  const SimGrid g = build_grid(1.0, 1.0 / 8, 0.0);
  const int n = 10000;
  const auto ens = sample_paths(p, g, n, 31u);
  // critical value at significance 1e-3: sqrt(-ln(alpha/2)/2)/sqrt(n)
  const double crit = std::sqrt(-0.5 * std::log(0.5e-3)) / std::sqrt(double(n));
  for (std::size_t j : {std::size_t{1}, std::size_t{4}, std::size_t{7}}) {
    std::vector<double> z(n);
    const double sigma = std::pow(g.times[j], p.hurst_like());
    for (int i = 0; i < n; ++i) z[i] = ens.values(i, j) / sigma;
    std::sort(z.begin(), z.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
      const double cdf = normal_cdf(z[i]);
      d = std::max(d, std::abs(cdf - double(i) / n));
      d = std::max(d, std::abs(double(i + 1) / n - cdf));
    }
    CHECK(d <= crit);
  }
}

TEST_CASE("empirical covariance converges at the Monte Carlo rate") {
  const auto p = validate_params(-0.3, -0.4);
  const SimGrid g = build_grid(1.0, 1.0 / 8, 0.0);
  const Eigen::MatrixXd sigma = gram_matrix(p, g);
  std::vector<double> errs;
  std::vector<int> sizes{100, 1000, 10000};
  for (int n : sizes) {
    const auto ens = sample_paths(p, g, n, 5150u);
    Eigen::MatrixXd emp = Eigen::MatrixXd::Zero(g.size(), g.size());
    for (int i = 0; i < n; ++i)
      emp += ens.values.row(i).transpose() * ens.values.row(i);
    emp /= n;
    errs.push_back((emp - sigma).cwiseAbs().maxCoeff());
  }
  // log-log slope vs N should be -0.5 +- 0.15
  const double slope = (std::log(errs[2]) - std::log(errs[0])) /
                       (std::log(10000.0) - std::log(100.0));
  CHECK(slope < -0.35);
  CHECK(slope > -0.65);
}

TEST_CASE("Hoelder sanity: normalized increments stay bounded as step halves") {
  const auto p = validate_params(-0.3, -0.4);
  const double expo = 0.5 * (1.0 + p.b());
  std::vector<double> p99s;
  for (double inv_step : {128.0, 256.0, 512.0}) {
    const SimGrid g = build_grid(1.0, 1.0 / inv_step, 0.0);
    const auto ens = sample_paths(p, g, 100, 808u);
    std::vector<double> vals;
    vals.reserve(100 * g.size());
    const double denom = std::pow(g.step, expo);
    for (int i = 0; i < 100; ++i) {
      double prev = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        vals.push_back(std::abs(ens.values(i, j) - prev) / denom);
        prev = ens.values(i, j);
      }
    }
    std::sort(vals.begin(), vals.end());
    p99s.push_back(vals[static_cast<std::size_t>(0.99 * vals.size())]);
  }
  for (double q : p99s) CHECK(q < 8.0);
  const auto [mn, mx] = std::minmax_element(p99s.begin(), p99s.end());
  CHECK(*mx / *mn < 1.5);
}

TEST_SUITE_END();
