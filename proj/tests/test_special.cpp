#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_oracles.hpp"
#include "wfbm/quadrature.hpp"
#include "wfbm/special.hpp"

using namespace wfbm;

TEST_SUITE_BEGIN("special");

TEST_CASE("beta_complete known values") {
  CHECK(beta_complete(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // B(1/2,1/2) = pi
  CHECK(beta_complete(0.5, 0.5) ==
        doctest::Approx(3.14159265358979323846).epsilon(1e-12));
  // B(2,3) = 1!2!/4! = 1/12
  CHECK(beta_complete(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK_THROWS_AS(beta_complete(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(beta_complete(1.0, -0.5), std::domain_error);
}

TEST_CASE("beta_complete vs tanh-sinh quadrature of the raw integrand") {
  for (auto [p, q] : {std::pair{0.5, 0.5}, {0.7, 0.6}, {1.0, 1.5}, {2.3, 0.2}}) {
    const double quad = oracle::tanh_sinh_d(
        [p = p, q = q](double, double du, double d1mu) {
          return std::pow(du, p - 1.0) * std::pow(d1mu, q - 1.0);
        },
        0.0, 1.0);
    CHECK(beta_complete(p, q) == doctest::Approx(quad).epsilon(1e-12));
  }
}

TEST_CASE("weighted_beta_integral endpoints and closed forms") {
  // full range equals the complete Beta
  CHECK(weighted_beta_integral(1.0, -0.3, -0.4) ==
        doctest::Approx(beta_complete(0.7, 0.6)).epsilon(1e-10));
  // uniform integrand
  CHECK(weighted_beta_integral(0.5, 0.0, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-13));
  // a = 0 antiderivative: (1 - (1-x)^{1+b})/(1+b)
  for (double b : {-0.4, 0.3, 0.9}) {
    for (double x = 0.05; x < 1.0; x += 0.1) {
      const double expect = (1.0 - std::pow(1.0 - x, 1.0 + b)) / (1.0 + b);
      CHECK(weighted_beta_integral(x, 0.0, b) ==
            doctest::Approx(expect).epsilon(1e-11));
    }
  }
  CHECK(weighted_beta_integral(0.0, -0.5, 0.5) == 0.0);
  CHECK_THROWS_AS(weighted_beta_integral(1.5, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(weighted_beta_integral(0.5, -1.0, 0.0), std::domain_error);
}

TEST_CASE("weighted_beta_integral vs tanh-sinh on singular exponents") {
  // tolerance reflects the oracle's own accuracy floor (~1e-9 for the
  // strongly singular exponents)
  for (auto [a, b] : {std::pair{-0.3, -0.4}, {-0.9, 0.05}, {0.5, -0.3},
                      {-0.5, -0.49}, {1.7, -0.8}}) {
    for (double x : {0.1, 0.45, 0.5, 0.55, 0.9, 0.99}) {
      const double quad = oracle::tanh_sinh_d(
          [a = a, b = b](double u, double du, double) {
            return std::pow(du, a) * std::pow(1.0 - u, b);
          },
          0.0, x);
      CHECK(weighted_beta_integral(x, a, b) ==
            doctest::Approx(quad).epsilon(1e-10));
    }
  }
}

TEST_CASE("weighted beta integral + complement = complete beta (property)") {
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> ab(-0.95, 1.5), xd(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double a = ab(gen), b = ab(gen), x = xd(gen);
    const double g = weighted_beta_integral(x, a, b);
    const double gc = weighted_beta_complement(x, a, b);
    const double B = beta_complete(a + 1.0, b + 1.0);
    CHECK(g + gc == doctest::Approx(B).epsilon(1e-10));
  }
}

TEST_CASE("weighted_beta_integral monotone nondecreasing in x") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> ab(-0.9, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double a = ab(gen), b = ab(gen);
    double prev = 0.0;
    for (double x = 0.0; x <= 1.0; x += 0.02) {
      const double g = weighted_beta_integral(x, a, b);
      CHECK(g >= prev - 1e-12);
      prev = g;
    }
  }
}

TEST_CASE("complement accurate near x = 1") {
  // int_x^1 u^a (1-u)^b du ~ (1-x)^{1+b}/(1+b) as x -> 1
  const double a = -0.3, b = -0.4;
  for (double d : {1e-4, 1e-6, 1e-8}) {
    const double gc = weighted_beta_complement(1.0 - d, a, b);
    const double lead = std::pow(d, 1.0 + b) / (1.0 + b);
    CHECK(gc / lead == doctest::Approx(1.0).epsilon(5e-4 + d * 10));
  }
}

TEST_CASE("gauss-hermite sanity") {
  for (int n : {16, 48, 96}) {
    const auto& gh = quad::gauss_hermite(n);
    double sw = 0.0, sx2 = 0.0;
    for (int i = 0; i < n; ++i) {
      sw += gh.weights[i];
      sx2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
    }
    const double sqrt_pi = 1.7724538509055160273;
    CHECK(sw == doctest::Approx(sqrt_pi).epsilon(1e-12));
    CHECK(sx2 == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-12));
  }
}

TEST_SUITE_END();
