#pragma once

#include <functional>
#include <span>
#include <vector>

#include "wfbm/grid.hpp"
#include "wfbm/params.hpp"
#include "wfbm/sampler.hpp"

namespace wfbm {

enum class QuadRule { LeftRiemann, Trapezoid };

// Discretization settings shared by the pathwise estimators.  Epsilons must be
// integer multiples of the grid step (lookahead is an index shift; no
// interpolation on a rough path) and at least 2 steps.
struct EstimatorConfig {
  std::vector<double> eps_ladder;  // descending
  double bandwidth = 0.0;          // box half-width h
  std::vector<double> x_grid;      // strictly increasing
  std::vector<double> t_eval;      // grid-aligned evaluation times
  QuadRule rule = QuadRule::LeftRiemann;
};

// h = 2 sqrt(step^{1+b} horizon^a): two typical increment sizes at the far end
// of the grid.
double default_bandwidth(const ProcessParams& p, double step, double horizon);

// Uniform grid covering +-4 sqrt(horizon^{1+a+b}); spacing defaults to h/4.
std::vector<double> default_x_grid(const ProcessParams& p, double horizon,
                                   double bandwidth, double spacing = 0.0);

void validate_estimator_config(const EstimatorConfig& cfg, const SimGrid& g);

// (1+a+b) int_0^t g(B_s) s^{a+b} ds.  The singular weight is integrated
// exactly per cell (telescoping s^{1+a+b} differences); g(B_s) is sampled at
// the left cell edge (or averaged with the right edge under Trapezoid).
// The implicit B_0 = 0 supplies the first cell.
double weighted_time_integral(const ProcessParams& p, const SimGrid& g,
                              std::span<const double> path,
                              const std::function<double(double)>& fn,
                              double t, QuadRule rule = QuadRule::LeftRiemann);

// J_eps(f, t) = (1+a+b)/eps^{1+b} int_eps^{t+eps}
//   {f(B_{s+eps}) - f(B_s)} (B_{s+eps} - B_s) s^b ds,
// left-sampled with exact s^b cell weights.  eps must be an aligned multiple
// of the step (>= 2 steps) and the grid must reach t + 2 eps.
double qcov_estimate(const ProcessParams& p, const SimGrid& g,
                     std::span<const double> path,
                     const std::function<double(double)>& f, double t,
                     double eps);

// X_eps(t): the squared-increment functional, i.e. qcov with f = identity.
double qvar_estimate(const ProcessParams& p, const SimGrid& g,
                     std::span<const double> path, double t, double eps);

// Raw and weighted local time on a rectangular (x, t) lattice, box kernel of
// half-width h, ensemble-averaged.
struct LocalTimeField {
  std::vector<double> x_grid;
  std::vector<double> t_eval;
  std::vector<double> raw;       // [xi * n_t + ti]
  std::vector<double> weighted;  // [xi * n_t + ti]
  double bandwidth = 0.0;
  int n_paths_averaged = 0;

  double raw_at(std::size_t xi, std::size_t ti) const {
    return raw[xi * t_eval.size() + ti];
  }
  double weighted_at(std::size_t xi, std::size_t ti) const {
    return weighted[xi * t_eval.size() + ti];
  }
};

LocalTimeField local_time_field(const ProcessParams& p, const PathEnsemble& e,
                                const EstimatorConfig& cfg, int threads = 0);

// int f(x) L^{a,b}(dx, t) by summation-by-parts: -sum f'^(x) L(x,t) dx with
// centered differences of f.  Requires the weighted field to vanish at the
// x-grid edges (EdgeMassError otherwise).
double stieltjes_against_local_time(const std::function<double(double)>& f,
                                    const LocalTimeField& field, double t);

// ||f||_H = sqrt( int_0^{T+1} int_R f(x)^2 e^{-x^2/(2 s^{1+a+b})}
//                 dx ds / (sqrt(2 pi) s^{(1-a-b)/2}) ).
// Inner integral by Gauss-Hermite after x = sqrt(s^{1+a+b}) z; outer in the
// self-similar variable v = s^{(1+a+b)/2}.  Throws NormInfinite when the
// order-escalation check detects divergence.
double h_norm(const std::function<double(double)>& f, double T,
              const ProcessParams& p);

}  // namespace wfbm
