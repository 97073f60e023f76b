#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wfbm/estimators.hpp"
#include "wfbm/functions.hpp"
#include "wfbm/params.hpp"
#include "wfbm/sampler.hpp"

namespace wfbm {

enum class Identity { Qvar, Chain, Ito, BouleauYor, Tanaka, Hnorm };

std::string identity_name(Identity id);

struct Tolerances {
  double z_max = 4.0;
  double rel_max = 0.05;
};

struct EstimateReport {
  Identity id{};
  double a = 0.0, b = 0.0;
  double t = 0.0;
  double epsilon = 0.0;  // NaN where not applicable
  int n_paths = 0;
  std::uint64_t seed = 0;
  double mc_mean = 0.0;
  double mc_stderr = 0.0;
  double target = 0.0;
  double z_score = 0.0;
  double rel_err = 0.0;
  bool pass = false;
  double l2_error = 0.0;  // qvar only: E|X_eps - target|^2
  std::string detail;
};

// One sampled ensemble shared by every identity check for a given
// (params, grid, n, seed); reports are pure functions of this state.
struct VerifySession {
  ProcessParams params;
  SimGrid grid;
  PathEnsemble ensemble;
  EstimatorConfig est;
  Tolerances tol;
  int threads = 0;

  static VerifySession create(const ProcessParams& p, double horizon,
                              double step, const std::vector<int>& eps_steps,
                              int n_paths, std::uint64_t seed,
                              const Tolerances& tol, double bandwidth = -1.0,
                              double x_halfwidth = -1.0,
                              double x_spacing = -1.0, int threads = 0);
};

// Prop. 4.1: X_eps(t) vs kappa t^{1+a+b}, one report per ladder epsilon,
// plus the finite-eps analytic mean E[X_eps(t)] in `detail` so a mismatch is
// attributable to truncation rather than sampling.
std::vector<EstimateReport> verify_qvar(const VerifySession& s, double t);

// Chain rule: mean |J_eps(f,t) - kappa int f'(B) ds^{1+a+b}| per epsilon;
// passes when the final mean gap is <= rel_max * scale(J).
std::vector<EstimateReport> verify_chain_rule(const VerifySession& s,
                                              const FunctionSpec& f, double t,
                                              double rel_max_override = -1.0);

// Ito formula in expectation: E F(B_t) - F(0) = (1/2) kappa^{-1} E J_eps(F', t).
EstimateReport verify_ito_expectation(const VerifySession& s,
                                      const FunctionSpec& F, double t,
                                      double eps);

// Bouleau-Yor: mean J_eps(f,t) vs -kappa int f dL(.,t); smooth f goes through
// the summation-by-parts Stieltjes integral, a step function through the
// two-point local-time form.
std::vector<EstimateReport> verify_bouleau_yor(const VerifySession& s,
                                               const FunctionSpec& f, double t,
                                               double rel_max_override = -1.0);

// Tanaka in expectation: E|B_t - x| = |x| + E L^{a,b}(x,t); passes when the
// Monte Carlo gap is within z_max*stderr plus the bandwidth-bias budget (= h).
EstimateReport verify_tanaka_expectation(const VerifySession& s, double x,
                                         double t);

// Evidence scan for the L2 bound: max over a 5-bump family of
// E|J_eps(f,t)|^2 / ||f||_H^2, stable within 20% under eps halving.
EstimateReport verify_hnorm_bound(const VerifySession& s, double t);

// Pathwise weighted local time at one level (box kernel, exact cell weights).
double weighted_local_time_at(const ProcessParams& p, const SimGrid& g,
                              std::span<const double> path, double x, double h,
                              double t);

// True when the sequence decreases with at most `allowed_inversions` rises.
bool ladder_decreasing(const std::vector<double>& v, int allowed_inversions);

void write_report_csv_header(std::ostream& os, const std::string& comment);
void write_report_row(std::ostream& os, const EstimateReport& r);

}  // namespace wfbm
