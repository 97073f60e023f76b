#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "wfbm/grid.hpp"
#include "wfbm/params.hpp"

namespace wfbm {

// Dense factorization keeps the sampler exact for the non-stationary kernel;
// grids above this size are rejected rather than silently slow.
inline constexpr std::size_t kMaxGridPoints = 4096;

// Sigma[i][j] = covariance(p, times[i], times[j]); exactly symmetric.
Eigen::MatrixXd gram_matrix(const ProcessParams& p, const SimGrid& g,
                            int threads = 0);

struct CholeskyResult {
  Eigen::MatrixXd lower;
  double jitter = 0.0;  // diagonal shift actually applied
};

// LL^T = Sigma + jitter I.  Jitter starts at jitter_start (default 0), is
// escalated geometrically only on factorization failure and never exceeds
// jitter_max (default 1e-8 * max diagonal).  Throws NotPositiveDefinite when
// the cap is reached.
CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& sigma,
                                    double jitter_start = 0.0,
                                    double jitter_max = -1.0);

// Paths are stored row-major so a single path is a contiguous span.
using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct PathEnsemble {
  SimGrid grid;
  ProcessParams params;
  RowMatrixXd values;  // n_paths x grid.size()
  std::uint64_t seed = 0;
  int n_paths = 0;
  double jitter = 0.0;

  std::span<const double> path(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * grid.size(),
            grid.size()};
  }

  static PathEnsemble make(const ProcessParams& p, const SimGrid& g, int n,
                           std::uint64_t seed, int threads = 0);
};

// values.row(i) = L z_i with z_i standard normal from the counter-based stream
// keyed by (seed, i); bit-identical for a fixed (seed, grid, params) across
// runs and thread counts.
PathEnsemble sample_paths(const ProcessParams& p, const SimGrid& g, int n,
                          std::uint64_t seed, int threads = 0);

// CSV `path_id,t,value` preceded by a '#' comment line supplied by the caller.
void write_ensemble_csv(std::ostream& os, const PathEnsemble& e,
                        const std::string& header_comment);

}  // namespace wfbm
