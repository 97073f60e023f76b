#include "wfbm/sampler.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "wfbm/errors.hpp"
#include "wfbm/kernel.hpp"
#include "wfbm/parallel.hpp"
#include "wfbm/rng.hpp"

namespace wfbm {

Eigen::MatrixXd gram_matrix(const ProcessParams& p, const SimGrid& g,
                            int threads) {
  const std::size_t m = g.size();
  if (m == 0) throw std::invalid_argument("gram_matrix: empty grid");
  if (m > kMaxGridPoints)
    throw std::invalid_argument("gram_matrix: grid exceeds dense-factorization cap");
  Eigen::MatrixXd sigma(m, m);
  parallel_for(m, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = covariance(p, g.times[i], g.times[j]);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  });
  return sigma;
}

CholeskyResult cholesky_with_jitter(const Eigen::MatrixXd& sigma,
                                    double jitter_start, double jitter_max) {
  if (sigma.rows() != sigma.cols())
    throw std::invalid_argument("cholesky_with_jitter: matrix not square");
  const double max_diag = sigma.diagonal().maxCoeff();
  if (jitter_max < 0.0) jitter_max = 1e-8 * std::max(max_diag, 0.0);
  double jitter = jitter_start;
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols());
  while (true) {
    Eigen::LLT<Eigen::MatrixXd> llt(jitter == 0.0 ? sigma
                                                  : sigma + jitter * identity);
    if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
    double next = jitter == 0.0
                      ? std::max(1e-15 * std::max(max_diag, 1e-300), 1e-300)
                      : jitter * 16.0;
    if (jitter >= jitter_max || next > jitter_max) {
      std::ostringstream msg;
      msg << "cholesky_with_jitter: not positive definite at jitter cap "
          << jitter_max;
      throw NotPositiveDefinite(msg.str());
    }
    jitter = std::min(next, jitter_max);
  }
}

PathEnsemble sample_paths(const ProcessParams& p, const SimGrid& g, int n,
                          std::uint64_t seed, int threads) {
  if (n < 1) throw std::invalid_argument("sample_paths requires n >= 1");
  const Eigen::MatrixXd sigma = gram_matrix(p, g, threads);
  const CholeskyResult chol = cholesky_with_jitter(sigma);
  const std::size_t m = g.size();
  PathEnsemble e{g, p, RowMatrixXd(n, m), seed, n, chol.jitter};
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    CounterRng rng(seed, i);
    Eigen::VectorXd z(m);
    for (std::size_t j = 0; j < m; ++j) z(j) = rng.normal(j);
    e.values.row(i) = (chol.lower * z).transpose();
  });
  return e;
}

PathEnsemble PathEnsemble::make(const ProcessParams& p, const SimGrid& g,
                                int n, std::uint64_t seed, int threads) {
  return sample_paths(p, g, n, seed, threads);
}

void write_ensemble_csv(std::ostream& os, const PathEnsemble& e,
                        const std::string& header_comment) {
  os << header_comment << "\n";
  os << "path_id,t,value\n";
  std::ostringstream line;
  line.precision(17);
  for (int i = 0; i < e.n_paths; ++i) {
    for (std::size_t j = 0; j < e.grid.size(); ++j) {
      line.str("");
      line << i << ',' << e.grid.times[j] << ',' << e.values(i, j) << '\n';
      os << line.str();
    }
  }
}

}  // namespace wfbm
