#include "wfbm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wfbm/errors.hpp"
#include "wfbm/parallel.hpp"
#include "wfbm/quadrature.hpp"

namespace wfbm {

namespace {

constexpr double kAlignTol = 1e-9;

// Index of an aligned grid time (1-based math index: time k*step <-> k).
std::size_t aligned_index(const SimGrid& g, double t, const char* what) {
  const double k = t / g.step;
  const auto ki = static_cast<long long>(std::llround(k));
  if (ki < 1 || std::abs(k - static_cast<double>(ki)) > kAlignTol)
    throw std::invalid_argument(std::string(what) +
                                " must be a positive multiple of the grid step");
  return static_cast<std::size_t>(ki);
}

}  // namespace

double default_bandwidth(const ProcessParams& p, double step, double horizon) {
  return 2.0 * std::sqrt(std::pow(step, 1.0 + p.b()) * std::pow(horizon, p.a()));
}

std::vector<double> default_x_grid(const ProcessParams& p, double horizon,
                                   double bandwidth, double spacing) {
  const double half = 4.0 * std::pow(horizon, p.hurst_like());
  if (spacing <= 0.0) spacing = bandwidth / 4.0;
  const auto half_count = static_cast<std::size_t>(std::ceil(half / spacing));
  std::vector<double> xs(2 * half_count + 1);
  for (std::size_t i = 0; i < xs.size(); ++i)
    xs[i] = (static_cast<double>(i) - static_cast<double>(half_count)) * spacing;
  return xs;
}

void validate_estimator_config(const EstimatorConfig& cfg, const SimGrid& g) {
  for (double eps : cfg.eps_ladder) {
    const std::size_t k = aligned_index(g, eps, "epsilon");
    if (k < 2)
      throw std::invalid_argument("epsilon must be >= 2 grid steps");
  }
  if (!(cfg.bandwidth > 0.0))
    throw std::invalid_argument("bandwidth must be > 0");
  for (std::size_t i = 1; i < cfg.x_grid.size(); ++i)
    if (!(cfg.x_grid[i] > cfg.x_grid[i - 1]))
      throw std::invalid_argument("x_grid must be strictly increasing");
  for (double t : cfg.t_eval) {
    aligned_index(g, t, "t_eval entry");
    if (t > g.horizon + kAlignTol)
      throw std::invalid_argument("t_eval entry beyond grid horizon");
  }
}

double weighted_time_integral(const ProcessParams& p, const SimGrid& g,
                              std::span<const double> path,
                              const std::function<double(double)>& fn,
                              double t, QuadRule rule) {
  if (!(t > 0.0) || t > g.horizon + kAlignTol)
    throw std::invalid_argument("weighted_time_integral: t outside (0, horizon]");
  if (path.size() != g.size())
    throw std::invalid_argument("weighted_time_integral: path/grid mismatch");
  const double e = p.var_exponent();
  double acc = 0.0;
  double tau = 0.0;     // left cell edge
  double tau_pow = 0.0; // tau^e
  double left_val = fn(0.0);  // B_0 = 0
  for (std::size_t j = 0; j < g.size() && tau < t - kAlignTol; ++j) {
    const double right = std::min(g.times[j], t);
    const double right_pow = std::pow(right, e);
    const double w = right_pow - tau_pow;
    const double right_val = fn(path[j]);
    acc += w * (rule == QuadRule::LeftRiemann ? left_val
                                              : 0.5 * (left_val + right_val));
    tau = g.times[j];
    tau_pow = right_pow;
    left_val = right_val;
  }
  return acc;
}

double qcov_estimate(const ProcessParams& p, const SimGrid& g,
                     std::span<const double> path,
                     const std::function<double(double)>& f, double t,
                     double eps) {
  if (path.size() != g.size())
    throw std::invalid_argument("qcov_estimate: path/grid mismatch");
  const std::size_t k = aligned_index(g, eps, "epsilon");
  if (k < 2) throw std::invalid_argument("epsilon must be >= 2 grid steps");
  const std::size_t K = aligned_index(g, t, "t");
  if (K + 2 * k > g.size())
    throw std::invalid_argument("qcov_estimate: grid horizon < t + 2*eps");
  const double bb = 1.0 + p.b();
  double acc = 0.0;
  // cells [j*step, (j+1)*step], j = k .. k+K-1; array index of time j*step is j-1
  double tau_pow = std::pow(g.times[k - 1], bb);
  for (std::size_t j = k; j < k + K; ++j) {
    const double right_pow = std::pow(g.times[j], bb);
    const double w = (right_pow - tau_pow) / bb;
    const double bs = path[j - 1];
    const double bse = path[j - 1 + k];
    acc += (f(bse) - f(bs)) * (bse - bs) * w;
    tau_pow = right_pow;
  }
  return (1.0 + p.a() + p.b()) / std::pow(eps, bb) * acc;
}

double qvar_estimate(const ProcessParams& p, const SimGrid& g,
                     std::span<const double> path, double t, double eps) {
  return qcov_estimate(p, g, path, [](double x) { return x; }, t, eps);
}

LocalTimeField local_time_field(const ProcessParams& p, const PathEnsemble& e,
                                const EstimatorConfig& cfg, int threads) {
  validate_estimator_config(cfg, e.grid);
  if (cfg.x_grid.empty() || cfg.t_eval.empty())
    throw std::invalid_argument("local_time_field: empty x_grid or t_eval");
  const auto& xs = cfg.x_grid;
  const auto& ts = cfg.t_eval;
  if (!std::is_sorted(ts.begin(), ts.end()))
    throw std::invalid_argument("local_time_field: t_eval must be ascending");
  const double h = cfg.bandwidth;
  const std::size_t nx = xs.size(), nt = ts.size();
  const double expo = p.var_exponent();
  const SimGrid& g = e.grid;

  // Per-cell data: left value, raw length, weighted length, t-bucket.
  const std::size_t t_max_idx = aligned_index(g, ts.back(), "t_eval entry");
  std::vector<std::size_t> bucket(t_max_idx);
  {
    std::size_t ti = 0;
    for (std::size_t j = 0; j < t_max_idx; ++j) {
      const double left_edge = static_cast<double>(j) * g.step;
      while (left_edge >= ts[ti] - kAlignTol) ++ti;
      bucket[j] = ti;
    }
  }
  std::vector<double> wraw(t_max_idx), wgt(t_max_idx);
  {
    double tau_pow = 0.0;
    for (std::size_t j = 0; j < t_max_idx; ++j) {
      const double rp = std::pow(g.times[j], expo);
      wraw[j] = g.step;
      wgt[j] = rp - tau_pow;
      tau_pow = rp;
    }
  }

  // Fixed number of path blocks, independent of the worker count, so the
  // reduction order (and therefore every bit of the result) is stable.
  const std::size_t n_blocks =
      std::min<std::size_t>(64, static_cast<std::size_t>(e.n_paths));
  std::vector<std::vector<double>> braw(n_blocks), bwgt(n_blocks);
  parallel_for(n_blocks, threads, [&](std::size_t blk) {
    auto& r = braw[blk];
    auto& w = bwgt[blk];
    r.assign(nx * nt, 0.0);
    w.assign(nx * nt, 0.0);
    const int lo = static_cast<int>(blk * e.n_paths / n_blocks);
    const int hi = static_cast<int>((blk + 1) * e.n_paths / n_blocks);
    for (int i = lo; i < hi; ++i) {
      const auto path = e.path(i);
      for (std::size_t j = 0; j < t_max_idx; ++j) {
        const double v = j == 0 ? 0.0 : path[j - 1];  // left edge value
        const auto first =
            std::lower_bound(xs.begin(), xs.end(), v - h) - xs.begin();
        const auto last =
            std::upper_bound(xs.begin(), xs.end(), v + h) - xs.begin();
        const std::size_t tb = bucket[j];
        for (auto xi = static_cast<std::size_t>(first);
             xi < static_cast<std::size_t>(last); ++xi) {
          r[xi * nt + tb] += wraw[j];
          w[xi * nt + tb] += wgt[j];
        }
      }
    }
  });

  LocalTimeField out;
  out.x_grid = xs;
  out.t_eval = ts;
  out.bandwidth = h;
  out.n_paths_averaged = e.n_paths;
  out.raw.assign(nx * nt, 0.0);
  out.weighted.assign(nx * nt, 0.0);
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    for (std::size_t k = 0; k < nx * nt; ++k) {
      out.raw[k] += braw[blk][k];
      out.weighted[k] += bwgt[blk][k];
    }
  }
  // buckets hold per-window masses; cumulate across t, then normalize
  const double norm = 1.0 / (2.0 * h * e.n_paths);
  for (std::size_t xi = 0; xi < nx; ++xi) {
    double craw = 0.0, cwgt = 0.0;
    for (std::size_t ti = 0; ti < nt; ++ti) {
      craw += out.raw[xi * nt + ti];
      cwgt += out.weighted[xi * nt + ti];
      out.raw[xi * nt + ti] = craw * norm;
      out.weighted[xi * nt + ti] = cwgt * norm;
    }
  }
  return out;
}

double stieltjes_against_local_time(const std::function<double(double)>& f,
                                    const LocalTimeField& field, double t) {
  const auto& ts = field.t_eval;
  std::size_t ti = ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] - t) <= kAlignTol * std::max(1.0, std::abs(t))) {
      ti = i;
      break;
    }
  }
  if (ti == ts.size())
    throw std::invalid_argument("stieltjes: t not among field.t_eval");
  const auto& xs = field.x_grid;
  const std::size_t nx = xs.size(), nt = ts.size();
  if (nx < 3) throw std::invalid_argument("stieltjes: x_grid too small");
  double max_l = 0.0;
  for (std::size_t xi = 0; xi < nx; ++xi)
    max_l = std::max(max_l, field.weighted[xi * nt + ti]);
  const double edge =
      std::max(field.weighted[0 * nt + ti], field.weighted[(nx - 1) * nt + ti]);
  if (max_l > 0.0 && edge > 1e-6 * max_l)
    throw EdgeMassError("stieltjes: local time does not vanish at x-grid edges");
  double acc = 0.0;
  for (std::size_t xi = 1; xi + 1 < nx; ++xi) {
    const double span = xs[xi + 1] - xs[xi - 1];
    const double df = (f(xs[xi + 1]) - f(xs[xi - 1])) / span;
    acc += df * field.weighted[xi * nt + ti] * 0.5 * span;
  }
  return -acc;
}

namespace {

double h_norm_sq_at_order(const std::function<double(double)>& f, double T,
                          const ProcessParams& p, int order) {
  const auto& gh = quad::gauss_hermite(order);
  const double V = std::pow(T + 1.0, p.hurst_like());
  constexpr double inv_sqrt_pi = 0.5641895835477563;
  auto inner = [&](double v) {
    double s = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      const double x = std::sqrt(2.0) * v * gh.nodes[i];
      const double fx = f(x);
      s += gh.weights[i] * fx * fx;
    }
    return inv_sqrt_pi * s;
  };
  const double outer = quad::adaptive([&](double v) { return v * inner(v); },
                                      0.0, V, {1e-14, 1e-11, 36});
  return outer / p.hurst_like();  // 2/(1+a+b) * int v g(v) dv
}

}  // namespace

double h_norm(const std::function<double(double)>& f, double T,
              const ProcessParams& p) {
  if (!(T > 0.0)) throw std::invalid_argument("h_norm requires T > 0");
  const double r1 = h_norm_sq_at_order(f, T, p, 48);
  const double r2 = h_norm_sq_at_order(f, T, p, 96);
  if (!std::isfinite(r1) || !std::isfinite(r2))
    throw NormInfinite("h_norm: integral not finite");
  const double d12 = std::abs(r2 - r1);
  if (d12 <= std::max(1e-12, 1e-9 * std::abs(r2))) return std::sqrt(r2);
  const double r3 = h_norm_sq_at_order(f, T, p, 192);
  if (!std::isfinite(r3)) throw NormInfinite("h_norm: integral not finite");
  const double d23 = std::abs(r3 - r2);
  if (d23 > d12 || r3 > 4.0 * std::max(std::abs(r1), std::abs(r2)))
    throw NormInfinite("h_norm: quadrature diverges under order escalation");
  return std::sqrt(r3);
}

}  // namespace wfbm
