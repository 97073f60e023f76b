#include "wfbm/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wfbm/kernel.hpp"
#include "wfbm/quadrature.hpp"

namespace wfbm {

namespace {

std::vector<double> log_grid(const GridSpec& spec, int max_points = 0) {
  int n = spec.n;
  if (max_points > 0) n = std::min(n, max_points);
  std::vector<double> xs(n);
  const double ratio = spec.hi / spec.lo;
  for (int i = 0; i < n; ++i)
    xs[i] = spec.lo * std::pow(ratio, n == 1 ? 0.0 : double(i) / (n - 1));
  return xs;
}

struct Accum {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  long n = 0;
  long violations = 0;

  void add(double ratio, bool ok) {
    ++n;
    if (!ok || !std::isfinite(ratio)) {
      ++violations;
      return;
    }
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
  }
};

void emit(std::ostream* csv, const std::string& lemma, double t, double s,
          double tp, double sp, double alpha, double lhs, double rhs,
          double ratio) {
  if (!csv) return;
  std::ostream& os = *csv;
  os.precision(12);
  os << lemma << ',' << t << ',' << s << ',' << tp << ',' << sp << ','
     << alpha << ',' << lhs << ',' << rhs << ',' << ratio << '\n';
}

std::string region_text(const GridSpec& spec, const char* shape) {
  std::ostringstream os;
  os << shape << " in (" << spec.lo << ", " << spec.hi << "], " << spec.n
     << " log points/axis, min gap " << spec.min_gap;
  return os.str();
}

// C^2 bump family used for the L3_5 scan: (1-u^2)^3 on |u|<1, u=(x-c)/w.
struct BumpC2 {
  double c, w;
  double f(double x) const {
    const double u = (x - c) / w;
    if (std::abs(u) >= 1.0) return 0.0;
    const double q = 1.0 - u * u;
    return q * q * q;
  }
  double fp(double x) const {
    const double u = (x - c) / w;
    if (std::abs(u) >= 1.0) return 0.0;
    const double q = 1.0 - u * u;
    return -6.0 * u * q * q / w;
  }
  double fpp(double x) const {
    const double u = (x - c) / w;
    if (std::abs(u) >= 1.0) return 0.0;
    const double q = 1.0 - u * u;
    return 6.0 * q * (5.0 * u * u - 1.0) / (w * w);
  }
};

const BumpC2 kBumps[5] = {
    {0.0, 0.5}, {0.0, 1.0}, {0.5, 0.5}, {1.0, 1.0}, {-0.5, 0.75}};

}  // namespace

std::string lemma_name(Lemma lemma) {
  switch (lemma) {
    case Lemma::L3_1: return "L3_1";
    case Lemma::L3_2: return "L3_2";
    case Lemma::L3_3: return "L3_3";
    case Lemma::L3_4a: return "L3_4a";
    case Lemma::L3_4b: return "L3_4b";
    case Lemma::L3_4c: return "L3_4c";
    case Lemma::L3_4d: return "L3_4d";
    case Lemma::L3_4e: return "L3_4e";
    case Lemma::L3_5: return "L3_5";
  }
  return "?";
}

Lemma lemma_from_name(const std::string& name) {
  for (Lemma l : {Lemma::L3_1, Lemma::L3_2, Lemma::L3_3, Lemma::L3_4a,
                  Lemma::L3_4b, Lemma::L3_4c, Lemma::L3_4d, Lemma::L3_4e,
                  Lemma::L3_5}) {
    if (lemma_name(l) == name) return l;
  }
  throw std::invalid_argument("unknown lemma: " + name);
}

void write_scan_csv_header(std::ostream& os, const std::string& comment) {
  os << comment << "\n";
  os << "lemma,t,s,tp,sp,alpha,lhs,rhs,ratio\n";
}

ScanReport scan_two_sided(const ProcessParams& p, Lemma lemma,
                          const GridSpec& spec, std::ostream* csv, int) {
  if (lemma != Lemma::L3_1 && lemma != Lemma::L3_2)
    throw std::invalid_argument("scan_two_sided handles L3_1 and L3_2 only");
  if (spec.n < 2 || !(spec.lo > 0.0) || !(spec.hi > spec.lo))
    throw std::invalid_argument("degenerate scan grid");
  const auto xs = log_grid(spec);
  const double e1b = 1.0 + p.b();
  Accum acc;
  const std::string name = lemma_name(lemma);
  for (double t : xs) {
    for (double s : xs) {
      if (std::abs(t - s) < spec.min_gap) continue;
      double lhs, rhs;
      if (lemma == Lemma::L3_1) {
        lhs = increment_variance(p, t, s);
        rhs = std::pow(std::max(t, s), p.a()) * std::pow(std::abs(t - s), e1b);
      } else {
        lhs = rho_squared(p, t, s);
        rhs = std::pow(t * s, p.a()) * std::pow(std::min(t, s), e1b) *
              std::pow(std::abs(t - s), e1b);
      }
      const double ratio = lhs / rhs;
      acc.add(ratio, rhs > 0.0 && lhs > 0.0);
      emit(csv, name, t, s, NAN, NAN, NAN, lhs, rhs, ratio);
    }
  }
  ScanReport rep;
  rep.lemma = lemma;
  rep.region = region_text(spec, "(t,s)");
  rep.min_ratio = acc.min_ratio;
  rep.max_ratio = acc.max_ratio;
  rep.n_points = acc.n;
  rep.violations = acc.violations;
  return rep;
}

namespace {

double cross_cov(const ProcessParams& p, double t, double s, double tp,
                 double sp) {
  return covariance(p, t, tp) - covariance(p, t, sp) - covariance(p, s, tp) +
         covariance(p, s, sp);
}

ScanReport scan_l3_3(const ProcessParams& p, const GridSpec& spec, double alpha,
                     std::ostream* csv) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("L3_3 requires alpha in [0,1]");
  const auto xs = log_grid(spec, 14);
  Accum main_acc, alt_acc;
  const double a = p.a(), b = p.b();
  for (std::size_t i4 = 3; i4 < xs.size(); ++i4) {
    for (std::size_t i3 = 2; i3 < i4; ++i3) {
      for (std::size_t i2 = 1; i2 < i3; ++i2) {
        for (std::size_t i1 = 0; i1 < i2; ++i1) {
          const double sp = xs[i1], tp = xs[i2], s = xs[i3], t = xs[i4];
          if (t - s < spec.min_gap || s - tp < spec.min_gap ||
              tp - sp < spec.min_gap)
            continue;
          const double lhs = std::abs(cross_cov(p, t, s, tp, sp));
          const double common =
              std::pow(std::max(std::pow(sp, a), std::pow(s, a)), alpha) *
              std::pow(t * tp, 0.5 * a * (1.0 - alpha)) *
              std::pow((t - s) * (tp - sp),
                       alpha + 0.5 * (1.0 - alpha) * (1.0 + b));
          const double rhs_disp = common / std::pow(t - tp, (1.0 - b) * alpha);
          const double rhs_proof = common / std::pow(t - tp, (1.0 + b) * alpha);
          const double r1 = lhs / rhs_disp;
          const double r2 = lhs / rhs_proof;
          main_acc.add(r1, rhs_disp > 0.0);
          alt_acc.add(r2, rhs_proof > 0.0);
          emit(csv, "L3_3", t, s, tp, sp, alpha, lhs, rhs_disp, r1);
        }
      }
    }
  }
  ScanReport rep;
  rep.lemma = Lemma::L3_3;
  rep.region = region_text(spec, "t>s>t'>s'");
  rep.min_ratio = main_acc.min_ratio;
  rep.max_ratio = main_acc.max_ratio;
  rep.n_points = main_acc.n;
  rep.violations = main_acc.violations;
  rep.alt_max_ratio = alt_acc.max_ratio;
  rep.binding = main_acc.max_ratio >= alt_acc.max_ratio
                    ? "display exponent (1-b)a"
                    : "proof exponent (1+b)a";
  return rep;
}

ScanReport scan_l3_4(const ProcessParams& p, Lemma lemma, const GridSpec& spec,
                     std::ostream* csv) {
  if (!p.flags().qcov_regime)
    throw std::invalid_argument("L3_4 scans require -1 < b < 0");
  const auto xs = log_grid(spec, 24);
  Accum acc;
  const double a = p.a(), e1b = 1.0 + p.b();
  const std::string name = lemma_name(lemma);
  for (std::size_t i3 = 2; i3 < xs.size(); ++i3) {
    for (std::size_t i2 = 1; i2 < i3; ++i2) {
      for (std::size_t i1 = 0; i1 < i2; ++i1) {
        const double r = xs[i1], s = xs[i2], t = xs[i3];
        if (t - s < spec.min_gap || s - r < spec.min_gap) continue;
        double lhs = 0.0, rhs = 0.0;
        switch (lemma) {
          case Lemma::L3_4a:
            lhs = covariance(p, t, s) - covariance(p, t, r);
            rhs = std::pow(s - r, e1b) * std::pow(s, a);
            break;
          case Lemma::L3_4b:
            lhs = covariance(p, s, t) - covariance(p, s, s);
            rhs = std::pow(t - s, e1b) * std::pow(s, a);
            break;
          case Lemma::L3_4c:
            lhs = covariance(p, s, s) - covariance(p, s, r);
            rhs = std::pow(s - r, e1b) * std::pow(s, a);
            break;
          case Lemma::L3_4d:
            lhs = covariance(p, s, t) - covariance(p, s, r);
            rhs = std::pow(t - r, e1b) * std::pow(s, a);
            break;
          case Lemma::L3_4e:
            lhs = covariance(p, r, t) - covariance(p, r, s);
            rhs = std::pow(t - s, e1b) * std::pow(r, a);
            break;
          default:
            throw std::logic_error("not an L3_4 lemma");
        }
        const double ratio = std::abs(lhs) / rhs;
        acc.add(ratio, rhs > 0.0);
        emit(csv, name, t, s, r, NAN, NAN, lhs, rhs, ratio);
      }
    }
  }
  ScanReport rep;
  rep.lemma = lemma;
  rep.region = region_text(spec, "t>s>r");
  rep.min_ratio = acc.min_ratio;
  rep.max_ratio = acc.max_ratio;
  rep.n_points = acc.n;
  rep.violations = acc.violations;
  return rep;
}

// E[g(B_s, B_r)] against the bivariate density, whitened 2-D Gauss-Hermite.
template <typename G>
double gauss2d(const ProcessParams& p, double s, double r, int order, G&& g) {
  const auto& gh = quad::gauss_hermite(order);
  const double e = p.var_exponent();
  const double ss = std::pow(s, e), rr = std::pow(r, e);
  const double mu = covariance(p, s, r);
  const double l11 = std::sqrt(ss);
  const double l21 = mu / l11;
  // l22^2 = rr - mu^2/ss = rho^2_{s,r}/ss
  const double l22 = std::sqrt(std::max(rr - l21 * l21, 0.0));
  const double sq2 = std::sqrt(2.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double z1 = sq2 * gh.nodes[i];
    double inner = 0.0;
    for (std::size_t j = 0; j < gh.nodes.size(); ++j) {
      const double z2 = sq2 * gh.nodes[j];
      inner += gh.weights[j] * g(l11 * z1, l21 * z1 + l22 * z2);
    }
    acc += gh.weights[i] * inner;
  }
  constexpr double inv_pi = 0.3183098861837907;
  return acc * inv_pi;
}

template <typename F>
double gauss1d_sq(const ProcessParams& p, double s, int order, F&& f) {
  const auto& gh = quad::gauss_hermite(order);
  const double sigma = std::pow(s, p.hurst_like());
  const double sq2 = std::sqrt(2.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
    const double x = f(sigma * sq2 * gh.nodes[i]);
    acc += gh.weights[i] * x * x;
  }
  constexpr double inv_sqrt_pi = 0.5641895835477563;
  return acc * inv_sqrt_pi;
}

ScanReport scan_l3_5(const ProcessParams& p, const GridSpec& spec,
                     std::ostream* csv) {
  const auto xs = log_grid(spec, 12);
  Accum acc;
  const double e = p.var_exponent();
  const int order = 48;
  for (double s : xs) {
    for (double r : xs) {
      if (s <= r || s - r < spec.min_gap) continue;
      const double rho2 = rho_squared(p, s, r);
      if (!(rho2 > 0.0)) continue;
      const double mu = covariance(p, s, r);
      for (const auto& bump : kBumps) {
        const double ef2 = gauss1d_sq(p, s, order, [&](double x) { return bump.f(x); }) +
                           gauss1d_sq(p, r, order, [&](double x) { return bump.f(x); });
        // (3.11): |E f'(B_s) f'(B_r)|
        const double lhs1 = std::abs(gauss2d(
            p, s, r, order,
            [&](double x, double y) { return bump.fp(x) * bump.fp(y); }));
        const double rhs1 =
            (std::pow(r * s, 0.5 * e) + mu) / rho2 * ef2;
        // (3.12): |E f''(B_s) f(B_r)|
        const double lhs2 = std::abs(gauss2d(
            p, s, r, order,
            [&](double x, double y) { return bump.fpp(x) * bump.f(y); }));
        const double rhs2 = std::pow(r, e) / rho2 * ef2;
        const double r1 = lhs1 / rhs1;
        const double r2 = lhs2 / rhs2;
        acc.add(r1, rhs1 > 0.0);
        acc.add(r2, rhs2 > 0.0);
        emit(csv, "L3_5", s, r, NAN, NAN, NAN, lhs1, rhs1, r1);
        emit(csv, "L3_5", s, r, NAN, NAN, NAN, lhs2, rhs2, r2);
      }
    }
  }
  ScanReport rep;
  rep.lemma = Lemma::L3_5;
  rep.region = region_text(spec, "s>r, 5-bump family");
  rep.min_ratio = acc.min_ratio;
  rep.max_ratio = acc.max_ratio;
  rep.n_points = acc.n;
  rep.violations = acc.violations;
  return rep;
}

}  // namespace

ScanReport scan_one_sided(const ProcessParams& p, Lemma lemma,
                          const GridSpec& spec, double alpha,
                          std::ostream* csv, int) {
  switch (lemma) {
    case Lemma::L3_3: return scan_l3_3(p, spec, alpha, csv);
    case Lemma::L3_4a:
    case Lemma::L3_4b:
    case Lemma::L3_4c:
    case Lemma::L3_4d:
    case Lemma::L3_4e: return scan_l3_4(p, lemma, spec, csv);
    case Lemma::L3_5: return scan_l3_5(p, spec, csv);
    default:
      throw std::invalid_argument("scan_one_sided: two-sided lemma passed");
  }
}

}  // namespace wfbm
