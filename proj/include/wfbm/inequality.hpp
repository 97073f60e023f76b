#pragma once

#include <iosfwd>
#include <string>

#include "wfbm/params.hpp"

namespace wfbm {

enum class Lemma {
  L3_1,   // increment variance two-sided
  L3_2,   // determinant two-sided
  L3_3,   // cross-increment covariance bound (alpha-family)
  L3_4a,  // E[B_t (B_s - B_r)]
  L3_4b,  // E[B_s (B_t - B_s)]
  L3_4c,  // E[B_s (B_s - B_r)]
  L3_4d,  // E[B_s (B_t - B_r)]
  L3_4e,  // E[B_r (B_t - B_s)]
  L3_5,   // bivariate-density functional bounds
};

std::string lemma_name(Lemma lemma);
Lemma lemma_from_name(const std::string& name);

struct GridSpec {
  double lo = 0.05;
  double hi = 2.0;
  int n = 50;           // points per axis, log-spaced
  double min_gap = 0.02;  // diagonal exclusion |t-s| >= min_gap
};

struct ScanReport {
  Lemma lemma;
  std::string region;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  long n_points = 0;
  long violations = 0;  // points where a ratio is non-finite or rhs <= 0
  // L3_3 only: empirical constant for the proof-display exponent (1+b)alpha;
  // `binding` names whichever variant needs the larger constant.
  double alt_max_ratio = 0.0;
  std::string binding;
};

// Two-sided (asymptotic-equivalence) scans; ratio = lhs / rhs.
// csv, when set, receives `lemma,t,s,tp,sp,alpha,lhs,rhs,ratio` rows.
ScanReport scan_two_sided(const ProcessParams& p, Lemma lemma,
                          const GridSpec& spec, std::ostream* csv = nullptr,
                          int threads = 0);

// One-sided scans; ratio = |lhs| / rhs and the empirical constant is the max.
// alpha only applies to L3_3.
ScanReport scan_one_sided(const ProcessParams& p, Lemma lemma,
                          const GridSpec& spec, double alpha = 0.5,
                          std::ostream* csv = nullptr, int threads = 0);

void write_scan_csv_header(std::ostream& os, const std::string& comment);

}  // namespace wfbm
