#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace wfbm {

// Flat dotted-key configuration.  A config with only params.a / params.b set
// is runnable; every other field has a default.  Serialization round-trips
// losslessly (%.17g).
struct RunConfig {
  double a = 0.0;
  double b = 0.0;
  double horizon = 1.0;
  double step = 1.0 / 512.0;
  double pad = -1.0;  // <0: auto = 2 * max(eps_steps) * step
  std::vector<int> eps_steps{32, 16, 8};
  double bandwidth = -1.0;    // <0: 2 sqrt(step^{1+b} horizon^a)
  double x_halfwidth = -1.0;  // <0: 4 sqrt(horizon^{1+a+b})
  double x_spacing = -1.0;    // <0: bandwidth / 4
  std::vector<double> t_eval;  // empty: {horizon}
  int n_paths = 200;
  std::uint64_t seed = 12345;
  double z_max = 4.0;
  double rel_max = 0.05;
  std::string quad_rule = "left";  // left | trapezoid
  std::string out_dir;             // empty: $WFBM_OUT_DIR or "."
  int threads = 0;                 // 0: hardware

  std::string serialize() const;
  // FNV-1a over the numerical configuration; execution knobs (threads,
  // out_dir) are excluded so identical runs hash identically.
  std::uint64_t hash() const;
  std::string resolve_out_dir() const;
  double resolved_pad() const;

  void apply(const std::string& key, const std::string& value);
  static RunConfig from_file(const std::string& path);
  static RunConfig from_file(const std::string& path, const RunConfig& base);
  static RunConfig from_text(const std::string& text);
  static RunConfig from_text(const std::string& text, const RunConfig& base);
};

std::uint64_t fnv1a64(std::string_view text);

// `# wfbm <version> config=<hash hex> seed=<seed>`
std::string csv_header_comment(const RunConfig& cfg);

}  // namespace wfbm
