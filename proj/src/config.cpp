#include "wfbm/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wfbm/errors.hpp"
#include "wfbm/version.hpp"

namespace wfbm {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::string join_doubles(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << fmt(v[i]);
  return os.str();
}

template <typename T, typename Parse>
std::vector<T> split_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(parse(cur));
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(parse(cur));
  return out;
}

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw ConfigError("bad numeric value: " + s);
  return v;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw ConfigError("bad integer value: " + s);
  return v;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "params.a = " << fmt(a) << "\n";
  os << "params.b = " << fmt(b) << "\n";
  os << "grid.horizon = " << fmt(horizon) << "\n";
  os << "grid.step = " << fmt(step) << "\n";
  os << "grid.pad = " << fmt(pad) << "\n";
  os << "estimator.eps_steps = " << join_ints(eps_steps) << "\n";
  os << "estimator.bandwidth = " << fmt(bandwidth) << "\n";
  os << "estimator.x_halfwidth = " << fmt(x_halfwidth) << "\n";
  os << "estimator.x_spacing = " << fmt(x_spacing) << "\n";
  os << "estimator.t_eval = " << join_doubles(t_eval) << "\n";
  os << "estimator.quad_rule = " << quad_rule << "\n";
  os << "mc.n_paths = " << n_paths << "\n";
  os << "mc.seed = " << seed << "\n";
  os << "tol.z_max = " << fmt(z_max) << "\n";
  os << "tol.rel_max = " << fmt(rel_max) << "\n";
  os << "output.dir = " << out_dir << "\n";
  os << "threads = " << threads << "\n";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  RunConfig canon = *this;
  canon.out_dir.clear();
  canon.threads = 0;
  return fnv1a64(canon.serialize());
}

std::string RunConfig::resolve_out_dir() const {
  if (!out_dir.empty()) return out_dir;
  if (const char* env = std::getenv("WFBM_OUT_DIR"); env && *env) return env;
  return ".";
}

double RunConfig::resolved_pad() const {
  if (pad >= 0.0) return pad;
  int mx = 0;
  for (int k : eps_steps) mx = std::max(mx, k);
  return 2.0 * mx * step;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "params.a") a = parse_double(value);
  else if (key == "params.b") b = parse_double(value);
  else if (key == "grid.horizon") horizon = parse_double(value);
  else if (key == "grid.step") step = parse_double(value);
  else if (key == "grid.pad") pad = parse_double(value);
  else if (key == "estimator.eps_steps")
    eps_steps = split_list<int>(value, parse_int);
  else if (key == "estimator.bandwidth") bandwidth = parse_double(value);
  else if (key == "estimator.x_halfwidth") x_halfwidth = parse_double(value);
  else if (key == "estimator.x_spacing") x_spacing = parse_double(value);
  else if (key == "estimator.t_eval")
    t_eval = split_list<double>(value, parse_double);
  else if (key == "estimator.quad_rule") {
    if (value != "left" && value != "trapezoid")
      throw ConfigError("quad_rule must be left or trapezoid");
    quad_rule = value;
  } else if (key == "mc.n_paths") n_paths = parse_int(value);
  else if (key == "mc.seed") seed = std::stoull(value);
  else if (key == "tol.z_max") z_max = parse_double(value);
  else if (key == "tol.rel_max") rel_max = parse_double(value);
  else if (key == "output.dir") out_dir = value;
  else if (key == "threads") threads = parse_int(value);
  else throw ConfigError("unknown config key: " + key);
}

RunConfig RunConfig::from_text(const std::string& text, const RunConfig& base) {
  RunConfig cfg = base;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    cfg.apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), base);
}

RunConfig RunConfig::from_file(const std::string& path) {
  return from_file(path, RunConfig{});
}

RunConfig RunConfig::from_text(const std::string& text) {
  return from_text(text, RunConfig{});
}

std::string csv_header_comment(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# wfbm " << kVersion << " config=" << std::hex << cfg.hash()
     << std::dec << " seed=" << cfg.seed;
  return os.str();
}

}  // namespace wfbm
