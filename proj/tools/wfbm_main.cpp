// Command-line front end: sample | qcov | local-time | verify | scan | hnorm.
// Exit codes: 0 ok/pass, 1 verdict failure, 2 config error, 3 numerical error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "wfbm/config.hpp"
#include "wfbm/errors.hpp"
#include "wfbm/estimators.hpp"
#include "wfbm/functions.hpp"
#include "wfbm/inequality.hpp"
#include "wfbm/kernel.hpp"
#include "wfbm/sampler.hpp"
#include "wfbm/verify.hpp"
#include "wfbm/version.hpp"

namespace fs = std::filesystem;
using namespace wfbm;

namespace {

struct CliState {
  RunConfig cfg;
  std::string config_file;
  bool emit_plot_script = false;
};

// CLI11 populates flags into this staging area; only explicitly passed flags
// override the config file.
struct Overrides {
  std::map<std::string, std::string> kv;
};

void add_common(CLI::App* cmd, CliState& st, Overrides& ov) {
  cmd->add_option("--config", st.config_file, "flat key=value config file");
  auto opt = [&](const std::string& flag, const std::string& key,
                 const std::string& help) {
    cmd->add_option_function<std::string>(
           flag, [&ov, key](const std::string& v) { ov.kv[key] = v; }, help)
        ->expected(1);
  };
  opt("--a", "params.a", "exponent a");
  opt("--b", "params.b", "exponent b");
  opt("--horizon", "grid.horizon", "time horizon");
  opt("--step", "grid.step", "grid step");
  opt("--pad", "grid.pad", "grid pad beyond horizon (<0 = auto)");
  opt("--eps-steps", "estimator.eps_steps", "epsilon ladder in grid steps, e.g. 32,16,8");
  opt("--bandwidth", "estimator.bandwidth", "local-time bandwidth (<0 = auto)");
  opt("--x-halfwidth", "estimator.x_halfwidth", "x-grid half width (<0 = auto)");
  opt("--x-spacing", "estimator.x_spacing", "x-grid spacing (<0 = auto)");
  opt("--t-eval", "estimator.t_eval", "evaluation times, comma separated");
  opt("--quad-rule", "estimator.quad_rule", "left | trapezoid");
  opt("--n", "mc.n_paths", "number of paths");
  opt("--seed", "mc.seed", "RNG seed");
  opt("--z-max", "tol.z_max", "z-score verdict threshold");
  opt("--rel-max", "tol.rel_max", "relative-error verdict threshold");
  opt("--out", "output.dir", "output directory");
  opt("--threads", "threads", "worker cap (0 = hardware)");
  cmd->add_flag("--emit-plot-script", st.emit_plot_script,
                "write a python plotting script next to the CSVs");
}

RunConfig resolve(const CliState& st, const Overrides& ov) {
  RunConfig cfg;
  if (!st.config_file.empty()) cfg = RunConfig::from_file(st.config_file, cfg);
  for (const auto& [k, v] : ov.kv) cfg.apply(k, v);
  return cfg;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name,
                       std::string* full_path = nullptr) {
  const fs::path dir = cfg.resolve_out_dir();
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot open output file: " + p.string());
  if (full_path) *full_path = p.string();
  return os;
}

void write_metadata(const RunConfig& cfg, const std::string& name,
                    const std::string& extra = "") {
  auto os = open_out(cfg, name);
  os << "# wfbm " << kVersion << "\n" << cfg.serialize();
  if (!extra.empty()) os << extra;
}

void maybe_plot_script(const CliState& st, const RunConfig& cfg,
                       const std::vector<std::string>& csvs) {
  if (!st.emit_plot_script) return;
  auto os = open_out(cfg, "plot_outputs.py");
  os << "#!/usr/bin/env python3\n"
        "# Generic plotting for wfbm CSV outputs.\n"
        "import sys\n"
        "import matplotlib\n"
        "matplotlib.use('Agg')\n"
        "import matplotlib.pyplot as plt\n"
        "import csv as _csv\n\n"
        "FILES = [\n";
  for (const auto& f : csvs) os << "    " << std::quoted(f) << ",\n";
  os << "]\n\n"
        "for path in FILES:\n"
        "    with open(path) as fh:\n"
        "        rows = [r for r in _csv.reader(fh) if r and not r[0].startswith('#')]\n"
        "    header, data = rows[0], rows[1:]\n"
        "    cols = list(zip(*data))\n"
        "    fig, ax = plt.subplots()\n"
        "    for i, name in enumerate(header[1:], start=1):\n"
        "        try:\n"
        "            ys = [float(v) for v in cols[i]]\n"
        "        except ValueError:\n"
        "            continue\n"
        "        ax.plot(ys, label=name)\n"
        "    ax.legend(); ax.set_title(path)\n"
        "    fig.savefig(path + '.png', dpi=120)\n"
        "    print('wrote', path + '.png')\n";
}

SimGrid make_grid(const RunConfig& cfg) {
  return build_grid(cfg.horizon, cfg.step, cfg.resolved_pad());
}

VerifySession make_session(const RunConfig& cfg) {
  const ProcessParams p = validate_params(cfg.a, cfg.b);
  return VerifySession::create(p, cfg.horizon, cfg.step, cfg.eps_steps,
                               cfg.n_paths, cfg.seed,
                               {cfg.z_max, cfg.rel_max}, cfg.bandwidth,
                               cfg.x_halfwidth, cfg.x_spacing, cfg.threads);
}

int cmd_sample(const CliState& st, const Overrides& ov) {
  const RunConfig cfg = resolve(st, ov);
  const ProcessParams p = validate_params(cfg.a, cfg.b);
  const SimGrid g = make_grid(cfg);
  const PathEnsemble ens =
      sample_paths(p, g, cfg.n_paths, cfg.seed, cfg.threads);
  std::string path;
  auto os = open_out(cfg, "ensemble.csv", &path);
  write_ensemble_csv(os, ens, csv_header_comment(cfg));
  std::ostringstream extra;
  extra.precision(17);
  extra << "sampler.jitter = " << ens.jitter << "\n";
  write_metadata(cfg, "ensemble.meta", extra.str());
  maybe_plot_script(st, cfg, {path});
  std::cout << "wrote " << path << " (" << cfg.n_paths << " paths x "
            << g.size() << " points, jitter " << ens.jitter << ")\n";
  return 0;
}

int cmd_qcov(const CliState& st, const Overrides& ov, const std::string& fspec,
             double t_flag) {
  const RunConfig cfg = resolve(st, ov);
  const FunctionSpec f = FunctionSpec::parse(fspec);
  const ProcessParams p = validate_params(cfg.a, cfg.b);
  const SimGrid g = make_grid(cfg);
  const PathEnsemble ens =
      sample_paths(p, g, cfg.n_paths, cfg.seed, cfg.threads);
  const double t = t_flag > 0.0 ? t_flag : cfg.horizon;
  std::string path;
  auto os = open_out(cfg, "qcov.csv", &path);
  os << csv_header_comment(cfg) << "\n";
  os << "path_id,t,epsilon,estimate\n";
  os.precision(17);
  auto fv = [&f](double x) { return f(x); };
  for (int k : cfg.eps_steps) {
    const double eps = k * cfg.step;
    for (int i = 0; i < cfg.n_paths; ++i) {
      const double v = qcov_estimate(p, g, ens.path(i), fv, t, eps);
      os << i << ',' << t << ',' << eps << ',' << v << '\n';
    }
  }
  maybe_plot_script(st, cfg, {path});
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_local_time(const CliState& st, const Overrides& ov) {
  const RunConfig cfg = resolve(st, ov);
  const ProcessParams p = validate_params(cfg.a, cfg.b);
  const SimGrid g = make_grid(cfg);
  const PathEnsemble ens =
      sample_paths(p, g, cfg.n_paths, cfg.seed, cfg.threads);
  EstimatorConfig est;
  for (int k : cfg.eps_steps) est.eps_ladder.push_back(k * cfg.step);
  est.bandwidth = cfg.bandwidth > 0.0
                      ? cfg.bandwidth
                      : default_bandwidth(p, cfg.step, cfg.horizon);
  est.x_grid = default_x_grid(p, cfg.horizon, est.bandwidth,
                              cfg.x_spacing > 0 ? cfg.x_spacing : 0.0);
  est.t_eval = cfg.t_eval.empty() ? std::vector<double>{cfg.horizon}
                                  : cfg.t_eval;
  est.rule = cfg.quad_rule == "trapezoid" ? QuadRule::Trapezoid
                                          : QuadRule::LeftRiemann;
  const LocalTimeField field = local_time_field(p, ens, est, cfg.threads);
  std::string path;
  auto os = open_out(cfg, "local_time.csv", &path);
  os << csv_header_comment(cfg) << "\n";
  os << "x,t,raw,weighted\n";
  os.precision(17);
  for (std::size_t xi = 0; xi < field.x_grid.size(); ++xi)
    for (std::size_t ti = 0; ti < field.t_eval.size(); ++ti)
      os << field.x_grid[xi] << ',' << field.t_eval[ti] << ','
         << field.raw_at(xi, ti) << ',' << field.weighted_at(xi, ti) << '\n';
  maybe_plot_script(st, cfg, {path});
  std::cout << "wrote " << path << " (h = " << field.bandwidth << ")\n";
  return 0;
}

int cmd_verify(const CliState& st, const Overrides& ov,
               const std::string& which, const std::string& fspec,
               const std::string& Fspec, double x_level) {
  const RunConfig cfg = resolve(st, ov);
  const VerifySession s = make_session(cfg);
  const double t = cfg.horizon;
  std::vector<EstimateReport> reports;
  auto run = [&](const std::string& name) {
    if (name == "qvar") {
      auto r = verify_qvar(s, t);
      reports.insert(reports.end(), r.begin(), r.end());
    } else if (name == "chain") {
      auto r = verify_chain_rule(s, FunctionSpec::parse(fspec), t);
      reports.insert(reports.end(), r.begin(), r.end());
    } else if (name == "ito") {
      reports.push_back(verify_ito_expectation(s, FunctionSpec::parse(Fspec),
                                               t, s.est.eps_ladder.back()));
    } else if (name == "bouleau-yor") {
      auto r = verify_bouleau_yor(s, FunctionSpec::parse(fspec), t);
      reports.insert(reports.end(), r.begin(), r.end());
    } else if (name == "tanaka") {
      reports.push_back(verify_tanaka_expectation(s, x_level, t));
    } else if (name == "hnorm") {
      reports.push_back(verify_hnorm_bound(s, t));
    } else {
      throw ConfigError("unknown identity: " + name);
    }
  };
  if (which == "all") {
    for (const char* n : {"qvar", "chain", "ito", "tanaka", "hnorm"}) run(n);
    if (s.params.flags().qcov_regime && s.params.flags().localtime_regime)
      run("bouleau-yor");
  } else {
    run(which);
  }
  std::string path;
  auto os = open_out(cfg, "verify.csv", &path);
  write_report_csv_header(os, csv_header_comment(cfg));
  bool all_pass = true;
  for (const auto& r : reports) {
    write_report_row(os, r);
    all_pass = all_pass && r.pass;
    std::cout << identity_name(r.id) << " eps=" << r.epsilon
              << " mean=" << r.mc_mean << " target=" << r.target
              << " rel=" << r.rel_err << (r.pass ? " pass" : " FAIL") << "\n";
  }
  maybe_plot_script(st, cfg, {path});
  std::cout << "wrote " << path << "\n";
  return all_pass ? 0 : 1;
}

int cmd_scan(const CliState& st, const Overrides& ov, const std::string& which,
             double alpha, int grid_n) {
  const RunConfig cfg = resolve(st, ov);
  const ProcessParams p = validate_params(cfg.a, cfg.b);
  GridSpec spec;
  if (grid_n > 0) spec.n = grid_n;
  std::vector<Lemma> lemmas;
  if (which == "all") {
    lemmas = {Lemma::L3_1, Lemma::L3_2, Lemma::L3_3, Lemma::L3_4a,
              Lemma::L3_4b, Lemma::L3_4c, Lemma::L3_4d, Lemma::L3_4e,
              Lemma::L3_5};
  } else {
    lemmas = {lemma_from_name(which)};
  }
  std::string path;
  auto os = open_out(cfg, "scan.csv", &path);
  write_scan_csv_header(os, csv_header_comment(cfg));
  for (Lemma l : lemmas) {
    ScanReport rep;
    if (l == Lemma::L3_1 || l == Lemma::L3_2)
      rep = scan_two_sided(p, l, spec, &os, cfg.threads);
    else
      rep = scan_one_sided(p, l, spec, alpha, &os, cfg.threads);
    std::cout << lemma_name(l) << ": ratio in [" << rep.min_ratio << ", "
              << rep.max_ratio << "] over " << rep.n_points << " points, "
              << rep.violations << " violations";
    if (!rep.binding.empty())
      std::cout << " (binding: " << rep.binding
                << ", alt max " << rep.alt_max_ratio << ")";
    std::cout << "\n";
  }
  maybe_plot_script(st, cfg, {path});
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_hnorm(const CliState& st, const Overrides& ov, const std::string& fspec,
              double T) {
  const RunConfig cfg = resolve(st, ov);
  const ProcessParams p = validate_params(cfg.a, cfg.b);
  const FunctionSpec f = FunctionSpec::parse(fspec);
  const double val = h_norm([&f](double x) { return f(x); },
                            T > 0.0 ? T : cfg.horizon, p);
  std::cout.precision(12);
  std::cout << "||" << f.name() << "||_H = " << val << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted fractional Brownian motion toolkit"};
  app.set_version_flag("--version", std::string("wfbm ") + kVersion);
  app.require_subcommand(1);

  CliState st;
  Overrides ov;

  auto* sample = app.add_subcommand("sample", "sample paths, write CSV");
  add_common(sample, st, ov);

  auto* qcov = app.add_subcommand("qcov", "generalized quadratic covariation");
  add_common(qcov, st, ov);
  std::string qcov_f = "x";
  double qcov_t = -1.0;
  qcov->add_option("--f", qcov_f, "function spec (x, x2, x3, cos, bump:c:w, step:x0)");
  qcov->add_option("--t", qcov_t, "evaluation time (default horizon)");

  auto* lt = app.add_subcommand("local-time", "raw/weighted local time field");
  add_common(lt, st, ov);

  auto* verify = app.add_subcommand("verify", "Monte Carlo identity checks");
  add_common(verify, st, ov);
  std::string identity = "all", vf = "x3", vF = "x2";
  double x_level = 0.0;
  verify->add_option("--identity", identity,
                     "qvar|chain|ito|bouleau-yor|tanaka|hnorm|all");
  verify->add_option("--f", vf, "f spec for chain/bouleau-yor");
  verify->add_option("--F", vF, "F spec for ito (x2|x|cos)");
  verify->add_option("--x", x_level, "level for tanaka");

  auto* scan = app.add_subcommand("scan", "inequality ratio scans");
  add_common(scan, st, ov);
  std::string lemma = "all";
  double alpha = 0.5;
  int grid_n = 0;
  scan->add_option("--lemma", lemma, "L3_1|L3_2|L3_3|L3_4a..e|L3_5|all");
  scan->add_option("--alpha", alpha, "alpha for L3_3");
  scan->add_option("--grid-n", grid_n, "points per axis");

  auto* hn = app.add_subcommand("hnorm", "weighted L2 norm of a function");
  add_common(hn, st, ov);
  std::string hf = "x";
  double hT = -1.0;
  hn->add_option("--f", hf, "function spec");
  hn->add_option("--T", hT, "horizon T (default grid horizon)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help/--version
    app.exit(e);
    return 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(st, ov);
    if (qcov->parsed()) return cmd_qcov(st, ov, qcov_f, qcov_t);
    if (lt->parsed()) return cmd_local_time(st, ov);
    if (verify->parsed()) return cmd_verify(st, ov, identity, vf, vF, x_level);
    if (scan->parsed()) return cmd_scan(st, ov, lemma, alpha, grid_n);
    if (hn->parsed()) return cmd_hnorm(st, ov, hf, hT);
  } catch (const ParamOutOfRegion& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const NormInfinite& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const EdgeMassError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
