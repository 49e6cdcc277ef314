#include "thinfilm/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thinfilm/config.hpp"
#include "thinfilm/diagnostics.hpp"
#include "thinfilm/error.hpp"
#include "thinfilm/fsp.hpp"
#include "thinfilm/io.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/profiles.hpp"
#include "thinfilm/solver.hpp"

namespace thinfilm {

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> sets;
  std::string out;
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--config", a.config, "configuration file");
  app->add_option("--set", a.sets, "override key=value")->allow_extra_args(false);
  app->add_option("--out", a.out, "output directory");
}

fs::path output_dir(const CommonArgs& a, const std::string& kind, const std::string& digest) {
  if (!a.out.empty()) return a.out;
  const char* root = std::getenv("THINFILM_OUT");
  return fs::path(root && *root ? root : "thinfilm_out") / (kind + "-" + digest);
}

Header base_header(const RunManifest& m) {
  return {{"digest", manifest_digest(m)}, {"tool_version", m.tool_version}};
}

void write_manifest(const RunManifest& m, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.ini");
  if (!out) throw Error("cannot write '" + (dir / "manifest.ini").string() + "'");
  out << serialize_manifest(m);
}

const char* yes(bool b) { return b ? "true" : "false"; }

void warn_regime(const ModelParams& p, std::ostream& err) {
  const RegimeReport r = classify_regime(p);
  for (const std::string& n : r.notes) err << "warning: " << n << "\n";
}

CutOff make_cutoff(const ExperimentSpec& e, const Grid& g) {
  if (e.cutoff == "quartic") return CutOff::quartic(g, e.cutoff_r, e.cutoff_center);
  if (e.cutoff == "smooth_step") return CutOff::smooth_step(g, e.cutoff_s, e.cutoff_delta);
  return CutOff::one(g);
}

FspOptions fsp_options(const RunManifest& m) {
  FspOptions o;
  o.snapshot_every = m.experiment.snapshot_every;
  o.eps_floor = m.experiment.fsp_eps;
  o.edge_rel_threshold = m.experiment.edge_rel_threshold;
  o.allow_outside_regime = m.experiment.allow_outside_regime;
  return o;
}

std::optional<FitWindow> contact_fit(const Trajectory& tr, double edge, int window, int skip,
                                     std::ostream& err) {
  if (tr.snapshots.empty()) return std::nullopt;
  const Field& f = tr.snapshots.back();
  try {
    FitWindow w;
    w.exponent = fit_contact_exponent(f, tr.grid, edge, window, Side::Right, tr.lift, 1e-12, skip);
    for (int i = tr.grid.cells() - 1, used = 0, skipped = 0; i >= 0 && used < window; --i) {
      const double x = tr.grid.center(i);
      const double v = f[i] - tr.lift;
      if (x >= edge || !(v > 1e-12)) continue;
      if (skipped < skip) {
        ++skipped;
        continue;
      }
      w.log_distance.push_back(std::log(edge - x));
      w.log_height.push_back(std::log(v));
      ++used;
    }
    return w;
  } catch (const FitError& e) {
    err << "warning: contact fit skipped: " << e.what() << "\n";
    return std::nullopt;
  }
}

int cmd_run(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  const RunManifest m = load_config(a.config, a.sets);
  warn_regime(m.params, err);
  const Grid grid = m.make_grid();
  const Field u0 = generate(m.initial, grid);
  const fs::path dir = output_dir(a, "run", manifest_digest(m));
  write_manifest(m, dir);
  const Header h = base_header(m);
  Trajectory tr;
  int code = kExitOk;
  try {
    tr = run(u0, grid, m.params, m.controls, m.experiment.t_end, m.experiment.snapshot_every);
  } catch (const RunFailure& e) {
    tr = e.partial();
    err << "error: " << e.what() << "\n";
    code = kExitSolver;
  }
  write_trajectory(tr, dir, h, m.experiment.alpha, m.experiment.edge_rel_threshold);
  PlotBundle b;
  b.trajectory = &tr;
  emit_plots(b, dir / "plots");
  const double m0 = mass(tr.snapshots.front(), grid);
  const double m1 = mass(tr.snapshots.back(), grid);
  out << "steps=" << tr.steps.size() << "\n";
  out << "t_final=" << format_double(tr.snapshots.back().time) << "\n";
  out << "mass_drift=" << format_double(m0 != 0.0 ? std::abs(m1 - m0) / m0 : 0.0) << "\n";
  for (const RunEvent& e : tr.events) out << "event=" << to_string(e.kind) << "@" << format_double(e.t) << "\n";
  out << "out=" << dir.string() << "\n";
  return code;
}

int cmd_fsp(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  const RunManifest m = load_config(a.config, a.sets);
  warn_regime(m.params, err);
  const Grid grid = m.make_grid();
  const Field u0 = generate(m.initial, grid);
  const fs::path dir = output_dir(a, "fsp", manifest_digest(m));
  write_manifest(m, dir);
  const Header h = base_header(m);
  FspVerdict v;
  int code = kExitOk;
  try {
    v = run_fsp_experiment(m.params, u0, grid, m.controls, m.experiment.t_end, fsp_options(m));
  } catch (const FspFailure& e) {
    v = e.partial();
    err << "error: " << e.what() << "\n";
    code = kExitSolver;
  }
  write_verdict(v, dir, h);
  PlotBundle b;
  b.verdict = &v;
  if (!v.trajectory.empty()) {
    write_trajectory(v.trajectory, dir, h, m.experiment.alpha, m.experiment.edge_rel_threshold);
    b.trajectory = &v.trajectory;
    if (!v.edge_curve.empty()) b.fit = contact_fit(v.trajectory, v.edge_curve.back().second, m.experiment.fit_window,
                                                       m.experiment.fit_skip, err);

    const double alpha = m.experiment.fsp_alpha;
    ModelParams p = m.params;
    p.eps = v.eps_used;
    if (alpha > 0.0 && alpha < 2.0 - p.n && v.trajectory.snapshots.size() > 1) {
      std::vector<double> s_grid;
      const double a_w = grid.half_width();
      for (int j = 0; j <= 20; ++j) s_grid.push_back(a_w * j / 21.0);
      const EnergyFunctions ef = energy_functions(v.trajectory, alpha, p, s_grid);
      std::vector<std::pair<std::string, std::string>> rows;
      {
        std::ofstream f(dir / "energy_functions.csv");
        for (const auto& [k, val] : h) f << "# " << k << "=" << val << "\n";
        f << "s,J,E,I,h0\n";
        for (std::size_t j = 0; j < s_grid.size(); ++j) {
          f << format_double(s_grid[j]) << ',' << format_double(ef.J[j]) << ',' << format_double(ef.E[j]) << ','
            << format_double(ef.I[j]) << ',' << format_double(ef.h0[j]) << '\n';
        }
      }
      b.reports.push_back(verify_fsp_system(ef, p, ef.T));
      write_reports(b.reports, dir / "reports.csv", h);
    } else {
      err << "warning: energy functions need 0 < fsp_alpha < 2 - n; skipped\n";
    }
  }
  emit_plots(b, dir / "plots");
  out << "finite_speed=" << yes(v.finite_speed) << "\n";
  out << "threshold_satisfied=" << yes(v.threshold_satisfied) << "\n";
  out << "max_edge_speed=" << format_double(v.max_edge_speed) << "\n";
  if (v.reached_boundary_at) out << "reached_boundary_at=" << format_double(*v.reached_boundary_at) << "\n";
  out << "eps_used=" << format_double(v.eps_used) << "\n";
  out << "clipped_mass_relative=" << format_double(v.clipped_mass_relative) << "\n";
  if (b.fit) out << "contact_exponent=" << format_double(b.fit->exponent) << "\n";
  for (const EstimateReport& r : b.reports) {
    out << r.name << ".calibrated_constant=" << format_double(r.terms.at("calibrated_constant")) << "\n";
  }
  out << "out=" << dir.string() << "\n";
  return code;
}

int cmd_sweep(const CommonArgs& a, std::ostream& out, std::ostream& err) {
  const RunManifest m = load_config(a.config, a.sets);
  const Grid grid = m.make_grid();
  const Field u0 = generate(m.initial, grid);
  const fs::path dir = output_dir(a, "sweep", manifest_digest(m));
  write_manifest(m, dir);
  const Header h = base_header(m);
  const SweepAxis axis{m.experiment.sweep_axis, m.experiment.sweep_values};
  const std::vector<SweepPoint> pts = sweep(m.params, axis, u0, grid, m.controls, m.experiment.t_end, fsp_options(m));
  fs::create_directories(dir);
  std::ofstream f(dir / "sweep.csv");
  for (const auto& [k, v] : h) f << "# " << k << "=" << v << "\n";
  f << "# axis=" << axis.name << "\n";
  f << "value,finite_speed,threshold_satisfied,max_edge_speed,reached_boundary_at,error\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const FspVerdict& v = pts[i].verdict;
    char name[32];
    std::snprintf(name, sizeof name, "point-%03zu", i);
    write_verdict(v, dir / name, h);
    const bool ok = pts[i].error.empty();
    f << format_double(axis.values[i]) << ',';
    if (ok) {
      f << yes(v.finite_speed) << ',' << yes(v.threshold_satisfied) << ',' << format_double(v.max_edge_speed) << ','
        << (v.reached_boundary_at ? format_double(*v.reached_boundary_at) : "");
    } else {
      f << ",,,";
    }
    f << ',' << pts[i].error << '\n';
    out << axis.name << "=" << format_double(axis.values[i]);
    if (ok) {
      out << " finite_speed=" << yes(v.finite_speed) << " max_edge_speed=" << format_double(v.max_edge_speed)
          << " status=ok";
    } else {
      out << " status=error";
    }
    out << std::endl;
    if (!ok) err << "warning: point " << i << ": " << pts[i].error << "\n";
  }
  PlotBundle b;
  b.sweep = &pts;
  b.sweep_axis = axis.name;
  emit_plots(b, dir / "plots");
  out << "out=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_audit(const CommonArgs& a, const std::string& traj_path, std::ostream& out, std::ostream& err) {
  const RunManifest m = load_config(a.config, a.sets);
  fs::path file = traj_path;
  if (file.empty()) {
    if (a.config.empty()) throw InputError("audit needs --trajectory or a --config next to trajectory.csv");
    file = fs::path(a.config).parent_path() / "trajectory.csv";
  }
  const Trajectory tr = read_trajectory(file, m.params);
  if (tr.snapshots.empty()) throw InputError("trajectory '" + file.string() + "' has no snapshots");
  const CutOff zeta = make_cutoff(m.experiment, tr.grid);
  const double alpha = m.experiment.alpha;
  const double gamma = m.experiment.gamma.value_or((alpha + m.params.n + 1.0) / 3.0);
  std::vector<EstimateReport> reports;
  reports.push_back(audit_local_entropy(tr, alpha, gamma, zeta, m.params));
  if (classify_regime(m.params).local_energy) {
    reports.push_back(audit_local_energy(tr, zeta, m.params));
  } else {
    err << "note: local energy audit skipped; its hypotheses do not hold\n";
  }
  if (tr.grid.periodic() && m.params.n > 0.5 && m.params.n < 3.0) {
    reports.push_back(bernis_check(tr.snapshots.back(), tr.grid, zeta, m.params.n));
  }
  const fs::path dir = a.out.empty() ? file.parent_path() : fs::path(a.out);
  write_reports(reports, dir / "reports.csv", base_header(m));
  PlotBundle b;
  b.reports = reports;
  emit_plots(b, dir / "plots");
  for (const EstimateReport& r : reports) {
    out << r.name << ": holds=" << yes(r.holds) << " lhs=" << format_double(r.lhs) << " rhs=" << format_double(r.rhs);
    const auto it = r.terms.find("calibrated_constant");
    if (it != r.terms.end()) out << " calibrated_constant=" << format_double(it->second);
    const auto c = r.terms.find("empirical_constant");
    if (c != r.terms.end()) out << " empirical_constant=" << format_double(c->second);
    out << "\n";
  }
  return kExitOk;
}

int cmd_regime(const CommonArgs& a, std::ostream& out) {
  const RunManifest m = load_config(a.config, a.sets);
  const RegimeReport r = classify_regime(m.params);
  out << "weak_existence=" << yes(r.weak_existence) << "\n";
  out << "weak_case=" << r.weak_case << "\n";
  out << "strong_entropy=" << yes(r.strong_entropy) << "\n";
  out << "local_energy=" << yes(r.local_energy) << "\n";
  out << "fsp_strong_slip=" << yes(r.fsp_strong_slip) << "\n";
  out << "fsp_weak_slip=" << yes(r.fsp_weak_slip) << "\n";
  out << "fsp=" << yes(r.fsp_strong_slip || r.fsp_weak_slip) << "\n";
  out << "via_bound=" << yes(r.via_bound) << "\n";
  for (const std::string& n : r.notes) out << "note=" << n << "\n";
  if (!a.out.empty()) {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"weak_existence", yes(r.weak_existence)}, {"weak_case", r.weak_case},
        {"strong_entropy", yes(r.strong_entropy)}, {"local_energy", yes(r.local_energy)},
        {"fsp_strong_slip", yes(r.fsp_strong_slip)}, {"fsp_weak_slip", yes(r.fsp_weak_slip)},
        {"via_bound", yes(r.via_bound)}};
    for (const std::string& n : r.notes) rows.emplace_back("note", n);
    write_key_values(fs::path(a.out) / "regime.csv", base_header(m), rows);
  }
  return kExitOk;
}

// key=value pairs for the lemma calculators, from [lemma] in --config and --set.
std::map<std::string, std::string> lemma_args(const CommonArgs& a) {
  std::map<std::string, std::string> kv;
  auto put = [&](const std::string& item, int line) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + item + "'", line);
    std::string k = item.substr(0, eq), v = item.substr(eq + 1);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    k = trim(k);
    if (k.rfind("lemma.", 0) == 0) k = k.substr(6);
    kv[k] = trim(v);
  };
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw InputError("cannot open config '" + a.config + "'");
    std::string line, section;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#' || line[b] == ';') continue;
      if (line[b] == '[') {
        section = line.substr(b + 1, line.find(']') - b - 1);
        if (section != "lemma") throw ConfigError("lemma configs accept only a [lemma] section", n);
        continue;
      }
      if (section != "lemma") throw ConfigError("key outside of [lemma]", n);
      put(line, n);
    }
  }
  for (const std::string& s : a.sets) put(s, 0);
  return kv;
}

int cmd_lemma(const CommonArgs& a, const std::string& kind, std::ostream& out) {
  std::map<std::string, std::string> kv = lemma_args(a);
  auto take = [&](const std::string& k) {
    const auto it = kv.find(k);
    if (it == kv.end()) throw InputError("invalid parameter '" + k + "': required by lemma " + kind);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  std::vector<std::pair<std::string, std::string>> rows;
  if (kind == "stampacchia") {
    const double c0 = parse_double(take("c0"), "c0");
    const double alpha = parse_double(take("alpha"), "alpha");
    const double beta = parse_double(take("beta"), "beta");
    const double g0 = parse_double(take("g0"), "g0");
    if (!kv.empty()) throw InputError("unknown lemma key '" + kv.begin()->first + "'");
    const StampacchiaBound b = stampacchia_s0(c0, alpha, beta, g0);
    rows = {{"closed_form", format_double(b.closed_form)},
            {"scaling_form", format_double(b.scaling_form)},
            {"brute_force", format_double(b.brute_force)},
            {"delta0", format_double(b.delta0)}};
  } else if (kind == "system") {
    const auto c = parse_double_list(take("c"), "c");
    const auto alpha = parse_double_list(take("alpha"), "alpha");
    const auto beta = parse_double_list(take("beta"), "beta");
    const auto g0 = parse_double_list(take("g0"), "g0");
    const double s1 = kv.count("s1") ? parse_double(take("s1"), "s1") : 0.0;
    if (!kv.empty()) throw InputError("unknown lemma key '" + kv.begin()->first + "'");
    const StampacchiaSystemBound b = stampacchia_system(c, alpha, beta, g0, s1);
    rows = {{"g_s1", format_double(b.g_s1)}, {"Q", format_double(b.Q)},   {"s0", format_double(b.s0)},
            {"C", format_double(b.C)},       {"delta0", format_double(b.delta0)}, {"l", std::to_string(b.l)}};
  } else {
    throw InputError("unknown lemma '" + kind + "'; expected stampacchia or system");
  }
  for (const auto& [k, v] : rows) out << k << "=" << v << "\n";
  if (!a.out.empty()) write_key_values(fs::path(a.out) / ("lemma_" + kind + ".csv"), {{"lemma", kind}}, rows);
  return kExitOk;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"thin-film laboratory"};
  app.require_subcommand(1);
  CommonArgs common;
  std::string traj_path, lemma_kind;
  CLI::App* run_cmd = app.add_subcommand("run", "single simulation");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "finite-speed experiments over one parameter axis");
  CLI::App* fsp_cmd = app.add_subcommand("fsp", "finite-speed experiment and verdict");
  CLI::App* audit_cmd = app.add_subcommand("audit", "estimate reports on a stored trajectory");
  CLI::App* regime_cmd = app.add_subcommand("regime", "print the hypothesis report");
  CLI::App* lemma_cmd = app.add_subcommand("lemma", "Stampacchia calculators");
  for (CLI::App* c : {run_cmd, sweep_cmd, fsp_cmd, audit_cmd, regime_cmd, lemma_cmd}) add_common(c, common);
  audit_cmd->add_option("--trajectory", traj_path, "trajectory.csv to audit");
  lemma_cmd->add_option("kind", lemma_kind, "stampacchia or system")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*run_cmd) return cmd_run(common, out, err);
    if (*sweep_cmd) return cmd_sweep(common, out, err);
    if (*fsp_cmd) return cmd_fsp(common, out, err);
    if (*audit_cmd) return cmd_audit(common, traj_path, out, err);
    if (*regime_cmd) return cmd_regime(common, out);
    if (*lemma_cmd) return cmd_lemma(common, lemma_kind, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const StepFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const FspFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const NotApplicableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

} // namespace thinfilm
