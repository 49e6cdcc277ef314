#include "thinfilm/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "thinfilm/config.hpp"
#include "thinfilm/error.hpp"

namespace thinfilm {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_out(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  return out;
}

void put_header(std::ostream& out, const Header& header) {
  for (const auto& [k, v] : header) out << "# " << k << "=" << v << "\n";
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

template <class F>
double or_nan(F f) {
  try {
    return f();
  } catch (const Error&) {
    return kNaN;
  }
}

} // namespace

Header read_header(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open '" + file.string() + "'");
  Header h;
  std::string line;
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    h[line.substr(2, eq - 2)] = line.substr(eq + 1);
  }
  return h;
}

TrajectoryFiles write_trajectory(const Trajectory& traj, const fs::path& dir, const Header& header,
                                 double alpha, double edge_rel_threshold) {
  fs::create_directories(dir);
  TrajectoryFiles files;
  files.trajectory = dir / files.trajectory;
  files.diagnostics = dir / files.diagnostics;
  files.events = dir / files.events;

  Header h = header;
  h["cells"] = std::to_string(traj.grid.cells());
  h["half_width"] = format_double(traj.grid.half_width());
  h["boundary"] = to_string(traj.grid.boundary());
  h["lift"] = format_double(traj.lift);
  h["snapshots"] = std::to_string(traj.snapshots.size());

  {
    std::ofstream out = open_out(files.trajectory);
    put_header(out, h);
    out << "t,x,u\n";
    const std::vector<double> x = traj.grid.centers();
    for (const Field& f : traj.snapshots) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        out << format_double(f.time) << ',' << format_double(x[i]) << ',' << format_double(f[i]) << '\n';
      }
    }
  }
  {
    std::ofstream out = open_out(files.diagnostics);
    Header hd = h;
    hd["entropy_alpha"] = format_double(alpha);
    put_header(out, hd);
    out << "t,mass,energy,entropy,edge_left,edge_right,dt,newton_iters\n";
    double threshold = 0.0;
    if (!traj.snapshots.empty()) {
      threshold = traj.lift + edge_rel_threshold * std::max(traj.snapshots.front().max() - traj.lift, 0.0);
    }
    std::size_t s = 0;
    for (const Field& f : traj.snapshots) {
      double dt = 0.0;
      int iters = 0;
      while (s < traj.steps.size() && traj.steps[s].t <= f.time) {
        dt = traj.steps[s].dt_used;
        iters = traj.steps[s].newton_iters;
        ++s;
      }
      const double E = or_nan([&] { return energy(f, traj.grid, traj.params); });
      const double S = or_nan([&] { return entropy_global(f, traj.grid, alpha, traj.params); });
      double el = kNaN, er = kNaN;
      if (threshold > 0.0) {
        if (const auto e = support_edge(f, traj.grid, threshold, EdgeScope::MainComponent)) {
          el = e->left;
          er = e->right;
        }
      }
      out << format_double(f.time) << ',' << format_double(mass(f, traj.grid)) << ',' << format_double(E) << ','
          << format_double(S) << ',' << format_double(el) << ',' << format_double(er) << ','
          << format_double(dt) << ',' << iters << '\n';
    }
  }
  {
    std::ofstream out = open_out(files.events);
    put_header(out, header);
    out << "t,kind,message\n";
    for (const RunEvent& e : traj.events) {
      out << format_double(e.t) << ',' << to_string(e.kind) << ',' << csv_quote(e.message) << '\n';
    }
  }
  return files;
}

Trajectory read_trajectory(const fs::path& file, const ModelParams& params) {
  const Header h = read_header(file);
  auto need = [&](const std::string& k) {
    const auto it = h.find(k);
    if (it == h.end()) throw InputError("'" + file.string() + "' lacks header key '" + k + "'");
    return it->second;
  };
  Trajectory tr;
  tr.params = params;
  tr.grid = Grid(parse_double(need("half_width"), "half_width"), std::stoi(need("cells")),
                 boundary_from_string(need("boundary")));
  tr.lift = parse_double(need("lift"), "lift");

  std::ifstream in(file);
  std::string line;
  int lineno = 0;
  bool columns = false;
  const int N = tr.grid.cells();
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!columns) {
      if (line != "t,x,u") throw ConfigError("expected column header 't,x,u'", lineno);
      columns = true;
      continue;
    }
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
      throw ConfigError("malformed row '" + line + "'", lineno);
    }
    const double t = parse_double(a, "t");
    if (tr.snapshots.empty() || static_cast<int>(tr.snapshots.back().size()) == N) {
      tr.snapshots.push_back(Field{{}, t});
      tr.snapshots.back().values.reserve(N);
    } else if (tr.snapshots.back().time != t) {
      throw ConfigError("snapshot at t=" + a + " is incomplete", lineno);
    }
    tr.snapshots.back().values.push_back(parse_double(c, "u"));
  }
  if (!tr.snapshots.empty() && static_cast<int>(tr.snapshots.back().size()) != N) {
    throw InputError("last snapshot in '" + file.string() + "' is incomplete");
  }
  return tr;
}

void write_key_values(const fs::path& file, const Header& header,
                      const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ofstream out = open_out(file);
  put_header(out, header);
  out << "key,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << csv_quote(v) << '\n';
}

void write_reports(const std::vector<EstimateReport>& reports, const fs::path& file, const Header& header) {
  std::ofstream out = open_out(file);
  put_header(out, header);
  out << "report,field,value\n";
  for (const EstimateReport& r : reports) {
    out << r.name << ",lhs," << format_double(r.lhs) << '\n';
    out << r.name << ",rhs," << format_double(r.rhs) << '\n';
    out << r.name << ",margin," << format_double(r.margin) << '\n';
    out << r.name << ",holds," << (r.holds ? "true" : "false") << '\n';
    for (const auto& [k, v] : r.terms) out << r.name << ',' << k << ',' << format_double(v) << '\n';
  }
}

void write_verdict(const FspVerdict& v, const fs::path& dir, const Header& header) {
  fs::create_directories(dir);
  std::vector<std::pair<std::string, std::string>> rows = {
      {"finite_speed", v.finite_speed ? "true" : "false"},
      {"threshold_satisfied", v.threshold_satisfied ? "true" : "false"},
      {"reached_boundary_at", v.reached_boundary_at ? format_double(*v.reached_boundary_at) : ""},
      {"max_edge_speed", format_double(v.max_edge_speed)},
      {"eps_used", format_double(v.eps_used)},
      {"lift", format_double(v.lift)},
      {"edge_threshold", format_double(v.edge_threshold)},
      {"clipped_mass_relative", format_double(v.clipped_mass_relative)},
      {"failure", v.failure}};
  write_key_values(dir / "verdict.csv", header, rows);
  std::ofstream out = open_out(dir / "edge_curve.csv");
  put_header(out, header);
  out << "t,s\n";
  for (const auto& [t, s] : v.edge_curve) out << format_double(t) << ',' << format_double(s) << '\n';
}

std::vector<fs::path> emit_plots(const PlotBundle& b, const fs::path& dir) {
  std::vector<fs::path> files;
  std::ostringstream script;
  auto add = [&](const std::string& name) {
    files.push_back(dir / name);
    return open_out(dir / name);
  };

  if (b.trajectory && !b.trajectory->snapshots.empty()) {
    const Trajectory& tr = *b.trajectory;
    const std::vector<double> x = tr.grid.centers();
    {
      std::ofstream out = add("profiles.dat");
      for (const Field& f : tr.snapshots) {
        out << "# t=" << format_double(f.time) << "\n";
        for (std::size_t i = 0; i < f.size(); ++i) out << format_double(x[i]) << ' ' << format_double(f[i]) << '\n';
        out << "\n\n";
      }
    }
    {
      std::ofstream out = add("series.dat");
      out << "# t mass energy\n";
      for (const Field& f : tr.snapshots) {
        out << format_double(f.time) << ' ' << format_double(mass(f, tr.grid)) << ' '
            << format_double(or_nan([&] { return energy(f, tr.grid, tr.params); })) << '\n';
      }
    }
    script << "set output 'profiles.png'\nset xlabel 'x'\nset ylabel 'u'\n"
              "plot for [k=0:*] 'profiles.dat' index k using 1:2 with lines notitle\n"
              "set output 'series.png'\nset xlabel 't'\nset ylabel ''\n"
              "plot 'series.dat' using 1:2 with lines title 'mass', '' using 1:3 with lines title 'energy'\n";
  }
  if (b.verdict && !b.verdict->edge_curve.empty()) {
    std::ofstream out = add("edge_curve.dat");
    out << "# t s\n";
    for (const auto& [t, s] : b.verdict->edge_curve) out << format_double(t) << ' ' << format_double(s) << '\n';
    script << "set output 'edge_curve.png'\nset xlabel 't'\nset ylabel 's(t)'\n"
              "plot 'edge_curve.dat' using 1:2 with linespoints notitle\n";
  }
  if (b.fit && !b.fit->log_distance.empty()) {
    std::ofstream out = add("fit_window.dat");
    out << "# log_distance log_height (exponent=" << format_double(b.fit->exponent) << ")\n";
    for (std::size_t i = 0; i < b.fit->log_distance.size(); ++i) {
      out << format_double(b.fit->log_distance[i]) << ' ' << format_double(b.fit->log_height[i]) << '\n';
    }
    script << "set output 'fit_window.png'\nset xlabel 'log distance'\nset ylabel 'log u'\n"
              "plot 'fit_window.dat' using 1:2 with points notitle\n";
  }
  if (b.sweep && !b.sweep->empty()) {
    std::ofstream out = add("sweep.dat");
    out << "# " << (b.sweep_axis.empty() ? "value" : b.sweep_axis)
        << " max_edge_speed finite_speed threshold_satisfied\n";
    for (const SweepPoint& pt : *b.sweep) {
      double v = 0.0;
      const ModelParams& p = pt.params;
      const std::string& a = b.sweep_axis;
      v = a == "nu" ? p.nu : a == "n" ? p.n : a == "M" ? p.M : a == "A" ? p.A : a == "eps" ? p.eps
        : a == "theta" ? p.theta : p.m;
      if (!pt.error.empty()) {
        out << "# " << format_double(v) << " failed\n";
        continue;
      }
      out << format_double(v) << ' ' << format_double(pt.verdict.max_edge_speed) << ' '
          << (pt.verdict.finite_speed ? 1 : 0) << ' ' << (pt.verdict.threshold_satisfied ? 1 : 0) << '\n';
    }
    script << "set output 'sweep.png'\nset xlabel '" << b.sweep_axis << "'\nset ylabel 'max edge speed'\n"
              "plot 'sweep.dat' using 1:2:3 with points palette pt 7 notitle\n";
  }
  if (!b.reports.empty()) {
    std::ofstream out = add("reports.dat");
    out << "# index name lhs rhs margin holds\n";
    for (std::size_t i = 0; i < b.reports.size(); ++i) {
      const EstimateReport& r = b.reports[i];
      out << i << ' ' << r.name << ' ' << format_double(r.lhs) << ' ' << format_double(r.rhs) << ' '
          << format_double(r.margin) << ' ' << (r.holds ? 1 : 0) << '\n';
    }
    script << "set output 'reports.png'\nset style data histograms\nset xlabel ''\nset ylabel ''\n"
              "plot 'reports.dat' using 3:xtic(2) title 'lhs', '' using 4 title 'rhs'\n";
  }
  if (files.empty()) return files;
  std::ofstream gp = add("plot.gp");
  gp << "set terminal pngcairo size 900,600\n" << script.str();
  return files;
}

} // namespace thinfilm
