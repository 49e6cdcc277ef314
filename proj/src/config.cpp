#include "thinfilm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "thinfilm/error.hpp"

namespace thinfilm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int parse_int(const std::string& text, const std::string& name) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InputError("invalid parameter '" + name + "': expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& name) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InputError("invalid parameter '" + name + "': expected true or false, got '" + text + "'");
}

struct Key {
  std::string section;
  std::string name;
  std::function<std::string(const RunManifest&)> get; // nullopt-like: empty string skips output
  std::function<void(RunManifest&, const std::string&)> set;
};

template <class Ref>
Key dbl(const char* sec, const char* name, Ref ref) {
  return {sec, name, [ref](const RunManifest& m) { return format_double(ref(const_cast<RunManifest&>(m))); },
          [ref, name](RunManifest& m, const std::string& v) { ref(m) = parse_double(v, name); }};
}

template <class Ref>
Key integer(const char* sec, const char* name, Ref ref) {
  return {sec, name, [ref](const RunManifest& m) { return std::to_string(ref(const_cast<RunManifest&>(m))); },
          [ref, name](RunManifest& m, const std::string& v) { ref(m) = parse_int(v, name); }};
}

template <class Ref>
Key boolean(const char* sec, const char* name, Ref ref) {
  return {sec, name,
          [ref](const RunManifest& m) { return std::string(ref(const_cast<RunManifest&>(m)) ? "true" : "false"); },
          [ref, name](RunManifest& m, const std::string& v) { ref(m) = parse_bool(v, name); }};
}

template <class Ref>
Key text(const char* sec, const char* name, Ref ref) {
  return {sec, name, [ref](const RunManifest& m) { return ref(const_cast<RunManifest&>(m)); },
          [ref](RunManifest& m, const std::string& v) { ref(m) = v; }};
}

#define REF(expr) [](RunManifest& m) -> auto& { return m.expr; }

const std::vector<Key>& schema() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    k.push_back({"model", "nu", [](const RunManifest& m) { return std::to_string(m.params.nu); },
                 [](RunManifest& m, const std::string& v) { m.params.nu = parse_int(v, "nu"); }});
    k.push_back(dbl("model", "n", REF(params.n)));
    k.push_back(dbl("model", "m", REF(params.m)));
    k.push_back(dbl("model", "M", REF(params.M)));
    k.push_back(dbl("model", "A", REF(params.A)));
    k.push_back(dbl("model", "eps", REF(params.eps)));
    k.push_back(dbl("model", "theta", REF(params.theta)));
    k.push_back(dbl("model", "half_width", REF(params.half_width)));
    k.push_back({"model", "potential", [](const RunManifest& m) { return to_string(m.params.potential.kind); },
                 [](RunManifest& m, const std::string& v) { m.params.potential.kind = potential_kind_from_string(v); }});
    k.push_back(dbl("model", "B", REF(params.potential.B)));
    k.push_back(dbl("model", "G", REF(params.potential.G)));
    k.push_back(integer("model", "nubar", REF(params.potential.nubar)));
    k.push_back(dbl("model", "b1", REF(params.potential.b1)));
    k.push_back(dbl("model", "b2", REF(params.potential.b2)));

    k.push_back(integer("grid", "cells", REF(grid.cells)));
    k.push_back({"grid", "boundary", [](const RunManifest& m) { return to_string(m.grid.boundary); },
                 [](RunManifest& m, const std::string& v) { m.grid.boundary = boundary_from_string(v); }});

    k.push_back(dbl("controls", "tol_newton", REF(controls.tol_newton)));
    k.push_back(integer("controls", "max_newton", REF(controls.max_newton)));
    k.push_back(integer("controls", "max_rejects", REF(controls.max_rejects)));
    k.push_back(dbl("controls", "dt_init", REF(controls.dt_init)));
    k.push_back(dbl("controls", "dt_min", REF(controls.dt_min)));
    k.push_back(dbl("controls", "dt_max", REF(controls.dt_max)));
    k.push_back(dbl("controls", "grow", REF(controls.grow)));
    k.push_back(integer("controls", "easy_iters", REF(controls.easy_iters)));
    k.push_back(dbl("controls", "touchdown_tol", REF(controls.touchdown_tol)));
    k.push_back(dbl("controls", "tol_neg", REF(controls.tol_neg)));
    k.push_back(boolean("controls", "roundoff_floor", REF(controls.roundoff_floor)));

    k.push_back({"initial", "profile", [](const RunManifest& m) { return to_string(m.initial.kind); },
                 [](RunManifest& m, const std::string& v) { m.initial.kind = profile_kind_from_string(v); }});
    k.push_back(dbl("initial", "value", REF(initial.value)));
    k.push_back(dbl("initial", "center", REF(initial.center)));
    k.push_back(dbl("initial", "width", REF(initial.width)));
    k.push_back(dbl("initial", "height", REF(initial.height)));
    k.push_back(dbl("initial", "power", REF(initial.power)));
    k.push_back(dbl("initial", "base", REF(initial.base)));
    k.push_back(dbl("initial", "amplitude", REF(initial.amplitude)));
    k.push_back(dbl("initial", "wavenumber", REF(initial.wavenumber)));
    k.push_back(dbl("initial", "left", REF(initial.left)));
    k.push_back(dbl("initial", "right", REF(initial.right)));
    k.push_back(text("initial", "path", REF(initial.path)));

    k.push_back(dbl("experiment", "t_end", REF(experiment.t_end)));
    k.push_back(dbl("experiment", "snapshot_every", REF(experiment.snapshot_every)));
    k.push_back(dbl("experiment", "alpha", REF(experiment.alpha)));
    k.push_back({"experiment", "gamma",
                 [](const RunManifest& m) { return m.experiment.gamma ? format_double(*m.experiment.gamma) : std::string(); },
                 [](RunManifest& m, const std::string& v) {
                   if (v.empty()) m.experiment.gamma.reset();
                   else m.experiment.gamma = parse_double(v, "gamma");
                 }});
    k.push_back(text("experiment", "cutoff", REF(experiment.cutoff)));
    k.push_back(dbl("experiment", "cutoff_r", REF(experiment.cutoff_r)));
    k.push_back(dbl("experiment", "cutoff_center", REF(experiment.cutoff_center)));
    k.push_back(dbl("experiment", "cutoff_s", REF(experiment.cutoff_s)));
    k.push_back(dbl("experiment", "cutoff_delta", REF(experiment.cutoff_delta)));
    k.push_back(text("experiment", "sweep_axis", REF(experiment.sweep_axis)));
    k.push_back({"experiment", "sweep_values",
                 [](const RunManifest& m) {
                   std::string s;
                   for (double v : m.experiment.sweep_values) s += (s.empty() ? "" : ",") + format_double(v);
                   return s;
                 },
                 [](RunManifest& m, const std::string& v) {
                   m.experiment.sweep_values = parse_double_list(v, "sweep_values");
                 }});
    k.push_back(dbl("experiment", "fsp_eps", REF(experiment.fsp_eps)));
    k.push_back(dbl("experiment", "edge_rel_threshold", REF(experiment.edge_rel_threshold)));
    k.push_back(boolean("experiment", "allow_outside_regime", REF(experiment.allow_outside_regime)));
    k.push_back(dbl("experiment", "fsp_alpha", REF(experiment.fsp_alpha)));
    k.push_back(integer("experiment", "fit_window", REF(experiment.fit_window)));
    k.push_back(integer("experiment", "fit_skip", REF(experiment.fit_skip)));

    k.push_back(text("meta", "tool_version", REF(tool_version)));
    k.push_back(boolean("meta", "deterministic", REF(deterministic)));
    k.push_back(text("meta", "created", REF(created)));
    return k;
  }();
  return keys;
}

#undef REF

const Key* find_key(const std::string& section, const std::string& name) {
  for (const Key& k : schema()) {
    if (k.section == section && k.name == name) return &k;
  }
  return nullptr;
}

bool known_section(const std::string& s) {
  return std::any_of(schema().begin(), schema().end(), [&](const Key& k) { return k.section == s; });
}

// Field name quoted in an "invalid parameter 'x'" message, or empty.
std::string quoted_field(const std::string& msg) {
  const std::string tag = "invalid parameter '";
  const auto p = msg.find(tag);
  if (p == std::string::npos) return "";
  const auto e = msg.find('\'', p + tag.size());
  return e == std::string::npos ? "" : msg.substr(p + tag.size(), e - p - tag.size());
}

} // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& text, const std::string& name) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw InputError("invalid parameter '" + name + "': expected a number, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& name) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, name));
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Key& k : schema()) out.push_back(k.section + "." + k.name);
  return out;
}

void RunManifest::validate() const {
  params.validate();
  controls.validate();
  initial.validate();
  make_grid();
  const ExperimentSpec& e = experiment;
  auto bad = [](const std::string& name, const std::string& why) {
    throw InputError("invalid parameter '" + name + "': " + why);
  };
  if (!(e.t_end > 0.0)) bad("t_end", "must be > 0");
  if (!(e.snapshot_every >= 0.0)) bad("snapshot_every", "must be >= 0");
  if (e.cutoff != "one" && e.cutoff != "quartic" && e.cutoff != "smooth_step") {
    bad("cutoff", "expected one, quartic or smooth_step");
  }
  if (!(e.fsp_eps > 0.0)) bad("fsp_eps", "must be > 0");
  if (!(e.edge_rel_threshold > 0.0)) bad("edge_rel_threshold", "must be > 0");
  if (e.fit_window < 4) bad("fit_window", "must be >= 4");
  if (e.fit_skip < 0) bad("fit_skip", "must be >= 0");
}

RunManifest parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::pair<std::string, std::string>, Entry> entries;
  std::vector<std::pair<std::string, std::string>> order;

  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header '" + s + "'", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!known_section(section)) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    const std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (!find_key(section, key)) throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
    const auto id = std::make_pair(section, key);
    if (entries.count(id)) throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line);
    entries[id] = {value, line};
    order.push_back(id);
  }

  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + ov + "' is not key=value");
    const std::string key = trim(ov.substr(0, eq));
    const std::string value = trim(ov.substr(eq + 1));
    std::pair<std::string, std::string> id;
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
      id = {key.substr(0, dot), key.substr(dot + 1)};
      if (!find_key(id.first, id.second)) throw ConfigError("unknown key '" + key + "' in override");
    } else {
      std::vector<std::string> hits;
      for (const Key& k : schema()) {
        if (k.name == key) hits.push_back(k.section);
      }
      if (hits.empty()) throw ConfigError("unknown key '" + key + "' in override");
      if (hits.size() > 1) {
        std::string all;
        for (const auto& h : hits) all += (all.empty() ? "" : ", ") + h + "." + key;
        throw ConfigError("ambiguous key '" + key + "'; use one of " + all);
      }
      id = {hits.front(), key};
    }
    if (!entries.count(id)) order.push_back(id);
    entries[id] = {value, 0};
  }

  RunManifest m;
  std::map<std::string, int> line_of;
  for (const auto& id : order) {
    const Entry& e = entries[id];
    line_of[id.second] = e.line;
    try {
      find_key(id.first, id.second)->set(m, e.value);
    } catch (const ConfigError&) {
      throw;
    } catch (const InputError& err) {
      throw ConfigError(err.what(), e.line);
    }
  }
  try {
    m.validate();
  } catch (const InputError& err) {
    const std::string field = quoted_field(err.what());
    const auto it = line_of.find(field);
    throw ConfigError(err.what(), it == line_of.end() ? 0 : it->second);
  }
  return m;
}

RunManifest load_config(const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) return parse_config("", overrides);
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string serialize_manifest(const RunManifest& m) {
  std::string out;
  std::string section;
  for (const Key& k : schema()) {
    const std::string v = k.get(m);
    if (k.name == "gamma" && v.empty()) continue;
    if (k.section != section) {
      if (!section.empty()) out += "\n";
      section = k.section;
      out += "[" + section + "]\n";
    }
    out += k.name + " = " + v + "\n";
  }
  return out;
}

std::string manifest_digest(const RunManifest& m) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : serialize_manifest(m)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace thinfilm
