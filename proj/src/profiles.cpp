#include "thinfilm/profiles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "thinfilm/error.hpp"

namespace thinfilm {

std::string to_string(InitialProfile::Kind kind) {
  switch (kind) {
    case InitialProfile::Kind::Constant: return "constant";
    case InitialProfile::Kind::Bump: return "bump";
    case InitialProfile::Kind::Sine: return "sine";
    case InitialProfile::Kind::Parabola: return "parabola";
    case InitialProfile::Kind::FromFile: return "file";
  }
  return "constant";
}

InitialProfile::Kind profile_kind_from_string(const std::string& name) {
  using K = InitialProfile::Kind;
  for (K k : {K::Constant, K::Bump, K::Sine, K::Parabola, K::FromFile}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("invalid parameter 'profile': unknown profile '" + name + "'");
}

void InitialProfile::validate() const {
  auto bad = [](const std::string& name, const std::string& why) {
    throw InputError("invalid parameter '" + name + "': " + why);
  };
  switch (kind) {
    case Kind::Constant:
      if (!(value >= 0.0)) bad("value", "must be >= 0");
      break;
    case Kind::Bump:
      if (!(width > 0.0)) bad("width", "must be > 0");
      if (!(height >= 0.0)) bad("height", "must be >= 0");
      if (!(power > 0.0)) bad("power", "must be > 0");
      break;
    case Kind::Sine:
      if (!(base >= std::abs(amplitude))) bad("amplitude", "must not exceed base");
      break;
    case Kind::Parabola:
      if (!(right > left)) bad("right", "must exceed left");
      if (!(height >= 0.0)) bad("height", "must be >= 0");
      break;
    case Kind::FromFile:
      if (path.empty()) bad("path", "required for file profiles");
      break;
  }
}

namespace {

std::vector<double> read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file '" + path + "'");
  std::vector<double> u;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<double> cols;
    double v;
    while (ss >> v) cols.push_back(v);
    if (cols.empty()) continue;
    if (cols.size() > 2 || !ss.eof()) {
      throw ConfigError("profile file '" + path + "': expected 'u' or 'x u'", lineno);
    }
    u.push_back(cols.back());
  }
  return u;
}

} // namespace

Field generate(const InitialProfile& pr, const Grid& grid) {
  pr.validate();
  const int N = grid.cells();
  const double a = grid.half_width();
  Field f;
  f.values.resize(N);
  if (pr.kind == InitialProfile::Kind::FromFile) {
    f.values = read_profile_file(pr.path);
    if (static_cast<int>(f.values.size()) != N) {
      throw InputError("profile file has " + std::to_string(f.values.size()) + " values, grid has " +
                       std::to_string(N) + " cells");
    }
  }
  for (int i = 0; i < N; ++i) {
    const double x = grid.center(i);
    double& u = f.values[i];
    switch (pr.kind) {
      case InitialProfile::Kind::Constant: u = pr.value; break;
      case InitialProfile::Kind::Bump: {
        const double r = (x - pr.center) / pr.width;
        u = r * r < 1.0 ? pr.height * std::pow(1.0 - r * r, pr.power) : 0.0;
        break;
      }
      case InitialProfile::Kind::Sine:
        u = std::max(0.0, pr.base + pr.amplitude * std::cos(pr.wavenumber * (x + a)));
        break;
      case InitialProfile::Kind::Parabola: {
        const double w = pr.right - pr.left;
        u = (x > pr.left && x < pr.right) ? 4.0 * pr.height * (x - pr.left) * (pr.right - x) / (w * w) : 0.0;
        break;
      }
      case InitialProfile::Kind::FromFile:
        if (!(u >= 0.0) || !std::isfinite(u)) throw InputError("profile file contains a negative or non-finite value");
        break;
    }
  }
  return f;
}

} // namespace thinfilm
