#include "thinfilm/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thinfilm/error.hpp"

namespace thinfilm {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InputError("invalid parameter '" + field + "': " + what);
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

} // namespace

void ModelParams::validate() const {
  require(nu == 1 || nu == -1, "nu", "must be +1 or -1, got " + std::to_string(nu));
  require(std::isfinite(n) && n > 0.0, "n", "must be > 0");
  require(std::isfinite(m), "m", "must be finite");
  require(std::isfinite(M), "M", "must be finite");
  require(std::isfinite(A) && A >= 0.0, "A", "must be >= 0");
  require(A == 0.0 || M > m, "M", "must exceed m when A > 0");
  require(std::isfinite(eps) && eps >= 0.0, "eps", "must be >= 0");
  require(theta > 0.0 && theta <= 0.4, "theta", "must lie in (0, 2/5]");
  require(std::isfinite(half_width) && half_width > 0.0, "half_width", "must be > 0");
  switch (potential.kind) {
    case PotentialKind::PowerLaw:
      break;
    case PotentialKind::RationalGravity:
      require(potential.B > 0.0, "B", "must be > 0 for rational_gravity");
      require(potential.G > 0.0, "G", "must be > 0 for rational_gravity");
      require(potential.nubar == 1 || potential.nubar == -1, "nubar", "must be +1 or -1");
      break;
    case PotentialKind::ExponentialPolar:
      require(potential.b1 > 0.0, "b1", "must be > 0 for exponential_polar");
      require(potential.b2 > 0.0, "b2", "must be > 0 for exponential_polar");
      break;
  }
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::PowerLaw: return "power_law";
    case PotentialKind::RationalGravity: return "rational_gravity";
    case PotentialKind::ExponentialPolar: return "exponential_polar";
  }
  return "power_law";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "power_law") return PotentialKind::PowerLaw;
  if (name == "rational_gravity") return PotentialKind::RationalGravity;
  if (name == "exponential_polar") return PotentialKind::ExponentialPolar;
  throw InputError("invalid parameter 'potential': unknown variant '" + name + "'");
}

RegimeReport classify_regime(const ModelParams& p) {
  RegimeReport r;
  int nu = p.nu;
  double n = p.n;
  double m = p.m;
  double A = p.A;
  double M = p.M;
  if (p.potential.kind != PotentialKind::PowerLaw) {
    // The variants are majorized by nu=1, A=0 power laws with m-n = -1 or 0.
    r.via_bound = true;
    nu = 1;
    A = 0.0;
    m = p.potential.kind == PotentialKind::RationalGravity ? n - 1.0 : n;
    r.notes.push_back("classified via bound: " + to_string(p.potential.kind) +
                      " treated as nu=1, A=0, m-n=" + fmt(m - n));
  }
  auto& notes = r.notes;
  const bool m_below_M = A == 0.0 || m < M;
  if (!m_below_M) notes.push_back("A > 0 requires m < M");

  // Existence of weak solutions.
  if (!(m > n - 2.0)) notes.push_back("existence requires n-2 < m (m-n=" + fmt(m - n) + ")");
  if (nu == -1) {
    if (m > n - 2.0 && m_below_M) r.weak_case = "i";
  } else if (A > 0.0) {
    if (m > n - 2.0 && m < M) r.weak_case = "ii";
  } else {
    if (!(m < n + 2.0))
      notes.push_back("nu=1, A=0 requires m < n+2; m >= n+2 is the blow-up boundary (m=" + fmt(m) +
                      ", n+2=" + fmt(n + 2.0) + ")");
    if (m > n - 2.0 && m < n + 2.0) r.weak_case = "iii";
  }
  r.weak_existence = !r.weak_case.empty();
  if (!r.weak_existence) {
    notes.push_back("uncovered: no existence theorem applies");
    return r;
  }

  // Strong entropy solutions.
  if (nu == -1) {
    r.strong_entropy = m - n >= -2.0 && m_below_M;
  } else {
    r.strong_entropy = m - n > -1.5 && (A > 0.0 || m - n < 2.0) && m_below_M;
    if (!(m - n > -1.5)) notes.push_back("strong entropy solutions for nu=1 require m-n > -3/2");
  }
  if (r.strong_entropy && !(n < 3.0))
    notes.push_back("C^1 regularity at the contact line is only concluded for 0<n<3");

  // Local energy estimate (weak slippage range).
  const bool tail_ok = m_below_M && !(nu == 1 && A == 0.0 && !(m < n + 2.0));
  if (r.strong_entropy) {
    bool ok = n >= 2.0 && n < 3.0 && tail_ok;
    if (nu == -1) {
      ok = ok && m - 0.75 * n >= -1.0;
    } else if (n < 2.5) {
      ok = ok && m - 2.0 * n / 3.0 > -2.0 / 3.0;
    } else {
      ok = ok && m - n > -1.5;
    }
    r.local_energy = ok;
    if (!ok && n >= 2.0 && n < 3.0)
      notes.push_back("local energy estimate: exponent condition on m fails");
  }

  // Finite speed of propagation.
  if (r.strong_entropy) {
    const bool m_ok = nu == -1 ? m > 0.0 : m > n / 2.0;
    r.fsp_strong_slip = n > 0.0 && n < 2.0 && tail_ok && m_ok;
    r.fsp_weak_slip = n > 0.5 && n < 3.0 && m > n / 2.0 && tail_ok;
    if (!(m > n / 2.0)) notes.push_back("finite speed (weak slippage) requires m > n/2");
  }
  return r;
}

double alpha_star(double n) {
  if (!(n > 0.0 && n < 3.0)) throw DomainError("alpha_star: n must lie in (0,3)");
  return n <= 1.5 ? 0.5 - n : -1.0;
}

double beta_zero_bound(double n) {
  if (!(n > 0.0 && n < 3.0)) throw DomainError("beta_zero_bound: n must lie in (0,3)");
  return n <= 1.5 ? 2.0 : 3.0 / n;
}

Interval gamma_window(double alpha, double n) {
  const double t = alpha + n;
  const double disc = (t - 2.0) * (1.0 - 2.0 * t);
  if (!(t >= 0.5 && t <= 2.0) || disc < 0.0)
    throw DomainError("gamma_window: alpha+n=" + fmt(t) + " outside [1/2, 2], window is empty");
  const double root = std::sqrt(disc);
  return Interval{(t + 1.0 - root) / 3.0, (t + 1.0 + root) / 3.0, false};
}

Interval eta_window(double n, double m) {
  const double lo = 1.0 - n / 2.0;
  const double hi = lo + 1.5 * (2.0 * m - n);
  return Interval{lo, hi, !(2.0 * m - n > 0.0)};
}

Interval admissible_alpha(const ModelParams& p, bool positive_data) {
  double lo = positive_data ? 0.5 - p.n : alpha_star(p.n);
  lo = std::max(lo, -p.m - 1.0);
  if (p.nu == 1) lo = std::max(lo, -2.0 * p.m + p.n - 1.0);
  const double hi = 2.0 - p.n;
  return Interval{lo, hi, !(lo < hi)};
}

bool alpha_admissible(const ModelParams& p, double alpha, bool positive_data) {
  if (alpha == 0.0 || alpha == -1.0) return false;
  return admissible_alpha(p, positive_data).contains_open(alpha);
}

} // namespace thinfilm
