#pragma once

#include <string>
#include <vector>

namespace thinfilm {

enum class PotentialKind { PowerLaw, RationalGravity, ExponentialPolar };

// Lower-order force h'(u).  PowerLaw uses nu*u^(m-n) - A*u^(M-n); the two
// variants replace it by u/(1+Bu)^2 - nubar*G and (b1/b2)exp(-u/b2).
struct PotentialVariant {
  PotentialKind kind = PotentialKind::PowerLaw;
  double B = 0.0;
  double G = 0.0;
  int nubar = 1;
  double b1 = 0.0;
  double b2 = 0.0;

  bool operator==(const PotentialVariant&) const = default;
};

// One instance of u_t + {u^n(u_xxx + nu u^{m-n} u_x - A u^{M-n} u_x)}_x = 0
// on (-a, a), together with its regularization (eps, theta).
struct ModelParams {
  int nu = 1;
  double n = 1.0;
  double m = 1.0;
  double M = 2.0;
  double A = 0.0;
  double eps = 0.0;
  double theta = 0.4;
  double half_width = 1.0;
  PotentialVariant potential;

  // Throws InputError naming the offending field.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

struct RegimeReport {
  bool weak_existence = false;
  std::string weak_case; // "i", "ii", "iii" or empty
  bool strong_entropy = false;
  bool local_energy = false;
  bool fsp_strong_slip = false;
  bool fsp_weak_slip = false;
  bool via_bound = false; // variant potential classified through its bounding exponent
  std::vector<std::string> notes;
};

// Parameter-level hypotheses of the existence, entropy, local energy and
// finite-speed theorems.  Strict inequalities are strict: boundary values fail.
RegimeReport classify_regime(const ModelParams& p);

// Interval with explicit emptiness; lo == hi with !empty is a single point.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = false;

  bool contains_open(double x) const { return !empty && lo < x && x < hi; }
  bool contains_closed(double x) const { return !empty && lo <= x && x <= hi; }
};

double alpha_star(double n);
double beta_zero_bound(double n);
Interval gamma_window(double alpha, double n);
Interval eta_window(double n, double m);

// Admissible local-entropy exponents alpha for p:
// (max{alpha_lo, -m-1 [, -2m+n-1 if nu=1]}, 2-n) minus {0,-1}.  alpha_lo is
// 1/2-n for strictly positive data and alpha_star(n) otherwise.
Interval admissible_alpha(const ModelParams& p, bool positive_data);
bool alpha_admissible(const ModelParams& p, double alpha, bool positive_data);

} // namespace thinfilm
