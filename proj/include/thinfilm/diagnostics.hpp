#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thinfilm/grid.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/solver.hpp"

namespace thinfilm {

// Sampled spatial weight with its first two derivatives at cell centres.
struct CutOff {
  enum class Kind { Quartic, SmoothStep, One };
  Kind kind = Kind::One;
  double r = 0.0, center = 0.0; // Quartic: (r - |x - center|)_+^4
  double s = 0.0, delta = 1.0;  // SmoothStep: phi((x - s)/delta)
  std::vector<double> zeta, dzeta, d2zeta;

  static CutOff quartic(const Grid& grid, double r, double center = 0.0);
  static CutOff smooth_step(const Grid& grid, double s, double delta);
  static CutOff one(const Grid& grid);

  bool vanishes() const;
};

// C^2 ramp 10r^3 - 15r^4 + 6r^5 clamped to [0, 1], and its derivatives.
double smooth_ramp(double r);
double smooth_ramp_d1(double r);
double smooth_ramp_d2(double r);

inline constexpr double kAuditTol = 1e-9;
inline constexpr double kDerivFloor = 1e-8; // times the mean height

struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool holds = false;
  std::map<std::string, double> terms;

  // Sets margin and holds from lhs, rhs.
  void settle(double tol = kAuditTol);
};

// Smallest K >= 0 with fixed_lhs + scaled_lhs/K <= fixed_rhs + K*scaled_rhs,
// infinity when none exists.
double calibrate(double fixed_lhs, double scaled_lhs, double fixed_rhs, double scaled_rhs);

double mass(const Field& u, const Grid& grid);
double energy(const Field& u, const Grid& grid, const ModelParams& p);
double entropy_global(const Field& u, const Grid& grid, double alpha, const ModelParams& p);

EstimateReport audit_local_entropy(const Trajectory& traj, double alpha, double gamma,
                                   const CutOff& zeta, const ModelParams& p);
EstimateReport audit_local_energy(const Trajectory& traj, const CutOff& zeta, const ModelParams& p);
EstimateReport bernis_check(const Field& u, const Grid& grid, const CutOff& zeta, double n);

struct Edges {
  double left = 0.0;
  double right = 0.0;
};

// Outermost: extremes of {u >= threshold}.  MainComponent: ends of the run
// of cells >= threshold that contains the maximum, so precursor ripples
// beyond a dry gap are not counted.
enum class EdgeScope { Outermost, MainComponent };

std::optional<Edges> support_edge(const Field& u, const Grid& grid, double threshold,
                                  EdgeScope scope = EdgeScope::Outermost);

enum class Side { Left, Right };

// Slope of log(u - baseline) against log|x - edge| over the window_cells
// cells nearest the edge inside the support with u - baseline > fit_floor.
double fit_contact_exponent(const Field& u, const Grid& grid, double edge, int window_cells,
                            Side side = Side::Right, double baseline = 0.0,
                            double fit_floor = 1e-12, int skip_cells = 0);

} // namespace thinfilm
