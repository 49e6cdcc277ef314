#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thinfilm/diagnostics.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/solver.hpp"

namespace thinfilm {

// Space-time integrals of (u - lift)_+^{beta_i + alpha + 1} over x > s, t < T.
struct EnergyFunctions {
  std::vector<double> s_grid;
  std::vector<double> J, E, I;
  std::vector<double> h0; // integral of u0^{1+alpha} over x > s
  std::array<double, 3> beta{};
  double alpha = 0.0;
  double T = 0.0;
};

EnergyFunctions energy_functions(const Trajectory& traj, double alpha, const ModelParams& p,
                                 const std::vector<double>& s_grid);

// beta_3 = 2m - n, or 2*mbar - n with mbar = (n/2 + min(6-n, m))/2 once m >= 6-n.
std::array<double, 3> fsp_betas(const ModelParams& p);
double fsp_mu(double beta, double n, double alpha);

struct StampacchiaBound {
  double closed_form = 0.0; // 2^{b/(b-1)} (c0 g0^{b-1})^{1/(2b)}
  double scaling_form = 0.0; // same with exponent 1/(alpha*beta)
  double brute_force = 0.0; // s0* = 2 delta0*
  double delta0 = 0.0;
};

StampacchiaBound stampacchia_s0(double c0, double alpha, double beta, double g0);

// Iterates G_{k+1} = c0 (delta_k^{-alpha} G_k)^beta, delta_k = delta0 2^{-k};
// true when the majorant falls below floor and keeps falling.
bool stampacchia_majorant_vanishes(double c0, double alpha, double beta, double g0, double delta0,
                                   double floor = 1e-30);

struct StampacchiaSystemBound {
  double g_s1 = 0.0;
  double Q = 0.0;
  double s0 = 0.0;
  double C = 0.0; // (s0 - s1) over the bracketed sum; 0 when g(s1) = 0
  double delta0 = 0.0;
  int l = 0;
};

StampacchiaSystemBound stampacchia_system(const std::vector<double>& c, const std::vector<double>& alpha,
                                          const std::vector<double>& beta, const std::vector<double>& g0,
                                          double s1);

bool stampacchia_system_vanishes(const std::vector<double>& c, const std::vector<double>& alpha,
                                 const std::vector<double>& beta, const std::vector<double>& g0,
                                 double delta0, double floor = 1e-30);

EstimateReport verify_fsp_system(const EnergyFunctions& ef, const ModelParams& p, double T);

struct FspOptions {
  double snapshot_every = 0.0; // 0: t_end / 50
  double eps_floor = 1e-12;    // eps used when the parameters carry eps = 0
  double edge_rel_threshold = 1e-7;
  bool allow_outside_regime = false;
};

struct FspVerdict {
  std::vector<std::pair<double, double>> edge_curve; // (t, s(t))
  std::optional<double> reached_boundary_at;
  bool finite_speed = true;
  bool threshold_satisfied = false;
  double max_edge_speed = 0.0;
  double eps_used = 0.0;
  double lift = 0.0;
  double edge_threshold = 0.0;
  double clipped_mass_relative = 0.0;
  std::string failure;
  Trajectory trajectory;
};

class FspFailure : public Error {
public:
  FspFailure(const std::string& msg, FspVerdict partial) : Error(msg), partial_(std::move(partial)) {}
  const FspVerdict& partial() const noexcept { return partial_; }

private:
  FspVerdict partial_;
};

FspVerdict run_fsp_experiment(const ModelParams& p, const Field& u0, const Grid& grid,
                              const SolverControls& ctrl, double t_end, const FspOptions& opts = {});

struct SweepAxis {
  std::string name; // nu, n, m, M, A, eps, theta
  std::vector<double> values;
};

struct SweepPoint {
  ModelParams params;
  FspVerdict verdict;
  std::string error; // empty on success
};

ModelParams with_axis_value(const ModelParams& base, const std::string& name, double value);

// Independent experiments per axis value, run concurrently, returned in axis order.
std::vector<SweepPoint> sweep(const ModelParams& base, const SweepAxis& axis, const Field& u0,
                              const Grid& grid, const SolverControls& ctrl, double t_end,
                              const FspOptions& opts = {});

} // namespace thinfilm
