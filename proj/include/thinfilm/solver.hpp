#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "thinfilm/error.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/params.hpp"

namespace thinfilm {

struct SolverControls {
  double tol_newton = 1e-10; // on dt*|R|_inf / mean(u)
  int max_newton = 12;
  int max_rejects = 30;
  double dt_init = 1e-6;
  double dt_min = 1e-14;
  double dt_max = 1e-2;
  double grow = 1.2;
  int easy_iters = 4;
  double touchdown_tol = 1e-9;
  double tol_neg = 1e-10;
  // Raise the Newton tolerance to the floating-point floor of the residual.
  bool roundoff_floor = true;

  void validate() const;
  bool operator==(const SolverControls&) const = default;
};

struct StepStats {
  double t = 0.0; // time at the end of the step
  double dt_used = 0.0;
  int newton_iters = 0;
  double residual = 0.0;
  double mass_drift = 0.0; // relative, this step
  int rejected = 0;
  double clipped_mass = 0.0;
};

struct RunEvent {
  enum class Kind { Touchdown, StepFailure, BoundaryContact };
  Kind kind = Kind::Touchdown;
  double t = 0.0;
  std::string message;
};

std::string to_string(RunEvent::Kind kind);

struct Trajectory {
  ModelParams params;
  Grid grid;
  double lift = 0.0; // constant added to the raw initial data
  std::vector<Field> snapshots;
  std::vector<StepStats> steps;
  std::vector<RunEvent> events;
  double clipped_mass = 0.0; // cumulative

  bool empty() const { return snapshots.empty(); }
  bool terminated_early() const;
};

// Run aborted by a step failure; carries everything accepted so far.
class RunFailure : public StepFailure {
public:
  RunFailure(const StepFailure& cause, Trajectory partial)
      : StepFailure(cause), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

private:
  Trajectory partial_;
};

// u0 + eps^theta.
Field prepare_initial_data(const Field& u0, const ModelParams& p);

double face_mobility(double uL, double uR, const ModelParams& p);

std::vector<double> assemble_residual(const Field& u_new, const Field& u_old, double dt,
                                      const Grid& grid, const ModelParams& p);

// One implicit Euler step starting at dt, halving on rejection.
std::pair<Field, StepStats> step(const Field& u, double dt, const Grid& grid,
                                 const ModelParams& p, const SolverControls& ctrl);

// Integrates the lifted u0 to t_end.  Snapshots land exactly on multiples of
// snapshot_every and on t_end.
Trajectory run(const Field& u0, const Grid& grid, const ModelParams& p,
               const SolverControls& ctrl, double t_end, double snapshot_every);

// Index ranges [first, last] of maximal runs with u < tol.
std::vector<std::pair<int, int>> dry_runs(std::span<const double> u, double tol);

} // namespace thinfilm
