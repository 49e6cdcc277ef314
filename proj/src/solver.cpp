#include "thinfilm/solver.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "thinfilm/kernels.hpp"
#include "thinfilm/potentials.hpp"

namespace thinfilm {

namespace {

double max_abs(std::span<const double> r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

double sum(std::span<const double> u) { return std::accumulate(u.begin(), u.end(), 0.0); }

bool all_finite(std::span<const double> u) {
  return std::all_of(u.begin(), u.end(), [](double x) { return std::isfinite(x); });
}

void check_sizes(const Field& a, const Grid& grid) {
  if (static_cast<int>(a.size()) != grid.cells()) {
    throw InputError("field has " + std::to_string(a.size()) + " values, grid has " +
                     std::to_string(grid.cells()) + " cells");
  }
}

struct Attempt {
  bool ok = false;
  std::vector<double> u;
  int iters = 0;
  double residual = 0.0;
  double clipped = 0.0; // cell-sum, not yet scaled by dx
  std::string reason;
};

Attempt newton(const Field& old, double dt, const Grid& grid, const ModelParams& p,
               const SolverControls& ctrl) {
  const int N = grid.cells();
  const double dx = grid.dx();
  const double scale = dt / old.mean();
  Attempt a;
  a.u = old.values;
  std::vector<double> R(N), trial(N), Rt(N);
  std::vector<kernels::FaceGradient> grads(grid.interior_faces());
  kernels::omp::assemble_residual(a.u, old.values, dt, grid, p, R);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(N) * 9);
  Eigen::SparseMatrix<double> J(N, N);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;

  for (;;) {
    double tol = ctrl.tol_newton;
    if (ctrl.roundoff_floor) {
      const double terms = kernels::omp::residual_term_scale(a.u, grid, p);
      tol = std::max(tol, 64.0 * DBL_EPSILON * (1.0 + dt * terms / old.mean()));
    }
    a.residual = max_abs(R) * scale;
    if (!std::isfinite(a.residual)) {
      a.reason = "non-finite residual";
      return a;
    }
    if (a.residual < tol) break;
    if (a.iters >= ctrl.max_newton) {
      a.reason = "Newton iteration limit";
      return a;
    }

    kernels::omp::face_gradients(a.u, grid, p, grads);
    trip.clear();
    for (int i = 0; i < N; ++i) trip.emplace_back(i, i, 1.0 / dt);
    for (int f = 0; f < grid.interior_faces(); ++f) {
      const int left = f;
      const int right = (f + 1) % N;
      for (int k = 0; k < 4; ++k) {
        const double d = grads[f].dflux[k] / dx;
        trip.emplace_back(left, grads[f].cells[k], d);
        trip.emplace_back(right, grads[f].cells[k], -d);
      }
    }
    J.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success) {
      a.reason = "singular Jacobian";
      return a;
    }
    Eigen::Map<const Eigen::VectorXd> rhs(R.data(), N);
    const Eigen::VectorXd delta = lu.solve(-rhs);
    if (!delta.allFinite()) {
      a.reason = "non-finite Newton update";
      return a;
    }

    const double rnorm = max_abs(R);
    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h <= 8 && !accepted; ++h, lambda *= 0.5) {
      for (int i = 0; i < N; ++i) trial[i] = a.u[i] + lambda * delta[i];
      if (p.eps > 0.0 && *std::min_element(trial.begin(), trial.end()) <= 0.0) continue;
      kernels::omp::assemble_residual(trial, old.values, dt, grid, p, Rt);
      if (all_finite(Rt) && max_abs(Rt) < rnorm) accepted = true;
    }
    ++a.iters;
    if (!accepted) {
      a.reason = "damping exhausted";
      return a;
    }
    a.u.swap(trial);
    R.swap(Rt);
  }

  if (p.eps == 0.0) {
    for (double& x : a.u) {
      if (x < -ctrl.tol_neg) {
        a.reason = "negative height below tolerance";
        return a;
      }
      if (x < 0.0) {
        a.clipped -= x;
        x = 0.0;
      }
    }
  } else if (*std::min_element(a.u.begin(), a.u.end()) <= 0.0) {
    a.reason = "non-positive height";
    return a;
  }
  a.ok = true;
  return a;
}

std::pair<Field, StepStats> step_detail(const Field& u, double dt, const Grid& grid,
                                        const ModelParams& p, const SolverControls& ctrl,
                                        std::vector<double>* last_iterate) {
  check_sizes(u, grid);
  if (!(dt > 0.0)) throw InputError("invalid parameter 'dt': must be > 0");
  const double m0 = sum(u.values);
  StepStats st;
  double h = dt;
  std::string reason;
  double last_res = 0.0;
  for (int rej = 0; rej <= ctrl.max_rejects; ++rej) {
    if (h < ctrl.dt_min) {
      reason = "dt below dt_min";
      break;
    }
    Attempt a = newton(u, h, grid, p, ctrl);
    if (a.ok) {
      Field out{std::move(a.u), u.time + h};
      st.dt_used = h;
      st.newton_iters = a.iters;
      st.residual = a.residual;
      st.rejected = rej;
      st.clipped_mass = a.clipped * grid.dx();
      st.mass_drift = m0 != 0.0 ? std::abs(sum(out.values) - m0) / std::abs(m0) : 0.0;
      st.t = out.time;
      return {std::move(out), st};
    }
    reason = a.reason;
    last_res = a.residual;
    if (last_iterate) *last_iterate = std::move(a.u);
    h *= 0.5;
  }
  throw StepFailure("step failed at t=" + std::to_string(u.time) + ": " + reason, last_res);
}

bool new_dry_run(std::span<const double> before, std::span<const double> after, double tol) {
  for (auto [a, b] : dry_runs(after, tol)) {
    bool was_dry = false;
    for (int i = a; i <= b && !was_dry; ++i) was_dry = before[i] < tol;
    if (!was_dry) return true;
  }
  return false;
}

} // namespace

std::string to_string(RunEvent::Kind kind) {
  switch (kind) {
    case RunEvent::Kind::Touchdown: return "touchdown";
    case RunEvent::Kind::StepFailure: return "step_failure";
    case RunEvent::Kind::BoundaryContact: return "boundary_contact";
  }
  return "unknown";
}

void SolverControls::validate() const {
  auto bad = [](const char* name, const char* why) {
    throw InputError(std::string("invalid parameter '") + name + "': " + why);
  };
  if (!(tol_newton > 0.0)) bad("tol_newton", "must be > 0");
  if (max_newton < 1) bad("max_newton", "must be >= 1");
  if (max_rejects < 0) bad("max_rejects", "must be >= 0");
  if (!(dt_min > 0.0)) bad("dt_min", "must be > 0");
  if (!(dt_max >= dt_min)) bad("dt_max", "must be >= dt_min");
  if (!(dt_init > 0.0)) bad("dt_init", "must be > 0");
  if (!(grow >= 1.0)) bad("grow", "must be >= 1");
  if (!(touchdown_tol > 0.0)) bad("touchdown_tol", "must be > 0");
  if (!(tol_neg >= 0.0)) bad("tol_neg", "must be >= 0");
}

bool Trajectory::terminated_early() const {
  return std::any_of(events.begin(), events.end(), [](const RunEvent& e) {
    return e.kind != RunEvent::Kind::BoundaryContact;
  });
}

Field prepare_initial_data(const Field& u0, const ModelParams& p) {
  if (u0.values.empty()) throw InputError("initial data is empty");
  bool nonzero = false;
  for (double x : u0.values) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InputError("initial data must be finite and >= 0");
    nonzero = nonzero || x > 0.0;
  }
  if (!nonzero) throw InputError("initial data is identically zero");
  Field out = u0;
  if (p.eps > 0.0) {
    const double lift = std::pow(p.eps, p.theta);
    for (double& x : out.values) x += lift;
  }
  return out;
}

double face_mobility(double uL, double uR, const ModelParams& p) {
  if (uL < 0.0 || uR < 0.0) throw DomainError("face_mobility: negative height");
  return kernels::face_mobility(uL, uR, p.n, p.eps);
}

std::vector<double> assemble_residual(const Field& u_new, const Field& u_old, double dt,
                                      const Grid& grid, const ModelParams& p) {
  check_sizes(u_new, grid);
  check_sizes(u_old, grid);
  if (!(dt > 0.0)) throw InputError("invalid parameter 'dt': must be > 0");
  std::vector<double> r(grid.cells());
  kernels::omp::assemble_residual(u_new.values, u_old.values, dt, grid, p, r);
  return r;
}

std::pair<Field, StepStats> step(const Field& u, double dt, const Grid& grid,
                                 const ModelParams& p, const SolverControls& ctrl) {
  return step_detail(u, dt, grid, p, ctrl, nullptr);
}

std::vector<std::pair<int, int>> dry_runs(std::span<const double> u, double tol) {
  std::vector<std::pair<int, int>> out;
  const int N = static_cast<int>(u.size());
  for (int i = 0; i < N;) {
    if (u[i] < tol) {
      int j = i;
      while (j + 1 < N && u[j + 1] < tol) ++j;
      out.emplace_back(i, j);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

Trajectory run(const Field& u0, const Grid& grid, const ModelParams& p,
               const SolverControls& ctrl, double t_end, double snapshot_every) {
  p.validate();
  ctrl.validate();
  check_sizes(u0, grid);
  if (std::abs(grid.half_width() - p.half_width) > 1e-12 * p.half_width) {
    throw InputError("grid half width does not match parameter 'half_width'");
  }
  if (!(t_end > 0.0)) throw InputError("invalid parameter 't_end': must be > 0");

  Trajectory tr;
  tr.params = p;
  tr.grid = grid;
  tr.lift = p.eps > 0.0 ? std::pow(p.eps, p.theta) : 0.0;
  Field u = prepare_initial_data(u0, p);
  u.time = 0.0;
  tr.snapshots.push_back(u);

  const int N = grid.cells();
  const double every = snapshot_every > 0.0 ? snapshot_every : t_end;
  long next_index = 1;
  double dt = std::clamp(ctrl.dt_init, ctrl.dt_min, ctrl.dt_max);
  bool boundary_flagged = false;
  const double t_tol = 1e-12 * t_end;

  while (u.time < t_end - t_tol) {
    const double target = std::min(next_index * every, t_end);
    const double h = std::min(dt, target - u.time);
    const bool trimmed = h < dt;

    std::vector<double> last;
    Field un;
    StepStats st;
    try {
      std::tie(un, st) = step_detail(u, std::max(h, ctrl.dt_min), grid, p, ctrl, &last);
    } catch (const StepFailure& e) {
      if (p.eps == 0.0 && last.size() == u.size() && new_dry_run(u.values, last, ctrl.touchdown_tol)) {
        tr.events.push_back({RunEvent::Kind::Touchdown, u.time, "rupture while step was failing"});
        return tr;
      }
      tr.events.push_back({RunEvent::Kind::StepFailure, u.time, e.what()});
      if (tr.snapshots.back().time != u.time) tr.snapshots.push_back(u);
      throw RunFailure(e, std::move(tr));
    }
    if (target - un.time <= t_tol) un.time = target;
    st.t = un.time;
    tr.steps.push_back(st);
    tr.clipped_mass += st.clipped_mass;

    if (p.eps == 0.0) {
      if (new_dry_run(u.values, un.values, ctrl.touchdown_tol)) {
        tr.events.push_back({RunEvent::Kind::Touchdown, un.time, "new dry region"});
        tr.snapshots.push_back(std::move(un));
        return tr;
      }
      const double tol = ctrl.touchdown_tol;
      if (!boundary_flagged &&
          ((u[0] < tol && un[0] >= tol) || (u[N - 1] < tol && un[N - 1] >= tol))) {
        boundary_flagged = true;
        tr.events.push_back({RunEvent::Kind::BoundaryContact, un.time, "support reached the boundary"});
      }
    }

    u = std::move(un);
    if (u.time == target) {
      tr.snapshots.push_back(u);
      while (next_index * every <= u.time + t_tol) ++next_index;
    }

    double next = st.dt_used;
    if (st.rejected == 0) {
      if (st.newton_iters <= ctrl.easy_iters) next *= ctrl.grow;
      if (trimmed) next = std::max(next, dt);
    }
    dt = std::clamp(next, ctrl.dt_min, ctrl.dt_max);
  }
  return tr;
}

} // namespace thinfilm
