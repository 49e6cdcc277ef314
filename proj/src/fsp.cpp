#include "thinfilm/fsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thinfilm/error.hpp"

namespace thinfilm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Once a log-majorant is this negative it is treated as -infinity.
constexpr double kLogCollapse = -1e6;
constexpr int kMaxIterations = 20000;

double log_sum_exp(const std::vector<double>& x) {
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

// Log-space iteration of L_i <- ln c_i + beta_i * LSE_j(L_j - alpha_j ln delta_k).
bool system_vanishes_log(const std::vector<double>& lc, const std::vector<double>& alpha,
                         const std::vector<double>& beta, std::vector<double> L, double delta0,
                         double lfloor) {
  const std::size_t k = L.size();
  const double ln2 = std::log(2.0);
  std::vector<double> terms(k);
  bool below = false;
  for (int it = 0; it < kMaxIterations; ++it) {
    const double ld = std::log(delta0) - it * ln2;
    const double top = *std::max_element(L.begin(), L.end());
    if (top < kLogCollapse) return true;
    if (top > -kLogCollapse) return false;
    below = top < lfloor;
    for (std::size_t j = 0; j < k; ++j) terms[j] = L[j] - alpha[j] * ld;
    const double S = log_sum_exp(terms);
    for (std::size_t i = 0; i < k; ++i) L[i] = lc[i] + beta[i] * S;
  }
  return below;
}

// Smallest delta0 (to relative 1e-12, rounded up) for which vanishes(delta0) holds.
template <class Pred>
double smallest_delta0(Pred vanishes, double guess) {
  double hi = guess > 0.0 && std::isfinite(guess) ? guess : 1.0;
  int grow = 0;
  while (!vanishes(hi)) {
    hi *= 2.0;
    if (++grow > 2000) throw DomainError("majorant iteration does not vanish for any offset");
  }
  double lo = hi;
  int shrink = 0;
  while (vanishes(lo)) {
    lo *= 0.5;
    if (++shrink > 2000) return 0.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    (vanishes(mid) ? hi : lo) = mid;
  }
  return hi;
}

double overlap(double x, double dx, double s) {
  return std::clamp((x + 0.5 * dx - s) / dx, 0.0, 1.0);
}

} // namespace

std::array<double, 3> fsp_betas(const ModelParams& p) {
  double m3 = p.m;
  if (p.m >= 6.0 - p.n) m3 = 0.5 * (0.5 * p.n + std::min(6.0 - p.n, p.m));
  return {p.n, p.m, 2.0 * m3 - p.n};
}

double fsp_mu(double beta, double n, double alpha) { return 4.0 * beta / (n + 4.0 * (alpha + 1.0)); }

EnergyFunctions energy_functions(const Trajectory& traj, double alpha, const ModelParams& p,
                                 const std::vector<double>& s_grid) {
  if (!(alpha > 0.0 && alpha < 2.0 - p.n)) {
    throw DomainError("energy functions need 0 < alpha < 2 - n");
  }
  if (traj.snapshots.empty()) throw InputError("empty trajectory");
  const Grid& g = traj.grid;
  const int N = g.cells();
  const double dx = g.dx();
  EnergyFunctions ef;
  ef.s_grid = s_grid;
  ef.alpha = alpha;
  ef.beta = fsp_betas(p);
  ef.T = traj.snapshots.back().time - traj.snapshots.front().time;
  const std::size_t S = s_grid.size();
  ef.J.assign(S, 0.0);
  ef.E.assign(S, 0.0);
  ef.I.assign(S, 0.0);
  ef.h0.assign(S, 0.0);

  auto excess = [&](double u) { return std::max(u - traj.lift, 0.0); };
  std::vector<double> w(traj.snapshots.size(), 0.0);
  for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
    const double h = traj.snapshots[k].time - traj.snapshots[k - 1].time;
    w[k - 1] += 0.5 * h;
    w[k] += 0.5 * h;
  }
  std::array<std::vector<double>*, 3> out{&ef.J, &ef.E, &ef.I};
  std::vector<double> powv(N);
  for (int b = 0; b < 3; ++b) {
    const double e = ef.beta[b] + alpha + 1.0;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      if (w[k] == 0.0) continue;
      const Field& f = traj.snapshots[k];
      for (int i = 0; i < N; ++i) {
        const double v = excess(f[i]);
        powv[i] = v > 0.0 ? std::pow(v, e) : 0.0;
      }
      for (std::size_t j = 0; j < S; ++j) {
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
          if (powv[i] != 0.0) acc += powv[i] * overlap(g.center(i), dx, s_grid[j]);
        }
        (*out[b])[j] += w[k] * acc * dx;
      }
    }
  }
  const Field& f0 = traj.snapshots.front();
  for (std::size_t j = 0; j < S; ++j) {
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
      const double v = excess(f0[i]);
      if (v > 0.0) acc += std::pow(v, 1.0 + alpha) * overlap(g.center(i), dx, s_grid[j]);
    }
    ef.h0[j] = acc * dx;
  }
  return ef;
}

bool stampacchia_majorant_vanishes(double c0, double alpha, double beta, double g0, double delta0,
                                   double floor) {
  if (g0 == 0.0) return true;
  return system_vanishes_log({std::log(c0)}, {alpha}, {beta}, {std::log(g0)}, delta0, std::log(floor));
}

StampacchiaBound stampacchia_s0(double c0, double alpha, double beta, double g0) {
  if (!(beta > 1.0)) throw DomainError("stampacchia_s0 requires beta > 1");
  if (!(c0 > 0.0)) throw DomainError("stampacchia_s0 requires c0 > 0");
  if (!(alpha > 0.0)) throw DomainError("stampacchia_s0 requires alpha > 0");
  if (!(g0 >= 0.0) || !std::isfinite(g0)) throw DomainError("stampacchia_s0 requires g0 >= 0");
  StampacchiaBound b;
  if (g0 == 0.0) return b;
  const double lead = std::pow(2.0, beta / (beta - 1.0));
  const double base = c0 * std::pow(g0, beta - 1.0);
  b.closed_form = lead * std::pow(base, 1.0 / (2.0 * beta));
  b.scaling_form = lead * std::pow(base, 1.0 / (alpha * beta));
  b.delta0 = smallest_delta0(
      [&](double d) { return stampacchia_majorant_vanishes(c0, alpha, beta, g0, d); },
      0.5 * b.scaling_form);
  b.brute_force = 2.0 * b.delta0;
  return b;
}

bool stampacchia_system_vanishes(const std::vector<double>& c, const std::vector<double>& alpha,
                                 const std::vector<double>& beta, const std::vector<double>& g0,
                                 double delta0, double floor) {
  std::vector<double> lc(c.size()), L(c.size());
  bool any = false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    lc[i] = std::log(c[i]);
    L[i] = g0[i] > 0.0 ? std::log(g0[i]) : -kInf;
    any = any || g0[i] > 0.0;
  }
  if (!any) return true;
  return system_vanishes_log(lc, alpha, beta, L, delta0, std::log(floor));
}

StampacchiaSystemBound stampacchia_system(const std::vector<double>& c, const std::vector<double>& alpha,
                                          const std::vector<double>& beta, const std::vector<double>& g0,
                                          double s1) {
  const std::size_t k = c.size();
  if (k == 0 || alpha.size() != k || beta.size() != k || g0.size() != k) {
    throw InputError("stampacchia_system: c, alpha, beta, g0 must have the same non-zero length");
  }
  if (!(s1 >= 0.0)) throw DomainError("stampacchia_system requires s1 >= 0");
  StampacchiaSystemBound r;
  while (r.l < static_cast<int>(k) && alpha[r.l] > 0.0) ++r.l;
  if (r.l == 0) throw DomainError("stampacchia_system requires alpha_1 > 0");
  double B = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(c[i] > 0.0)) throw DomainError("stampacchia_system requires c_i > 0");
    if (!(beta[i] > 1.0)) throw DomainError("stampacchia_system requires beta_i > 1");
    if (!(alpha[i] >= 0.0)) throw DomainError("stampacchia_system requires alpha_i >= 0");
    if (!(g0[i] >= 0.0)) throw DomainError("stampacchia_system requires g_i(s1) >= 0");
    B *= beta[i];
  }
  std::vector<double> cb(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double bb = B / beta[i];
    cb[i] = std::pow(c[i], bb);
    r.g_s1 += cb[i] * std::pow(g0[i], bb);
  }
  // Coefficient c^{bb} (c^{bb})^{1-beta} g^{beta-1} shared by Q and s0.
  auto coeff = [&](std::size_t i) {
    return cb[i] * std::pow(cb[i], 1.0 - beta[i]) * std::pow(r.g_s1, beta[i] - 1.0);
  };
  if (r.l < static_cast<int>(k)) {
    double q = 0.0;
    for (std::size_t i = r.l; i < k; ++i) q += coeff(i);
    r.Q = std::pow(static_cast<double>(k), B) * q;
  }
  if (r.Q >= 1.0) throw NotApplicableError("Q(s1) = " + std::to_string(r.Q) + " >= 1");
  r.s0 = s1;
  if (r.g_s1 == 0.0) return r;
  double sum = 0.0;
  for (int i = 0; i < r.l; ++i) sum += std::pow(coeff(i), 1.0 / (alpha[i] * B));
  r.delta0 = smallest_delta0(
      [&](double d) { return stampacchia_system_vanishes(c, alpha, beta, g0, d); }, sum > 0.0 ? sum : 1.0);
  r.s0 = s1 + 2.0 * r.delta0;
  r.C = sum > 0.0 ? (r.s0 - s1) / sum : kInf;
  return r;
}

EstimateReport verify_fsp_system(const EnergyFunctions& ef, const ModelParams& p, double T) {
  const std::size_t S = ef.s_grid.size();
  for (std::size_t j = 0; j < S; ++j) {
    if (ef.s_grid[j] > 0.0 && ef.h0[j] != 0.0) {
      throw PreconditionError("initial data is not supported in {x <= 0}");
    }
  }
  if (!(T > 0.0)) throw InputError("invalid parameter 'T': must be > 0");
  EstimateReport r;
  r.name = "fsp_system";
  std::array<double, 3> mu{};
  for (int b = 0; b < 3; ++b) mu[b] = fsp_mu(ef.beta[b], p.n, ef.alpha);
  std::array<const std::vector<double>*, 3> X{&ef.J, &ef.E, &ef.I};
  std::array<double, 3> D{0.0, 0.0, 0.0};
  double worst_lhs = 0.0, worst_rhs = 0.0, worst = -1.0;
  for (std::size_t j = 0; j < S; ++j) {
    for (std::size_t q = j + 1; q < S; ++q) {
      const double delta = ef.s_grid[q] - ef.s_grid[j];
      if (!(delta > 0.0)) continue;
      const double bracket = (ef.J[j] - ef.J[q]) / std::pow(delta, 4) +
                             (ef.E[j] - ef.E[q]) / (delta * delta) + ef.I[j] + ef.h0[j];
      for (int b = 0; b < 3; ++b) {
        const double x = (*X[b])[q];
        if (x <= 0.0) continue;
        const double base = std::pow(T, (4.0 - mu[b]) / 4.0) * std::pow(bracket, 1.0 + mu[b]);
        const double d = base > 0.0 ? x / base : kInf;
        D[b] = std::max(D[b], d);
        if (d > worst) {
          worst = d;
          worst_lhs = x;
          worst_rhs = base;
        }
      }
    }
  }
  const double Dmax = std::max({D[0], D[1], D[2]});
  r.terms = {{"D_J", D[0]},   {"D_E", D[1]},   {"D_I", D[2]}, {"calibrated_constant", Dmax},
             {"mu_1", mu[0]}, {"mu_2", mu[1]}, {"mu_3", mu[2]},
             {"holds_with_unit_constants", Dmax <= 1.0 ? 1.0 : 0.0}};
  r.lhs = worst_lhs;
  r.rhs = std::isfinite(Dmax) ? Dmax * worst_rhs : worst_rhs;
  r.settle();
  if (!std::isfinite(Dmax)) r.holds = false;
  return r;
}

FspVerdict run_fsp_experiment(const ModelParams& p_in, const Field& u0, const Grid& grid,
                              const SolverControls& ctrl, double t_end, const FspOptions& opts) {
  const int N = grid.cells();
  if (static_cast<int>(u0.size()) != N) throw InputError("field and grid sizes differ");
  for (int i = 0; i < N; ++i) {
    if (grid.center(i) > 0.0 && u0[i] != 0.0) {
      throw PreconditionError("initial data is not supported in {x <= 0}");
    }
  }
  FspVerdict v;
  v.threshold_satisfied = p_in.m > 0.5 * p_in.n;
  if (u0.max() <= 0.0) return v;

  const RegimeReport regime = classify_regime(p_in);
  if (!opts.allow_outside_regime && !regime.fsp_strong_slip && !regime.fsp_weak_slip) {
    throw PreconditionError("parameters lie outside the proven finite-speed regimes");
  }
  ModelParams p = p_in;
  if (p.eps == 0.0) p.eps = opts.eps_floor;
  v.eps_used = p.eps;
  v.lift = p.eps > 0.0 ? std::pow(p.eps, p.theta) : 0.0;
  v.edge_threshold = v.lift + opts.edge_rel_threshold * u0.max();
  const double every = opts.snapshot_every > 0.0 ? opts.snapshot_every : t_end / 50.0;

  try {
    v.trajectory = run(u0, grid, p, ctrl, t_end, every);
  } catch (const RunFailure& e) {
    v.trajectory = e.partial();
    v.failure = e.what();
  }
  const double m0 = mass(u0, grid);
  v.clipped_mass_relative = m0 > 0.0 ? v.trajectory.clipped_mass / m0 : 0.0;

  const double last_center = grid.center(N - 1);
  for (const Field& f : v.trajectory.snapshots) {
    const auto e = support_edge(f, grid, v.edge_threshold, EdgeScope::MainComponent);
    if (!e) continue;
    v.edge_curve.emplace_back(f.time, e->right);
    if (!v.reached_boundary_at && e->right >= last_center) v.reached_boundary_at = f.time;
  }
  for (std::size_t k = 1; k < v.edge_curve.size(); ++k) {
    const double dt = v.edge_curve[k].first - v.edge_curve[k - 1].first;
    if (dt > 0.0) {
      v.max_edge_speed = std::max(v.max_edge_speed,
                                  (v.edge_curve[k].second - v.edge_curve[k - 1].second) / dt);
    }
  }
  v.finite_speed = !v.reached_boundary_at.has_value();
  if (!v.failure.empty()) throw FspFailure(v.failure, std::move(v));
  return v;
}

ModelParams with_axis_value(const ModelParams& base, const std::string& name, double value) {
  ModelParams p = base;
  if (name == "nu") {
    if (value != 1.0 && value != -1.0) throw InputError("invalid parameter 'nu': must be +1 or -1");
    p.nu = static_cast<int>(value);
  } else if (name == "n") {
    p.n = value;
  } else if (name == "m") {
    p.m = value;
  } else if (name == "M") {
    p.M = value;
  } else if (name == "A") {
    p.A = value;
  } else if (name == "eps") {
    p.eps = value;
  } else if (name == "theta") {
    p.theta = value;
  } else {
    throw InputError("unknown sweep axis '" + name + "'");
  }
  p.validate();
  return p;
}

std::vector<SweepPoint> sweep(const ModelParams& base, const SweepAxis& axis, const Field& u0,
                              const Grid& grid, const SolverControls& ctrl, double t_end,
                              const FspOptions& opts) {
  std::vector<SweepPoint> out(axis.values.size());
  for (std::size_t i = 0; i < axis.values.size(); ++i) {
    out[i].params = with_axis_value(base, axis.name, axis.values[i]);
  }
  const int count = static_cast<int>(out.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    try {
      out[i].verdict = run_fsp_experiment(out[i].params, u0, grid, ctrl, t_end, opts);
    } catch (const FspFailure& e) {
      out[i].verdict = e.partial();
      out[i].error = e.what();
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

} // namespace thinfilm
