#include "thinfilm/kernels.hpp"

#include <algorithm>
#include <cassert>

namespace thinfilm::kernels {

namespace omp {

void face_fluxes(std::span<const double> u, const Grid& grid, const ModelParams& p,
                 std::span<double> flux) {
  const int faces = grid.interior_faces();
  assert(static_cast<int>(flux.size()) >= faces);
  const double dx = grid.dx();
#pragma omp parallel for schedule(static)
  for (int f = 0; f < faces; ++f) {
    const auto s = grid.face_stencil(f);
    flux[f] = face_flux(u[s[0]], u[s[1]], u[s[2]], u[s[3]], p, dx);
  }
}

void assemble_residual(std::span<const double> u, std::span<const double> u_old, double dt,
                       const Grid& grid, const ModelParams& p, std::span<double> residual) {
  const int N = grid.cells();
  const int faces = grid.interior_faces();
  std::vector<double> flux(faces);
  face_fluxes(u, grid, p, flux);
  const double inv_dx = 1.0 / grid.dx();
  const double inv_dt = 1.0 / dt;
  const bool periodic = grid.periodic();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double right = (periodic || i < N - 1) ? flux[i] : 0.0;
    const double left = periodic ? flux[(i + N - 1) % N] : (i > 0 ? flux[i - 1] : 0.0);
    residual[i] = (u[i] - u_old[i]) * inv_dt + (right - left) * inv_dx;
  }
}

void face_gradients(std::span<const double> u, const Grid& grid, const ModelParams& p,
                    std::span<FaceGradient> out) {
  const int faces = grid.interior_faces();
  const double dx = grid.dx();
  using D = Dual<4>;
#pragma omp parallel for schedule(static)
  for (int f = 0; f < faces; ++f) {
    const auto s = grid.face_stencil(f);
    const D F = face_flux(D::variable(u[s[0]], 0), D::variable(u[s[1]], 1),
                          D::variable(u[s[2]], 2), D::variable(u[s[3]], 3), p, dx);
    FaceGradient g;
    g.cells = s;
    for (int k = 0; k < 4; ++k) g.dflux[k] = std::isfinite(F.d[k]) ? F.d[k] : 0.0;
    out[f] = g;
  }
}

double residual_term_scale(std::span<const double> u, const Grid& grid, const ModelParams& p) {
  const int faces = grid.interior_faces();
  const double dx = grid.dx();
  const double dx3 = dx * dx * dx;
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (int f = 0; f < faces; ++f) {
    const auto s = grid.face_stencil(f);
    const double a = u[s[0]], b = u[s[1]], c = u[s[2]], d = u[s[3]];
    double drive = (std::abs(a) + 3.0 * std::abs(b) + 3.0 * std::abs(c) + std::abs(d)) / dx3;
    const double ubar = 0.5 * (b + c);
    if (ubar > kPowerFloor) drive += std::abs(h_prime(ubar, p)) * (std::abs(b) + std::abs(c)) / dx;
    worst = std::max(worst, std::abs(face_mobility(b, c, p.n, p.eps)) * drive / dx);
  }
  return worst;
}

} // namespace omp

namespace serial {

std::vector<double> assemble_residual(std::span<const double> u, std::span<const double> u_old,
                                      double dt, const Grid& grid, const ModelParams& p) {
  const int N = grid.cells();
  const double dx = grid.dx();
  // Two ghost cells on each side: w[i + 2] = u_i.
  std::vector<double> w(N + 4);
  for (int i = 0; i < N; ++i) w[i + 2] = u[i];
  if (grid.periodic()) {
    w[0] = u[N - 2];
    w[1] = u[N - 1];
    w[N + 2] = u[0];
    w[N + 3] = u[1];
  } else {
    w[1] = u[0];
    w[0] = u[1];
    w[N + 2] = u[N - 1];
    w[N + 3] = u[N - 2];
  }
  // Face j (0..N) lies between padded cells j+1 and j+2, i.e. x_{j-1/2}.
  auto flux = [&](int j) {
    if (!grid.periodic() && (j == 0 || j == N)) return 0.0;
    return face_flux(w[j], w[j + 1], w[j + 2], w[j + 3], p, dx);
  };
  std::vector<double> r(N);
  for (int i = 0; i < N; ++i) {
    r[i] = (u[i] - u_old[i]) / dt + (flux(i + 1) - flux(i)) / dx;
  }
  return r;
}

} // namespace serial

} // namespace thinfilm::kernels
