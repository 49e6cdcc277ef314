#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "thinfilm/dual.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/params.hpp"
#include "thinfilm/potentials.hpp"

// Flux kernels of the conservative scheme.  The omp:: versions are the ones
// the solver runs; serial:: is an independent ghost-padded reference used by
// the tests and the benchmark.
namespace thinfilm::kernels {

// Lower-order flux coefficient is dropped on faces whose mean height is at
// or below this floor.
inline constexpr double kPowerFloor = 1e-14;
// Relative gap under which the face mobility falls back to f_eps(uL).
inline constexpr double kEqualGap = 1e-12;

// Mean (uR-uL)/(g(uR)-g(uL)) with g' = 1/f_eps = eps s^-4 + s^-n, evaluated
// in closed form.  Zero whenever the integral of 1/f_eps diverges.
template <class T>
T face_mobility(const T& uL, const T& uR, double n, double eps) {
  const bool left_hi = value_of(uL) >= value_of(uR);
  const T& hi = left_hi ? uL : uR;
  const T& lo = left_hi ? uR : uL;
  const double hv = value_of(hi);
  const double lv = value_of(lo);
  if (!(hv > 0.0)) return T(0.0);
  if (hv - lv < kEqualGap * hv) {
    // Evaluated at the mean so both one-sided derivatives are f'/2.
    const T c = 0.5 * (uL + uR);
    return eps == 0.0 ? power(c, n) : power(c, n) / (1.0 + eps * power(c, n - 4.0));
  }
  if (lv <= 0.0) {
    if (eps > 0.0 || n >= 1.0) return T(0.0);
    return (1.0 - n) * power(hi, n);
  }
  using std::expm1;
  using std::log1p;
  const T q = (hi - lo) / hi;
  const double p = 1.0 - n;
  T phi;
  if (std::abs(p) < kLogBranchTol) {
    phi = -log1p(-q) / (q * hi);
  } else {
    phi = power(hi, p - 1.0) * (-expm1(p * log1p(-q))) / (p * q);
  }
  if (eps > 0.0) {
    const T l3 = lo * lo * lo;
    const T h3 = hi * hi * hi;
    phi = phi + eps * (hi * hi + hi * lo + lo * lo) / (3.0 * l3 * h3);
  }
  return 1.0 / phi;
}

// Flux through the face between cells 1 and 2 of the stencil
// (u_{i-1}, u_i, u_{i+1}, u_{i+2}).
template <class T>
T face_flux(const T& um1, const T& u0, const T& u1, const T& u2, const ModelParams& p,
            double dx) {
  const double dx3 = dx * dx * dx;
  const T third = (u2 - 3.0 * u1 + 3.0 * u0 - um1) / dx3;
  const T ubar = 0.5 * (u0 + u1);
  T drive = third;
  if (value_of(ubar) > kPowerFloor) drive = drive + h_prime(ubar, p) * (u1 - u0) / dx;
  return face_mobility(u0, u1, p.n, p.eps) * drive;
}

// Derivatives of one face flux with respect to its four stencil cells.
struct FaceGradient {
  std::array<int, 4> cells{};
  std::array<double, 4> dflux{};
};

namespace omp {

// Fluxes on all interior faces.
void face_fluxes(std::span<const double> u, const Grid& grid, const ModelParams& p,
                 std::span<double> flux);

// residual_i = (u_i - u_old_i)/dt + (F_{i+1/2} - F_{i-1/2})/dx.
void assemble_residual(std::span<const double> u, std::span<const double> u_old, double dt,
                       const Grid& grid, const ModelParams& p, std::span<double> residual);

void face_gradients(std::span<const double> u, const Grid& grid, const ModelParams& p,
                    std::span<FaceGradient> out);

// max_f of |M| (sum of |stencil| terms of the drive) / dx: magnitude of the
// individual terms summed into a residual entry.
double residual_term_scale(std::span<const double> u, const Grid& grid, const ModelParams& p);

} // namespace omp

namespace serial {

std::vector<double> assemble_residual(std::span<const double> u, std::span<const double> u_old,
                                      double dt, const Grid& grid, const ModelParams& p);

} // namespace serial

} // namespace thinfilm::kernels
