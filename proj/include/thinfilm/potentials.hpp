#pragma once

#include <cmath>

#include "thinfilm/dual.hpp"
#include "thinfilm/params.hpp"

namespace thinfilm {

// s^e with a multiplication fast path for small integer exponents.
template <class T>
T power(const T& s, double e) {
  if (e == std::trunc(e) && std::abs(e) <= 8.0) {
    const int k = static_cast<int>(std::abs(e));
    T r(1.0);
    for (int i = 0; i < k; ++i) r = r * s;
    return e < 0.0 ? T(1.0) / r : r;
  }
  using std::pow;
  return pow(s, e);
}

// Regularized mobility |s|^{n+4} / (eps |s|^n + s^4), written as
// s^n / (1 + eps s^{n-4}); f(0) = 0.
double mobility_f_eps(double s, double n, double eps);

// Force coefficient h'(s) multiplying u_x in the flux.  Templated so the
// solver can differentiate through it.
template <class T>
T h_prime(const T& s, const ModelParams& p) {
  switch (p.potential.kind) {
    case PotentialKind::RationalGravity: {
      const double B = p.potential.B;
      const T w = 1.0 + B * s;
      return s / (w * w) - p.potential.nubar * p.potential.G;
    }
    case PotentialKind::ExponentialPolar: {
      using std::exp;
      return (p.potential.b1 / p.potential.b2) * exp(-s / p.potential.b2);
    }
    case PotentialKind::PowerLaw:
    default: {
      T r = static_cast<double>(p.nu) * power(s, p.m - p.n);
      if (p.A != 0.0) r = r - p.A * power(s, p.M - p.n);
      return r;
    }
  }
}

struct PotentialEval {
  double h_prime = 0.0;
  double h = 0.0;
  double H = 0.0; // H'' = h', H' = h
};

// Exponent differences closer than this to a logarithmic case select the log branch.
inline constexpr double kLogBranchTol = 1e-12;

PotentialEval potential(double s, const ModelParams& p);

// H alone; finite wherever the double antiderivative is, including s = 0
// for generic power branches with m-n+2 > 0.
double potential_H(double s, const ModelParams& p);

// Entropy density eps s^{a+n-3}/((a+n-4)(a+n-3)) + s^{a+1}/(a(a+1)).
double entropy_G_eps(double s, double alpha, double n, double eps);

} // namespace thinfilm
