#include "thinfilm/potentials.hpp"

#include <limits>
#include <string>

#include "thinfilm/error.hpp"

namespace thinfilm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// h', h, H for a single force term c s^k.
PotentialEval power_term(double s, double c, double k) {
  PotentialEval r;
  if (c == 0.0) return r;
  const bool log1 = std::abs(k + 1.0) < kLogBranchTol;
  const bool log2 = std::abs(k + 2.0) < kLogBranchTol;
  if (s == 0.0) {
    if (log1 || log2) throw DomainError("potential: logarithmic branch is singular at s=0");
    r.h_prime = k > 0.0 ? 0.0 : (k == 0.0 ? c : kInf);
    r.h = k + 1.0 > 0.0 ? 0.0 : kInf;
    r.H = k + 2.0 > 0.0 ? 0.0 : kInf;
    return r;
  }
  r.h_prime = c * power(s, k);
  if (log1) {
    r.h = c * std::log(s);
    r.H = c * (s * std::log(s) - s);
  } else if (log2) {
    r.h = c * power(s, k + 1.0) / (k + 1.0);
    r.H = -c * std::log(s);
  } else {
    r.h = c * power(s, k + 1.0) / (k + 1.0);
    r.H = c * power(s, k + 2.0) / ((k + 2.0) * (k + 1.0));
  }
  return r;
}

PotentialEval evaluate(double s, const ModelParams& p) {
  if (!(s >= 0.0)) throw DomainError("potential: negative film height " + std::to_string(s));
  switch (p.potential.kind) {
    case PotentialKind::RationalGravity: {
      const double B = p.potential.B;
      const double g = p.potential.nubar * p.potential.G;
      const double w = 1.0 + B * s;
      const double L = std::log1p(B * s);
      PotentialEval r;
      r.h_prime = s / (w * w) - g;
      r.h = (L + 1.0 / w - 1.0) / (B * B) - g * s;
      r.H = (w * L - B * s + L) / (B * B * B) - s / (B * B) - 0.5 * g * s * s;
      return r;
    }
    case PotentialKind::ExponentialPolar: {
      const double b1 = p.potential.b1;
      const double b2 = p.potential.b2;
      const double e = std::exp(-s / b2);
      return PotentialEval{b1 / b2 * e, -b1 * e, b1 * b2 * e};
    }
    case PotentialKind::PowerLaw:
    default: {
      PotentialEval a = power_term(s, static_cast<double>(p.nu), p.m - p.n);
      const PotentialEval b = power_term(s, -p.A, p.M - p.n);
      a.h_prime += b.h_prime;
      a.h += b.h;
      a.H += b.H;
      return a;
    }
  }
}

} // namespace

double mobility_f_eps(double s, double n, double eps) {
  if (!(s >= 0.0)) throw DomainError("mobility_f_eps: negative film height");
  if (s == 0.0) return 0.0;
  const double sn = power(s, n);
  return eps == 0.0 ? sn : sn / (1.0 + eps * power(s, n - 4.0));
}

PotentialEval potential(double s, const ModelParams& p) {
  const PotentialEval r = evaluate(s, p);
  if (!std::isfinite(r.h_prime) || !std::isfinite(r.h) || !std::isfinite(r.H))
    throw DomainError("potential: not finite at s=" + std::to_string(s));
  return r;
}

double potential_H(double s, const ModelParams& p) {
  const double H = evaluate(s, p).H;
  if (!std::isfinite(H)) throw DomainError("potential_H: not finite at s=" + std::to_string(s));
  return H;
}

double entropy_G_eps(double s, double alpha, double n, double eps) {
  if (alpha == 0.0 || alpha == -1.0) throw DomainError("entropy_G_eps: alpha must avoid {0,-1}");
  const double t = alpha + n;
  if (eps > 0.0 && (t == 3.0 || t == 4.0))
    throw DomainError("entropy_G_eps: alpha+n must avoid {3,4} when eps > 0");
  if (!(s >= 0.0)) throw DomainError("entropy_G_eps: negative film height");
  if (s == 0.0) {
    if (eps == 0.0 && alpha + 1.0 > 0.0) return 0.0;
    throw DomainError("entropy_G_eps: singular at s=0");
  }
  double g = power(s, alpha + 1.0) / (alpha * (alpha + 1.0));
  if (eps > 0.0) g += eps * power(s, t - 3.0) / ((t - 4.0) * (t - 3.0));
  return g;
}

} // namespace thinfilm
