#pragma once

#include <array>
#include <cmath>

namespace thinfilm {

// Forward-mode dual number with K directional derivatives.  Used to obtain
// exact Jacobian entries of the face fluxes.
template <int K>
struct Dual {
  double v = 0.0;
  std::array<double, K> d{};

  Dual() = default;
  Dual(double value) : v(value) {} // NOLINT: implicit from constants

  static Dual variable(double value, int slot) {
    Dual x(value);
    x.d[slot] = 1.0;
    return x;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int k = 0; k < K; ++k) d[k] += o.d[k];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int k = 0; k < K; ++k) d[k] -= o.d[k];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int k = 0; k < K; ++k) d[k] = d[k] * o.v + v * o.d[k];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    for (int k = 0; k < K; ++k) d[k] = (d[k] - v * inv * o.d[k]) * inv;
    v *= inv;
    return *this;
  }
};

template <int K> Dual<K> operator+(Dual<K> a, const Dual<K>& b) { return a += b; }
template <int K> Dual<K> operator-(Dual<K> a, const Dual<K>& b) { return a -= b; }
template <int K> Dual<K> operator*(Dual<K> a, const Dual<K>& b) { return a *= b; }
template <int K> Dual<K> operator/(Dual<K> a, const Dual<K>& b) { return a /= b; }
template <int K> Dual<K> operator+(Dual<K> a, double b) { a.v += b; return a; }
template <int K> Dual<K> operator+(double b, Dual<K> a) { a.v += b; return a; }
template <int K> Dual<K> operator-(Dual<K> a, double b) { a.v -= b; return a; }
template <int K> Dual<K> operator-(double b, const Dual<K>& a) { return Dual<K>(b) - a; }
template <int K> Dual<K> operator*(Dual<K> a, double b) {
  a.v *= b;
  for (auto& x : a.d) x *= b;
  return a;
}
template <int K> Dual<K> operator*(double b, Dual<K> a) { return a * b; }
template <int K> Dual<K> operator/(Dual<K> a, double b) { return a * (1.0 / b); }
template <int K> Dual<K> operator/(double b, const Dual<K>& a) { return Dual<K>(b) / a; }
template <int K> Dual<K> operator-(Dual<K> a) { return a * -1.0; }

template <int K> bool operator<(const Dual<K>& a, const Dual<K>& b) { return a.v < b.v; }
template <int K> bool operator>(const Dual<K>& a, const Dual<K>& b) { return a.v > b.v; }

namespace detail {
template <int K>
Dual<K> chain(const Dual<K>& a, double value, double slope) {
  Dual<K> r(value);
  for (int k = 0; k < K; ++k) r.d[k] = slope * a.d[k];
  return r;
}
} // namespace detail

template <int K> Dual<K> exp(const Dual<K>& a) {
  const double e = std::exp(a.v);
  return detail::chain(a, e, e);
}
template <int K> Dual<K> expm1(const Dual<K>& a) {
  return detail::chain(a, std::expm1(a.v), std::exp(a.v));
}
template <int K> Dual<K> log(const Dual<K>& a) {
  return detail::chain(a, std::log(a.v), 1.0 / a.v);
}
template <int K> Dual<K> log1p(const Dual<K>& a) {
  return detail::chain(a, std::log1p(a.v), 1.0 / (1.0 + a.v));
}
template <int K> Dual<K> pow(const Dual<K>& a, double e) {
  const double p = std::pow(a.v, e);
  return detail::chain(a, p, e == 0.0 ? 0.0 : e * std::pow(a.v, e - 1.0));
}

inline double value_of(double x) { return x; }
template <int K> double value_of(const Dual<K>& x) { return x.v; }

} // namespace thinfilm
