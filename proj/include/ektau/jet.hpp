#pragma once

#include <array>
#include <cmath>

namespace ektau {

// Truncated second-order Taylor expansion in N variables (forward mode).
// Hessian entries are stored for i <= j in row-major packed order.
template <int N>
struct Jet {
  static constexpr int kHess = N * (N + 1) / 2;

  double v = 0.0;
  std::array<double, N> d{};
  std::array<double, kHess> h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit promotion of constants

  static Jet variable(double value, int index) {
    Jet j(value);
    j.d[index] = 1.0;
    return j;
  }

  static constexpr int idx(int i, int j) {
    if (i > j) {
      int t = i;
      i = j;
      j = t;
    }
    return i * N - i * (i - 1) / 2 + (j - i);
  }

  double grad(int i) const { return d[i]; }
  double hess(int i, int j) const { return h[idx(i, j)]; }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    for (int i = 0; i < kHess; ++i) h[i] += o.h[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    for (int i = 0; i < kHess; ++i) h[i] -= o.h[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    Jet r;
    r.v = v * o.v;
    for (int i = 0; i < N; ++i) r.d[i] = d[i] * o.v + v * o.d[i];
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        const int k = idx(i, j);
        r.h[k] = h[k] * o.v + d[i] * o.d[j] + d[j] * o.d[i] + v * o.h[k];
      }
    *this = r;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this *= reciprocal(o);
    return *this;
  }

  friend Jet operator-(Jet a) {
    a.v = -a.v;
    for (auto& x : a.d) x = -x;
    for (auto& x : a.h) x = -x;
    return a;
  }
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }
  friend Jet operator+(Jet a, double b) { a.v += b; return a; }
  friend Jet operator+(double b, Jet a) { a.v += b; return a; }
  friend Jet operator-(Jet a, double b) { a.v -= b; return a; }
  friend Jet operator-(double b, const Jet& a) { return Jet(b) - a; }
  friend Jet operator*(Jet a, double b) {
    a.v *= b;
    for (auto& x : a.d) x *= b;
    for (auto& x : a.h) x *= b;
    return a;
  }
  friend Jet operator*(double b, Jet a) { return a * b; }
  friend Jet operator/(Jet a, double b) { return a * (1.0 / b); }
  friend Jet operator/(double b, const Jet& a) { return b * reciprocal(a); }

  // Composition with a scalar function given f(v), f'(v), f''(v).
  static Jet chain(const Jet& a, double f0, double f1, double f2) {
    Jet r(f0);
    for (int i = 0; i < N; ++i) r.d[i] = f1 * a.d[i];
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) {
        const int k = idx(i, j);
        r.h[k] = f1 * a.h[k] + f2 * a.d[i] * a.d[j];
      }
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    const double inv = 1.0 / a.v;
    return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
  }
  friend Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
  friend Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
  friend Jet tan(const Jet& a) {
    const double t = std::tan(a.v);
    const double s = 1.0 + t * t;
    return chain(a, t, s, 2.0 * t * s);
  }
  friend Jet exp(const Jet& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
  }
  friend Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
  friend Jet sqrt(const Jet& a) {
    const double s = std::sqrt(a.v);
    return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
  }
  friend Jet sinh(const Jet& a) { return chain(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v)); }
  friend Jet cosh(const Jet& a) { return chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }
  friend Jet atan(const Jet& a) {
    const double s = 1.0 / (1.0 + a.v * a.v);
    return chain(a, std::atan(a.v), s, -2.0 * a.v * s * s);
  }
  friend Jet pow(const Jet& a, double p) {
    return chain(a, std::pow(a.v, p), p * std::pow(a.v, p - 1.0),
                 p * (p - 1.0) * std::pow(a.v, p - 2.0));
  }
};

using Jet2 = Jet<2>;
using Jet3 = Jet<3>;

inline double value_of(double x) { return x; }
template <int N>
double value_of(const Jet<N>& x) {
  return x.v;
}

}  // namespace ektau
