#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <type_traits>
#include <vector>

#include "ektau/space.hpp"

namespace ektau {

inline constexpr double kPi = std::numbers::pi;

/// Central difference at 0 of t -> f(t), refined once by Richardson extrapolation (h, h/2).
/// Works for any f returning a type with vector-space operations.
template <class F>
auto central_derivative(F&& f, double h) {
  using T = std::decay_t<decltype(f(0.0))>;
  const T d1 = (f(h) - f(-h)) / (2.0 * h);
  const T d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
  return T((4.0 * d2 - d1) / 3.0);
}

/// Second derivative at 0, central stencil with one Richardson step.
template <class F>
auto central_second_derivative(F&& f, double h) {
  using T = std::decay_t<decltype(f(0.0))>;
  const T f0 = f(0.0);
  const T d1 = (f(h) - 2.0 * f0 + f(-h)) / (h * h);
  const double hh = 0.5 * h;
  const T d2 = (f(hh) - 2.0 * f0 + f(-hh)) / (hh * hh);
  return T((4.0 * d2 - d1) / 3.0);
}

/// Mixed partial d^2 f / ds dt at (0, 0), with one Richardson step.
template <class F>
auto central_mixed_derivative(F&& f, double h) {
  using T = std::decay_t<decltype(f(0.0, 0.0))>;
  auto stencil = [&](double s) -> T {
    return (f(s, s) - f(s, -s) - f(-s, s) + f(-s, -s)) / (4.0 * s * s);
  };
  return T((4.0 * stencil(0.5 * h) - stencil(h)) / 3.0);
}

/// Closest representative of angle a to reference (adds multiples of 2 pi).
inline double unwrap_near(double a, double reference) {
  return a - 2.0 * kPi * std::round((a - reference) / (2.0 * kPi));
}

/// Representative in (-pi, pi].
inline double wrap_pi(double a) {
  const double w = unwrap_near(a, 0.0);
  return w <= -kPi ? w + 2.0 * kPi : w;
}

struct NewtonResult {
  Vec2 x = Vec2::Zero();
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Newton iteration for F: R^2 -> R^2 with a central-difference Jacobian.
/// Steps are damped to max_step. Evaluation failures (exceptions) end the run unconverged.
NewtonResult newton2(const std::function<Vec2(const Vec2&)>& f, Vec2 x0, double tol,
                     int max_iter, double fd_step, double max_step);

/// Relative agreement used by the tolerance tiers: |a - b| / max(|a|, |b|, 1).
inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace ektau
