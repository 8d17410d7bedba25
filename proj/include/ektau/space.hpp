#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ektau/defaults.hpp"
#include "ektau/errors.hpp"

namespace ektau {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Parameters of E(k, tau): curvature of the base space form and bundle curvature.
struct SpaceParams {
  double k = 0.0;
  double tau = 0.0;

  double space_form_defect() const { return k - 4.0 * tau * tau; }
  /// True when k - 4 tau^2 = 0, i.e. E(k, tau) is a space form.
  bool degenerate() const { return std::abs(space_form_defect()) < defaults::kDegenerateEps; }
};

/// A point of the model chart. Construct through Space::point to get the admissibility check.
struct AmbientPoint {
  Vec3 xyz = Vec3::Zero();
};

/// Coordinate components of a tangent vector attached to a base point.
struct AmbientVector {
  AmbientPoint base;
  Vec3 c = Vec3::Zero();
};

/// Gamma[i](j, k) = Christoffel symbol of the second kind Gamma^i_{jk}.
using Christoffel = std::array<Mat3, 3>;

struct GeodesicPath {
  std::vector<double> s;
  std::vector<Vec3> points;
  std::vector<Vec3> velocities;
  bool truncated = false;
};

// Conformal factor of the base metric, lambda = 1 / (1 + k (x^2 + y^2) / 4).
template <class S>
S conformal_factor(double k, const S& x, const S& y) {
  return 1.0 / (1.0 + 0.25 * k * (x * x + y * y));
}

// Metric coefficients (xx, xy, xz, yy, yz, zz) of
//   lambda^2 (dx^2 + dy^2) + (tau lambda (y dx - x dy) + dz)^2.
// The metric does not depend on z.
template <class S>
std::array<S, 6> metric_coefficients(const SpaceParams& sp, const S& x, const S& y) {
  const S lam = conformal_factor(sp.k, x, y);
  const S lam2 = lam * lam;
  const double t = sp.tau;
  const S a = t * lam * y;   // dx coefficient of the connection form
  const S b = -t * lam * x;  // dy coefficient
  return {lam2 + a * a, a * b, a, lam2 + b * b, b, S(1.0)};
}

/// The model of E(k, tau) used throughout: coordinates (x, y, z) with pi(x, y, z) = (x, y),
/// fibers the z-lines, and the orthonormal frame
///   E1 = lambda^-1 d_x - tau y d_z,  E2 = lambda^-1 d_y + tau x d_z,  E3 = xi = d_z,
/// declared positively oriented. With this orientation grad_X xi = tau X x xi.
class Space {
 public:
  explicit Space(SpaceParams params) : params_(params) {}

  const SpaceParams& params() const { return params_; }
  double k() const { return params_.k; }
  double tau() const { return params_.tau; }

  bool admissible(const Vec3& p) const;
  void require_admissible(const Vec3& p) const;
  AmbientPoint point(double x, double y, double z) const;

  Mat3 metric(const Vec3& p) const;
  /// Metric derivatives dg[l](i, j) = d g_ij / d x^l, by forward-mode differentiation.
  std::array<Mat3, 3> metric_derivatives(const Vec3& p) const;
  Christoffel christoffel(const Vec3& p) const;

  Vec3 xi(const Vec3& p) const;

  /// Components in the orthonormal frame (E1, E2, E3) and back.
  Vec3 to_frame(const Vec3& p, const Vec3& u) const;
  Vec3 from_frame(const Vec3& p, const Vec3& c) const;

  double inner(const Vec3& p, const Vec3& u, const Vec3& v) const;
  double norm(const Vec3& p, const Vec3& u) const;
  /// Oriented Riemannian cross product.
  Vec3 cross(const Vec3& p, const Vec3& u, const Vec3& v) const;

  /// Gamma(X, Y)^i = Gamma^i_{jk} X^j Y^k.
  Vec3 connection_term(const Vec3& p, const Vec3& x, const Vec3& y) const;
  /// Covariant derivative along a curve with velocity t of a field with value v and
  /// coordinate derivative dv at the same parameter.
  Vec3 covariant_derivative(const Vec3& p, const Vec3& t, const Vec3& v, const Vec3& dv) const;

  /// Fixed-step RK4 integration of the geodesic equation. Stops with truncated = true when
  /// the path would leave the chart.
  GeodesicPath geodesic(const Vec3& p, const Vec3& v0, double length,
                        double step = defaults::kGeodesicStep) const;

  Vec2 base_projection(const Vec3& p) const { return p.head<2>(); }
  double base_inner(const Vec2& q, const Vec2& a, const Vec2& b) const;
  Vec3 horizontal_lift(const Vec3& p, const Vec2& w) const;

 private:
  SpaceParams params_;
};

/// Implicit description Phi(x, y) = 0 of a geodesic of the base space form through q with
/// chart direction dir. Geodesics of lambda^2 |dx|^2 are the generalized circles
///   d (1 - k |x|^2 / 4) + B . x = 0.
struct BaseGeodesic {
  double d = 0.0;
  Vec2 b = Vec2::Zero();
  Vec2 through = Vec2::Zero();
  Vec2 direction = Vec2::UnitX();

  static BaseGeodesic through_point(double k, const Vec2& q, const Vec2& dir);
  template <class S>
  S level(double k, const S& x, const S& y) const {
    return d * (1.0 - 0.25 * k * (x * x + y * y)) + b.x() * x + b.y() * y;
  }
};

}  // namespace ektau
