#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ektau/space.hpp"

namespace ektau {

enum class MotionKind {
  VerticalTranslation,    // (x, y, z) -> (x, y, z + a)
  FiberRotation,          // rotation by angle a about the z-axis
  HorizontalTranslation,  // k = 0 only: base translation by (a, b) with the compensating z-shift
  HalfTurn,               // rotation by pi about the horizontal geodesic through 0 at angle a
};

std::string to_string(MotionKind kind);

struct Motion {
  MotionKind kind = MotionKind::VerticalTranslation;
  double a = 0.0;
  double b = 0.0;
};

/// An element of the implemented subgroup of Isom(E(k, tau)): a composition of elementary
/// motions, applied first to last. The empty composition is the identity.
class Isometry {
 public:
  Isometry() = default;
  explicit Isometry(std::vector<Motion> motions) : motions_(std::move(motions)) {}

  static Isometry identity() { return {}; }
  static Isometry vertical_translation(double c) { return single({MotionKind::VerticalTranslation, c, 0.0}); }
  static Isometry fiber_rotation(double beta) { return single({MotionKind::FiberRotation, beta, 0.0}); }
  static Isometry horizontal_translation(double a, double b) {
    return single({MotionKind::HorizontalTranslation, a, b});
  }
  static Isometry half_turn(double axis_angle) { return single({MotionKind::HalfTurn, axis_angle, 0.0}); }

  const std::vector<Motion>& motions() const { return motions_; }
  bool is_identity() const { return motions_.empty(); }

  /// this followed by other.
  Isometry then(const Isometry& other) const;
  Isometry inverse() const;

  /// Throws Unsupported when a motion is not an isometry of the given space in this model.
  void validate(const SpaceParams& sp) const;

  template <class S>
  std::array<S, 3> apply(const SpaceParams& sp, std::array<S, 3> p) const {
    for (const Motion& m : motions_) p = apply_motion(sp, m, p);
    return p;
  }
  Vec3 apply(const SpaceParams& sp, const Vec3& p) const;
  /// Jacobian of the map in chart coordinates.
  Mat3 differential(const SpaceParams& sp, const Vec3& p) const;

  std::string describe() const;

 private:
  static Isometry single(Motion m) { return Isometry({m}); }

  template <class S>
  static std::array<S, 3> apply_motion(const SpaceParams& sp, const Motion& m,
                                       const std::array<S, 3>& p) {
    using std::cos;
    using std::sin;
    const S& x = p[0];
    const S& y = p[1];
    const S& z = p[2];
    switch (m.kind) {
      case MotionKind::VerticalTranslation:
        return {x, y, z + m.a};
      case MotionKind::FiberRotation: {
        const double c = cos(m.a), s = sin(m.a);
        return {c * x - s * y, s * x + c * y, z};
      }
      case MotionKind::HorizontalTranslation:
        return {x + m.a, y + m.b, z + sp.tau * (m.a * y - m.b * x)};
      case MotionKind::HalfTurn: {
        const double c = cos(2.0 * m.a), s = sin(2.0 * m.a);
        return {c * x + s * y, s * x - c * y, -z};
      }
    }
    return p;
  }

  std::vector<Motion> motions_;
};

/// Max over sample points of |D^T g(F(p)) D - g(p)|, D the differential of the isometry.
double isometry_residual(const Space& space, const Isometry& iso, int samples = 64,
                         unsigned long long seed = defaults::kSeed);

}  // namespace ektau
