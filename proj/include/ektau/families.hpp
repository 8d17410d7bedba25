#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ektau/isometry.hpp"
#include "ektau/numeric.hpp"
#include "ektau/surface.hpp"

namespace ektau {

/// Config-level description of a surface; `family` selects which fields are read.
struct SurfaceSpec {
  std::string name;
  std::string family = "coordinate-sphere";  // | vertical-plane | graph | custom-expression

  // coordinate-sphere
  Vec3 center = Vec3::Zero();
  double radius = 0.1;
  double tilt = kPi / 4.0;  // angle between the parametrization axis and the fiber direction

  // vertical-plane
  Vec2 base_point = Vec2::Zero();
  Vec2 direction = Vec2::UnitX();
  double half_length = 1.0;
  double half_height = 1.0;

  // graph: z = sum c_i m_i(x - x0, y - y0) with monomials 1, x, y, x^2, xy, y^2, x^3, x^2y, xy^2, y^3
  std::vector<double> coefficients;
  double half_width = 0.5;

  // custom-expression
  std::array<std::string, 3> expressions;
  ParamDomain domain;
};

struct ConvexityReport {
  int samples = 0;
  double min_Ke = 0.0;
  double min_Ke_minus_tau2 = 0.0;
  double min_principal = 0.0;
  double max_principal = 0.0;
  bool convex = false;           // K_e > 0 at every sample
  bool strictly_convex = false;  // K_e > tau^2 at every sample
};

/// Sphere of chart radius r about `center`, parametrized by polar angles (psi, phi) about an
/// axis tilted by `tilt` from the z-axis so neither the horizontal points nor the vertical
/// locus meet the parametrization poles.
ParametrizedSurface coordinate_sphere(const SpaceParams& sp, const Vec3& center, double r,
                                      double tilt = kPi / 4.0, std::string name = "coordinate-sphere");

/// pi^-1 of the base geodesic through `through` with chart direction `dir`, parametrized by
/// (chart arclength along the geodesic, z).
ParametrizedSurface vertical_plane(const SpaceParams& sp, const Vec2& through, const Vec2& dir,
                                   double half_length = 1.0, double half_height = 1.0,
                                   std::string name = "vertical-plane");

ParametrizedSurface graph_surface(const SpaceParams& sp, const Vec2& center,
                                  const std::vector<double>& coefficients, double half_width,
                                  std::string name = "graph");

ParametrizedSurface expression_surface(const SpaceParams& sp,
                                       const std::array<std::string, 3>& expressions,
                                       const ParamDomain& domain,
                                       std::string name = "custom-expression");

ParametrizedSurface build_surface(const SurfaceSpec& spec, const SpaceParams& sp);

ConvexityReport convexity_report(const ParametrizedSurface& s, int n = 24);

using IsometryPath = std::function<Isometry(double t)>;

IsometryPath vertical_translation_path(double c);
IsometryPath fiber_rotation_path(double beta);
IsometryPath composed_path(double c, double beta);

enum class PerturbationMode {
  Radial,    // scale f - center by 1 + a t b(e)
  Vertical,  // shift z by a t b(e) |f - center|
};

struct Family {
  std::string name;
  std::vector<double> t;
  std::vector<ParametrizedSurface> members;
  std::vector<Isometry> applied;  // isometric families only: member = applied[i] o reference
  std::string note;
};

Family isometric_family(const ParametrizedSurface& s, const IsometryPath& path,
                        const std::vector<double>& ts, std::string name = "isometric");

/// Negative controls. The bump b(e) = e_x e_y + e_z^2 / 2 of the unit direction e from `center`
/// is smooth, so members are immersions for small amplitude.
Family perturbed_family(const ParametrizedSurface& s, PerturbationMode mode, double amplitude,
                        const Vec3& center, const std::vector<double>& ts,
                        std::string name = "perturbed");

}  // namespace ektau
