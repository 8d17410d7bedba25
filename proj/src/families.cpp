#include "ektau/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ektau/expression.hpp"

namespace ektau {

ParametrizedSurface coordinate_sphere(const SpaceParams& sp, const Vec3& center, double r,
                                      double tilt, std::string name) {
  if (!(r > 0.0)) throw DomainError("coordinate sphere: radius must be positive");
  if (sp.k < 0.0) {
    const double chart_radius = 2.0 / std::sqrt(-sp.k);
    if (center.head<2>().norm() + r >= chart_radius) {
      throw DomainError("coordinate sphere leaves the model chart");
    }
  }
  const Vec3 a(std::sin(tilt), 0.0, std::cos(tilt));
  const Vec3 b(std::cos(tilt), 0.0, -std::sin(tilt));
  const Vec3 c(0.0, 1.0, 0.0);
  ParamDomain dom;
  dom.u_min = 0.0;
  dom.u_max = kPi;
  dom.v_min = 0.0;
  dom.v_max = 2.0 * kPi;
  dom.periodic_v = true;
  dom.margin = 0.05;
  return ParametrizedSurface(std::move(name), sp, dom,
                             [=](const Jet2& psi, const Jet2& ph) -> SurfaceJet {
                               const Jet2 cp = cos(psi), sp_ = sin(psi);
                               const Jet2 w1 = sp_ * cos(ph), w2 = sp_ * sin(ph);
                               SurfaceJet f;
                               for (int i = 0; i < 3; ++i)
                                 f[i] = center[i] + r * (a[i] * cp + b[i] * w1 + c[i] * w2);
                               return f;
                             });
}

ParametrizedSurface vertical_plane(const SpaceParams& sp, const Vec2& through, const Vec2& dir,
                                   double half_length, double half_height, std::string name) {
  const BaseGeodesic bg = BaseGeodesic::through_point(sp.k, through, dir);
  ParamDomain dom;
  dom.u_min = -half_length;
  dom.u_max = half_length;
  dom.v_min = -half_height;
  dom.v_max = half_height;
  const double quad = -0.25 * sp.k * bg.d;  // coefficient of |x|^2 in the level function
  const Vec2 unit = bg.direction;
  if (std::abs(quad) < 1e-12) {
    return ParametrizedSurface(std::move(name), sp, dom,
                               [=](const Jet2& s, const Jet2& z) -> SurfaceJet {
                                 return {through.x() + unit.x() * s, through.y() + unit.y() * s, z};
                               });
  }
  const Vec2 c = -bg.b / (2.0 * quad);
  const double rho = std::sqrt(c.squaredNorm() - bg.d / quad);
  const Vec2 rel = through - c;
  const double s0 = std::atan2(rel.y(), rel.x());
  const double sense = Vec2(-std::sin(s0), std::cos(s0)).dot(unit) >= 0.0 ? 1.0 : -1.0;
  return ParametrizedSurface(std::move(name), sp, dom,
                             [=](const Jet2& s, const Jet2& z) -> SurfaceJet {
                               const Jet2 ang = s0 + sense * s / rho;
                               return {c.x() + rho * cos(ang), c.y() + rho * sin(ang), z};
                             });
}

ParametrizedSurface graph_surface(const SpaceParams& sp, const Vec2& center,
                                  const std::vector<double>& coefficients, double half_width,
                                  std::string name) {
  if (coefficients.size() > 10) throw DomainError("graph: at most 10 coefficients (cubic)");
  std::array<double, 10> cf{};
  std::copy(coefficients.begin(), coefficients.end(), cf.begin());
  ParamDomain dom;
  dom.u_min = center.x() - half_width;
  dom.u_max = center.x() + half_width;
  dom.v_min = center.y() - half_width;
  dom.v_max = center.y() + half_width;
  return ParametrizedSurface(std::move(name), sp, dom,
                             [=](const Jet2& x, const Jet2& y) -> SurfaceJet {
                               const Jet2 X = x - center.x(), Y = y - center.y();
                               const Jet2 z = cf[0] + cf[1] * X + cf[2] * Y + cf[3] * X * X +
                                              cf[4] * X * Y + cf[5] * Y * Y + cf[6] * X * X * X +
                                              cf[7] * X * X * Y + cf[8] * X * Y * Y +
                                              cf[9] * Y * Y * Y;
                               return {x, y, z};
                             });
}

ParametrizedSurface expression_surface(const SpaceParams& sp,
                                       const std::array<std::string, 3>& expressions,
                                       const ParamDomain& domain, std::string name) {
  const Expression ex = Expression::parse(expressions[0]);
  const Expression ey = Expression::parse(expressions[1]);
  const Expression ez = Expression::parse(expressions[2]);
  return ParametrizedSurface(std::move(name), sp, domain,
                             [=](const Jet2& u, const Jet2& v) -> SurfaceJet {
                               return {ex(u, v), ey(u, v), ez(u, v)};
                             });
}

ParametrizedSurface build_surface(const SurfaceSpec& spec, const SpaceParams& sp) {
  if (spec.family == "coordinate-sphere")
    return coordinate_sphere(sp, spec.center, spec.radius, spec.tilt, spec.name);
  if (spec.family == "vertical-plane")
    return vertical_plane(sp, spec.base_point, spec.direction, spec.half_length, spec.half_height,
                          spec.name);
  if (spec.family == "graph")
    return graph_surface(sp, spec.center.head<2>(), spec.coefficients, spec.half_width, spec.name);
  if (spec.family == "custom-expression")
    return expression_surface(sp, spec.expressions, spec.domain, spec.name);
  throw ConfigError("unknown surface family '" + spec.family + "'");
}

ConvexityReport convexity_report(const ParametrizedSurface& s, int n) {
  ConvexityReport r;
  const double inf = std::numeric_limits<double>::infinity();
  r.min_Ke = inf;
  r.min_Ke_minus_tau2 = inf;
  r.min_principal = inf;
  r.max_principal = -inf;
  const double tau2 = s.params().tau * s.params().tau;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 uv = s.domain().at((i + 0.5) / n, (j + 0.5) / n);
      SurfacePointData d;
      try {
        d = fundamental_forms(s, uv);
      } catch (const DomainError&) {
        continue;
      }
      ++r.samples;
      r.min_Ke = std::min(r.min_Ke, d.Ke);
      r.min_Ke_minus_tau2 = std::min(r.min_Ke_minus_tau2, d.Ke - tau2);
      r.min_principal = std::min(r.min_principal, d.lambda2);
      r.max_principal = std::max(r.max_principal, d.lambda1);
    }
  r.convex = r.samples > 0 && r.min_Ke > 0.0;
  r.strictly_convex = r.samples > 0 && r.min_Ke_minus_tau2 > 0.0;
  return r;
}

IsometryPath vertical_translation_path(double c) {
  return [c](double t) { return Isometry::vertical_translation(t * c); };
}

IsometryPath fiber_rotation_path(double beta) {
  return [beta](double t) { return Isometry::fiber_rotation(t * beta); };
}

IsometryPath composed_path(double c, double beta) {
  return [c, beta](double t) {
    return Isometry::fiber_rotation(t * beta).then(Isometry::vertical_translation(t * c));
  };
}

Family isometric_family(const ParametrizedSurface& s, const IsometryPath& path,
                        const std::vector<double>& ts, std::string name) {
  Family fam;
  fam.name = std::move(name);
  fam.t = ts;
  fam.note = "ambient isometries applied to the reference";
  if (!path(0.0).is_identity()) {
    const Vec2 probe = s.domain().at(0.37, 0.61);
    const Vec3 p = s.position(probe);
    if ((path(0.0).apply(s.params(), p) - p).norm() > 1e-14) {
      throw DomainError("isometric family: path(0) must be the identity");
    }
  }
  for (double t : ts) {
    const Isometry iso = path(t);
    std::ostringstream nm;
    nm << fam.name << "[t=" << t << "]";
    fam.members.push_back(s.moved(iso, nm.str()));
    fam.applied.push_back(iso);
  }
  return fam;
}

Family perturbed_family(const ParametrizedSurface& s, PerturbationMode mode, double amplitude,
                        const Vec3& center, const std::vector<double>& ts, std::string name) {
  if (amplitude < 0.0) throw DomainError("perturbed family: amplitude must be >= 0");
  Family fam;
  fam.name = std::move(name);
  fam.t = ts;
  fam.note = mode == PerturbationMode::Radial ? "radial perturbation" : "vertical perturbation";
  const JetEvaluator base = s.evaluator();
  for (double t : ts) {
    const double a = amplitude * t;
    JetEvaluator eval = [=](const Jet2& u, const Jet2& v) -> SurfaceJet {
      SurfaceJet f = base(u, v);
      std::array<Jet2, 3> d;
      for (int i = 0; i < 3; ++i) d[i] = f[i] - center[i];
      const Jet2 len = sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      const Jet2 ex = d[0] / len, ey = d[1] / len, ez = d[2] / len;
      const Jet2 bump = ex * ey + 0.5 * ez * ez;
      if (mode == PerturbationMode::Radial) {
        const Jet2 scale = 1.0 + a * bump;
        for (int i = 0; i < 3; ++i) f[i] = center[i] + d[i] * scale;
      } else {
        f[2] = f[2] + a * bump * len;
      }
      return f;
    };
    std::ostringstream nm;
    nm << fam.name << "[t=" << t << "]";
    fam.members.emplace_back(nm.str(), s.params(), s.domain(), std::move(eval));
  }
  return fam;
}

}  // namespace ektau
