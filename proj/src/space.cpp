#include "ektau/space.hpp"

#include <cmath>
#include <sstream>

#include "ektau/jet.hpp"

namespace ektau {

namespace {

Mat3 assemble(const std::array<double, 6>& m) {
  Mat3 g;
  g << m[0], m[1], m[2],
       m[1], m[3], m[4],
       m[2], m[4], m[5];
  return g;
}

}  // namespace

bool Space::admissible(const Vec3& p) const {
  const double w = 1.0 + 0.25 * params_.k * (p.x() * p.x() + p.y() * p.y());
  return std::isfinite(w) && w > 1e-12 && p.allFinite();
}

void Space::require_admissible(const Vec3& p) const {
  if (!admissible(p)) {
    std::ostringstream os;
    os << "point (" << p.x() << ", " << p.y() << ", " << p.z()
       << ") lies outside the model chart for k = " << params_.k;
    throw DomainError(os.str());
  }
}

AmbientPoint Space::point(double x, double y, double z) const {
  Vec3 p(x, y, z);
  require_admissible(p);
  return AmbientPoint{p};
}

Mat3 Space::metric(const Vec3& p) const {
  require_admissible(p);
  return assemble(metric_coefficients(params_, p.x(), p.y()));
}

std::array<Mat3, 3> Space::metric_derivatives(const Vec3& p) const {
  require_admissible(p);
  const Jet3 x = Jet3::variable(p.x(), 0);
  const Jet3 y = Jet3::variable(p.y(), 1);
  const auto m = metric_coefficients(params_, x, y);
  std::array<Mat3, 3> dg;
  for (int l = 0; l < 3; ++l) {
    std::array<double, 6> c{};
    for (int i = 0; i < 6; ++i) c[i] = m[i].d[l];
    dg[l] = assemble(c);
  }
  return dg;
}

Christoffel Space::christoffel(const Vec3& p) const {
  const Mat3 ginv = metric(p).inverse();
  const auto dg = metric_derivatives(p);
  // first kind: Gamma_{l j k} = (d_j g_lk + d_k g_lj - d_l g_jk) / 2
  std::array<Mat3, 3> first;
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        first[l](j, k) = 0.5 * (dg[j](l, k) + dg[k](l, j) - dg[l](j, k));
  Christoffel gamma;
  for (int i = 0; i < 3; ++i) {
    gamma[i].setZero();
    for (int l = 0; l < 3; ++l) gamma[i] += ginv(i, l) * first[l];
  }
  return gamma;
}

Vec3 Space::xi(const Vec3& p) const {
  require_admissible(p);
  return Vec3::UnitZ();
}

Vec3 Space::to_frame(const Vec3& p, const Vec3& u) const {
  const double lam = conformal_factor(params_.k, p.x(), p.y());
  return {lam * u.x(), lam * u.y(),
          u.z() + params_.tau * lam * (p.y() * u.x() - p.x() * u.y())};
}

Vec3 Space::from_frame(const Vec3& p, const Vec3& c) const {
  const double lam = conformal_factor(params_.k, p.x(), p.y());
  return {c.x() / lam, c.y() / lam, c.z() - params_.tau * (p.y() * c.x() - p.x() * c.y())};
}

double Space::inner(const Vec3& p, const Vec3& u, const Vec3& v) const {
  return to_frame(p, u).dot(to_frame(p, v));
}

double Space::norm(const Vec3& p, const Vec3& u) const { return to_frame(p, u).norm(); }

Vec3 Space::cross(const Vec3& p, const Vec3& u, const Vec3& v) const {
  return from_frame(p, to_frame(p, u).cross(to_frame(p, v)));
}

Vec3 Space::connection_term(const Vec3& p, const Vec3& x, const Vec3& y) const {
  const Christoffel g = christoffel(p);
  return {x.dot(g[0] * y), x.dot(g[1] * y), x.dot(g[2] * y)};
}

Vec3 Space::covariant_derivative(const Vec3& p, const Vec3& t, const Vec3& v,
                                 const Vec3& dv) const {
  return dv + connection_term(p, t, v);
}

GeodesicPath Space::geodesic(const Vec3& p, const Vec3& v0, double length, double step) const {
  if (v0.norm() == 0.0) throw DomainError("geodesic: zero initial velocity");
  if (!(step > 0.0) || !(length >= 0.0)) throw DomainError("geodesic: bad length or step");
  require_admissible(p);

  const int n = std::max(1, static_cast<int>(std::lround(length / step)));
  const double h = length / n;

  struct State {
    Vec3 x, v;
  };
  auto rhs = [this](const State& s) -> State {
    if (!admissible(s.x)) throw DomainError("chart exit");
    return {s.v, -connection_term(s.x, s.v, s.v)};
  };

  GeodesicPath path;
  State s{p, v0};
  path.s.push_back(0.0);
  path.points.push_back(s.x);
  path.velocities.push_back(s.v);
  for (int i = 0; i < n; ++i) {
    try {
      const State k1 = rhs(s);
      const State k2 = rhs({s.x + 0.5 * h * k1.x, s.v + 0.5 * h * k1.v});
      const State k3 = rhs({s.x + 0.5 * h * k2.x, s.v + 0.5 * h * k2.v});
      const State k4 = rhs({s.x + h * k3.x, s.v + h * k3.v});
      State next{s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                 s.v + h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v)};
      if (!admissible(next.x)) throw DomainError("chart exit");
      s = next;
    } catch (const DomainError&) {
      path.truncated = true;
      break;
    }
    path.s.push_back((i + 1) * h);
    path.points.push_back(s.x);
    path.velocities.push_back(s.v);
  }
  return path;
}

double Space::base_inner(const Vec2& q, const Vec2& a, const Vec2& b) const {
  const double lam = conformal_factor(params_.k, q.x(), q.y());
  return lam * lam * a.dot(b);
}

Vec3 Space::horizontal_lift(const Vec3& p, const Vec2& w) const {
  const double lam = conformal_factor(params_.k, p.x(), p.y());
  // kill the connection form tau lambda (y dx - x dy) + dz
  return {w.x(), w.y(), -params_.tau * lam * (p.y() * w.x() - p.x() * w.y())};
}

BaseGeodesic BaseGeodesic::through_point(double k, const Vec2& q, const Vec2& dir) {
  if (dir.norm() == 0.0) throw DomainError("base geodesic: zero direction");
  BaseGeodesic g;
  g.through = q;
  g.direction = dir.normalized();
  const Vec2 n(-g.direction.y(), g.direction.x());
  g.d = -n.dot(q) / (1.0 + 0.25 * k * q.squaredNorm());
  g.b = n + 0.5 * g.d * k * q;
  return g;
}

}  // namespace ektau
