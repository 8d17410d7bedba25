#pragma once

// Independent oracles shared by the unit and acceptance tests. Nothing here calls the
// library's derivative code: only the metric, positions and plain arithmetic.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "ektau/space.hpp"
#include "ektau/surface.hpp"

namespace oracle {

using ektau::Mat3;
using ektau::Vec2;
using ektau::Vec3;

inline const std::vector<ektau::SpaceParams>& grid_spaces() {
  static const std::vector<ektau::SpaceParams> g = {{-1, 0}, {-1, 0.5}, {0, 0.5}, {1, 0.5}, {1, 0}};
  return g;
}

/// Christoffel symbols from central differences of the metric (h = 1e-4, one Richardson step).
inline std::array<Mat3, 3> christoffel_fd(const ektau::Space& sp, const Vec3& p, double h = 1e-4) {
  std::array<Mat3, 3> dg;
  for (int l = 0; l < 3; ++l) {
    Vec3 e = Vec3::Zero();
    e[l] = 1.0;
    const Mat3 d1 = (sp.metric(p + h * e) - sp.metric(p - h * e)) / (2 * h);
    const Mat3 d2 = (sp.metric(p + 0.5 * h * e) - sp.metric(p - 0.5 * h * e)) / h;
    dg[l] = (4 * d2 - d1) / 3;
  }
  const Mat3 ginv = sp.metric(p).inverse();
  std::array<Mat3, 3> G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double s = 0;
        for (int m = 0; m < 3; ++m) s += 0.5 * ginv(i, m) * (dg[j](m, k) + dg[k](m, j) - dg[m](j, k));
        G[i](j, k) = s;
      }
  return G;
}

inline Vec3 gamma(const std::array<Mat3, 3>& G, const Vec3& x, const Vec3& y) {
  return {x.dot(G[0] * y), x.dot(G[1] * y), x.dot(G[2] * y)};
}

/// Riemannian cross product from the metric alone: <u x v, w> = vol(u, v, w).
inline Vec3 cross_metric(const ektau::Space& sp, const Vec3& p, const Vec3& u, const Vec3& v) {
  const Mat3 g = sp.metric(p);
  const double vol = std::sqrt(g.determinant());
  const Vec3 c = vol * u.cross(v);  // covector: w -> vol det(u, v, w)
  return g.ldlt().solve(c);
}

inline Vec3 random_point(std::mt19937_64& rng, const ektau::SpaceParams& sp) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double r = sp.k < 0 ? 0.9 * 2.0 / std::sqrt(-sp.k) : 1.5;
  Vec3 p;
  do {
    p = Vec3(U(rng), U(rng), U(rng));
    p.head<2>() *= r;
  } while (sp.k < 0 && p.head<2>().norm() > r);
  return p;
}

inline Vec3 random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  return {N(rng), N(rng), N(rng)};
}

/// Second fundamental form from finite differences of positions (no jets) with the unit normal
/// of the library data, for cross-checking jet values.
struct FdForms {
  ektau::Mat2 first, second;
};

inline FdForms forms_fd(const ektau::ParametrizedSurface& s, const Vec2& uv, const Vec3& normal,
                        double h = 1e-4) {
  const ektau::Space sp = s.space();
  auto f = [&](double a, double b) { return s.position(uv + Vec2(a, b)); };
  const Vec3 p = f(0, 0);
  const Vec3 fu = (f(h, 0) - f(-h, 0)) / (2 * h);
  const Vec3 fv = (f(0, h) - f(0, -h)) / (2 * h);
  const Vec3 fuu = (f(h, 0) - 2 * p + f(-h, 0)) / (h * h);
  const Vec3 fvv = (f(0, h) - 2 * p + f(0, -h)) / (h * h);
  const Vec3 fuv = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
  const auto G = christoffel_fd(sp, p);
  const Mat3 g = sp.metric(p);
  FdForms out;
  out.first << fu.dot(g * fu), fu.dot(g * fv), fv.dot(g * fu), fv.dot(g * fv);
  auto II = [&](const Vec3& d2, const Vec3& a, const Vec3& b) {
    return (d2 + gamma(G, a, b)).dot(g * normal);
  };
  out.second << II(fuu, fu, fu), II(fuv, fu, fv), II(fuv, fu, fv), II(fvv, fv, fv);
  return out;
}

}  // namespace oracle
