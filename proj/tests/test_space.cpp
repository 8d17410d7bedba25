#include <doctest.h>

#include <random>

#include "ektau/errors.hpp"
#include "ektau/isometry.hpp"
#include "ektau/space.hpp"
#include "support.hpp"

using namespace ektau;

TEST_CASE("metric is symmetric positive definite on random samples") {
  std::mt19937_64 rng(1);
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const Space space(sp);
    for (int i = 0; i < 50; ++i) {
      const Vec3 p = oracle::random_point(rng, sp);
      const Mat3 g = space.metric(p);
      CHECK((g - g.transpose()).norm() == 0.0);
      CHECK(g.llt().info() == Eigen::Success);
    }
  }
}

TEST_CASE("frame E1, E2, xi is orthonormal and positively oriented") {
  std::mt19937_64 rng(2);
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const Space space(sp);
    const Vec3 p = oracle::random_point(rng, sp);
    const Mat3 g = space.metric(p);
    Mat3 E;
    for (int i = 0; i < 3; ++i) E.col(i) = space.from_frame(p, Vec3::Unit(i));
    CHECK((E.transpose() * g * E - Mat3::Identity()).norm() < 1e-14);
    CHECK(E.determinant() > 0);
    CHECK((space.xi(p) - Vec3::UnitZ()).norm() == 0.0);
    const Vec3 u = oracle::random_vector(rng);
    CHECK((space.to_frame(p, space.from_frame(p, u)) - u).norm() < 1e-13);
  }
}

TEST_CASE("xi has unit length at (1, 1, 3) in E(-1, 0.7)") {
  const Space space({-1.0, 0.7});
  const Vec3 p(1, 1, 3);
  const Mat3 g = space.metric(p);
  CHECK(g(2, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(space.norm(p, Vec3::UnitZ()) == doctest::Approx(1.0));
}

TEST_CASE("chart admissibility for k < 0") {
  const Space space({-1.0, 0.5});
  CHECK(space.admissible(Vec3(1.9, 0, 0)));
  CHECK_FALSE(space.admissible(Vec3(2.0, 0.1, 0)));
  CHECK_THROWS_AS(space.point(2.5, 0, 0), DomainError);
  CHECK_THROWS_AS(space.metric(Vec3(3, 0, 0)), DomainError);
}

TEST_CASE("Christoffel symbols match finite differences of the metric") {
  std::mt19937_64 rng(3);
  SUBCASE("flat space: all zero") {
    const Space space({0.0, 0.0});
    const auto G = space.christoffel(Vec3(0.3, -0.2, 1.0));
    for (int i = 0; i < 3; ++i) CHECK(G[i].norm() == 0.0);
  }
  SUBCASE("E(0, 0.5) at the origin and random points of every space") {
    std::vector<std::pair<SpaceParams, Vec3>> cases{{{0.0, 0.5}, Vec3::Zero()}};
    for (const SpaceParams& sp : oracle::grid_spaces())
      for (int i = 0; i < 10; ++i) cases.push_back({sp, oracle::random_point(rng, sp)});
    for (const auto& [sp, p] : cases) {
      const Space space(sp);
      const auto G = space.christoffel(p);
      const auto F = oracle::christoffel_fd(space, p);
      for (int i = 0; i < 3; ++i) {
        CHECK((G[i] - G[i].transpose()).norm() == 0.0);
        CHECK((G[i] - F[i]).cwiseAbs().maxCoeff() < 1e-6);
      }
    }
  }
}

TEST_CASE("xi is Killing and grad_X xi = tau X x xi") {
  std::mt19937_64 rng(4);
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const Space space(sp);
    for (int i = 0; i < 100; ++i) {
      const Vec3 p = oracle::random_point(rng, sp);
      const Vec3 X = oracle::random_vector(rng), Y = oracle::random_vector(rng);
      const auto G = oracle::christoffel_fd(space, p);
      const Vec3 dX = oracle::gamma(G, X, Vec3::UnitZ());
      const Vec3 dY = oracle::gamma(G, Y, Vec3::UnitZ());
      CHECK(std::abs(space.inner(p, dX, Y) + space.inner(p, dY, X)) < 1e-8);
      const Vec3 expect = sp.tau * oracle::cross_metric(space, p, X, Vec3::UnitZ());
      CHECK(space.norm(p, dX - expect) < 1e-8);
      // library connection against the same identity
      const Vec3 lib = space.covariant_derivative(p, X, Vec3::UnitZ(), Vec3::Zero());
      CHECK(space.norm(p, lib - sp.tau * space.cross(p, X, Vec3::UnitZ())) < 1e-12);
    }
  }
}

TEST_CASE("cross product") {
  std::mt19937_64 rng(5);
  SUBCASE("flat space reduces to the Euclidean cross product") {
    const Space space({0.0, 0.0});
    const Vec3 u = oracle::random_vector(rng), v = oracle::random_vector(rng);
    CHECK((space.cross(Vec3::Zero(), u, v) - u.cross(v)).norm() < 1e-14);
  }
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const Space space(sp);
    const Vec3 p = oracle::random_point(rng, sp);
    const Vec3 u = oracle::random_vector(rng), v = oracle::random_vector(rng);
    const Vec3 w = space.cross(p, u, v);
    CHECK(std::abs(space.inner(p, w, u)) < 1e-12);
    CHECK(std::abs(space.inner(p, w, v)) < 1e-12);
    const double area2 = space.inner(p, u, u) * space.inner(p, v, v) - std::pow(space.inner(p, u, v), 2);
    CHECK(space.inner(p, w, w) == doctest::Approx(area2).epsilon(1e-12));
    CHECK((w - oracle::cross_metric(space, p, u, v)).norm() < 1e-12);
    CHECK(space.cross(p, u, u).norm() == 0.0);
    const Vec3 e1 = space.from_frame(p, Vec3::UnitX()), e2 = space.from_frame(p, Vec3::UnitY());
    CHECK((space.cross(p, e1, e2) - Vec3::UnitZ()).norm() < 1e-13);
  }
}

TEST_CASE("covariant derivative along a curve") {
  const Space space({-1.0, 0.5});
  const Vec3 p(0.2, -0.4, 0.1);
  CHECK(space.covariant_derivative(p, Vec3::Zero(), Vec3(1, 2, 3), Vec3::Zero()).norm() == 0.0);
  // linear in the field, Leibniz rule for f V: f' V + f DV
  const Vec3 t(0.3, 0.1, -0.2), V(1, -1, 0.5), dV(0.2, 0.3, 0.1);
  const double f = 1.7, df = -0.4;
  const Vec3 lhs = space.covariant_derivative(p, t, f * V, df * V + f * dV);
  const Vec3 rhs = df * V + f * space.covariant_derivative(p, t, V, dV);
  CHECK((lhs - rhs).norm() < 1e-14);
  SUBCASE("parallel transport along a geodesic preserves inner products") {
    // transport W by RK4 on DW/ds = 0, velocity from the geodesic record
    const GeodesicPath path = space.geodesic(p, Vec3(0.3, 0.4, 0.2), 0.5, 1e-3);
    Vec3 W(0.1, 0.7, -0.3);
    const double start = space.inner(path.points.front(), W, path.velocities.front());
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
      const double h = path.s[i + 1] - path.s[i];
      const Vec3 q0 = path.points[i], q1 = path.points[i + 1], qm = 0.5 * (q0 + q1);
      const Vec3 t0 = path.velocities[i], t1 = path.velocities[i + 1], tm = 0.5 * (t0 + t1);
      auto rate = [&](const Vec3& q, const Vec3& tt, const Vec3& w) {
        return Vec3(-space.connection_term(q, tt, w));
      };
      const Vec3 k1 = rate(q0, t0, W), k2 = rate(qm, tm, W + 0.5 * h * k1);
      const Vec3 k3 = rate(qm, tm, W + 0.5 * h * k2), k4 = rate(q1, t1, W + h * k3);
      W += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    const double end = space.inner(path.points.back(), W, path.velocities.back());
    CHECK(end == doctest::Approx(start).epsilon(1e-6));
  }
}

TEST_CASE("geodesics") {
  SUBCASE("flat space: straight line") {
    const Space space({0.0, 0.0});
    const GeodesicPath path = space.geodesic(Vec3(1, 2, 3), Vec3(0.6, 0.0, 0.8), 1.0);
    CHECK((path.points.back() - Vec3(1.6, 2.0, 3.8)).norm() < 1e-12);
  }
  SUBCASE("speed drift over unit length at step 1e-3 in E(-1, 0.5)") {
    const Space space({-1.0, 0.5});
    const Vec3 p(0.1, 0.2, 0.0);
    const GeodesicPath path = space.geodesic(p, Vec3(0.5, -0.3, 0.4), 1.0, 1e-3);
    const double s0 = space.norm(path.points.front(), path.velocities.front());
    double drift = 0;
    for (std::size_t i = 0; i < path.points.size(); ++i)
      drift = std::max(drift, std::abs(space.norm(path.points[i], path.velocities[i]) - s0));
    CHECK(drift < 1e-8);
  }
  SUBCASE("fiber through the origin") {
    for (const SpaceParams& sp : oracle::grid_spaces()) {
      const Space space(sp);
      const GeodesicPath path = space.geodesic(Vec3::Zero(), Vec3::UnitZ(), 1.0);
      CHECK(path.points.back().head<2>().norm() < 1e-12);
      CHECK(path.points.back().z() == doctest::Approx(1.0));
      const auto G = oracle::christoffel_fd(space, Vec3::Zero());
      CHECK(oracle::gamma(G, Vec3::UnitZ(), Vec3::UnitZ()).norm() < 1e-8);
    }
  }
  SUBCASE("RK4 order") {
    const Space space({1.0, 0.5});
    const Vec3 p(0.1, -0.2, 0.3), v(0.4, 0.5, -0.2);
    const Vec3 a = space.geodesic(p, v, 1.0, 0.04).points.back();
    const Vec3 b = space.geodesic(p, v, 1.0, 0.02).points.back();
    const Vec3 c = space.geodesic(p, v, 1.0, 0.01).points.back();
    CHECK(std::log2((a - b).norm() / (b - c).norm()) >= 3.5);
  }
  SUBCASE("horizontal geodesics project to base geodesics") {
    for (const SpaceParams& sp : oracle::grid_spaces()) {
      const Space space(sp);
      const Vec3 p(0.2, 0.1, 0.0);
      const Vec2 dir(0.6, -0.8);
      const Vec3 v = space.horizontal_lift(p, dir);
      const GeodesicPath path = space.geodesic(p, v, 0.5, 1e-3);
      const BaseGeodesic bg = BaseGeodesic::through_point(sp.k, p.head<2>(), dir);
      for (const Vec3& q : path.points) CHECK(std::abs(bg.level(sp.k, q.x(), q.y())) < 1e-9);
    }
  }
  SUBCASE("leaving the chart truncates") {
    const Space space({-1.0, 0.0});
    const GeodesicPath path = space.geodesic(Vec3(1.5, 0, 0), Vec3(1, 0, 0), 50.0, 1e-2);
    CHECK(path.truncated);
  }
}

TEST_CASE("projection and horizontal lift") {
  std::mt19937_64 rng(6);
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const Space space(sp);
    const Vec3 p = oracle::random_point(rng, sp);
    const Vec2 w(0.3, -1.1);
    const Vec3 h = space.horizontal_lift(p, w);
    CHECK((h.head<2>() - w).norm() == 0.0);
    CHECK(std::abs(space.inner(p, h, Vec3::UnitZ())) < 1e-14);
    CHECK(space.norm(p, h) == doctest::Approx(std::sqrt(space.base_inner(p.head<2>(), w, w))).epsilon(1e-10));
    CHECK((space.base_projection(p) - p.head<2>()).norm() == 0.0);
  }
}

TEST_CASE("isometries of the implemented subgroup") {
  std::mt19937_64 rng(7);
  SUBCASE("vertical translation and identity") {
    const SpaceParams sp{1.0, 0.5};
    const Vec3 p(0.1, 0.2, 0.3);
    CHECK((Isometry::vertical_translation(0.5).apply(sp, p) - Vec3(0.1, 0.2, 0.8)).norm() == 0.0);
    CHECK((Isometry::identity().apply(sp, p) - p).norm() == 0.0);
    CHECK(isometry_residual(Space(sp), Isometry::identity()) == 0.0);
    CHECK(isometry_residual(Space(sp), Isometry::vertical_translation(0.5)) == 0.0);
  }
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const Space space(sp);
    CHECK(isometry_residual(space, Isometry::fiber_rotation(0.7)) < 1e-10);
    CHECK(isometry_residual(space, Isometry::half_turn(0.4)) < 1e-10);
    if (sp.k == 0.0) {
      CHECK(isometry_residual(space, Isometry::horizontal_translation(0.3, -0.2)) < 1e-10);
    } else {
      CHECK_THROWS_AS(Isometry::horizontal_translation(0.3, -0.2).validate(sp), Unsupported);
    }
  }
  SUBCASE("pullback metric by direct evaluation") {
    const SpaceParams sp{0.0, 0.5};
    const Space space(sp);
    const Isometry iso = Isometry::fiber_rotation(0.3)
                             .then(Isometry::horizontal_translation(0.2, 0.1))
                             .then(Isometry::half_turn(0.0));
    for (int i = 0; i < 20; ++i) {
      const Vec3 p = oracle::random_point(rng, sp);
      // differential by central differences of apply
      Mat3 D;
      for (int j = 0; j < 3; ++j) {
        const Vec3 e = 1e-5 * Vec3::Unit(j);
        D.col(j) = (iso.apply(sp, p + e) - iso.apply(sp, p - e)) / 2e-5;
      }
      const Mat3 pulled = D.transpose() * space.metric(iso.apply(sp, p)) * D;
      CHECK((pulled - space.metric(p)).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((iso.inverse().apply(sp, iso.apply(sp, p)) - p).norm() < 1e-12);
    }
  }
  SUBCASE("fiber rotation is a rotation in (x, y)") {
    const Vec3 q = Isometry::fiber_rotation(3.141592653589793).apply({0.0, 0.5}, Vec3(1, 0, 2));
    CHECK((q - Vec3(-1, 0, 2)).norm() < 1e-15);
  }
}
