#include <doctest.h>

#include <cmath>
#include <random>

#include "ektau/equations.hpp"
#include "ektau/errors.hpp"
#include "ektau/families.hpp"
#include "support.hpp"

using namespace ektau;

namespace {

const Vec3 c0(0.3, -0.2, 0.5);
ParametrizedSurface euclid_sphere() { return coordinate_sphere({0, 0}, c0, 2.0, 0.5); }
ParametrizedSurface small_sphere(const SpaceParams& sp) {
  return coordinate_sphere(sp, {0.1, -0.05, 0.2}, 0.1, 0.3);
}

// theta at uv + t * (parameter direction of x), by analyze only
double theta_fd(const ParametrizedSurface& s, const SurfacePointData& d, const Vec3& x,
                double h = 1e-4) {
  const Vec2 dir = d.to_params(x);
  const double tp = analyze(s, d.uv + h * dir).theta, tm = analyze(s, d.uv - h * dir).theta;
  return (tp - tm) / (2 * h);
}

double phi_fd(const ParametrizedSurface& s, const SurfacePointData& d, const Vec3& x,
              double h = 1e-4) {
  const Vec2 dir = d.to_params(x);
  const double pp = analyze(s, d.uv + h * dir).phi, pm = analyze(s, d.uv - h * dir).phi;
  return wrap_pi(pp - pm) / (2 * h);
}

}  // namespace

TEST_CASE("alpha(e1, X) = -d theta(X) - tau <X, e2>") {
  std::mt19937_64 rng(7);
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    for (const Vec2& uv : sample_frame_points(s, 12, 11, false, false)) {
      const SurfacePointData d = analyze(s, uv);
      const Vec3 x = d.from_params(Vec2(oracle::random_vector(rng).head<2>()));
      const double lhs = d.alpha(d.e1, x);
      const double rhs = -theta_fd(s, d, x) - sp.tau * d.inner(x, d.e2);
      CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)) < 1e-6);
      CHECK(residual_eq1(s, d, x).rel < 1e-5);
    }
  }
  // euclidean sphere along e2: alpha(e1, e2) = 0 and theta is constant on latitudes
  const ParametrizedSurface e = euclid_sphere();
  for (const Vec2& uv : sample_frame_points(e, 8, 3, false, false)) {
    const SurfacePointData d = analyze(e, uv);
    CHECK(std::abs(d.alpha(d.e1, d.e2)) < 1e-12);
    CHECK(residual_eq1(e, d, d.e2).abs < 1e-8);
  }
}

TEST_CASE("alpha(X, e2): derived sign passes, printed sign fails when tau != 0") {
  const ParametrizedSurface e = euclid_sphere();
  for (const Vec2& uv : sample_frame_points(e, 20, 5, false, true)) {
    const SurfacePointData d = analyze(e, uv);
    CHECK(residual_alpha_e2(e, d, d.e2).rel < 1e-6);
    CHECK(residual_alpha_e2(e, d, d.e1).rel < 1e-6);
  }
  const ParametrizedSurface s = small_sphere({-1, 0.5});
  double worst_derived = 0, worst_printed = 0;
  for (const Vec2& uv : sample_frame_points(s, 20, 5, false, true)) {
    const SurfacePointData d = analyze(s, uv);
    worst_derived = std::max(worst_derived, residual_alpha_e2(s, d, d.e1).rel);
    worst_printed = std::max(worst_printed, residual_alpha_e2(s, d, d.e1, SignConvention::Printed).rel);
  }
  CHECK(worst_derived < 1e-5);
  CHECK(worst_printed > 1e-2);
  // sin(theta) = 0 everywhere on a vertical plane
  const ParametrizedSurface plane = vertical_plane({0, 0.5}, {0.1, 0.2}, {1, 0.5}, 0.5, 0.5);
  const SurfacePointData d = analyze(plane, plane.domain().at(0.5, 0.5));
  CHECK_THROWS_AS(residual_alpha_e2(plane, d, d.e1), DomainError);
}

TEST_CASE("alpha in the (e1, e2) frame from finite-difference phi") {
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    for (const Vec2& uv : sample_frame_points(s, 10, 13, true, false)) {
      const SurfacePointData d = analyze(s, uv);
      const auto [r11, r12] = residual_alpha_frame(s, d);
      CHECK(r11.rel < 1e-5);
      CHECK(r12.rel < 1e-5);
    }
  }
}

TEST_CASE("alpha22 from K_e") {
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    for (const Vec2& uv : sample_frame_points(s, 10, 17, false, false)) {
      const SurfacePointData d = analyze(s, uv);
      CHECK(std::abs(d.a11 * d.a22 - d.a12 * d.a12 - d.Ke) / d.Ke < 1e-10);
      CHECK(std::abs(d.a11 + d.a22 - 2 * d.H) / d.H < 1e-10);
    }
  }
}

TEST_CASE("phi equations") {
  {
    // phi is constant on the euclidean sphere
    const ParametrizedSurface e = euclid_sphere();
    for (const Vec2& uv : sample_frame_points(e, 8, 19, true, true)) {
      const SurfacePointData d = analyze(e, uv);
      CHECK(std::abs(ode_rhs_v(d.phi, phi_ode_inputs(e, d, true))) < 1e-6);
      CHECK(std::abs(ode_rhs_Jv(d.phi, phi_ode_inputs(e, d, false))) < 1e-6);
    }
  }
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    for (const Vec2& uv : sample_frame_points(s, 8, 23, true, true)) {
      const SurfacePointData d = analyze(s, uv);
      const double dv = phi_fd(s, d, d.v), djv = phi_fd(s, d, d.Jv);
      const double sv = ode_rhs_v(d.phi, phi_ode_inputs(s, d, true));
      const double sjv = ode_rhs_Jv(d.phi, phi_ode_inputs(s, d, false));
      const double scale = std::max(1.0, d.grad_theta_norm);
      CHECK(std::abs(dv - sv) / scale < 1e-4);
      CHECK(std::abs(djv - sjv) / scale < 1e-4);
      CHECK(residual_ode(s, d, true, SignConvention::Derived).rel < 1e-4);
      CHECK(residual_ode(s, d, false, SignConvention::Derived).rel < 1e-4);
    }
  }
}

TEST_CASE("sincos_roots") {
  for (double A : {1.0, -0.3, 0.0})
    for (double B : {0.5, 0.0, -2.0})
      for (double C : {0.2, -0.1, 0.0}) {
        const auto r = sincos_roots(A, B, C);
        CHECK(r.size() <= 2);
        for (double x : r) {
          CHECK(std::abs(A * std::sin(x) + B * std::cos(x) + C) < 1e-12);
          CHECK(x > -kPi);
          CHECK(x <= kPi);
        }
        if (std::hypot(A, B) > std::abs(C) + 1e-9) CHECK(r.size() == 2);
      }
  CHECK(sincos_roots(1, 0, 2).empty());
  CHECK(sincos_roots(0, 0, 0).empty());
  CHECK(sincos_roots(1, 0, -1).size() == 1);
}

TEST_CASE("quadratic in phi") {
  {
    // euclidean: A = 2 H G = 1/2, B = 0, C = -G^2 - K_e = -1/2, double root at pi/2
    const ParametrizedSurface e = euclid_sphere();
    const SurfacePointData d = analyze(e, sample_frame_points(e, 1, 29, true, true)[0]);
    const Fact3Report r = fact3_quadratic(d);
    CHECK(std::abs(r.A - 0.5) < 1e-10);
    CHECK(std::abs(r.B_derived) < 1e-15);
    CHECK(std::abs(r.C + 0.5) < 1e-10);
    REQUIRE(r.roots.size() >= 1);
    CHECK(std::abs(r.roots[0] - kPi / 2) < 1e-4);
  }
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    double derived = 0, printed = 0;
    for (const Vec2& uv : sample_frame_points(s, 15, 31, true, false)) {
      const SurfacePointData d = analyze(s, uv);
      const Fact3Report r = fact3_quadratic(d);
      CHECK(r.identity.rel < 1e-9);
      CHECK(r.roots.size() <= 2);
      CHECK(r.phi_root_gap < 1e-5);
      const double scale = std::max({1.0, std::abs(r.A), std::abs(r.C)});
      derived = std::max(derived, std::abs(r.residual_derived) / scale);
      printed = std::max(printed, std::abs(r.residual_printed) / scale);
    }
    CHECK(derived < 1e-9);
    if (sp.tau != 0) CHECK(printed > 1e-3);
  }
}

TEST_CASE("solve_theta") {
  const auto nu = solve_theta(0.5, 1.0, {-1, 0});
  REQUIRE(nu.size() == 2);
  CHECK(std::abs(nu[0] - std::sqrt(0.5)) < 1e-15);
  CHECK(nu[1] == -nu[0]);
  CHECK(solve_theta(1.25, 1.0, {-1, 0.5}).size() == 1);
  CHECK_THROWS_AS(solve_theta(1.0, 1.0, {1, 0.5}), DegenerateSpace);
  CHECK_THROWS_AS(solve_theta(3.0, 1.0, {-1, 0}), InconsistentData);
  // the sphere: nu from the Gauss equation matches sin(theta) up to sign
  const ParametrizedSurface s = small_sphere({-1, 0.5});
  FrameOptions fo;
  fo.intrinsic = true;
  for (const Vec2& uv : sample_frame_points(s, 6, 37, false, false)) {
    const SurfacePointData d = analyze(s, uv, fo);
    const auto r = solve_theta(d.K, d.Ke, s.params());
    double gap = 1;
    for (double x : r) gap = std::min(gap, std::abs(x - d.g));
    CHECK(gap < 1e-3);
  }
}

TEST_CASE("dg(xi) at vertical points") {
  {
    const ParametrizedSurface e = euclid_sphere();
    const auto verts = sample_vertical_points(e, 4);
    REQUIRE(verts.size() == 4);
    for (const Vec2& uv : verts) {
      const Lemma1Report r = lemma1_check(e, uv);
      // inward normal: g = -(z - z0) / 2, so dg(xi) = -1/2
      CHECK(std::abs(r.dg_xi + 0.5) < 1e-6);
      CHECK(std::abs(r.k_CP - r.dg_xi) < 1e-5);
      CHECK(std::abs(r.normal_section - 0.5) < 1e-8);
      CHECK(r.grad_g_norm > 0.1);
    }
  }
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    const auto verts = sample_vertical_points(s, 3);
    REQUIRE(!verts.empty());
    for (const Vec2& uv : verts) {
      const Lemma1Report r = lemma1_check(s, uv);
      CHECK(r.residual.rel < 1e-3);
      CHECK(std::abs(r.k_CP) > 1);
      CHECK(r.grad_g_norm > 0);
    }
  }
  const ParametrizedSurface e = euclid_sphere();
  CHECK_THROWS_AS(lemma1_check(e, e.domain().at(0.3, 0.3)), DomainError);
}

TEST_CASE("Jacobian of xi x N at horizontal points") {
  {
    const ParametrizedSurface e = euclid_sphere();
    const auto hp = find_horizontal_points(e).points;
    REQUIRE(hp.size() == 2);
    for (const Vec2& uv : hp) {
      const Lemma2Report r = lemma2_check(e, uv);
      CHECK(std::abs(std::abs(r.jacobian(0, 1)) - 0.5) < 1e-6);
      CHECK(std::abs(r.jacobian(0, 0)) < 1e-6);
      CHECK(std::abs(r.jacobian(1, 1)) < 1e-6);
      CHECK(std::abs(r.det_fd - 0.25) < 1e-6);
      CHECK(r.derived_residual < 1e-6);
      CHECK(r.printed_residual < 1e-6);
    }
  }
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    const auto hp = find_horizontal_points(s).points;
    REQUIRE(hp.size() == 2);
    for (const Vec2& uv : hp) {
      const Lemma2Report r = lemma2_check(s, uv);
      const double sc = std::max(1.0, std::abs(r.lambda1));
      CHECK(r.derived_residual / sc < 1e-4);
      CHECK(r.det_fd > 0);
      CHECK(std::abs(r.det_fd - r.det_derived) / (sc * sc) < 1e-4);
      if (sp.tau != 0) CHECK(r.printed_residual > 0.5 * std::abs(sp.tau));
    }
  }
}

TEST_CASE("residual suite on convex examples") {
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    SuiteOptions opt;
    opt.samples = 30;
    opt.expect_two_horizontal = !sp.degenerate();
    const SuiteResult r = run_suite(small_sphere(sp), opt);
    for (const ResidualSummary& x : r.summary)
      if (x.gating) CHECK_MESSAGE(x.pass, x.id << " max_rel " << x.max_rel);
    CHECK(r.pass);
  }
}
