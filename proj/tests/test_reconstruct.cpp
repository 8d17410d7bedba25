#include <doctest.h>

#include <cmath>

#include "ektau/families.hpp"
#include "ektau/reconstruct.hpp"
#include "support.hpp"

using namespace ektau;

namespace {

const Vec3 kCenter(0.1, -0.05, 0.2);
const std::vector<Vec2> kPoints{{1.2, 0.7}, {1.8, 2.0}, {1.0, 4.0}};

ParametrizedSurface small_sphere(const SpaceParams& sp) {
  return coordinate_sphere(sp, kCenter, 0.1, 0.3, "reference");
}

CongruenceOptions quick() {
  CongruenceOptions o;
  o.net_v = 4;
  o.net_jv = 4;
  return o;
}

}  // namespace

TEST_CASE("euclidean trajectories: v follows latitudes, Jv follows meridians") {
  const Vec3 c(0.3, -0.2, 0.5);
  const ParametrizedSurface s = coordinate_sphere({0, 0}, c, 2.0, 0.5);
  const Vec2 start = s.domain().at(0.4, 0.3);
  const TrajectoryRecord v = integral_curve(s, start, FieldDirection::V, 2.0);
  REQUIRE(!v.truncated);
  REQUIRE(v.nodes.size() > 100);
  const double z0 = s.position(start).z();
  for (const TrajectoryNode& n : v.nodes) CHECK(std::abs(s.position(n.uv).z() - z0) < 1e-9);
  CHECK(v.max_speed_error < 1e-6);

  const TrajectoryRecord jv = integral_curve(s, start, FieldDirection::Jv, 1.0);
  REQUIRE(!jv.truncated);
  const Vec3 p0 = s.position(start) - c;
  const double az = std::atan2(p0.y(), p0.x());
  for (const TrajectoryNode& n : jv.nodes) {
    const Vec3 p = s.position(n.uv) - c;
    CHECK(std::abs(wrap_pi(std::atan2(p.y(), p.x()) - az)) < 1e-9);
  }
  // Jv = -e1 points away from the fiber direction: z decreases
  CHECK(s.position(jv.nodes.back().uv).z() < z0 - 0.5);
}

TEST_CASE("phi propagation reproduces the direct phi") {
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface s = small_sphere(sp);
    for (const Vec2& p : kPoints) {
      const double phi0 = analyze(s, p).phi;
      const TrajectoryRecord r = propagate_phi(s, p, FieldDirection::V, 1.0, phi0);
      CHECK(r.propagated);
      CHECK(r.max_deviation < 1e-5);
      const TrajectoryRecord b = propagate_phi(s, p, FieldDirection::Jv, 0.3, phi0, {}, -1.0);
      CHECK(b.max_deviation < 1e-5);
    }
  }
}

TEST_CASE("propagating the wrong sign convention drifts") {
  const ParametrizedSurface s = small_sphere({0, 0.5});
  TrajectoryOptions printed;
  printed.convention = SignConvention::Printed;
  const double phi0 = analyze(s, kPoints[0]).phi;
  const TrajectoryRecord r = propagate_phi(s, kPoints[0], FieldDirection::V, 1.0, phi0, printed);
  CHECK(r.max_deviation > 1e-3);
}

TEST_CASE("integrator order") {
  const ParametrizedSurface s = small_sphere({-1, 0.5});
  for (FieldDirection dir : {FieldDirection::V, FieldDirection::Jv}) {
    const ConvergenceReport c = measure_convergence_order(s, kPoints[2], dir, 0.2, 0.02);
    CHECK(c.order > 3.5);
    CHECK(c.diff_fine < c.diff_coarse);
  }
}

TEST_CASE("trajectories stop before horizontal points") {
  const ParametrizedSurface s = small_sphere({0, 0.5});
  const HorizontalSearch h = find_horizontal_points(s);
  REQUIRE(h.points.size() == 2);
  // Jv runs along the gradient of theta, towards a horizontal point
  const TrajectoryRecord r = integral_curve(s, kPoints[0], FieldDirection::Jv, 10.0);
  CHECK(r.truncated);
  CHECK(!r.truncation.empty());
  const SurfacePointData end = analyze(s, r.nodes.back().uv);
  CHECK(end.tangential_xi > 0.9 * defaults::kTrajectoryCos);
}

TEST_CASE("isometric families are congruent with an exact witness") {
  const SpaceParams sp{0, 0.5};
  const ParametrizedSurface ref = small_sphere(sp);
  for (const IsometryPath& path :
       {vertical_translation_path(0.3), fiber_rotation_path(0.7), composed_path(0.3, 0.7)}) {
    const Family fam = isometric_family(ref, path, {0.5, 1.0});
    for (const CongruenceVerdict& v : congruence_test(ref, fam.members, kPoints, quick())) {
      CHECK_MESSAGE(v.verdict == Verdict::Congruent, v.member << " " << v.failed_stage << " " << v.message);
      CHECK(v.alpha_discrepancy < 1e-6);
      CHECK(v.phi_deviation < 1e-5);
      CHECK(v.theta_sign == 1.0);
      CHECK(v.witness.found);
      CHECK(v.witness.residual < 1e-8);
      CHECK(v.stages.size() == 8);
    }
  }
}

TEST_CASE("half-turned copies are congruent with theta reversed") {
  for (const SpaceParams& sp : {SpaceParams{-1, 0.5}, SpaceParams{0, 0.5}, SpaceParams{1, 0}}) {
    const ParametrizedSurface ref = small_sphere(sp);
    const ParametrizedSurface m = ref.moved(Isometry::half_turn(0.4), "turned");
    const CongruenceVerdict v = congruence_test(ref, m, kPoints, quick());
    CHECK_MESSAGE(v.verdict == Verdict::Congruent, v.failed_stage << " " << v.message);
    CHECK(v.theta_sign == -1.0);
    CHECK(v.witness.found);
  }
}

TEST_CASE("a surface against itself") {
  const ParametrizedSurface ref = small_sphere({-1, 0.5});
  const CongruenceVerdict v = congruence_test(ref, ref.renamed("self"), kPoints, quick());
  CHECK(v.verdict == Verdict::Congruent);
  CHECK(v.alpha_discrepancy < 1e-12);
  CHECK(v.phi_deviation < 1e-5);
  CHECK(v.coverage > 0.5);
  CHECK(v.horizontal_samples > 0);
  CHECK(v.witness.found);
  CHECK(v.witness.isometry.apply(ref.params(), Vec3(0.1, 0.2, 0.3)).isApprox(Vec3(0.1, 0.2, 0.3), 1e-12));
}

TEST_CASE("perturbed members violate the hypotheses at the metric stage") {
  const SpaceParams sp{0, 0.5};
  const ParametrizedSurface ref = small_sphere(sp);
  for (PerturbationMode mode : {PerturbationMode::Radial, PerturbationMode::Vertical}) {
    const Family f = perturbed_family(ref, mode, 1e-2, kCenter, {1});
    const CongruenceVerdict v = congruence_test(ref, f.members[0], kPoints, quick());
    CHECK(v.verdict == Verdict::HypothesesViolated);
    CHECK(v.failed_stage == "a:isometric");
  }
}

TEST_CASE("a horizontal point among the three points fails the precondition") {
  const ParametrizedSurface ref = small_sphere({0, 0.5});
  const HorizontalSearch h = find_horizontal_points(ref);
  REQUIRE(!h.points.empty());
  const CongruenceVerdict v =
      congruence_test(ref, ref.renamed("self"), {kPoints[0], h.points[0], kPoints[2]}, quick());
  CHECK(v.verdict == Verdict::HypothesesViolated);
  CHECK(v.failed_stage == "precondition");
}

TEST_CASE("witness search across the supported isometries") {
  for (const SpaceParams& sp : oracle::grid_spaces()) {
    const ParametrizedSurface ref = small_sphere(sp);
    std::vector<Isometry> isos{Isometry::vertical_translation(-0.4), Isometry::fiber_rotation(2.1),
                               Isometry::fiber_rotation(0.3).then(Isometry::vertical_translation(1.1)),
                               Isometry::half_turn(1.0).then(Isometry::fiber_rotation(-0.6))};
    if (sp.k == 0) isos.push_back(Isometry::horizontal_translation(0.3, -0.7));
    for (const Isometry& iso : isos) {
      const ParametrizedSurface m = ref.moved(iso, "m");
      const Witness w = find_witness(ref, m, kPoints[0], kPoints[1]);
      CHECK_MESSAGE(w.found, iso.describe());
      for (const Vec2& uv : kPoints)
        CHECK((w.isometry.apply(sp, ref.position(uv)) - m.position(uv)).norm() < 1e-8);
    }
  }
}
