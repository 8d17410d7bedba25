#include <doctest.h>

#include <cmath>

#include "ektau/config.hpp"
#include "ektau/errors.hpp"
#include "ektau/report.hpp"

using namespace ektau;

namespace {

const char* kMinimal = R"(
space: {k: 0, tau: 0.5}
surfaces:
  - {name: s, family: coordinate-sphere, center: [0, 0, 0], radius: 0.1}
)";

}  // namespace

TEST_CASE("minimal config fills in defaults") {
  const RunConfig c = parse_config(kMinimal);
  REQUIRE(c.spaces.size() == 1);
  CHECK(c.spaces[0].tau == 0.5);
  CHECK(c.surfaces[0].radius == 0.1);
  CHECK(c.tolerances.closed_form == defaults::kTolClosedForm);
  CHECK(c.tolerances.lemma2 == defaults::kLemma2Tol);
  CHECK(c.grids.samples == defaults::kResidualSamples);
  CHECK(c.seed == defaults::kSeed);
  CHECK(c.net.step == defaults::kTrajectoryStep);
  CHECK(c.out_dir == "out");
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"default.yaml", "perturbed.yaml", "euclidean.yaml"}) {
    const RunConfig c = load_config(std::string(EKTAU_CONFIG_DIR) + "/" + name);
    CHECK(!c.spaces.empty());
    CHECK(!c.surfaces.empty());
  }
  const RunConfig c = load_config(std::string(EKTAU_CONFIG_DIR) + "/default.yaml");
  CHECK(c.spaces.size() == 5);
  CHECK(c.rigidity.families.size() == 3);
  CHECK(c.rigidity.points.size() == 3);
  const SurfaceSpec& bowl = find_surface(c, "bowl");
  CHECK(bowl.center.x() == 0.05);
  CHECK(bowl.center.y() == -0.1);
  CHECK(bowl.coefficients.size() == 10);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("space: [1, 2"), ConfigError);
  CHECK_THROWS_AS(parse_config("- 1\n- 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("surfaces: []\n"), ConfigError);  // no space
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "colour: red\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("space: {k: 0}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("space: {k: zero, tau: 0}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("space: {k: 0, tau: 0}\nspaces: [{k: 0, tau: 0}]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("space: {k: 0, tau: 0}\nsurfaces: [{name: a, family: torus}]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("space: {k: 0, tau: 0}\nsurfaces: [{name: a, family: graph, coefficients: [1]}]\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config("space: {k: 0, tau: 0}\nsurfaces: [{name: a, family: custom-expression, x: u}]\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "tolerances: {ode: -1}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "grids: {samples: 0}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "rigidity: {reference: nope}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "rigidity: {space: 3}\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(std::string(kMinimal) + "rigidity: {families: [{kind: perturbed, mode: sideways, t: [1]}]}\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "  - {name: s, family: coordinate-sphere}\n"),
                  ConfigError);  // duplicate name
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), ConfigError);
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  apply_tolerance_override(t, "ode=2e-3");
  CHECK(t.ode == 2e-3);
  CHECK(t.closed_form == defaults::kTolClosedForm);
  apply_tolerance_override(t, "all=1e-15");
  CHECK(t.closed_form == 1e-15);
  CHECK(t.lemma2 == 1e-15);
  CHECK_THROWS_AS(apply_tolerance_override(t, "ode"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(t, "ode=abc"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(t, "ode=1e-3x"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(t, "ode=0"), ConfigError);
  CHECK_THROWS_AS(apply_tolerance_override(t, "speed=1"), ConfigError);
}

TEST_CASE("options derived from the config") {
  RunConfig c = parse_config(std::string(kMinimal) + "seed: 7\ngrids: {samples: 11, metric: 5}\n"
                                                     "trajectory: {step: 0.002, net_v: 3}\n");
  const SuiteOptions s = suite_options(c);
  CHECK(s.seed == 7);
  CHECK(s.samples == 11);
  const CongruenceOptions o = congruence_options(c);
  CHECK(o.metric_grid == 5);
  CHECK(o.trajectory.step == 0.002);
  CHECK(o.net_v == 3);
  CHECK(o.net_jv == defaults::kNetJv);
}

TEST_CASE("report formats") {
  CHECK(fmt(0.1) == "0.1");
  CHECK(fmt(std::nan("")) == "nan");
  CHECK(fmt(-INFINITY) == "-inf");
  const ParametrizedSurface s = coordinate_sphere({0, 0.5}, {0, 0, 0}, 0.1);
  const std::string csv = analyze_csv(s, 3);
  CHECK(csv.rfind("u,v,x,y,z,E,F,G,H,K_e,K,g,theta,phi,grad_theta_norm,lambda1,lambda2,horizontal_flag\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  CHECK(analyze_csv(s, 3) == csv);

  SuiteOptions opt;
  opt.samples = 5;
  SuiteRun run{{0, 0.5}, "s", convexity_report(s, 6), run_suite(s, opt)};
  const std::string rows = residuals_csv({run});
  CHECK(rows.rfind("k,tau,surface,id,u,v,lhs,rhs,abs,scale,rel\n", 0) == 0);
  const std::string sum = summary_csv({run});
  CHECK(sum.find("eq1") != std::string::npos);
  CHECK(summary_text({run}).find("all gating residuals pass") != std::string::npos);
}
