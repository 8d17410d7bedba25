#pragma once

#include <string>
#include <vector>

#include "ektau/defaults.hpp"
#include "ektau/equations.hpp"
#include "ektau/isometry.hpp"
#include "ektau/surface.hpp"

namespace ektau {

enum class FieldDirection { V, Jv };
std::string to_string(FieldDirection d);

struct TrajectoryNode {
  double s = 0.0;
  Vec2 uv = Vec2::Zero();
  double phi_direct = 0.0;
  double phi_propagated = 0.0;  // NaN for geometry-only records
};

struct TrajectoryRecord {
  FieldDirection direction = FieldDirection::V;
  double step = 0.0;
  double sign = 1.0;  // +1 follows the field, -1 runs against it
  std::vector<TrajectoryNode> nodes;
  bool truncated = false;
  std::string truncation;
  bool propagated = false;
  double max_deviation = 0.0;    // max |phi_propagated - phi_direct|
  double max_speed_error = 0.0;  // max |chord length / step - 1| between consecutive nodes
};

struct TrajectoryOptions {
  double step = defaults::kTrajectoryStep;
  double min_cos = defaults::kTrajectoryCos;  // stop before |cos theta| drops below this
  SignConvention convention = SignConvention::Derived;
  FrameOptions frame;
};

/// RK4 integration in the parameter domain of the unit field v or Jv (arclength
/// parametrization). Stops with truncated = true before leaving the domain or approaching a
/// horizontal point.
TrajectoryRecord integral_curve(const ParametrizedSurface& s, const Vec2& start, FieldDirection dir,
                                double length, const TrajectoryOptions& opt = {},
                                double sign = 1.0);

/// Joint RK4 integration of the trajectory and of the phi equation from phi0.
TrajectoryRecord propagate_phi(const ParametrizedSurface& s, const Vec2& start, FieldDirection dir,
                               double length, double phi0, const TrajectoryOptions& opt = {},
                               double sign = 1.0);

/// Same start, direction, length and step as an existing record.
TrajectoryRecord propagate_phi(const ParametrizedSurface& s, const TrajectoryRecord& trajectory,
                               double phi0, const TrajectoryOptions& opt = {});

struct ConvergenceReport {
  std::vector<double> steps;
  std::vector<Vec3> endpoints;  // (u, v, phi)
  double diff_coarse = 0.0;     // |y(h) - y(h/2)|
  double diff_fine = 0.0;       // |y(h/2) - y(h/4)|
  double order = 0.0;           // log2(diff_coarse / diff_fine)
};

/// Observed order of the joint (u, v, phi) integrator from steps h, h/2, h/4.
ConvergenceReport measure_convergence_order(const ParametrizedSurface& s, const Vec2& start,
                                            FieldDirection dir, double length, double h,
                                            const TrajectoryOptions& opt = {});

// --- congruence -------------------------------------------------------------------------------

enum class Verdict { Congruent, NotCongruent, HypothesesViolated };
std::string to_string(Verdict v);

struct StageResult {
  std::string stage;
  bool pass = true;
  double value = 0.0;      // measured discrepancy
  double tolerance = 0.0;
  std::string detail;
};

struct Witness {
  bool found = false;
  Isometry isometry;
  double residual = 0.0;  // max chart distance between h(reference) and member on samples
  std::string description;
};

/// Ambient frames at the seed, emitted when no witness in the implemented subgroup exists.
struct AlignmentData {
  Vec3 reference_point = Vec3::Zero(), member_point = Vec3::Zero();
  Vec3 reference_e1 = Vec3::Zero(), member_e1 = Vec3::Zero();
  Vec3 reference_normal = Vec3::Zero(), member_normal = Vec3::Zero();
};

struct CongruenceOptions {
  int metric_grid = defaults::kMetricGrid;
  double metric_tol = defaults::kMetricAgreeTol;
  double curvature_tol = defaults::kCurvatureAgreeTol;
  double theta_tol = defaults::kThetaAgreeTol;
  double phi_tol = defaults::kPhiAgreeTol;
  double propagation_tol = defaults::kPropagationTol;
  double alpha_tol = defaults::kAlphaTol;
  double witness_tol = defaults::kWitnessTol;
  int net_v = defaults::kNetV;
  int net_jv = defaults::kNetJv;
  double v_length = defaults::kNetVLength;
  double jv_length = defaults::kNetJvLength;
  TrajectoryOptions trajectory;
};

struct CongruenceVerdict {
  std::string member;
  Verdict verdict = Verdict::Congruent;
  std::string failed_stage;  // empty when congruent
  std::string message;
  std::vector<StageResult> stages;
  Vec2 seed = Vec2::Zero();
  double theta_sign = 1.0;  // member theta = theta_sign * reference theta
  std::vector<double> phi_roots;
  double seed_phi = 0.0;
  double alpha_discrepancy = 0.0;    // member alpha in the reference frame against reference alpha
  double alpha_reconstructed = 0.0;  // (alpha11, alpha12) rebuilt from the propagated phi
  double phi_deviation = 0.0;  // propagated member phi against reference phi on the net
  int net_curves = 0;
  int net_nodes = 0;
  double coverage = 0.0;  // fraction of non-horizontal grid cells visited by the net
  int horizontal_samples = 0;     // points sampled around the reference horizontal points
  double horizontal_alpha = 0.0;  // max |II_member - II_reference| there, parameter basis
  Witness witness;
  AlignmentData alignment;
};

/// Rigidity pipeline for one member against the reference, over the shared parameter domain.
/// Stages: precondition, a (induced metric), b (K_e), c (theta up to sign),
/// d (H at the three points), e (phi at the seed among the roots in phi), f (phi propagation
/// along the v/Jv net and alpha comparison), g (witness isometry).
CongruenceVerdict congruence_test(const ParametrizedSurface& reference,
                                  const ParametrizedSurface& member,
                                  const std::vector<Vec2>& three_points,
                                  const CongruenceOptions& opt = {});

std::vector<CongruenceVerdict> congruence_test(const ParametrizedSurface& reference,
                                               const std::vector<ParametrizedSurface>& family,
                                               const std::vector<Vec2>& three_points,
                                               const CongruenceOptions& opt = {});

/// Searches the implemented isometry subgroup for h with h o reference = member, aligning two
/// points and checking on a sample grid.
Witness find_witness(const ParametrizedSurface& reference, const ParametrizedSurface& member,
                     const Vec2& p, const Vec2& q, double tol = defaults::kWitnessTol);

}  // namespace ektau
