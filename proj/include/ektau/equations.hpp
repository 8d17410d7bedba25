#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ektau/defaults.hpp"
#include "ektau/surface.hpp"

namespace ektau {

struct ResidualReport {
  std::string id;
  Vec2 uv = Vec2::Zero();
  double lhs = 0.0;
  double rhs = 0.0;
  double abs = 0.0;
  double scale = 0.0;  // largest term magnitude
  double rel = 0.0;    // abs / max(scale, 1)
};

ResidualReport make_report(std::string id, const Vec2& uv, double lhs, double rhs, double scale);

/// Sign/exponent pattern for the re-derivable identities. Derived follows from the verified
/// building blocks; Printed is the alternative literal form.
enum class SignConvention { Derived, Printed };
std::string to_string(SignConvention c);

/// Printed has alpha(e1, e2) in both slots; Corrected puts alpha(e1, e1) first.
enum class Reading { Corrected, Printed };
std::string to_string(Reading r);

// --- first-order identities -------------------------------------------------------------------

/// alpha(e1, X) = -d theta(X) - tau <X, e2>, with d theta by finite differences.
ResidualReport residual_eq1(const ParametrizedSurface& s, const SurfacePointData& d, const Vec3& x,
                            const FrameOptions& opt = {});

/// alpha(X, e2) = cot(theta) w12(X) + sign tau <e1, X>; sign = +1 (Derived) or -1 (Printed).
/// Requires |sin theta| > defaults::kVerticalSin.
ResidualReport residual_alpha_e2(const ParametrizedSurface& s, const SurfacePointData& d,
                                 const Vec3& x, SignConvention c = SignConvention::Derived,
                                 const FrameOptions& opt = {});

/// alpha11 = |grad theta| sin(phi) and alpha12 = -|grad theta| cos(phi) - tau, with grad theta
/// and phi taken from finite differences of theta.
std::pair<ResidualReport, ResidualReport> residual_alpha_frame(const ParametrizedSurface& s,
                                                               const SurfacePointData& d,
                                                               const FrameOptions& opt = {});

ResidualReport residual_eq2(const SurfacePointData& d, Reading r = Reading::Corrected);
ResidualReport residual_eq3(const SurfacePointData& d, Reading r = Reading::Corrected);

// --- phi equations ----------------------------------------------------------------------------

/// Everything the phi equations need besides phi itself. All of it is shared by isometric
/// immersions with the same theta.
struct PhiOdeInputs {
  double theta = 0.0;
  double grad_norm = 0.0;  // |grad theta|
  double Ke = 0.0;
  double tau = 0.0;
  double wt12 = 0.0;  // w~12 along the direction of differentiation
};

/// Closed forms of alpha(e2, v) and alpha(Jv, e2) in terms of phi.
double alpha_e2_v_closed(double phi, const PhiOdeInputs& in, SignConvention c);
double alpha_Jv_e2_closed(double phi, const PhiOdeInputs& in, SignConvention c);

/// d phi(v) and d phi(Jv) as functions of phi.
double ode_rhs_v(double phi, const PhiOdeInputs& in, SignConvention c = SignConvention::Derived);
double ode_rhs_Jv(double phi, const PhiOdeInputs& in, SignConvention c = SignConvention::Derived);

/// Inputs at a surface point; w~12 along v (along_v) or Jv by finite differences of v.
PhiOdeInputs phi_ode_inputs(const ParametrizedSurface& s, const SurfacePointData& d, bool along_v,
                            const FrameOptions& opt = {});

/// eq4 / eq6: direct alpha against the closed form. eq5 / eq7: direct alpha against
/// cot(theta) (w~12 - d phi) + sign tau <e1, .>, finite differences for w~12 and d phi.
ResidualReport residual_eq4(const SurfacePointData& d, SignConvention c);
ResidualReport residual_eq6(const SurfacePointData& d, SignConvention c);
ResidualReport residual_eq5(const ParametrizedSurface& s, const SurfacePointData& d,
                            SignConvention c, const FrameOptions& opt = {});
ResidualReport residual_eq7(const ParametrizedSurface& s, const SurfacePointData& d,
                            SignConvention c, const FrameOptions& opt = {});

/// ode_rhs against the finite-difference derivative of phi along v (along_v) or Jv.
ResidualReport residual_ode(const ParametrizedSurface& s, const SurfacePointData& d, bool along_v,
                            SignConvention c, const FrameOptions& opt = {});

// --- quadratic in phi -------------------------------------------------------------------------

struct Fact3Report {
  ResidualReport identity;  // alpha11 (2H - alpha11) - alpha12^2 = K_e
  double A = 0.0, C = 0.0;
  double B_derived = 0.0;   // -2 tau |grad theta|
  double B_printed = 0.0;   // +2 tau |grad theta|
  double residual_derived = 0.0;  // A sin(phi) + B cos(phi) + C at the actual phi
  double residual_printed = 0.0;
  std::vector<double> roots;  // roots of the derived form in (-pi, pi]
  bool all_coefficients_zero = false;
  bool phi_among_roots = false;
  double phi_root_gap = 0.0;
};

/// Roots of A sin(x) + B cos(x) + C = 0 in (-pi, pi]. Empty when there are none or when all
/// coefficients vanish (every x is a root).
std::vector<double> sincos_roots(double A, double B, double C);

Fact3Report fact3_quadratic(const SurfacePointData& d);

// --- theta from K -----------------------------------------------------------------------------

/// nu = sin(theta) from the Gauss equation K = K_e + tau^2 + (k - 4 tau^2) nu^2. Returns {nu, -nu}
/// ({0} when nu = 0). Throws DegenerateSpace when k = 4 tau^2 and InconsistentData when nu^2 is
/// outside [0, 1].
std::vector<double> solve_theta(double K, double Ke, const SpaceParams& sp,
                                double slack = defaults::kTolJetVsFd);

// --- vertical points --------------------------------------------------------------------------

struct Lemma1Report {
  Vec2 uv = Vec2::Zero();
  double g = 0.0;
  double dg_xi = 0.0;         // finite-difference derivative of g along xi
  double k_CP = 0.0;          // <grad^P_T N_C^P, T> from the traced curve C = surface cap P
  double normal_section = 0.0;  // alpha(xi, xi) from the jet, the curvature of C towards N
  double grad_g_norm = 0.0;     // |grad g|, > 0 means g is a submersion near the point
  ResidualReport residual;    // dg_xi against k_CP
  int curve_nodes = 0;
};

/// Requires |g| < 1e-6 at uv (a vertical point).
Lemma1Report lemma1_check(const ParametrizedSurface& s, const Vec2& uv,
                          double h = defaults::kFieldStep);

// --- horizontal points ------------------------------------------------------------------------

struct Lemma2Report {
  Vec2 uv = Vec2::Zero();
  double xi_cross_n = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;
  double orientation = 0.0;  // s with xi = s N at the point
  Mat2 jacobian = Mat2::Zero();  // finite differences, basis (v1, v2) with xi x v1 = v2
  Mat2 printed = Mat2::Zero();   // [[tau, lambda2], [-lambda1, -tau]]
  Mat2 derived = Mat2::Zero();   // [[-s tau, lambda2], [-lambda1, -s tau]]
  double printed_residual = 0.0;   // max-abs entry difference
  double derived_residual = 0.0;
  double det_fd = 0.0;
  double det_printed = 0.0;  // K_e - tau^2
  double det_derived = 0.0;  // K_e + tau^2
};

Lemma2Report lemma2_check(const ParametrizedSurface& s, const Vec2& uv,
                          double h = defaults::kFieldStep);

// --- suites -----------------------------------------------------------------------------------

struct Tolerances {
  double closed_form = defaults::kTolClosedForm;
  double jet_vs_fd = defaults::kTolJetVsFd;
  double layered = defaults::kTolLayered;
  double ode = defaults::kOdeTol;
  double lemma2 = defaults::kLemma2Tol;
};

struct ResidualSummary {
  std::string id;
  std::string tier;
  double tolerance = 0.0;
  bool gating = true;  // informational entries never fail a suite
  int count = 0;
  double max_rel = 0.0;
  double mean_rel = 0.0;
  double max_abs = 0.0;
  Vec2 worst_uv = Vec2::Zero();
  bool pass = true;
};

struct SuiteOptions {
  int samples = defaults::kResidualSamples;
  unsigned long long seed = defaults::kSeed;
  Tolerances tol;
  int horizontal_grid = defaults::kHorizontalGrid;
  int vertical_points = 6;
  bool expect_two_horizontal = false;  // compact convex examples
  FrameOptions frame;
};

struct SuiteResult {
  std::string surface;
  std::vector<ResidualReport> rows;
  std::vector<ResidualSummary> summary;
  std::vector<std::string> notes;
  bool pass = true;
};

/// Random parameter points where the special frame is usable (|cos theta| > kSampleExclusion),
/// v is defined when need_v is set and, when need_sin is set, |sin theta| > kSampleExclusion.
std::vector<Vec2> sample_frame_points(const ParametrizedSurface& s, int n,
                                      unsigned long long seed, bool need_v, bool need_sin,
                                      const FrameOptions& opt = {});

/// Vertical points spread along the vertical locus (empty if g has no sign change on a grid).
std::vector<Vec2> sample_vertical_points(const ParametrizedSurface& s, int n);

/// Runs every residual that applies to the surface.
SuiteResult run_suite(const ParametrizedSurface& s, const SuiteOptions& opt = {});

}  // namespace ektau
