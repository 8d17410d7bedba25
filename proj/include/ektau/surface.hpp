#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ektau/defaults.hpp"
#include "ektau/isometry.hpp"
#include "ektau/jet.hpp"
#include "ektau/space.hpp"

namespace ektau {

/// Rectangle [u_min, u_max] x [v_min, v_max]. Non-periodic edges keep a margin that sampling
/// and trajectories stay out of (parametrization singularities live there for spheres).
struct ParamDomain {
  double u_min = 0.0, u_max = 1.0;
  double v_min = 0.0, v_max = 1.0;
  bool periodic_u = false;
  bool periodic_v = false;
  double margin = 0.0;

  bool inside(const Vec2& uv) const;
  /// Maps [0, 1]^2 onto the usable part of the domain.
  Vec2 at(double su, double sv) const;
  double spacing(int n) const;
};

using SurfaceJet = std::array<Jet2, 3>;
using JetEvaluator = std::function<SurfaceJet(const Jet2& u, const Jet2& v)>;

/// Position and partial derivatives up to order two, in chart coordinates.
struct SurfaceJetValues {
  Vec3 f, fu, fv, fuu, fuv, fvv;
};

/// An immersion given by formulas that can be evaluated on jets, so every 2-jet is exact.
class ParametrizedSurface {
 public:
  ParametrizedSurface(std::string name, SpaceParams params, ParamDomain domain, JetEvaluator eval);

  const std::string& name() const { return name_; }
  const SpaceParams& params() const { return params_; }
  Space space() const { return Space(params_); }
  const ParamDomain& domain() const { return domain_; }

  SurfaceJetValues jet(const Vec2& uv) const;
  Vec3 position(const Vec2& uv) const;

  /// The surface composed with an ambient isometry.
  ParametrizedSurface moved(const Isometry& iso, std::string name) const;
  ParametrizedSurface renamed(std::string name) const;

  const JetEvaluator& evaluator() const { return eval_; }

 private:
  std::string name_;
  SpaceParams params_;
  ParamDomain domain_;
  JetEvaluator eval_;
};

/// Central-difference (Richardson-refined) 2-jet built from positions only.
SurfaceJetValues finite_difference_jet(const ParametrizedSurface& s, const Vec2& uv,
                                       double h = defaults::kJetOracleStep);

enum class ThetaBranch {
  Principal,  // theta in [-pi/2, pi/2], cos(theta) >= 0
  Shifted,    // theta in [pi/2, 3pi/2], cos(theta) <= 0
};

struct FrameOptions {
  ThetaBranch branch = ThetaBranch::Principal;
  double horizontal_eps = defaults::kHorizontalEps;
  double grad_eps = defaults::kGradThetaEps;
  bool intrinsic = false;  // also compute K from the first fundamental form
  double fd_step = defaults::kFieldStep;
};

/// Pointwise geometry of an immersed surface. Fields after `frame_defined` are meaningful only
/// when that flag is set, and (v, Jv, phi) only when `v_defined` is set.
struct SurfacePointData {
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  SpaceParams params;
  Vec2 uv = Vec2::Zero();
  Vec3 point = Vec3::Zero();
  Vec3 fu = Vec3::Zero(), fv = Vec3::Zero();

  double E = 0.0, F = 0.0, G = 0.0;
  Mat2 first = Mat2::Identity();
  Mat2 second = Mat2::Zero();  // (L, M; M, N) in the (u, v) basis
  Mat2 shape = Mat2::Zero();   // first^-1 second
  Vec3 normal = Vec3::Zero();
  bool normal_flipped = false;

  double lambda1 = 0.0, lambda2 = 0.0;  // lambda1 >= lambda2
  Vec3 dir1 = Vec3::Zero(), dir2 = Vec3::Zero();
  double H = 0.0;
  double Ke = 0.0;
  double K = kNaN;        // intrinsic, from the first fundamental form (when requested)
  double K_gauss = 0.0;   // K_e + tau^2 + (k - 4 tau^2) nu^2

  double g = 0.0;  // <N, xi> = sin(theta) = nu
  double tangential_xi = 0.0;  // |xi - g N| = |cos(theta)|
  bool horizontal = false;

  bool frame_defined = false;
  double theta = kNaN;
  Vec3 e1 = Vec3::Zero(), e2 = Vec3::Zero();
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;  // alpha in (e1, e2)
  Vec2 dtheta = Vec2::Zero();              // (d theta(e1), d theta(e2)), algebraic
  Vec3 grad_theta = Vec3::Zero();
  double grad_theta_norm = 0.0;

  bool v_defined = false;
  Vec3 v = Vec3::Zero(), Jv = Vec3::Zero();
  double phi = kNaN;

  double inner(const Vec3& a, const Vec3& b) const;
  /// Parameter-space coefficients (a, b) of a tangent vector X = a f_u + b f_v.
  Vec2 to_params(const Vec3& x) const;
  Vec3 from_params(const Vec2& ab) const { return ab.x() * fu + ab.y() * fv; }
  /// Second fundamental form alpha(X, Y) = <grad_X Y, N>.
  double alpha(const Vec3& x, const Vec3& y) const;
  /// Positive rotation by pi/2 in the tangent plane: J X = N x X.
  Vec3 J(const Vec3& x) const;
};

SurfacePointData fundamental_forms(const ParametrizedSurface& s, const Vec2& uv,
                                   bool intrinsic = false, double fd_step = defaults::kFieldStep);

/// Gaussian curvature of the induced metric from E, F, G alone (Brioschi formula, derivatives
/// of E, F, G by Richardson-refined central differences).
double intrinsic_curvature(const ParametrizedSurface& s, const Vec2& uv,
                           double h = defaults::kFieldStep);

/// |K - (K_e + tau^2 + (k - 4 tau^2) nu^2)|; computes K if the data lacks it.
double gauss_check(const ParametrizedSurface& s, const SurfacePointData& data);

struct SpecialFrame {
  Vec3 e1, e2;
  double theta;
};

/// e1 = P(xi) / |P(xi)| (sign per branch), e2 = J e1 and xi = cos(theta) e1 + sin(theta) N.
/// Throws FrameUndefined at horizontal points.
SpecialFrame special_frame(const SurfacePointData& data,
                           ThetaBranch branch = ThetaBranch::Principal,
                           double horizontal_eps = defaults::kHorizontalEps);

struct GradTheta {
  Vec3 vector;
  double norm;
  Vec2 frame;  // (d theta(e1), d theta(e2))
};

/// d theta(X) = -alpha(e1, X) - tau <X, e2>, assembled into a gradient.
GradTheta grad_theta(const SurfacePointData& data);

struct VPhi {
  Vec3 v, Jv;
  double phi;
};

/// v = -J grad(theta) / |grad(theta)| and phi the angle from e1 to v.
VPhi v_and_phi(const SurfacePointData& data, double grad_eps = defaults::kGradThetaEps);

/// Everything that is defined at the point; never throws for horizontal or degenerate-gradient
/// points (flags are left unset instead). Throws DomainError for non-immersed points.
SurfacePointData analyze(const ParametrizedSurface& s, const Vec2& uv, const FrameOptions& opt = {});

// Derivatives of derived fields along a tangent vector X, by Richardson central differences in
// the parameter direction of X. The ambient connection term is added for vector fields.

double theta_derivative_fd(const ParametrizedSurface& s, const SurfacePointData& at,
                           const Vec3& x, const FrameOptions& opt = {});
double phi_derivative_fd(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                         const FrameOptions& opt = {});
double g_derivative_fd(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                       double h = defaults::kFieldStep);

Vec3 covariant_field_derivative(const ParametrizedSurface& s, const SurfacePointData& at,
                                const Vec3& x,
                                const std::function<Vec3(const SurfacePointData&)>& field,
                                const FrameOptions& opt = {});

/// w12(X) = <grad_X e1, e2>.
double connection_form(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                       const FrameOptions& opt = {});
/// w~12(X) = <grad_X v, Jv>.
double connection_form_v(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                         const FrameOptions& opt = {});

struct HorizontalSearch {
  std::vector<Vec2> points;
  std::vector<Vec3> positions;
  std::vector<double> residuals;  // |xi x N| at each point
  double min_separation = std::numeric_limits<double>::infinity();  // in parameter space
  double grid_spacing = 0.0;
  int skipped_seeds = 0;
  std::vector<std::string> warnings;
};

/// Zeros of xi x N: grid seeding followed by Newton on (<f_u, xi x n>, <f_v, xi x n>).
HorizontalSearch find_horizontal_points(const ParametrizedSurface& s,
                                        int grid = defaults::kHorizontalGrid);

struct LocusTrace {
  std::vector<Vec2> nodes;
  std::vector<double> g_values;
  bool closed = false;
  bool sign_change_everywhere = false;
  double max_abs_g = 0.0;
  double length = 0.0;  // parameter-space polyline length
};

struct ContinuationOptions {
  double step = defaults::kLocusStep;
  double min_step = defaults::kLocusMinStep;
  double tol = defaults::kLocusTol;
  int max_nodes = defaults::kLocusMaxNodes;
  double side_offset = 1e-3;
};

/// Traces the zero set of a scalar function on the parameter plane by predictor-corrector
/// continuation, starting from (a point near) seed. Closure is detected in ambient space via
/// `embed`. Throws ConvergenceError on stall.
LocusTrace trace_level_set(const std::function<double(const Vec2&)>& fn, const Vec2& seed,
                           const std::function<bool(const Vec2&)>& inside,
                           const std::function<Vec3(const Vec2&)>& embed,
                           const ContinuationOptions& opt = {});

/// The vertical locus g^-1(0) through a seed near a vertical point.
LocusTrace vertical_locus(const ParametrizedSurface& s, const Vec2& seed,
                          const ContinuationOptions& opt = {});

}  // namespace ektau
