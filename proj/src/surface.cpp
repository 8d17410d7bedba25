#include "ektau/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ektau/numeric.hpp"

namespace ektau {

// ---------------------------------------------------------------------------------------------
// Domain and surface

bool ParamDomain::inside(const Vec2& uv) const {
  if (!uv.allFinite()) return false;
  if (!periodic_u && (uv.x() < u_min + margin || uv.x() > u_max - margin)) return false;
  if (!periodic_v && (uv.y() < v_min + margin || uv.y() > v_max - margin)) return false;
  return true;
}

Vec2 ParamDomain::at(double su, double sv) const {
  const double mu = periodic_u ? 0.0 : margin;
  const double mv = periodic_v ? 0.0 : margin;
  return {u_min + mu + su * (u_max - u_min - 2.0 * mu), v_min + mv + sv * (v_max - v_min - 2.0 * mv)};
}

double ParamDomain::spacing(int n) const {
  return std::max(u_max - u_min, v_max - v_min) / std::max(1, n);
}

ParametrizedSurface::ParametrizedSurface(std::string name, SpaceParams params, ParamDomain domain,
                                         JetEvaluator eval)
    : name_(std::move(name)), params_(params), domain_(domain), eval_(std::move(eval)) {}

SurfaceJetValues ParametrizedSurface::jet(const Vec2& uv) const {
  const SurfaceJet r = eval_(Jet2::variable(uv.x(), 0), Jet2::variable(uv.y(), 1));
  SurfaceJetValues j;
  for (int i = 0; i < 3; ++i) {
    j.f[i] = r[i].v;
    j.fu[i] = r[i].d[0];
    j.fv[i] = r[i].d[1];
    j.fuu[i] = r[i].hess(0, 0);
    j.fuv[i] = r[i].hess(0, 1);
    j.fvv[i] = r[i].hess(1, 1);
  }
  return j;
}

Vec3 ParametrizedSurface::position(const Vec2& uv) const {
  const SurfaceJet r = eval_(Jet2(uv.x()), Jet2(uv.y()));
  return {r[0].v, r[1].v, r[2].v};
}

ParametrizedSurface ParametrizedSurface::moved(const Isometry& iso, std::string name) const {
  iso.validate(params_);
  JetEvaluator base = eval_;
  const SpaceParams sp = params_;
  return ParametrizedSurface(std::move(name), params_, domain_,
                             [base, iso, sp](const Jet2& u, const Jet2& v) {
                               return iso.apply<Jet2>(sp, base(u, v));
                             });
}

ParametrizedSurface ParametrizedSurface::renamed(std::string name) const {
  return ParametrizedSurface(std::move(name), params_, domain_, eval_);
}

SurfaceJetValues finite_difference_jet(const ParametrizedSurface& s, const Vec2& uv, double h) {
  const Vec2 eu = Vec2::UnitX(), ev = Vec2::UnitY();
  SurfaceJetValues j;
  j.f = s.position(uv);
  j.fu = central_derivative([&](double t) { return Vec3(s.position(uv + t * eu)); }, h);
  j.fv = central_derivative([&](double t) { return Vec3(s.position(uv + t * ev)); }, h);
  j.fuu = central_second_derivative([&](double t) { return Vec3(s.position(uv + t * eu)); }, h);
  j.fvv = central_second_derivative([&](double t) { return Vec3(s.position(uv + t * ev)); }, h);
  j.fuv = central_mixed_derivative(
      [&](double a, double b) { return Vec3(s.position(uv + a * eu + b * ev)); }, h);
  return j;
}

// ---------------------------------------------------------------------------------------------
// Point data helpers

double SurfacePointData::inner(const Vec3& a, const Vec3& b) const {
  return Space(params).inner(point, a, b);
}

Vec2 SurfacePointData::to_params(const Vec3& x) const {
  const Vec2 rhs(inner(x, fu), inner(x, fv));
  return first.ldlt().solve(rhs);
}

double SurfacePointData::alpha(const Vec3& x, const Vec3& y) const {
  return to_params(x).dot(second * to_params(y));
}

Vec3 SurfacePointData::J(const Vec3& x) const { return Space(params).cross(point, normal, x); }

namespace {

Vec3 first_form_coefficients(const ParametrizedSurface& s, const Vec2& uv) {
  const SurfaceJetValues j = s.jet(uv);
  const Mat3 g = s.space().metric(j.f);
  return {j.fu.dot(g * j.fu), j.fu.dot(g * j.fv), j.fv.dot(g * j.fv)};
}

void fill_frame(SurfacePointData& d, const FrameOptions& opt) {
  d.horizontal = d.tangential_xi < opt.horizontal_eps;
  if (d.horizontal) return;
  const SpecialFrame fr = special_frame(d, opt.branch, opt.horizontal_eps);
  d.frame_defined = true;
  d.e1 = fr.e1;
  d.e2 = fr.e2;
  d.theta = fr.theta;
  d.a11 = d.alpha(d.e1, d.e1);
  d.a12 = d.alpha(d.e1, d.e2);
  d.a22 = d.alpha(d.e2, d.e2);
  const GradTheta gt = grad_theta(d);
  d.grad_theta = gt.vector;
  d.grad_theta_norm = gt.norm;
  d.dtheta = gt.frame;
  if (gt.norm > opt.grad_eps) {
    const VPhi vp = v_and_phi(d, opt.grad_eps);
    d.v_defined = true;
    d.v = vp.v;
    d.Jv = vp.Jv;
    d.phi = vp.phi;
  }
}

}  // namespace

SurfacePointData fundamental_forms(const ParametrizedSurface& s, const Vec2& uv, bool intrinsic,
                                   double fd_step) {
  const Space space = s.space();
  const SurfaceJetValues j = s.jet(uv);
  space.require_admissible(j.f);

  SurfacePointData d;
  d.params = s.params();
  d.uv = uv;
  d.point = j.f;
  d.fu = j.fu;
  d.fv = j.fv;

  const Mat3 gm = space.metric(j.f);
  d.E = j.fu.dot(gm * j.fu);
  d.F = j.fu.dot(gm * j.fv);
  d.G = j.fv.dot(gm * j.fv);
  d.first << d.E, d.F, d.F, d.G;
  const double det = d.E * d.G - d.F * d.F;
  if (!(det > 1e-14 * d.E * d.G) || !std::isfinite(det)) {
    std::ostringstream os;
    os << "degenerate tangent basis at (u, v) = (" << uv.x() << ", " << uv.y() << ") in "
       << s.name();
    throw DomainError(os.str());
  }

  Vec3 n = space.cross(j.f, j.fu, j.fv);
  n /= space.norm(j.f, n);

  const Christoffel gamma = space.christoffel(j.f);
  auto accel = [&](const Vec3& second_partial, const Vec3& a, const Vec3& b) {
    return Vec3(second_partial + Vec3(a.dot(gamma[0] * b), a.dot(gamma[1] * b), a.dot(gamma[2] * b)));
  };
  auto g_inner = [&](const Vec3& a, const Vec3& b) { return a.dot(gm * b); };
  double L = g_inner(accel(j.fuu, j.fu, j.fu), n);
  double M = g_inner(accel(j.fuv, j.fu, j.fv), n);
  double N = g_inner(accel(j.fvv, j.fv, j.fv), n);
  d.second << L, M, M, N;
  d.shape = d.first.inverse() * d.second;
  d.H = 0.5 * d.shape.trace();
  if (d.H < -1e-12) {
    n = -n;
    d.second = -d.second;
    d.shape = -d.shape;
    d.H = -d.H;
    d.normal_flipped = true;
  }
  d.normal = n;
  d.Ke = d.second.determinant() / det;

  Eigen::GeneralizedSelfAdjointEigenSolver<Mat2> es(d.second, d.first);
  d.lambda2 = es.eigenvalues()(0);
  d.lambda1 = es.eigenvalues()(1);
  d.dir1 = d.from_params(es.eigenvectors().col(1));
  d.dir2 = d.from_params(es.eigenvectors().col(0));
  d.dir1 /= space.norm(d.point, d.dir1);
  d.dir2 /= space.norm(d.point, d.dir2);

  d.g = space.to_frame(j.f, n).z();
  const Vec3 p_xi = Vec3::UnitZ() - d.g * n;
  d.tangential_xi = space.norm(j.f, p_xi);

  const SpaceParams& sp = s.params();
  d.K_gauss = d.Ke + sp.tau * sp.tau + sp.space_form_defect() * d.g * d.g;
  if (intrinsic) d.K = intrinsic_curvature(s, uv, fd_step);
  return d;
}

double intrinsic_curvature(const ParametrizedSurface& s, const Vec2& uv, double h) {
  const Vec2 eu = Vec2::UnitX(), ev = Vec2::UnitY();
  auto efg = [&](const Vec2& q) { return first_form_coefficients(s, q); };
  const Vec3 c = efg(uv);
  const Vec3 du = central_derivative([&](double t) { return efg(uv + t * eu); }, h);
  const Vec3 dv = central_derivative([&](double t) { return efg(uv + t * ev); }, h);
  const double Evv = central_second_derivative([&](double t) { return efg(uv + t * ev).x(); }, h);
  const double Guu = central_second_derivative([&](double t) { return efg(uv + t * eu).z(); }, h);
  const double Fuv =
      central_mixed_derivative([&](double a, double b) { return efg(uv + a * eu + b * ev).y(); }, h);

  const double E = c.x(), F = c.y(), G = c.z();
  const double Eu = du.x(), Fu = du.y(), Gu = du.z();
  const double Ev = dv.x(), Fv = dv.y(), Gv = dv.z();
  Mat3 a;
  a << -0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
       Fv - 0.5 * Gu, E, F,
       0.5 * Gv, F, G;
  Mat3 b;
  b << 0.0, 0.5 * Ev, 0.5 * Gu,
       0.5 * Ev, E, F,
       0.5 * Gu, F, G;
  const double w = E * G - F * F;
  return (a.determinant() - b.determinant()) / (w * w);
}

double gauss_check(const ParametrizedSurface& s, const SurfacePointData& data) {
  const double K = std::isnan(data.K) ? intrinsic_curvature(s, data.uv) : data.K;
  return std::abs(K - data.K_gauss);
}

SpecialFrame special_frame(const SurfacePointData& data, ThetaBranch branch,
                           double horizontal_eps) {
  if (data.tangential_xi < horizontal_eps) {
    std::ostringstream os;
    os << "special frame undefined at horizontal point (u, v) = (" << data.uv.x() << ", "
       << data.uv.y() << ")";
    throw FrameUndefined(os.str());
  }
  const Vec3 p_xi = Vec3::UnitZ() - data.g * data.normal;
  SpecialFrame fr;
  if (branch == ThetaBranch::Principal) {
    fr.e1 = p_xi / data.tangential_xi;
    fr.theta = std::atan2(data.g, data.tangential_xi);
  } else {
    fr.e1 = -p_xi / data.tangential_xi;
    fr.theta = std::atan2(data.g, -data.tangential_xi);
    if (fr.theta < 0.0) fr.theta += 2.0 * kPi;
  }
  fr.e2 = data.J(fr.e1);
  return fr;
}

GradTheta grad_theta(const SurfacePointData& data) {
  if (!data.frame_defined) throw FrameUndefined("grad theta needs the special frame");
  const double tau = data.params.tau;
  const double d1 = -data.alpha(data.e1, data.e1) - tau * data.inner(data.e1, data.e2);
  const double d2 = -data.alpha(data.e1, data.e2) - tau * data.inner(data.e2, data.e2);
  GradTheta gt;
  gt.frame = Vec2(d1, d2);
  gt.vector = d1 * data.e1 + d2 * data.e2;
  gt.norm = std::hypot(d1, d2);
  return gt;
}

VPhi v_and_phi(const SurfacePointData& data, double grad_eps) {
  if (!data.frame_defined) throw FrameUndefined("v and phi need the special frame");
  const double d1 = data.dtheta.x(), d2 = data.dtheta.y();
  const double norm = std::hypot(d1, d2);
  if (norm <= grad_eps) {
    std::ostringstream os;
    os << "|grad theta| = " << norm << " too small at (u, v) = (" << data.uv.x() << ", "
       << data.uv.y() << ")";
    throw FrameUndefined(os.str());
  }
  // In the (e1, e2) frame J(a, b) = (-b, a), so v = -J grad / |grad| = (d2, -d1) / |grad|.
  VPhi r;
  r.v = (d2 * data.e1 - d1 * data.e2) / norm;
  r.Jv = (d1 * data.e1 + d2 * data.e2) / norm;
  r.phi = std::atan2(-d1, d2);
  return r;
}

SurfacePointData analyze(const ParametrizedSurface& s, const Vec2& uv, const FrameOptions& opt) {
  SurfacePointData d = fundamental_forms(s, uv, opt.intrinsic, opt.fd_step);
  fill_frame(d, opt);
  return d;
}

// ---------------------------------------------------------------------------------------------
// Finite-difference derivatives along the surface

namespace {

template <class Fn>
auto directional_fd(const SurfacePointData& at, const Vec3& x, double h, Fn&& fn) {
  const Vec2 ab = at.to_params(x);
  const double scale = ab.norm();
  const Vec2 dir = scale > 0.0 ? Vec2(ab / scale) : Vec2::Zero();
  using T = std::decay_t<decltype(fn(at.uv))>;
  return T(scale * central_derivative([&](double t) { return fn(Vec2(at.uv + t * dir)); }, h));
}

}  // namespace

double theta_derivative_fd(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                           const FrameOptions& opt) {
  if (!at.frame_defined) throw FrameUndefined("theta derivative needs the special frame");
  FrameOptions o = opt;
  o.intrinsic = false;
  return directional_fd(at, x, opt.fd_step, [&](const Vec2& q) {
    const SurfacePointData d = analyze(s, q, o);
    if (!d.frame_defined) throw FrameUndefined("theta stencil touches a horizontal point");
    return unwrap_near(d.theta, at.theta);
  });
}

double phi_derivative_fd(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                         const FrameOptions& opt) {
  if (!at.v_defined) throw FrameUndefined("phi derivative needs v");
  FrameOptions o = opt;
  o.intrinsic = false;
  return directional_fd(at, x, opt.fd_step, [&](const Vec2& q) {
    const SurfacePointData d = analyze(s, q, o);
    if (!d.v_defined) throw FrameUndefined("phi stencil touches a point without v");
    return unwrap_near(d.phi, at.phi);
  });
}

double g_derivative_fd(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                       double h) {
  return directional_fd(at, x, h, [&](const Vec2& q) { return fundamental_forms(s, q).g; });
}

Vec3 covariant_field_derivative(const ParametrizedSurface& s, const SurfacePointData& at,
                                const Vec3& x,
                                const std::function<Vec3(const SurfacePointData&)>& field,
                                const FrameOptions& opt) {
  FrameOptions o = opt;
  o.intrinsic = false;
  const Vec3 dv = directional_fd(at, x, opt.fd_step,
                                 [&](const Vec2& q) { return field(analyze(s, q, o)); });
  return s.space().covariant_derivative(at.point, x, field(at), dv);
}

double connection_form(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                       const FrameOptions& opt) {
  if (!at.frame_defined) throw FrameUndefined("w12 needs the special frame");
  const Vec3 d = covariant_field_derivative(
      s, at, x,
      [](const SurfacePointData& q) {
        if (!q.frame_defined) throw FrameUndefined("w12 stencil touches a horizontal point");
        return q.e1;
      },
      opt);
  return at.inner(d, at.e2);
}

double connection_form_v(const ParametrizedSurface& s, const SurfacePointData& at, const Vec3& x,
                         const FrameOptions& opt) {
  if (!at.v_defined) throw FrameUndefined("w~12 needs v");
  const Vec3 d = covariant_field_derivative(
      s, at, x,
      [](const SurfacePointData& q) {
        if (!q.v_defined) throw FrameUndefined("w~12 stencil touches a point without v");
        return q.v;
      },
      opt);
  return at.inner(d, at.Jv);
}

// ---------------------------------------------------------------------------------------------
// Horizontal points

namespace {

double periodic_gap(double a, double b, bool periodic, double period) {
  double d = std::abs(a - b);
  if (periodic) d = std::min(d, std::abs(period - std::fmod(d, period)));
  return d;
}

double param_distance(const ParamDomain& dom, const Vec2& a, const Vec2& b) {
  return std::hypot(periodic_gap(a.x(), b.x(), dom.periodic_u, dom.u_max - dom.u_min),
                    periodic_gap(a.y(), b.y(), dom.periodic_v, dom.v_max - dom.v_min));
}

Vec2 canonical(const ParamDomain& dom, Vec2 uv) {
  if (dom.periodic_u) {
    const double p = dom.u_max - dom.u_min;
    uv.x() = dom.u_min + std::fmod(std::fmod(uv.x() - dom.u_min, p) + p, p);
  }
  if (dom.periodic_v) {
    const double p = dom.v_max - dom.v_min;
    uv.y() = dom.v_min + std::fmod(std::fmod(uv.y() - dom.v_min, p) + p, p);
  }
  return uv;
}

}  // namespace

HorizontalSearch find_horizontal_points(const ParametrizedSurface& s, int grid) {
  const ParamDomain& dom = s.domain();
  const Space space = s.space();
  HorizontalSearch out;
  out.grid_spacing = dom.spacing(grid);

  const int nu = grid + (dom.periodic_u ? 0 : 1);
  const int nv = grid + (dom.periodic_v ? 0 : 1);
  auto node = [&](int i, int j) {
    return dom.at(dom.periodic_u ? double(i) / grid : double(i) / (nu - 1),
                  dom.periodic_v ? double(j) / grid : double(j) / (nv - 1));
  };
  std::vector<double> c(nu * nv, std::numeric_limits<double>::infinity());
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      try {
        c[i * nv + j] = fundamental_forms(s, node(i, j)).tangential_xi;
      } catch (const DomainError&) {
      }
    }

  auto value = [&](int i, int j) {
    if (dom.periodic_u) i = (i + nu) % nu;
    if (dom.periodic_v) j = (j + nv) % nv;
    if (i < 0 || j < 0 || i >= nu || j >= nv) return std::numeric_limits<double>::infinity();
    return c[i * nv + j];
  };

  // F(q) = (<f_u, xi x n>, <f_v, xi x n>) normalized by |f_u|, |f_v|; n the unflipped normal
  auto residual_map = [&](const Vec2& q) -> Vec2 {
    const SurfaceJetValues j = s.jet(q);
    space.require_admissible(j.f);
    Vec3 n = space.cross(j.f, j.fu, j.fv);
    n /= space.norm(j.f, n);
    const Vec3 w = space.cross(j.f, Vec3::UnitZ(), n);
    return {space.inner(j.f, j.fu, w) / space.norm(j.f, j.fu),
            space.inner(j.f, j.fv, w) / space.norm(j.f, j.fv)};
  };

  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const double here = value(i, j);
      if (!(here < 0.5)) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if ((di || dj) && value(i + di, j + dj) < here) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;

      const NewtonResult nr = newton2(residual_map, node(i, j), defaults::kNewtonTol * 10.0,
                                      defaults::kNewtonMaxIter, 1e-6, 4.0 * out.grid_spacing);
      std::ostringstream seed;
      seed << "(" << node(i, j).x() << ", " << node(i, j).y() << ")";
      if (!nr.converged || !dom.inside(nr.x)) {
        ++out.skipped_seeds;
        out.warnings.push_back("newton did not converge from seed " + seed.str());
        continue;
      }
      const Vec2 q = canonical(dom, nr.x);
      double res = 0.0;
      try {
        res = fundamental_forms(s, q).tangential_xi;
      } catch (const DomainError&) {
        ++out.skipped_seeds;
        continue;
      }
      if (res > defaults::kHorizontalPointTol) {
        ++out.skipped_seeds;
        out.warnings.push_back("newton limit from seed " + seed.str() + " is not horizontal");
        continue;
      }
      const Vec3 pos = s.position(q);
      bool duplicate = false;
      for (const Vec3& other : out.positions) {
        if ((other - pos).norm() < 1e-6 * std::max(1.0, pos.norm())) duplicate = true;
      }
      if (duplicate) continue;
      out.points.push_back(q);
      out.positions.push_back(pos);
      out.residuals.push_back(res);
    }

  for (std::size_t a = 0; a < out.points.size(); ++a)
    for (std::size_t b = a + 1; b < out.points.size(); ++b)
      out.min_separation =
          std::min(out.min_separation, param_distance(dom, out.points[a], out.points[b]));
  return out;
}

// ---------------------------------------------------------------------------------------------
// Level-set continuation

namespace {

Vec2 fd_gradient(const std::function<double(const Vec2&)>& fn, const Vec2& q, double h) {
  return {(fn(q + Vec2(h, 0.0)) - fn(q - Vec2(h, 0.0))) / (2.0 * h),
          (fn(q + Vec2(0.0, h)) - fn(q - Vec2(0.0, h))) / (2.0 * h)};
}

bool correct(const std::function<double(const Vec2&)>& fn, Vec2& q, double tol) {
  for (int it = 0; it < 30; ++it) {
    const double val = fn(q);
    if (!std::isfinite(val)) return false;
    if (std::abs(val) < tol) return true;
    const Vec2 grad = fd_gradient(fn, q, 1e-7);
    const double g2 = grad.squaredNorm();
    if (!(g2 > 0.0)) return false;
    q -= val * grad / g2;
  }
  return std::abs(fn(q)) < tol;
}

}  // namespace

LocusTrace trace_level_set(const std::function<double(const Vec2&)>& fn, const Vec2& seed,
                           const std::function<bool(const Vec2&)>& inside,
                           const std::function<Vec3(const Vec2&)>& embed,
                           const ContinuationOptions& opt) {
  auto safe = [&](const Vec2& q) {
    try {
      return fn(q);
    } catch (const Error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  Vec2 q0 = seed;
  if (!correct(safe, q0, opt.tol) || !inside(q0)) {
    throw ConvergenceError("level-set continuation: could not project the seed onto the curve");
  }

  LocusTrace trace;
  auto branch = [&](double orientation, std::vector<Vec2>& nodes) -> bool {
    Vec2 q = q0;
    Vec2 grad = fd_gradient(safe, q, 1e-7);
    Vec2 t_prev = orientation * Vec2(-grad.y(), grad.x()).normalized();
    double h = opt.step;
    const Vec3 start = embed(q0);
    double travelled = 0.0;
    double last_ambient = 0.0;
    while (static_cast<int>(nodes.size()) < opt.max_nodes) {
      grad = fd_gradient(safe, q, 1e-7);
      if (!grad.allFinite() || grad.norm() == 0.0) throw ConvergenceError("continuation: zero gradient");
      Vec2 t = Vec2(-grad.y(), grad.x()).normalized();
      if (t.dot(t_prev) < 0.0) t = -t;
      Vec2 next = q + h * t;
      const bool ok = correct(safe, next, opt.tol) && (next - q).norm() < 2.0 * h &&
                      (next - q).dot(t) > 0.0;
      if (!ok || !inside(next)) {
        h *= 0.5;
        if (h < opt.min_step) {
          if (ok && !inside(next)) return false;  // reached the domain edge
          if (!inside(q + 4.0 * opt.min_step * t)) return false;
          throw ConvergenceError("vertical-locus continuation stalled (step underflow)");
        }
        continue;
      }
      const Vec3 here = embed(next);
      last_ambient = (here - embed(q)).norm();
      travelled += last_ambient;
      nodes.push_back(next);
      q = next;
      t_prev = t;
      h = std::min(1.5 * h, opt.step);
      if (nodes.size() > 4 && travelled > 4.0 * last_ambient &&
          (here - start).norm() < 1.01 * last_ambient) {
        return true;
      }
    }
    return false;
  };

  std::vector<Vec2> forward;
  trace.closed = branch(1.0, forward);
  std::vector<Vec2> nodes{q0};
  if (trace.closed) {
    forward.pop_back();  // last node coincides with the start up to one step
    nodes.insert(nodes.end(), forward.begin(), forward.end());
  } else {
    std::vector<Vec2> backward;
    branch(-1.0, backward);
    nodes.assign(backward.rbegin(), backward.rend());
    nodes.push_back(q0);
    nodes.insert(nodes.end(), forward.begin(), forward.end());
  }
  trace.nodes = std::move(nodes);

  trace.sign_change_everywhere = true;
  for (std::size_t i = 0; i < trace.nodes.size(); ++i) {
    const Vec2& q = trace.nodes[i];
    const double val = safe(q);
    trace.g_values.push_back(val);
    trace.max_abs_g = std::max(trace.max_abs_g, std::abs(val));
    if (i) trace.length += (q - trace.nodes[i - 1]).norm();
    const Vec2 n = fd_gradient(safe, q, 1e-7).normalized();
    const double plus = safe(q + opt.side_offset * n);
    const double minus = safe(q - opt.side_offset * n);
    if (!(plus * minus < 0.0)) trace.sign_change_everywhere = false;
  }
  return trace;
}

LocusTrace vertical_locus(const ParametrizedSurface& s, const Vec2& seed,
                          const ContinuationOptions& opt) {
  return trace_level_set([&s](const Vec2& q) { return fundamental_forms(s, q).g; }, seed,
                         [&s](const Vec2& q) { return s.domain().inside(q); },
                         [&s](const Vec2& q) { return s.position(q); }, opt);
}

}  // namespace ektau
