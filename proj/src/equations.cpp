#include "ektau/equations.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ektau/numeric.hpp"

namespace ektau {

ResidualReport make_report(std::string id, const Vec2& uv, double lhs, double rhs, double scale) {
  ResidualReport r;
  r.id = std::move(id);
  r.uv = uv;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs = std::abs(lhs - rhs);
  r.scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
  r.rel = r.abs / std::max(r.scale, 1.0);
  return r;
}

std::string to_string(SignConvention c) { return c == SignConvention::Derived ? "derived" : "printed"; }
std::string to_string(Reading r) { return r == Reading::Corrected ? "corrected" : "printed"; }

namespace {

double sigma(SignConvention c) { return c == SignConvention::Derived ? 1.0 : -1.0; }

std::string tagged(const std::string& id, const std::string& tag) { return id + "[" + tag + "]"; }

void require_v(const SurfacePointData& d, const char* what) {
  if (!d.v_defined) throw FrameUndefined(std::string(what) + " needs v (|grad theta| > 0)");
}

void require_sin(const SurfacePointData& d, const char* what) {
  if (std::abs(std::sin(d.theta)) <= defaults::kVerticalSin) {
    std::ostringstream os;
    os << what << ": |sin theta| = " << std::abs(std::sin(d.theta)) << " at a near-vertical point";
    throw DomainError(os.str());
  }
}

template <class Fn>
auto along(const SurfacePointData& at, const Vec3& x, double h, Fn&& fn) {
  const Vec2 ab = at.to_params(x);
  const double scale = ab.norm();
  const Vec2 dir = scale > 0.0 ? Vec2(ab / scale) : Vec2::Zero();
  using T = std::decay_t<decltype(fn(at.uv))>;
  return T(scale * central_derivative([&](double t) { return fn(Vec2(at.uv + t * dir)); }, h));
}

}  // namespace

// ---------------------------------------------------------------------------------------------

ResidualReport residual_eq1(const ParametrizedSurface& s, const SurfacePointData& d, const Vec3& x,
                            const FrameOptions& opt) {
  if (!d.frame_defined) throw FrameUndefined("eq1 needs the special frame");
  const double lhs = d.alpha(d.e1, x);
  const double dth = theta_derivative_fd(s, d, x, opt);
  const double t = d.params.tau * d.inner(x, d.e2);
  return make_report("eq1", d.uv, lhs, -dth - t, std::max(std::abs(dth), std::abs(t)));
}

ResidualReport residual_alpha_e2(const ParametrizedSurface& s, const SurfacePointData& d,
                                 const Vec3& x, SignConvention c, const FrameOptions& opt) {
  if (!d.frame_defined) throw FrameUndefined("alpha(X, e2) needs the special frame");
  require_sin(d, "alpha(X, e2)");
  const double w = connection_form(s, d, x, opt);
  const double cot = std::cos(d.theta) / std::sin(d.theta);
  const double t = sigma(c) * d.params.tau * d.inner(d.e1, x);
  return make_report(tagged("alpha_e2", to_string(c)), d.uv, d.alpha(x, d.e2), cot * w + t,
                     std::max(std::abs(cot * w), std::abs(t)));
}

std::pair<ResidualReport, ResidualReport> residual_alpha_frame(const ParametrizedSurface& s,
                                                               const SurfacePointData& d,
                                                               const FrameOptions& opt) {
  if (!d.frame_defined) throw FrameUndefined("alpha frame needs the special frame");
  const double d1 = theta_derivative_fd(s, d, d.e1, opt);
  const double d2 = theta_derivative_fd(s, d, d.e2, opt);
  const double G = std::hypot(d1, d2);
  if (!(G > opt.grad_eps)) throw FrameUndefined("alpha frame: |grad theta| vanishes");
  const double phi = std::atan2(-d1, d2);
  const double tau = d.params.tau;
  const double r11 = G * std::sin(phi);
  const double r12 = -G * std::cos(phi) - tau;
  return {make_report("alpha11", d.uv, d.a11, r11, G),
          make_report("alpha12", d.uv, d.a12, r12, std::max(G, std::abs(tau)))};
}

ResidualReport residual_eq2(const SurfacePointData& d, Reading r) {
  require_v(d, "eq2");
  const double c = std::cos(d.phi), sn = std::sin(d.phi);
  const double first = r == Reading::Corrected ? d.a11 : d.a12;
  const double lhs = c * first + sn * d.a12;
  const double rhs = -d.params.tau * sn;
  return make_report(tagged("eq2", to_string(r)), d.uv, lhs, rhs,
                     std::max(std::abs(c * first), std::abs(sn * d.a12)));
}

ResidualReport residual_eq3(const SurfacePointData& d, Reading r) {
  require_v(d, "eq3");
  const double c = std::cos(d.phi), sn = std::sin(d.phi);
  const double first = r == Reading::Corrected ? d.a11 : d.a12;
  const double lhs = -sn * first + c * d.a12;
  const double rhs = -d.grad_theta_norm - d.params.tau * c;
  return make_report(tagged("eq3", to_string(r)), d.uv, lhs, rhs,
                     std::max({std::abs(sn * first), std::abs(c * d.a12), d.grad_theta_norm}));
}

// ---------------------------------------------------------------------------------------------

double alpha_e2_v_closed(double phi, const PhiOdeInputs& in, SignConvention c) {
  const double G = in.grad_norm, t = in.tau;
  const double cs = std::cos(phi);
  if (c == SignConvention::Derived) {
    const double a12 = G * cs + t;  // -alpha12
    return -cs * a12 + (in.Ke + a12 * a12) / G;
  }
  const double m = G * cs - t;
  return cs * (G * cs + t) + (in.Ke - m * m) / G;
}

double alpha_Jv_e2_closed(double phi, const PhiOdeInputs& in, SignConvention c) {
  const double G = in.grad_norm, t = in.tau;
  const double cs = std::cos(phi), sn = std::sin(phi);
  const double a12 = G * cs + t;
  if (c == SignConvention::Derived) return sn * a12 + (cs / sn) * (in.Ke + a12 * a12) / G;
  return sn * a12 + (cs / sn) * (in.Ke - a12 * a12) / G;
}

double ode_rhs_v(double phi, const PhiOdeInputs& in, SignConvention c) {
  const double tn = std::tan(in.theta);
  const double cs = std::cos(phi);
  if (c == SignConvention::Derived) {
    return in.wt12 - tn * (alpha_e2_v_closed(phi, in, c) - in.tau * cs);
  }
  const double G = in.grad_norm, t = in.tau;
  const double m = G * cs - t;
  return in.wt12 - tn * (t * cs + cs * (G * cs + t) + (in.Ke - m * m) / G);
}

double ode_rhs_Jv(double phi, const PhiOdeInputs& in, SignConvention c) {
  const double tn = std::tan(in.theta);
  const double sn = std::sin(phi);
  if (c == SignConvention::Derived) {
    return in.wt12 - tn * (alpha_Jv_e2_closed(phi, in, c) + in.tau * sn);
  }
  const double G = in.grad_norm, t = in.tau;
  const double cs = std::cos(phi);
  const double m = G * cs - t;
  return in.wt12 - tn * (sn * (G * cs + t) + (cs / sn) * (in.Ke - m * m) / G + t * sn);
}

PhiOdeInputs phi_ode_inputs(const ParametrizedSurface& s, const SurfacePointData& d, bool along_v,
                            const FrameOptions& opt) {
  require_v(d, "phi equations");
  PhiOdeInputs in;
  in.theta = d.theta;
  in.grad_norm = d.grad_theta_norm;
  in.Ke = d.Ke;
  in.tau = d.params.tau;
  in.wt12 = connection_form_v(s, d, along_v ? d.v : d.Jv, opt);
  return in;
}

namespace {

PhiOdeInputs pointwise_inputs(const SurfacePointData& d) {
  PhiOdeInputs in;
  in.theta = d.theta;
  in.grad_norm = d.grad_theta_norm;
  in.Ke = d.Ke;
  in.tau = d.params.tau;
  return in;
}

ResidualReport eq57(const ParametrizedSurface& s, const SurfacePointData& d, bool along_v,
                    SignConvention c, const FrameOptions& opt) {
  const char* id = along_v ? "eq5" : "eq7";
  require_v(d, id);
  require_sin(d, id);
  const Vec3 x = along_v ? d.v : d.Jv;
  const double wt = connection_form_v(s, d, x, opt);
  const double dphi = phi_derivative_fd(s, d, x, opt);
  const double cot = std::cos(d.theta) / std::sin(d.theta);
  const double t = sigma(c) * d.params.tau * d.inner(d.e1, x);
  return make_report(tagged(id, to_string(c)), d.uv, d.alpha(x, d.e2), cot * (wt - dphi) + t,
                     std::max({std::abs(cot * wt), std::abs(cot * dphi), std::abs(t)}));
}

}  // namespace

ResidualReport residual_eq4(const SurfacePointData& d, SignConvention c) {
  require_v(d, "eq4");
  const double rhs = alpha_e2_v_closed(d.phi, pointwise_inputs(d), c);
  return make_report(tagged("eq4", to_string(c)), d.uv, d.alpha(d.e2, d.v), rhs,
                     std::max({std::abs(d.a11), std::abs(d.a12), std::abs(d.a22)}));
}

ResidualReport residual_eq6(const SurfacePointData& d, SignConvention c) {
  require_v(d, "eq6");
  const double rhs = alpha_Jv_e2_closed(d.phi, pointwise_inputs(d), c);
  return make_report(tagged("eq6", to_string(c)), d.uv, d.alpha(d.Jv, d.e2), rhs,
                     std::max({std::abs(d.a11), std::abs(d.a12), std::abs(d.a22)}));
}

ResidualReport residual_eq5(const ParametrizedSurface& s, const SurfacePointData& d,
                            SignConvention c, const FrameOptions& opt) {
  return eq57(s, d, true, c, opt);
}

ResidualReport residual_eq7(const ParametrizedSurface& s, const SurfacePointData& d,
                            SignConvention c, const FrameOptions& opt) {
  return eq57(s, d, false, c, opt);
}

ResidualReport residual_ode(const ParametrizedSurface& s, const SurfacePointData& d, bool along_v,
                            SignConvention c, const FrameOptions& opt) {
  const char* id = along_v ? "ode_v" : "ode_Jv";
  require_v(d, id);
  if (std::abs(std::cos(d.theta)) <= defaults::kFrameCheckCos) {
    throw DomainError(std::string(id) + ": tan(theta) blows up near a horizontal point");
  }
  const PhiOdeInputs in = phi_ode_inputs(s, d, along_v, opt);
  const double rhs = along_v ? ode_rhs_v(d.phi, in, c) : ode_rhs_Jv(d.phi, in, c);
  const double fd = phi_derivative_fd(s, d, along_v ? d.v : d.Jv, opt);
  return make_report(tagged(id, to_string(c)), d.uv, rhs, fd, std::abs(in.wt12));
}

// ---------------------------------------------------------------------------------------------

std::vector<double> sincos_roots(double A, double B, double C) {
  const double R = std::hypot(A, B);
  const double size = std::max({std::abs(A), std::abs(B), std::abs(C)});
  if (size == 0.0) return {};
  if (R <= 1e-14 * size) return {};
  const double ratio = -C / R;
  if (std::abs(ratio) > 1.0 + 1e-12) return {};
  const double delta = std::atan2(A, B);
  const double a = std::acos(std::clamp(ratio, -1.0, 1.0));
  std::vector<double> roots{wrap_pi(delta + a)};
  if (a > 0.0 && a < kPi) roots.push_back(wrap_pi(delta - a));
  return roots;
}

Fact3Report fact3_quadratic(const SurfacePointData& d) {
  require_v(d, "fact3");
  Fact3Report r;
  const double G = d.grad_theta_norm, t = d.params.tau;
  const double lhs = d.a11 * (2.0 * d.H - d.a11) - d.a12 * d.a12;
  r.identity = make_report("fact3_identity", d.uv, lhs, d.Ke,
                           std::max(std::abs(d.a11 * 2.0 * d.H), d.a12 * d.a12));
  r.A = 2.0 * d.H * G;
  r.B_derived = -2.0 * t * G;
  r.B_printed = 2.0 * t * G;
  r.C = -G * G - t * t - d.Ke;
  const double sn = std::sin(d.phi), cs = std::cos(d.phi);
  r.residual_derived = r.A * sn + r.B_derived * cs + r.C;
  r.residual_printed = r.A * sn + r.B_printed * cs + r.C;
  r.all_coefficients_zero = r.A == 0.0 && r.B_derived == 0.0 && r.C == 0.0;
  r.roots = sincos_roots(r.A, r.B_derived, r.C);
  r.phi_root_gap = std::numeric_limits<double>::infinity();
  for (double x : r.roots) r.phi_root_gap = std::min(r.phi_root_gap, std::abs(wrap_pi(d.phi - x)));
  r.phi_among_roots = r.phi_root_gap < defaults::kPhiAgreeTol;
  return r;
}

std::vector<double> solve_theta(double K, double Ke, const SpaceParams& sp, double slack) {
  if (sp.degenerate()) {
    throw DegenerateSpace("solve_theta: k - 4 tau^2 = 0, theta is not determined by the Gauss equation");
  }
  const double nu2 = (K - Ke - sp.tau * sp.tau) / sp.space_form_defect();
  if (!(nu2 >= -slack && nu2 <= 1.0 + slack)) {
    std::ostringstream os;
    os << "solve_theta: nu^2 = " << nu2 << " outside [0, 1] (K = " << K << ", K_e = " << Ke << ")";
    throw InconsistentData(os.str());
  }
  const double nu = std::sqrt(std::clamp(nu2, 0.0, 1.0));
  if (nu == 0.0) return {0.0};
  return {nu, -nu};
}

// ---------------------------------------------------------------------------------------------

Lemma1Report lemma1_check(const ParametrizedSurface& s, const Vec2& uv, double h) {
  const Space space = s.space();
  const SurfacePointData d = fundamental_forms(s, uv);
  if (std::abs(d.g) > 1e-6) {
    std::ostringstream os;
    os << "lemma1_check: g = " << d.g << " is not a vertical point";
    throw DomainError(os.str());
  }
  Lemma1Report r;
  r.uv = uv;
  r.g = d.g;
  const Vec3 xi = Vec3::UnitZ();
  r.dg_xi = g_derivative_fd(s, d, xi, h);
  r.normal_section = d.alpha(xi, xi);
  auto gfun = [&](const Vec2& q) { return fundamental_forms(s, q).g; };
  const Vec2 dg(central_derivative([&](double t) { return gfun(uv + Vec2(t, 0.0)); }, h),
                central_derivative([&](double t) { return gfun(uv + Vec2(0.0, t)); }, h));
  r.grad_g_norm = std::sqrt(dg.dot(d.first.ldlt().solve(dg)));

  // C = surface cap pi^-1(gamma), gamma the base geodesic along d pi(N), parametrized by z.
  const double k = s.params().k;
  const BaseGeodesic bg = BaseGeodesic::through_point(k, d.point.head<2>(), d.normal.head<2>());
  auto solve_at = [&](double dz, const Vec2& guess) {
    const double z = d.point.z() + dz;
    const NewtonResult nr = newton2(
        [&](const Vec2& q) -> Vec2 {
          const Vec3 f = s.position(q);
          return {bg.level(k, f.x(), f.y()), f.z() - z};
        },
        guess, 2e-15 * (1.0 + d.point.norm()), defaults::kNewtonMaxIter, 1e-7, 0.1);
    if (!nr.converged) throw ConvergenceError("lemma1_check: could not follow C = surface cap P");
    ++r.curve_nodes;
    return nr.x;
  };
  std::map<double, Vec2> solved{{0.0, uv}};
  for (double sgn : {1.0, -1.0}) {
    Vec2 prev = uv;
    for (double t : {0.25 * h, 0.5 * h, h}) {
      prev = solve_at(sgn * t, prev);
      solved[sgn * t] = prev;
    }
  }
  auto curve = [&](double t) { return Vec3(s.position(solved.at(t))); };
  const Vec3 c1 = central_derivative(curve, h);
  const Vec3 c2 = central_second_derivative(curve, h);
  const Vec3 accel = c2 + space.connection_term(d.point, c1, c1);
  r.k_CP = -space.inner(d.point, d.normal, accel) / space.inner(d.point, c1, c1);
  r.residual = make_report("lemma1", uv, r.dg_xi, r.k_CP, std::abs(r.normal_section));
  return r;
}

Lemma2Report lemma2_check(const ParametrizedSurface& s, const Vec2& uv, double h) {
  const Space space = s.space();
  const SurfacePointData d = fundamental_forms(s, uv);
  Lemma2Report r;
  r.uv = uv;
  r.xi_cross_n = d.tangential_xi;
  if (r.xi_cross_n > 1e-8) {
    std::ostringstream os;
    os << "lemma2_check: |xi x N| = " << r.xi_cross_n << " is not a horizontal point";
    throw DomainError(os.str());
  }
  r.lambda1 = d.lambda1;
  r.lambda2 = d.lambda2;
  r.orientation = d.g >= 0.0 ? 1.0 : -1.0;
  const Vec3 xi = Vec3::UnitZ();
  const Vec3 v1 = d.dir1;
  Vec3 v2 = space.cross(d.point, xi, v1);
  v2 /= space.norm(d.point, v2);
  auto field = [&](const Vec2& q) {
    const SurfacePointData e = fundamental_forms(s, q);
    return Vec3(space.cross(e.point, xi, e.normal));
  };
  const Vec3 w0 = field(uv);
  const std::array<Vec3, 2> basis{v1, v2};
  for (int j = 0; j < 2; ++j) {
    const Vec3 dw = along(d, basis[j], h, field);
    const Vec3 cov = space.covariant_derivative(d.point, basis[j], w0, dw);
    for (int i = 0; i < 2; ++i) r.jacobian(i, j) = space.inner(d.point, basis[i], cov);
  }
  const double tau = s.params().tau, sg = r.orientation;
  r.printed << tau, r.lambda2, -r.lambda1, -tau;
  r.derived << -sg * tau, r.lambda2, -r.lambda1, -sg * tau;
  r.printed_residual = (r.jacobian - r.printed).cwiseAbs().maxCoeff();
  r.derived_residual = (r.jacobian - r.derived).cwiseAbs().maxCoeff();
  r.det_fd = r.jacobian.determinant();
  r.det_printed = d.Ke - tau * tau;
  r.det_derived = d.Ke + tau * tau;
  return r;
}

// ---------------------------------------------------------------------------------------------

std::vector<Vec2> sample_frame_points(const ParametrizedSurface& s, int n, unsigned long long seed,
                                      bool need_v, bool need_sin, const FrameOptions& opt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec2> out;
  const double ex = defaults::kSampleExclusion;
  for (int attempt = 0; attempt < 100 * n && static_cast<int>(out.size()) < n; ++attempt) {
    const double a = unit(rng), b = unit(rng);
    const Vec2 uv = s.domain().at(a, b);
    SurfacePointData d;
    try {
      d = analyze(s, uv, opt);
    } catch (const Error&) {
      continue;
    }
    if (!d.frame_defined || std::abs(std::cos(d.theta)) <= ex) continue;
    if (need_v && !d.v_defined) continue;
    if (need_sin && std::abs(std::sin(d.theta)) <= ex) continue;
    out.push_back(uv);
  }
  return out;
}

std::vector<Vec2> sample_vertical_points(const ParametrizedSurface& s, int n) {
  const int grid = 40;
  const ParamDomain& dom = s.domain();
  double best = std::numeric_limits<double>::infinity();
  Vec2 seed = Vec2::Zero();
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j + 1 < grid; ++j) {
      const Vec2 a = dom.at((i + 0.5) / grid, double(j) / (grid - 1));
      const Vec2 b = dom.at((i + 0.5) / grid, double(j + 1) / (grid - 1));
      double ga, gb;
      try {
        ga = fundamental_forms(s, a).g;
        gb = fundamental_forms(s, b).g;
      } catch (const Error&) {
        continue;
      }
      if (ga * gb >= 0.0) continue;
      const double score = std::min(std::abs(ga), std::abs(gb));
      if (score < best) {
        best = score;
        seed = std::abs(ga) < std::abs(gb) ? a : b;
      }
    }
  if (!std::isfinite(best)) return {};
  LocusTrace tr;
  try {
    tr = vertical_locus(s, seed);
  } catch (const Error&) {
    return {};
  }
  std::vector<Vec2> out;
  const int m = static_cast<int>(tr.nodes.size());
  if (m == 0) return out;
  const int count = std::min(n, m);
  for (int i = 0; i < count; ++i) out.push_back(tr.nodes[(i * m) / count]);
  return out;
}

namespace {

struct Collector {
  SuiteResult& result;
  std::map<std::string, std::size_t> index;

  void add(const ResidualReport& r, const std::string& tier, double tol, bool gating) {
    result.rows.push_back(r);
    auto it = index.find(r.id);
    if (it == index.end()) {
      ResidualSummary sm;
      sm.id = r.id;
      sm.tier = tier;
      sm.tolerance = tol;
      sm.gating = gating;
      it = index.emplace(r.id, result.summary.size()).first;
      result.summary.push_back(sm);
    }
    ResidualSummary& sm = result.summary[it->second];
    if (sm.count == 0 || r.rel > sm.max_rel) {
      sm.max_rel = r.rel;
      sm.worst_uv = r.uv;
    }
    sm.mean_rel = (sm.mean_rel * sm.count + r.rel) / (sm.count + 1);
    ++sm.count;
    sm.max_abs = std::max(sm.max_abs, r.abs);
  }
};

}  // namespace

SuiteResult run_suite(const ParametrizedSurface& s, const SuiteOptions& opt) {
  SuiteResult res;
  res.surface = s.name();
  Collector col{res, {}};
  const Tolerances& tol = opt.tol;
  const SpaceParams sp = s.params();
  const Space space = s.space();
  const FrameOptions& fo = opt.frame;
  auto note = [&](const std::string& what, const Error& e) {
    res.notes.push_back(what + ": " + e.what());
  };

  // frame, d theta, Gauss
  const std::vector<Vec2> pts = sample_frame_points(s, opt.samples, opt.seed, false, false, fo);
  if (static_cast<int>(pts.size()) < opt.samples) {
    res.notes.push_back("only " + std::to_string(pts.size()) + " usable frame sample points");
  }
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (const Vec2& uv : pts) {
    const SurfacePointData d = analyze(s, uv, fo);
    const Vec3 decomposition =
        Vec3::UnitZ() - std::cos(d.theta) * d.e1 - std::sin(d.theta) * d.normal;
    col.add(make_report("frame_decomposition", uv, space.norm(d.point, decomposition), 0.0, 1.0),
            "closed_form", tol.closed_form, true);
    col.add(make_report("g_sin_theta", uv, d.g, std::sin(d.theta), 1.0), "closed_form",
            tol.closed_form, true);
    const double a = angle(rng);
    try {
      col.add(residual_eq1(s, d, d.e1, fo), "jet_vs_fd", tol.jet_vs_fd, true);
      col.add(residual_eq1(s, d, d.e2, fo), "jet_vs_fd", tol.jet_vs_fd, true);
      col.add(residual_eq1(s, d, std::cos(a) * d.e1 + std::sin(a) * d.e2, fo), "jet_vs_fd",
              tol.jet_vs_fd, true);
      const double K = intrinsic_curvature(s, uv, fo.fd_step);
      col.add(make_report("gauss", uv, K, d.K_gauss, std::abs(d.Ke)), "jet_vs_fd", tol.jet_vs_fd,
              true);
    } catch (const Error& e) {
      note("eq1/gauss", e);
    }
  }

  // second-order identities: need v and |sin theta| away from 0
  const std::vector<Vec2> vpts = sample_frame_points(s, opt.samples, opt.seed + 1, true, false, fo);
  for (const Vec2& uv : vpts) {
    const SurfacePointData d = analyze(s, uv, fo);
    try {
      const auto [r11, r12] = residual_alpha_frame(s, d, fo);
      col.add(r11, "jet_vs_fd", tol.jet_vs_fd, true);
      col.add(r12, "jet_vs_fd", tol.jet_vs_fd, true);
    } catch (const Error& e) {
      note("alpha frame", e);
    }
    col.add(residual_eq2(d, Reading::Corrected), "closed_form", tol.closed_form, true);
    col.add(residual_eq2(d, Reading::Printed), "closed_form", tol.closed_form, false);
    col.add(residual_eq3(d, Reading::Corrected), "closed_form", tol.closed_form, true);
    col.add(residual_eq3(d, Reading::Printed), "closed_form", tol.closed_form, false);
    for (SignConvention c : {SignConvention::Derived, SignConvention::Printed}) {
      const bool gate = c == SignConvention::Derived;
      col.add(residual_eq4(d, c), "closed_form", tol.closed_form, gate);
      col.add(residual_eq6(d, c), "closed_form", tol.closed_form, gate);
    }
    const Fact3Report f3 = fact3_quadratic(d);
    col.add(f3.identity, "closed_form", tol.closed_form, true);
    const double fs = std::max({std::abs(f3.A), std::abs(f3.B_derived), std::abs(f3.C)});
    col.add(make_report("fact3_form[derived]", uv, f3.residual_derived, 0.0, fs), "closed_form",
            tol.closed_form, true);
    col.add(make_report("fact3_form[printed]", uv, f3.residual_printed, 0.0, fs), "closed_form",
            tol.closed_form, false);
    // a double root only resolves to about sqrt(machine epsilon)
    col.add(make_report("fact3_phi_root", uv, f3.phi_root_gap, 0.0, 1.0), "jet_vs_fd",
            tol.jet_vs_fd, true);
  }

  const std::vector<Vec2> spts = sample_frame_points(s, opt.samples, opt.seed + 2, true, true, fo);
  for (const Vec2& uv : spts) {
    const SurfacePointData d = analyze(s, uv, fo);
    for (SignConvention c : {SignConvention::Derived, SignConvention::Printed}) {
      const bool gate = c == SignConvention::Derived;
      try {
        col.add(residual_alpha_e2(s, d, d.e1, c, fo), "jet_vs_fd", tol.jet_vs_fd, gate);
        col.add(residual_alpha_e2(s, d, d.e2, c, fo), "jet_vs_fd", tol.jet_vs_fd, gate);
        col.add(residual_eq5(s, d, c, fo), "jet_vs_fd", tol.jet_vs_fd, gate);
        col.add(residual_eq7(s, d, c, fo), "jet_vs_fd", tol.jet_vs_fd, gate);
        col.add(residual_ode(s, d, true, c, fo), "ode", tol.ode, gate);
        col.add(residual_ode(s, d, false, c, fo), "ode", tol.ode, gate);
      } catch (const Error& e) {
        note("phi equations", e);
      }
    }
  }

  // vertical points
  if (!vpts.empty()) {
    for (const Vec2& uv : sample_vertical_points(s, opt.vertical_points)) {
      try {
        col.add(lemma1_check(s, uv, fo.fd_step).residual, "layered", tol.layered, true);
      } catch (const Error& e) {
        note("lemma1", e);
      }
    }
  }

  // horizontal points, count, Jacobian
  const HorizontalSearch hs = find_horizontal_points(s, opt.horizontal_grid);
  for (const std::string& w : hs.warnings) res.notes.push_back("horizontal search: " + w);
  if (opt.expect_two_horizontal) {
    col.add(make_report("corollary2_count", Vec2::Zero(), double(hs.points.size()), 2.0, 1.0),
            "closed_form", tol.closed_form, true);
  }
  for (const Vec2& uv : hs.points) {
    try {
      const Lemma2Report l2 = lemma2_check(s, uv, fo.fd_step);
      const double sc = std::max(l2.lambda1, std::abs(sp.tau));
      col.add(make_report("lemma2[derived]", uv, l2.derived_residual, 0.0, 1.0), "lemma2",
              tol.lemma2, true);
      col.add(make_report("lemma2[printed]", uv, l2.printed_residual, 0.0, 1.0), "lemma2",
              tol.lemma2, false);
      col.add(make_report("lemma2_det[derived]", uv, l2.det_fd, l2.det_derived, sc * sc),
              "jet_vs_fd", tol.jet_vs_fd, true);
      col.add(make_report("lemma2_det[printed]", uv, l2.det_fd, l2.det_printed, sc * sc),
              "jet_vs_fd", tol.jet_vs_fd, false);
    } catch (const Error& e) {
      note("lemma2", e);
    }
  }

  for (ResidualSummary& sm : res.summary) {
    sm.pass = sm.max_rel <= sm.tolerance;
    if (sm.gating && !sm.pass) res.pass = false;
  }
  return res;
}

}  // namespace ektau
