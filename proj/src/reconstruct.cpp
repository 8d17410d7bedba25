#include "ektau/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "ektau/numeric.hpp"

namespace ektau {

std::string to_string(FieldDirection d) { return d == FieldDirection::V ? "v" : "Jv"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Congruent: return "congruent";
    case Verdict::NotCongruent: return "not-congruent";
    case Verdict::HypothesesViolated: return "hypotheses-violated";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FieldSample {
  Vec3 rate = Vec3::Zero();  // (du/ds, dv/ds, dphi/ds)
  double phi_direct = 0.0;
  std::string failure;
};

FieldSample sample_field(const ParametrizedSurface& s, const Vec3& y, FieldDirection dir,
                         double sign, bool with_phi, const TrajectoryOptions& opt) {
  FieldSample out;
  const Vec2 uv = y.head<2>();
  if (!s.domain().inside(uv)) {
    out.failure = "left-domain";
    return out;
  }
  SurfacePointData d;
  try {
    d = analyze(s, uv, opt.frame);
  } catch (const Error& e) {
    out.failure = std::string("evaluation-error: ") + e.what();
    return out;
  }
  if (!d.frame_defined || std::abs(std::cos(d.theta)) < opt.min_cos) {
    out.failure = "horizontal-point";
    return out;
  }
  if (!d.v_defined) {
    out.failure = "grad-theta-vanishes";
    return out;
  }
  const Vec3& x = dir == FieldDirection::V ? d.v : d.Jv;
  const Vec2 ab = sign * d.to_params(x);
  out.phi_direct = d.phi;
  double dphi = 0.0;
  if (with_phi) {
    try {
      const PhiOdeInputs in = phi_ode_inputs(s, d, dir == FieldDirection::V, opt.frame);
      dphi = dir == FieldDirection::V ? ode_rhs_v(y.z(), in, opt.convention)
                                      : ode_rhs_Jv(y.z(), in, opt.convention);
    } catch (const Error& e) {
      out.failure = std::string("phi-equation: ") + e.what();
      return out;
    }
  }
  out.rate = Vec3(ab.x(), ab.y(), sign * dphi);
  return out;
}

TrajectoryRecord integrate(const ParametrizedSurface& s, const Vec2& start, FieldDirection dir,
                           double length, const TrajectoryOptions& opt, double sign,
                           bool with_phi, double phi0) {
  if (!(opt.step > 0.0)) throw DomainError("trajectory step must be positive");
  if (!(length >= 0.0)) throw DomainError("trajectory length must be non-negative");
  TrajectoryRecord rec;
  rec.direction = dir;
  rec.sign = sign;
  rec.propagated = with_phi;
  const int n = std::max(1, static_cast<int>(std::ceil(length / opt.step - 1e-9)));
  const double h = length / n;
  rec.step = h;

  const Space space = s.space();
  Vec3 y(start.x(), start.y(), with_phi ? phi0 : 0.0);
  double phi_prev = with_phi ? phi0 : kNaN;
  for (int i = 0;; ++i) {
    const FieldSample k1 = sample_field(s, y, dir, sign, with_phi, opt);
    if (!k1.failure.empty()) {
      rec.truncated = true;
      rec.truncation = k1.failure;
      break;
    }
    TrajectoryNode node;
    node.s = i * h;
    node.uv = y.head<2>();
    node.phi_direct = std::isnan(phi_prev) ? k1.phi_direct : unwrap_near(k1.phi_direct, phi_prev);
    node.phi_propagated = with_phi ? y.z() : kNaN;
    phi_prev = with_phi ? y.z() : node.phi_direct;
    if (with_phi) {
      rec.max_deviation = std::max(rec.max_deviation, std::abs(node.phi_propagated - node.phi_direct));
    }
    if (!rec.nodes.empty()) {
      const Vec3 a = s.position(rec.nodes.back().uv), b = s.position(node.uv);
      const double chord = space.norm(0.5 * (a + b), b - a);
      rec.max_speed_error = std::max(rec.max_speed_error, std::abs(chord / h - 1.0));
    }
    rec.nodes.push_back(node);
    if (i == n) break;

    const FieldSample k2 = sample_field(s, y + 0.5 * h * k1.rate, dir, sign, with_phi, opt);
    const FieldSample k3 = k2.failure.empty()
                               ? sample_field(s, y + 0.5 * h * k2.rate, dir, sign, with_phi, opt)
                               : k2;
    const FieldSample k4 =
        k3.failure.empty() ? sample_field(s, y + h * k3.rate, dir, sign, with_phi, opt) : k3;
    if (!k4.failure.empty()) {
      rec.truncated = true;
      rec.truncation = k4.failure;
      break;
    }
    y += (h / 6.0) * (k1.rate + 2.0 * k2.rate + 2.0 * k3.rate + k4.rate);
  }
  return rec;
}

}  // namespace

TrajectoryRecord integral_curve(const ParametrizedSurface& s, const Vec2& start, FieldDirection dir,
                                double length, const TrajectoryOptions& opt, double sign) {
  return integrate(s, start, dir, length, opt, sign, false, 0.0);
}

TrajectoryRecord propagate_phi(const ParametrizedSurface& s, const Vec2& start, FieldDirection dir,
                               double length, double phi0, const TrajectoryOptions& opt,
                               double sign) {
  return integrate(s, start, dir, length, opt, sign, true, phi0);
}

TrajectoryRecord propagate_phi(const ParametrizedSurface& s, const TrajectoryRecord& trajectory,
                               double phi0, const TrajectoryOptions& opt) {
  if (trajectory.nodes.empty()) throw DomainError("propagate_phi: empty trajectory");
  TrajectoryOptions o = opt;
  o.step = trajectory.step;
  return integrate(s, trajectory.nodes.front().uv, trajectory.direction,
                   trajectory.nodes.back().s, o, trajectory.sign, true, phi0);
}

ConvergenceReport measure_convergence_order(const ParametrizedSurface& s, const Vec2& start,
                                            FieldDirection dir, double length, double h,
                                            const TrajectoryOptions& opt) {
  const SurfacePointData d0 = analyze(s, start, opt.frame);
  if (!d0.v_defined) throw FrameUndefined("convergence: v undefined at the start point");
  ConvergenceReport r;
  for (double step : {h, 0.5 * h, 0.25 * h}) {
    TrajectoryOptions o = opt;
    o.step = step;
    const TrajectoryRecord rec = propagate_phi(s, start, dir, length, d0.phi, o);
    if (rec.truncated) {
      throw ConvergenceError("convergence: trajectory truncated (" + rec.truncation + ")");
    }
    const TrajectoryNode& end = rec.nodes.back();
    r.steps.push_back(rec.step);
    r.endpoints.emplace_back(end.uv.x(), end.uv.y(), end.phi_propagated);
  }
  r.diff_coarse = (r.endpoints[0] - r.endpoints[1]).norm();
  r.diff_fine = (r.endpoints[1] - r.endpoints[2]).norm();
  r.order = std::log2(r.diff_coarse / r.diff_fine);
  return r;
}

// ---------------------------------------------------------------------------------------------
// Witness

Witness find_witness(const ParametrizedSurface& reference, const ParametrizedSurface& member,
                     const Vec2& p, const Vec2& q, double tol) {
  const SpaceParams sp = reference.params();
  const Vec3 P = reference.position(p), P2 = reference.position(q);
  const Vec3 Q = member.position(p), Q2 = member.position(q);
  auto angle = [](const Vec2& w) { return std::atan2(w.y(), w.x()); };

  std::vector<Vec2> samples;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) samples.push_back(reference.domain().at((i + 0.5) / 5, (j + 0.5) / 5));

  Witness best;
  best.residual = std::numeric_limits<double>::infinity();
  for (bool flip : {false, true}) {
    const Isometry base = flip ? Isometry::half_turn(0.0) : Isometry::identity();
    const Vec3 A = base.apply(sp, P), A2 = base.apply(sp, P2);
    Isometry iso;
    if (sp.k == 0.0) {
      const Vec2 ca = (A2 - A).head<2>(), cb = (Q2 - Q).head<2>();
      if (ca.norm() < 1e-12 || cb.norm() < 1e-12) continue;
      const double beta = angle(cb) - angle(ca);
      const Vec3 R = Isometry::fiber_rotation(beta).apply(sp, A);
      const double a = Q.x() - R.x(), b = Q.y() - R.y();
      const double c = Q.z() - R.z() - sp.tau * (a * R.y() - b * R.x());
      iso = base.then(Isometry::fiber_rotation(beta))
                .then(Isometry::vertical_translation(c))
                .then(Isometry::horizontal_translation(a, b));
    } else {
      const bool use_second = A2.head<2>().norm() > A.head<2>().norm();
      const Vec3& X = use_second ? A2 : A;
      const Vec3& Y = use_second ? Q2 : Q;
      const double beta = X.head<2>().norm() < 1e-12 ? 0.0 : angle(Y.head<2>()) - angle(X.head<2>());
      iso = base.then(Isometry::fiber_rotation(beta)).then(Isometry::vertical_translation(Q.z() - A.z()));
    }
    double res = 0.0;
    for (const Vec2& uv : samples) {
      try {
        res = std::max(res, (iso.apply(sp, reference.position(uv)) - member.position(uv)).norm());
      } catch (const Error&) {
        res = std::numeric_limits<double>::infinity();
      }
    }
    if (res < best.residual) {
      best.residual = res;
      best.isometry = iso;
    }
  }
  best.found = best.residual < tol;
  best.description = best.found ? best.isometry.describe()
                                 : "no element of the implemented subgroup aligns the surfaces";
  return best;
}

// ---------------------------------------------------------------------------------------------
// Congruence

namespace {

double param_gap(const ParamDomain& dom, const Vec2& a, const Vec2& b) {
  Vec2 d = (a - b).cwiseAbs();
  if (dom.periodic_u) d.x() = std::min(d.x(), std::abs(dom.u_max - dom.u_min - std::fmod(d.x(), dom.u_max - dom.u_min)));
  if (dom.periodic_v) d.y() = std::min(d.y(), std::abs(dom.v_max - dom.v_min - std::fmod(d.y(), dom.v_max - dom.v_min)));
  return d.norm();
}

double frame_alpha_gap(const SurfacePointData& r, const SurfacePointData& m) {
  const Vec2 a1 = r.to_params(r.e1), a2 = r.to_params(r.e2);
  const double m11 = a1.dot(m.second * a1), m12 = a1.dot(m.second * a2), m22 = a2.dot(m.second * a2);
  return std::max({std::abs(m11 - r.a11), std::abs(m12 - r.a12), std::abs(m22 - r.a22)});
}

struct NetOutcome {
  double phi_deviation = 0.0;
  double alpha_direct = 0.0;
  double alpha_reconstructed = 0.0;
  int curves = 0;
  int nodes = 0;
  double coverage = 0.0;
  std::vector<std::string> notes;
};

NetOutcome run_net(const ParametrizedSurface& ref, const ParametrizedSurface& mem, const Vec2& seed,
                   double seed_phi, const CongruenceOptions& opt) {
  NetOutcome out;
  const TrajectoryOptions& to = opt.trajectory;
  const double tau = ref.params().tau;
  std::vector<TrajectoryRecord> curves;

  auto push = [&](TrajectoryRecord rec) {
    if (rec.truncated && rec.nodes.size() < 2) return;
    curves.push_back(std::move(rec));
  };

  // primaries through the seed
  TrajectoryRecord jf = propagate_phi(mem, seed, FieldDirection::Jv, opt.jv_length, seed_phi, to, 1.0);
  TrajectoryRecord jb = propagate_phi(mem, seed, FieldDirection::Jv, opt.jv_length, seed_phi, to, -1.0);
  TrajectoryRecord vf = propagate_phi(mem, seed, FieldDirection::V, opt.v_length, seed_phi, to, 1.0);
  std::vector<TrajectoryNode> jv_line(jb.nodes.rbegin(), jb.nodes.rend());
  if (!jf.nodes.empty()) jv_line.insert(jv_line.end(), jf.nodes.begin() + 1, jf.nodes.end());
  const std::vector<TrajectoryNode> v_line = vf.nodes;
  push(std::move(jf));
  push(std::move(jb));
  push(std::move(vf));

  // secondaries: v-curves from points of the Jv primary, Jv-curves from points of the v primary
  auto spread = [](const std::vector<TrajectoryNode>& line, int count) {
    std::vector<TrajectoryNode> picks;
    const int m = static_cast<int>(line.size());
    if (m == 0 || count <= 0) return picks;
    for (int i = 0; i < count; ++i) picks.push_back(line[((2 * i + 1) * m) / (2 * count)]);
    return picks;
  };
  for (const TrajectoryNode& n : spread(jv_line, opt.net_v)) {
    push(propagate_phi(mem, n.uv, FieldDirection::V, opt.v_length, n.phi_propagated, to, 1.0));
  }
  for (const TrajectoryNode& n : spread(v_line, opt.net_jv)) {
    push(propagate_phi(mem, n.uv, FieldDirection::Jv, opt.jv_length, n.phi_propagated, to, 1.0));
    push(propagate_phi(mem, n.uv, FieldDirection::Jv, opt.jv_length, n.phi_propagated, to, -1.0));
  }

  const ParamDomain& dom = ref.domain();
  const int cells = 12;
  std::vector<int> visited(cells * cells, 0);
  auto cell_of = [&](Vec2 uv) {
    double su = (uv.x() - dom.u_min) / (dom.u_max - dom.u_min);
    double sv = (uv.y() - dom.v_min) / (dom.v_max - dom.v_min);
    if (dom.periodic_u) su -= std::floor(su);
    if (dom.periodic_v) sv -= std::floor(sv);
    const int i = std::clamp(static_cast<int>(su * cells), 0, cells - 1);
    const int j = std::clamp(static_cast<int>(sv * cells), 0, cells - 1);
    return i * cells + j;
  };

  for (const TrajectoryRecord& c : curves) {
    ++out.curves;
    for (const TrajectoryNode& n : c.nodes) {
      ++out.nodes;
      visited[cell_of(n.uv)] = 1;
      const SurfacePointData r = analyze(ref, n.uv, to.frame);
      const SurfacePointData m = analyze(mem, n.uv, to.frame);
      if (!r.v_defined || !m.v_defined) continue;
      out.phi_deviation =
          std::max(out.phi_deviation, std::abs(wrap_pi(n.phi_propagated - r.phi)));
      out.alpha_direct = std::max(out.alpha_direct, frame_alpha_gap(r, m));
      const double G = m.grad_theta_norm;
      const double a11 = G * std::sin(n.phi_propagated);
      const double a12 = -G * std::cos(n.phi_propagated) - tau;
      out.alpha_reconstructed = std::max(
          out.alpha_reconstructed, std::max(std::abs(a11 - r.a11), std::abs(a12 - r.a12)));
    }
    if (c.truncated && c.truncation != "horizontal-point" && c.truncation != "left-domain") {
      out.notes.push_back(to_string(c.direction) + "-curve stopped: " + c.truncation);
    }
  }

  int usable = 0, hit = 0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      const Vec2 uv = dom.at((i + 0.5) / cells, (j + 0.5) / cells);
      try {
        const SurfacePointData d = analyze(ref, uv, to.frame);
        if (!d.frame_defined || std::abs(std::cos(d.theta)) < to.min_cos) continue;
      } catch (const Error&) {
        continue;
      }
      ++usable;
      hit += visited[cell_of(uv)];
    }
  out.coverage = usable ? double(hit) / usable : 0.0;
  return out;
}

// Second fundamental forms in the parameter basis around the horizontal points, where the net
// cannot go.
std::pair<int, double> horizontal_neighbourhood(const ParametrizedSurface& ref,
                                                const ParametrizedSurface& mem) {
  const HorizontalSearch hs = find_horizontal_points(ref);
  const double rho = 0.5 * ref.domain().spacing(defaults::kHorizontalGrid);
  int count = 0;
  double gap = 0.0;
  for (const Vec2& p : hs.points) {
    for (int i = -1; i < 8; ++i) {
      const Vec2 uv = i < 0 ? p : Vec2(p + rho * Vec2(std::cos(i * kPi / 4), std::sin(i * kPi / 4)));
      if (!ref.domain().inside(uv)) continue;
      const SurfacePointData r = fundamental_forms(ref, uv), m = fundamental_forms(mem, uv);
      gap = std::max(gap, (m.second - r.second).cwiseAbs().maxCoeff());
      ++count;
    }
  }
  return {count, gap};
}

}  // namespace

CongruenceVerdict congruence_test(const ParametrizedSurface& reference,
                                  const ParametrizedSurface& member,
                                  const std::vector<Vec2>& three_points,
                                  const CongruenceOptions& opt) {
  CongruenceVerdict out;
  out.member = member.name();
  const FrameOptions& fo = opt.trajectory.frame;
  const SpaceParams sp = reference.params();

  auto stage = [&](const std::string& name, bool pass, double value, double tol,
                   const std::string& detail) {
    out.stages.push_back({name, pass, value, tol, detail});
    return pass;
  };
  auto finish = [&](Verdict v, const std::string& st, const std::string& msg) {
    out.verdict = v;
    out.failed_stage = st;
    out.message = msg;
    return out;
  };

  // precondition
  {
    std::ostringstream why;
    if (member.params().k != sp.k || member.params().tau != sp.tau) why << "member lives in another E(k, tau); ";
    if (three_points.size() != 3) why << "expected three points, got " << three_points.size() << "; ";
    for (std::size_t a = 0; a < three_points.size(); ++a)
      for (std::size_t b = a + 1; b < three_points.size(); ++b)
        if (param_gap(reference.domain(), three_points[a], three_points[b]) < 1e-9)
          why << "points " << a << " and " << b << " coincide; ";
    bool have_seed = false;
    for (std::size_t i = 0; i < three_points.size(); ++i) {
      const Vec2& uv = three_points[i];
      SurfacePointData d;
      try {
        d = analyze(reference, uv, fo);
      } catch (const Error& e) {
        why << "point " << i << ": " << e.what() << "; ";
        continue;
      }
      if (!d.frame_defined || std::abs(std::cos(d.theta)) < opt.trajectory.min_cos) {
        why << "point " << i << " (" << uv.x() << ", " << uv.y() << ") is at or near a horizontal point; ";
        continue;
      }
      if (!have_seed && d.v_defined) {
        have_seed = true;
        out.seed = uv;
      }
    }
    if (!have_seed) why << "no point with d theta != 0 (needed for the seed); ";
    std::string w = why.str();
    if (w.size() >= 2) w.resize(w.size() - 2);
    stage("precondition", w.empty(), 0.0, 0.0, w.empty() ? "three usable points" : w);
    if (!w.empty()) return finish(Verdict::HypothesesViolated, "precondition", w);
  }

  // (a) induced metric, (b) K_e, (c) theta, all on one grid
  const int n = opt.metric_grid;
  double metric_gap = 0.0, ke_gap = 0.0, nu_gap_gauss = 0.0;
  double theta_gap[2] = {0.0, 0.0};  // sigma = +1, -1
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 uv = reference.domain().at((i + 0.5) / n, (j + 0.5) / n);
      const SurfacePointData r = fundamental_forms(reference, uv);
      const SurfacePointData m = fundamental_forms(member, uv);
      const double size = r.first.cwiseAbs().maxCoeff();
      metric_gap = std::max(metric_gap, (m.first - r.first).cwiseAbs().maxCoeff() / size);
      ke_gap = std::max(ke_gap, std::abs(m.Ke - r.Ke) / std::max(std::abs(r.Ke), 1.0));
      theta_gap[0] = std::max(theta_gap[0], std::abs(m.g - r.g));
      theta_gap[1] = std::max(theta_gap[1], std::abs(m.g + r.g));
      if (!sp.degenerate()) {
        try {
          const std::vector<double> nus = solve_theta(r.K_gauss, m.Ke, sp, opt.theta_tol);
          nu_gap_gauss = std::max(nu_gap_gauss, std::abs(std::abs(m.g) - nus.front()));
        } catch (const InconsistentData&) {
          nu_gap_gauss = std::numeric_limits<double>::infinity();
        }
      }
    }
  {
    std::ostringstream os;
    os << "max relative difference of (E, F, G) on a " << n << "x" << n << " grid";
    if (!stage("a:isometric", metric_gap <= opt.metric_tol, metric_gap, opt.metric_tol, os.str())) {
      return finish(Verdict::HypothesesViolated, "a:isometric",
                    "induced metrics differ (the family is not isometric)");
    }
  }
  if (!stage("b:extrinsic-curvature", ke_gap <= opt.curvature_tol, ke_gap, opt.curvature_tol,
             "max relative difference of K_e on the grid")) {
    return finish(Verdict::HypothesesViolated, "b:extrinsic-curvature", "K_e is not preserved");
  }
  std::vector<double> sigmas;
  if (theta_gap[0] <= opt.theta_tol) sigmas.push_back(1.0);
  if (theta_gap[1] <= opt.theta_tol) sigmas.push_back(-1.0);
  {
    std::ostringstream os;
    if (sp.degenerate()) {
      os << "space form: theta compared directly; ";
    } else {
      os << "|nu| from the Gauss equation within " << nu_gap_gauss << "; ";
    }
    os << "gap for theta sign +1: " << theta_gap[0] << ", -1: " << theta_gap[1];
    const bool gauss_ok = sp.degenerate() || nu_gap_gauss <= opt.theta_tol;
    const double value = std::min(theta_gap[0], theta_gap[1]);
    if (!stage("c:theta", gauss_ok && !sigmas.empty(), value, opt.theta_tol, os.str())) {
      return finish(Verdict::NotCongruent, "c:theta",
                    "theta differs beyond the discrete ambiguity of the Gauss equation");
    }
  }

  // (d) H at the three points
  {
    double gap = 0.0;
    for (const Vec2& uv : three_points) {
      const double hr = fundamental_forms(reference, uv).H, hm = fundamental_forms(member, uv).H;
      gap = std::max(gap, std::abs(hm - hr) / std::max(std::abs(hr), 1.0));
    }
    if (!stage("d:mean-curvature", gap <= opt.curvature_tol, gap, opt.curvature_tol,
               "max relative difference of H at the three points")) {
      return finish(Verdict::HypothesesViolated, "d:mean-curvature",
                    "H differs at one of the three points");
    }
  }

  // (e) phi at the seed, (f) propagation, per surviving theta sign
  const SurfacePointData rs = analyze(reference, out.seed, fo);
  const SurfacePointData ms = analyze(member, out.seed, fo);
  std::string last_failure = "e:phi-seed";
  for (double sigma : sigmas) {
    if (!ms.v_defined) break;
    const Fact3Report f3 = fact3_quadratic(ms);
    double best = std::numeric_limits<double>::infinity(), root = 0.0;
    for (double x : f3.roots) {
      const double gap = std::abs(wrap_pi(x - rs.phi));
      if (gap < best) {
        best = gap;
        root = x;
      }
    }
    std::ostringstream os;
    os << "theta sign " << sigma << ": " << f3.roots.size() << " root(s), closest to reference phi by "
       << best;
    if (!stage("e:phi-seed", best <= opt.phi_tol, best, opt.phi_tol, os.str())) continue;
    out.theta_sign = sigma;
    out.phi_roots = f3.roots;
    out.seed_phi = root;

    const NetOutcome net = run_net(reference, member, out.seed, root, opt);
    out.phi_deviation = net.phi_deviation;
    out.alpha_discrepancy = net.alpha_direct;
    out.alpha_reconstructed = net.alpha_reconstructed;
    out.net_curves = net.curves;
    out.net_nodes = net.nodes;
    out.coverage = net.coverage;
    std::ostringstream fs;
    fs << net.curves << " curves, " << net.nodes << " nodes, coverage " << net.coverage
       << "; phi deviation " << net.phi_deviation << "; alpha direct " << net.alpha_direct
       << ", from propagated phi " << net.alpha_reconstructed;
    for (const std::string& note : net.notes) fs << "; " << note;
    const auto [hn, hgap] = horizontal_neighbourhood(reference, member);
    out.horizontal_samples = hn;
    out.horizontal_alpha = hgap;
    out.alpha_discrepancy = std::max(out.alpha_discrepancy, hgap);
    fs << "; near horizontal points " << hgap << " over " << hn << " samples";
    const bool ok = net.phi_deviation <= opt.propagation_tol && out.alpha_discrepancy <= opt.alpha_tol;
    if (!stage("f:propagation", ok, out.alpha_discrepancy, opt.alpha_tol, fs.str())) {
      last_failure = "f:propagation";
      continue;
    }
    last_failure.clear();
    break;
  }
  if (!last_failure.empty()) {
    return finish(Verdict::NotCongruent, last_failure,
                  last_failure == "e:phi-seed" ? "no root of the phi quadratic matches the reference phi at the seed"
                                               : "phi or alpha differ along the trajectory net");
  }

  // (g) witness
  Vec2 far = three_points.front();
  double far_gap = -1.0;
  for (const Vec2& uv : three_points) {
    const double gap = (reference.position(uv) - reference.position(out.seed)).norm();
    if (gap > far_gap) {
      far_gap = gap;
      far = uv;
    }
  }
  out.witness = find_witness(reference, member, out.seed, far, opt.witness_tol);
  out.alignment.reference_point = rs.point;
  out.alignment.member_point = ms.point;
  out.alignment.reference_e1 = rs.e1;
  out.alignment.member_e1 = ms.e1;
  out.alignment.reference_normal = rs.normal;
  out.alignment.member_normal = ms.normal;
  stage("g:witness", true, out.witness.residual, opt.witness_tol,
        out.witness.found ? "witness: " + out.witness.description
                          : "no witness in the implemented subgroup; alignment data emitted");
  return finish(Verdict::Congruent, "", "congruent on the trajectory net");
}

std::vector<CongruenceVerdict> congruence_test(const ParametrizedSurface& reference,
                                               const std::vector<ParametrizedSurface>& family,
                                               const std::vector<Vec2>& three_points,
                                               const CongruenceOptions& opt) {
  std::vector<CongruenceVerdict> out;
  out.reserve(family.size());
  for (const ParametrizedSurface& m : family) out.push_back(congruence_test(reference, m, three_points, opt));
  return out;
}

}  // namespace ektau
