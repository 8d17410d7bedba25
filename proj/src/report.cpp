#include "ektau/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ektau {

using nlohmann::json;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string space_label(const SpaceParams& sp) {
  return "E(" + fmt(sp.k) + ", " + fmt(sp.tau) + ")";
}

json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }
json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const ConvexityReport& c) {
  return {{"samples", c.samples},
          {"min_K_e", num(c.min_Ke)},
          {"min_K_e_minus_tau2", num(c.min_Ke_minus_tau2)},
          {"min_principal", num(c.min_principal)},
          {"max_principal", num(c.max_principal)},
          {"convex", c.convex},
          {"strictly_convex", c.strictly_convex}};
}

json to_json(const Isometry& iso) {
  json motions = json::array();
  for (const Motion& m : iso.motions())
    motions.push_back({{"kind", to_string(m.kind)}, {"a", m.a}, {"b", m.b}});
  return motions;
}

json to_json(const CongruenceVerdict& v) {
  json stages = json::array();
  for (const StageResult& s : v.stages)
    stages.push_back({{"stage", s.stage},
                      {"pass", s.pass},
                      {"value", num(s.value)},
                      {"tolerance", s.tolerance},
                      {"detail", s.detail}});
  json out = {{"member", v.member},
              {"verdict", to_string(v.verdict)},
              {"failed_stage", v.failed_stage},
              {"message", v.message},
              {"stages", stages}};
  if (v.verdict != Verdict::Congruent && v.failed_stage != "e:phi-seed" &&
      v.failed_stage != "f:propagation")
    return out;
  out["seed"] = vec(v.seed);
  out["theta_sign"] = v.theta_sign;
  out["phi_roots"] = v.phi_roots;
  out["seed_phi"] = v.seed_phi;
  out["alpha_discrepancy"] = num(v.alpha_discrepancy);
  out["alpha_reconstructed"] = num(v.alpha_reconstructed);
  out["phi_deviation"] = num(v.phi_deviation);
  out["net"] = {{"curves", v.net_curves},
                {"nodes", v.net_nodes},
                {"coverage", v.coverage},
                {"horizontal_samples", v.horizontal_samples},
                {"horizontal_alpha", num(v.horizontal_alpha)}};
  if (v.verdict == Verdict::Congruent) {
    out["witness"] = {{"found", v.witness.found},
                      {"residual", num(v.witness.residual)},
                      {"description", v.witness.description},
                      {"motions", to_json(v.witness.isometry)}};
    const AlignmentData& a = v.alignment;
    out["alignment"] = {{"reference", {{"point", vec(a.reference_point)},
                                       {"e1", vec(a.reference_e1)},
                                       {"normal", vec(a.reference_normal)}}},
                        {"member", {{"point", vec(a.member_point)},
                                    {"e1", vec(a.member_e1)},
                                    {"normal", vec(a.member_normal)}}}};
  }
  return out;
}

}  // namespace

std::string residuals_csv(const std::vector<SuiteRun>& runs) {
  std::ostringstream os;
  os << "k,tau,surface,id,u,v,lhs,rhs,abs,scale,rel\n";
  for (const SuiteRun& r : runs)
    for (const ResidualReport& row : r.result.rows)
      os << fmt(r.space.k) << ',' << fmt(r.space.tau) << ',' << r.surface << ',' << row.id << ','
         << fmt(row.uv.x()) << ',' << fmt(row.uv.y()) << ',' << fmt(row.lhs) << ',' << fmt(row.rhs)
         << ',' << fmt(row.abs) << ',' << fmt(row.scale) << ',' << fmt(row.rel) << '\n';
  return os.str();
}

std::string summary_csv(const std::vector<SuiteRun>& runs) {
  std::ostringstream os;
  os << "k,tau,surface,id,tier,tolerance,gating,count,max_rel,mean_rel,max_abs,worst_u,worst_v,pass\n";
  for (const SuiteRun& r : runs)
    for (const ResidualSummary& s : r.result.summary)
      os << fmt(r.space.k) << ',' << fmt(r.space.tau) << ',' << r.surface << ',' << s.id << ','
         << s.tier << ',' << fmt(s.tolerance) << ',' << (s.gating ? 1 : 0) << ',' << s.count << ','
         << fmt(s.max_rel) << ',' << fmt(s.mean_rel) << ',' << fmt(s.max_abs) << ','
         << fmt(s.worst_uv.x()) << ',' << fmt(s.worst_uv.y()) << ',' << (s.pass ? 1 : 0) << '\n';
  return os.str();
}

std::string summary_text(const std::vector<SuiteRun>& runs) {
  std::ostringstream os;
  int failed = 0;
  for (const SuiteRun& r : runs) {
    os << space_label(r.space) << "  " << r.surface << "  min K_e " << fmt(r.convexity.min_Ke)
       << (r.convexity.strictly_convex ? "  strictly convex" : r.convexity.convex ? "  convex" : "")
       << "  -> " << (r.result.pass ? "PASS" : "FAIL") << '\n';
    for (const ResidualSummary& s : r.result.summary) {
      char line[200];
      std::snprintf(line, sizeof line, "    %-26s %-11s n=%-4d max_rel=%-12s tol=%-8s %s\n",
                    s.id.c_str(), s.tier.c_str(), s.count, fmt(s.max_rel).c_str(),
                    fmt(s.tolerance).c_str(),
                    !s.gating ? (s.pass ? "info" : "info (exceeds)") : s.pass ? "ok" : "FAILED");
      os << line;
      if (s.gating && !s.pass) ++failed;
    }
    for (const std::string& n : r.result.notes) os << "    note: " << n << '\n';
  }
  os << (failed ? std::to_string(failed) + " gating residual(s) failed\n" : "all gating residuals pass\n");
  return os.str();
}

std::string analyze_csv(const ParametrizedSurface& s, int n) {
  std::ostringstream os;
  os << "u,v,x,y,z,E,F,G,H,K_e,K,g,theta,phi,grad_theta_norm,lambda1,lambda2,horizontal_flag\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vec2 uv = s.domain().at((i + 0.5) / n, (j + 0.5) / n);
      FrameOptions fo;
      fo.intrinsic = true;
      const SurfacePointData d = analyze(s, uv, fo);
      const double nan = SurfacePointData::kNaN;
      os << fmt(uv.x()) << ',' << fmt(uv.y()) << ',' << fmt(d.point.x()) << ',' << fmt(d.point.y())
         << ',' << fmt(d.point.z()) << ',' << fmt(d.E) << ',' << fmt(d.F) << ',' << fmt(d.G) << ','
         << fmt(d.H) << ',' << fmt(d.Ke) << ',' << fmt(d.K) << ',' << fmt(d.g) << ','
         << fmt(d.frame_defined ? d.theta : nan) << ',' << fmt(d.v_defined ? d.phi : nan) << ','
         << fmt(d.frame_defined ? d.grad_theta_norm : nan) << ',' << fmt(d.lambda1) << ','
         << fmt(d.lambda2) << ',' << (d.horizontal ? 1 : 0) << '\n';
    }
  return os.str();
}

std::string rigidity_json(const std::string& reference, const SpaceParams& space,
                          const std::vector<Vec2>& points, const std::vector<FamilyRun>& runs) {
  json fams = json::array();
  bool all = true;
  for (const FamilyRun& f : runs) {
    json members = json::array();
    for (const CongruenceVerdict& v : f.verdicts) {
      members.push_back(to_json(v));
      all = all && v.verdict == Verdict::Congruent;
    }
    fams.push_back({{"family", f.family}, {"note", f.note}, {"members", members}});
  }
  json pts = json::array();
  for (const Vec2& p : points) pts.push_back(vec(p));
  const json out = {{"reference", reference},
                    {"space", {{"k", space.k}, {"tau", space.tau}}},
                    {"points", pts},
                    {"all_congruent", all},
                    {"families", fams}};
  return out.dump(2) + "\n";
}

std::string examples_json(const std::vector<ExampleEntry>& entries) {
  json out = json::array();
  for (const ExampleEntry& e : entries) {
    json row = {{"space", {{"k", e.space.k}, {"tau", e.space.tau}}},
                {"surface", e.spec.name},
                {"family", e.spec.family},
                {"built", e.built}};
    if (e.built) row["convexity"] = to_json(e.convexity);
    else row["error"] = e.error;
    out.push_back(row);
  }
  return out.dump(2) + "\n";
}

std::string examples_text(const std::vector<ExampleEntry>& entries) {
  std::ostringstream os;
  os << "families: coordinate-sphere, vertical-plane, graph, custom-expression\n"
     << "deformations: vertical-translation, fiber-rotation, composed, perturbed (radial | vertical)\n";
  for (const ExampleEntry& e : entries) {
    os << space_label(e.space) << "  " << e.spec.name << " (" << e.spec.family << ")";
    if (!e.built) {
      os << "  not built: " << e.error << '\n';
      continue;
    }
    const ConvexityReport& c = e.convexity;
    os << "  min K_e " << fmt(c.min_Ke) << "  min(K_e - tau^2) " << fmt(c.min_Ke_minus_tau2)
       << "  principal [" << fmt(c.min_principal) << ", " << fmt(c.max_principal) << "]"
       << (c.strictly_convex ? "  strictly convex" : c.convex ? "  convex" : "  not convex") << '\n';
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
}

}  // namespace ektau
