#include "ektau/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace ektau {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void check_keys(const YAML::Node& n, const std::string& where, const std::set<std::string>& allowed) {
  if (!n.IsMap()) fail(where, "expected a table");
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) fail(where, "expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, "cannot read '" + n.Scalar() + "'");
  }
}

template <class T>
void read(const YAML::Node& parent, const std::string& key, T& out, const std::string& where) {
  if (const YAML::Node n = parent[key]) out = scalar<T>(n, where + "." + key);
}

std::vector<double> numbers(const YAML::Node& n, const std::string& where, std::size_t size = 0) {
  if (!n.IsSequence()) fail(where, "expected a list");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scalar<double>(n[i], where));
  if (size && out.size() != size) fail(where, "expected " + std::to_string(size) + " numbers");
  return out;
}

SpaceParams read_space(const YAML::Node& n, const std::string& where) {
  check_keys(n, where, {"k", "tau"});
  if (!n["k"] || !n["tau"]) fail(where, "needs k and tau");
  return {scalar<double>(n["k"], where + ".k"), scalar<double>(n["tau"], where + ".tau")};
}

SurfaceSpec read_surface(const YAML::Node& n, const std::string& where) {
  check_keys(n, where,
             {"name", "family", "center", "radius", "tilt", "base_point", "direction", "half_length",
              "half_height", "coefficients", "half_width", "x", "y", "z", "domain"});
  SurfaceSpec s;
  if (!n["name"]) fail(where, "needs a name");
  read(n, "name", s.name, where);
  read(n, "family", s.family, where);
  const std::string w = where + " (" + s.name + ")";
  if (const YAML::Node c = n["center"]) {
    const auto v = numbers(c, w + ".center");
    if (v.size() == 3) s.center = Vec3(v[0], v[1], v[2]);
    else if (v.size() == 2) s.center = Vec3(v[0], v[1], 0.0);
    else fail(w + ".center", "expected 2 or 3 numbers");
  }
  read(n, "radius", s.radius, w);
  read(n, "tilt", s.tilt, w);
  if (const YAML::Node b = n["base_point"]) {
    const auto v = numbers(b, w + ".base_point", 2);
    s.base_point = Vec2(v[0], v[1]);
  }
  if (const YAML::Node d = n["direction"]) {
    const auto v = numbers(d, w + ".direction", 2);
    s.direction = Vec2(v[0], v[1]);
  }
  read(n, "half_length", s.half_length, w);
  read(n, "half_height", s.half_height, w);
  if (const YAML::Node c = n["coefficients"]) s.coefficients = numbers(c, w + ".coefficients");
  read(n, "half_width", s.half_width, w);
  read(n, "x", s.expressions[0], w);
  read(n, "y", s.expressions[1], w);
  read(n, "z", s.expressions[2], w);
  if (const YAML::Node d = n["domain"]) {
    check_keys(d, w + ".domain", {"u", "v", "periodic_u", "periodic_v", "margin"});
    if (!d["u"] || !d["v"]) fail(w + ".domain", "needs u and v ranges");
    const auto u = numbers(d["u"], w + ".domain.u", 2), v = numbers(d["v"], w + ".domain.v", 2);
    s.domain.u_min = u[0];
    s.domain.u_max = u[1];
    s.domain.v_min = v[0];
    s.domain.v_max = v[1];
    read(d, "periodic_u", s.domain.periodic_u, w + ".domain");
    read(d, "periodic_v", s.domain.periodic_v, w + ".domain");
    read(d, "margin", s.domain.margin, w + ".domain");
  }
  static const std::set<std::string> families = {"coordinate-sphere", "vertical-plane", "graph",
                                                 "custom-expression"};
  if (!families.count(s.family)) fail(w, "unknown family '" + s.family + "'");
  if (s.family == "custom-expression" &&
      (s.expressions[0].empty() || s.expressions[1].empty() || s.expressions[2].empty() || !n["domain"]))
    fail(w, "custom-expression needs x, y, z and domain");
  if (s.family == "graph" && s.coefficients.size() != 10) fail(w, "graph needs 10 coefficients");
  return s;
}

FamilyConfig read_family(const YAML::Node& n, const std::string& where) {
  check_keys(n, where, {"name", "kind", "c", "beta", "mode", "amplitude", "t"});
  FamilyConfig f;
  if (!n["kind"]) fail(where, "needs a kind");
  read(n, "kind", f.kind, where);
  f.name = f.kind;
  read(n, "name", f.name, where);
  read(n, "c", f.c, where);
  read(n, "beta", f.beta, where);
  read(n, "mode", f.mode, where);
  read(n, "amplitude", f.amplitude, where);
  if (!n["t"]) fail(where, "needs t values");
  f.t = numbers(n["t"], where + ".t");
  static const std::set<std::string> kinds = {"vertical-translation", "fiber-rotation", "composed",
                                              "perturbed"};
  if (!kinds.count(f.kind)) fail(where, "unknown kind '" + f.kind + "'");
  if (f.kind == "perturbed" && f.mode != "radial" && f.mode != "vertical")
    fail(where, "mode must be radial or vertical");
  return f;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("malformed config: top level must be a table");
  check_keys(root, "config",
             {"space", "spaces", "surfaces", "tolerances", "grids", "trajectory", "out", "seed",
              "rigidity"});
  RunConfig cfg;
  if (root["space"] && root["spaces"]) fail("config", "give either space or spaces");
  if (const YAML::Node s = root["space"]) cfg.spaces.push_back(read_space(s, "space"));
  if (const YAML::Node s = root["spaces"]) {
    if (!s.IsSequence()) fail("spaces", "expected a list");
    for (std::size_t i = 0; i < s.size(); ++i)
      cfg.spaces.push_back(read_space(s[i], "spaces[" + std::to_string(i) + "]"));
  }
  if (const YAML::Node s = root["surfaces"]) {
    if (!s.IsSequence()) fail("surfaces", "expected a list");
    for (std::size_t i = 0; i < s.size(); ++i)
      cfg.surfaces.push_back(read_surface(s[i], "surfaces[" + std::to_string(i) + "]"));
  }
  if (const YAML::Node t = root["tolerances"]) {
    check_keys(t, "tolerances", {"closed_form", "jet_vs_fd", "layered", "ode", "lemma2"});
    read(t, "closed_form", cfg.tolerances.closed_form, "tolerances");
    read(t, "jet_vs_fd", cfg.tolerances.jet_vs_fd, "tolerances");
    read(t, "layered", cfg.tolerances.layered, "tolerances");
    read(t, "ode", cfg.tolerances.ode, "tolerances");
    read(t, "lemma2", cfg.tolerances.lemma2, "tolerances");
  }
  if (const YAML::Node g = root["grids"]) {
    check_keys(g, "grids", {"samples", "horizontal", "metric", "vertical_points", "analyze", "convexity"});
    read(g, "samples", cfg.grids.samples, "grids");
    read(g, "horizontal", cfg.grids.horizontal, "grids");
    read(g, "metric", cfg.grids.metric, "grids");
    read(g, "vertical_points", cfg.grids.vertical_points, "grids");
    read(g, "analyze", cfg.grids.analyze, "grids");
    read(g, "convexity", cfg.grids.convexity, "grids");
  }
  if (const YAML::Node t = root["trajectory"]) {
    check_keys(t, "trajectory", {"step", "min_cos", "net_v", "net_jv", "v_length", "jv_length"});
    read(t, "step", cfg.net.step, "trajectory");
    read(t, "min_cos", cfg.net.min_cos, "trajectory");
    read(t, "net_v", cfg.net.net_v, "trajectory");
    read(t, "net_jv", cfg.net.net_jv, "trajectory");
    read(t, "v_length", cfg.net.v_length, "trajectory");
    read(t, "jv_length", cfg.net.jv_length, "trajectory");
  }
  read(root, "out", cfg.out_dir, "config");
  read(root, "seed", cfg.seed, "config");
  if (const YAML::Node r = root["rigidity"]) {
    check_keys(r, "rigidity", {"reference", "space", "points", "families"});
    read(r, "reference", cfg.rigidity.reference, "rigidity");
    read(r, "space", cfg.rigidity.space, "rigidity");
    if (const YAML::Node p = r["points"]) {
      if (!p.IsSequence()) fail("rigidity.points", "expected a list");
      for (std::size_t i = 0; i < p.size(); ++i) {
        const auto v = numbers(p[i], "rigidity.points", 2);
        cfg.rigidity.points.emplace_back(v[0], v[1]);
      }
    }
    if (const YAML::Node f = r["families"]) {
      if (!f.IsSequence()) fail("rigidity.families", "expected a list");
      for (std::size_t i = 0; i < f.size(); ++i)
        cfg.rigidity.families.push_back(read_family(f[i], "rigidity.families[" + std::to_string(i) + "]"));
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_tolerance_override(Tolerances& tol, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("tolerance override must be NAME=VALUE: " + assignment);
  const std::string name = assignment.substr(0, eq), value = assignment.substr(eq + 1);
  double x = 0.0;
  try {
    std::size_t used = 0;
    x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    throw ConfigError("tolerance override: cannot read '" + value + "'");
  }
  if (!(x > 0.0)) throw ConfigError("tolerance override: " + name + " must be > 0");
  if (name == "closed_form") tol.closed_form = x;
  else if (name == "jet_vs_fd") tol.jet_vs_fd = x;
  else if (name == "layered") tol.layered = x;
  else if (name == "ode") tol.ode = x;
  else if (name == "lemma2") tol.lemma2 = x;
  else if (name == "all") tol = {x, x, x, x, x};
  else throw ConfigError("unknown tolerance tier '" + name + "'");
}

void validate(const RunConfig& cfg) {
  const Tolerances& t = cfg.tolerances;
  for (double x : {t.closed_form, t.jet_vs_fd, t.layered, t.ode, t.lemma2})
    if (!(x > 0.0)) throw ConfigError("tolerances must be > 0");
  if (cfg.spaces.empty()) throw ConfigError("config: no space given");
  const Grids& g = cfg.grids;
  for (int n : {g.samples, g.horizontal, g.metric, g.analyze, g.convexity})
    if (n <= 0) throw ConfigError("grids must be positive");
  if (g.vertical_points < 0) throw ConfigError("grids.vertical_points must be >= 0");
  if (!(cfg.net.step > 0.0) || !(cfg.net.v_length > 0.0) || !(cfg.net.jv_length > 0.0))
    throw ConfigError("trajectory step and lengths must be > 0");
  if (cfg.net.net_v < 0 || cfg.net.net_jv < 0) throw ConfigError("trajectory net sizes must be >= 0");
  std::set<std::string> names;
  for (const SurfaceSpec& s : cfg.surfaces)
    if (!names.insert(s.name).second) throw ConfigError("duplicate surface name '" + s.name + "'");
  const RigidityConfig& r = cfg.rigidity;
  if (!r.reference.empty() && !names.count(r.reference))
    throw ConfigError("rigidity.reference '" + r.reference + "' is not a configured surface");
  if (r.space < 0 || r.space >= static_cast<int>(cfg.spaces.size()))
    throw ConfigError("rigidity.space index out of range");
}

const SurfaceSpec& find_surface(const RunConfig& cfg, const std::string& name) {
  for (const SurfaceSpec& s : cfg.surfaces)
    if (s.name == name) return s;
  throw ConfigError("no surface named '" + name + "'");
}

SuiteOptions suite_options(const RunConfig& cfg) {
  SuiteOptions o;
  o.samples = cfg.grids.samples;
  o.seed = cfg.seed;
  o.tol = cfg.tolerances;
  o.horizontal_grid = cfg.grids.horizontal;
  o.vertical_points = cfg.grids.vertical_points;
  return o;
}

CongruenceOptions congruence_options(const RunConfig& cfg) {
  CongruenceOptions o;
  o.metric_grid = cfg.grids.metric;
  o.net_v = cfg.net.net_v;
  o.net_jv = cfg.net.net_jv;
  o.v_length = cfg.net.v_length;
  o.jv_length = cfg.net.jv_length;
  o.trajectory.step = cfg.net.step;
  o.trajectory.min_cos = cfg.net.min_cos;
  return o;
}

Family build_family(const FamilyConfig& fc, const ParametrizedSurface& reference,
                    const SurfaceSpec& reference_spec) {
  if (fc.kind == "vertical-translation")
    return isometric_family(reference, vertical_translation_path(fc.c), fc.t, fc.name);
  if (fc.kind == "fiber-rotation")
    return isometric_family(reference, fiber_rotation_path(fc.beta), fc.t, fc.name);
  if (fc.kind == "composed")
    return isometric_family(reference, composed_path(fc.c, fc.beta), fc.t, fc.name);
  if (fc.kind == "perturbed") {
    const Vec3 center = reference_spec.family == "coordinate-sphere"
                            ? reference_spec.center
                            : reference.position(reference.domain().at(0.5, 0.5)) + Vec3(0.0, 0.0, 1.0);
    return perturbed_family(reference,
                            fc.mode == "radial" ? PerturbationMode::Radial : PerturbationMode::Vertical,
                            fc.amplitude, center, fc.t, fc.name);
  }
  throw ConfigError("unknown family kind '" + fc.kind + "'");
}

}  // namespace ektau
