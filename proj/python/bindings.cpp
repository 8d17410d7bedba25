#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ektau/equations.hpp"
#include "ektau/errors.hpp"
#include "ektau/families.hpp"
#include "ektau/reconstruct.hpp"

namespace py = pybind11;
using namespace ektau;

namespace {

py::dict point_dict(const SurfacePointData& d) {
  py::dict out;
  out["uv"] = d.uv;
  out["point"] = d.point;
  out["normal"] = d.normal;
  out["E"] = d.E;
  out["F"] = d.F;
  out["G"] = d.G;
  out["second"] = d.second;
  out["H"] = d.H;
  out["K_e"] = d.Ke;
  out["K"] = d.K;
  out["lambda1"] = d.lambda1;
  out["lambda2"] = d.lambda2;
  out["g"] = d.g;
  out["horizontal"] = d.horizontal;
  out["frame_defined"] = d.frame_defined;
  if (d.frame_defined) {
    out["theta"] = d.theta;
    out["e1"] = d.e1;
    out["e2"] = d.e2;
    out["grad_theta_norm"] = d.grad_theta_norm;
  }
  out["v_defined"] = d.v_defined;
  if (d.v_defined) {
    out["v"] = d.v;
    out["phi"] = d.phi;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_ektau, m) {
  m.doc() = "Surfaces in the homogeneous spaces E(k, tau)";

  py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", m.attr("Error"));
  py::register_exception<FrameUndefined>(m, "FrameUndefined", m.attr("Error"));
  py::register_exception<DegenerateSpace>(m, "DegenerateSpace", m.attr("Error"));
  py::register_exception<InconsistentData>(m, "InconsistentData", m.attr("Error"));
  py::register_exception<ConvergenceError>(m, "ConvergenceError", m.attr("Error"));
  py::register_exception<ConfigError>(m, "ConfigError", m.attr("Error"));
  py::register_exception<Unsupported>(m, "Unsupported", m.attr("Error"));

  py::class_<SpaceParams>(m, "SpaceParams")
      .def(py::init([](double k, double tau) { return SpaceParams{k, tau}; }), py::arg("k"), py::arg("tau"))
      .def_readwrite("k", &SpaceParams::k)
      .def_readwrite("tau", &SpaceParams::tau)
      .def("degenerate", &SpaceParams::degenerate)
      .def("__repr__", [](const SpaceParams& p) {
        return "SpaceParams(k=" + std::to_string(p.k) + ", tau=" + std::to_string(p.tau) + ")";
      });

  py::class_<Space>(m, "Space")
      .def(py::init([](double k, double tau) { return Space(SpaceParams{k, tau}); }), py::arg("k"),
           py::arg("tau"))
      .def_property_readonly("k", &Space::k)
      .def_property_readonly("tau", &Space::tau)
      .def("admissible", &Space::admissible)
      .def("metric", &Space::metric)
      .def("xi", &Space::xi)
      .def("inner", &Space::inner)
      .def("norm", &Space::norm)
      .def("cross", &Space::cross)
      .def("connection_term", &Space::connection_term)
      .def(
          "geodesic",
          [](const Space& s, const Vec3& p, const Vec3& v, double length, double step) {
            const GeodesicPath g = s.geodesic(p, v, length, step);
            return py::make_tuple(g.s, g.points, g.truncated);
          },
          py::arg("p"), py::arg("v"), py::arg("length"), py::arg("step") = defaults::kGeodesicStep);

  py::class_<Isometry>(m, "Isometry")
      .def_static("identity", &Isometry::identity)
      .def_static("vertical_translation", &Isometry::vertical_translation)
      .def_static("fiber_rotation", &Isometry::fiber_rotation)
      .def_static("horizontal_translation", &Isometry::horizontal_translation)
      .def_static("half_turn", &Isometry::half_turn)
      .def("then", &Isometry::then)
      .def("inverse", &Isometry::inverse)
      .def("apply", [](const Isometry& h, const SpaceParams& sp, const Vec3& p) { return h.apply(sp, p); })
      .def("describe", &Isometry::describe);

  py::class_<ParametrizedSurface>(m, "Surface")
      .def_property_readonly("name", &ParametrizedSurface::name)
      .def_property_readonly("params", &ParametrizedSurface::params)
      .def("position", &ParametrizedSurface::position)
      .def("at", [](const ParametrizedSurface& s, double su, double sv) { return s.domain().at(su, sv); })
      .def("moved", &ParametrizedSurface::moved, py::arg("isometry"), py::arg("name"));

  m.def("coordinate_sphere", &coordinate_sphere, py::arg("params"), py::arg("center"), py::arg("radius"),
        py::arg("tilt") = kPi / 4.0, py::arg("name") = "coordinate-sphere");
  m.def("vertical_plane", &vertical_plane, py::arg("params"), py::arg("through"), py::arg("direction"),
        py::arg("half_length") = 1.0, py::arg("half_height") = 1.0, py::arg("name") = "vertical-plane");
  m.def("graph_surface", &graph_surface, py::arg("params"), py::arg("center"), py::arg("coefficients"),
        py::arg("half_width"), py::arg("name") = "graph");

  py::class_<ConvexityReport>(m, "ConvexityReport")
      .def_readonly("samples", &ConvexityReport::samples)
      .def_readonly("min_K_e", &ConvexityReport::min_Ke)
      .def_readonly("min_principal", &ConvexityReport::min_principal)
      .def_readonly("max_principal", &ConvexityReport::max_principal)
      .def_readonly("convex", &ConvexityReport::convex)
      .def_readonly("strictly_convex", &ConvexityReport::strictly_convex);
  m.def("convexity_report", &convexity_report, py::arg("surface"), py::arg("n") = 24);

  m.def(
      "analyze", [](const ParametrizedSurface& s, const Vec2& uv) { return point_dict(analyze(s, uv)); },
      py::arg("surface"), py::arg("uv"));
  m.def(
      "find_horizontal_points",
      [](const ParametrizedSurface& s, int grid) { return find_horizontal_points(s, grid).points; },
      py::arg("surface"), py::arg("grid") = defaults::kHorizontalGrid);
  m.def("solve_theta", &solve_theta, py::arg("K"), py::arg("K_e"), py::arg("params"),
        py::arg("slack") = defaults::kTolJetVsFd);
  m.def("sincos_roots", &sincos_roots);

  m.def(
      "run_suite",
      [](const ParametrizedSurface& s, int samples, unsigned long long seed) {
        SuiteOptions opt;
        opt.samples = samples;
        opt.seed = seed;
        const SuiteResult r = run_suite(s, opt);
        py::list rows;
        for (const ResidualSummary& x : r.summary) {
          py::dict d;
          d["id"] = x.id;
          d["tier"] = x.tier;
          d["gating"] = x.gating;
          d["count"] = x.count;
          d["max_rel"] = x.max_rel;
          d["tolerance"] = x.tolerance;
          d["pass"] = x.pass;
          rows.append(d);
        }
        return py::make_tuple(r.pass, rows);
      },
      py::arg("surface"), py::arg("samples") = defaults::kResidualSamples, py::arg("seed") = defaults::kSeed);

  m.def(
      "congruence_test",
      [](const ParametrizedSurface& ref, const ParametrizedSurface& member, const std::vector<Vec2>& points) {
        const CongruenceVerdict v = congruence_test(ref, member, points);
        py::dict d;
        d["verdict"] = to_string(v.verdict);
        d["failed_stage"] = v.failed_stage;
        d["message"] = v.message;
        d["alpha_discrepancy"] = v.alpha_discrepancy;
        d["phi_deviation"] = v.phi_deviation;
        d["coverage"] = v.coverage;
        d["theta_sign"] = v.theta_sign;
        d["witness"] = v.witness.found ? py::object(py::str(v.witness.description)) : py::none();
        return d;
      },
      py::arg("reference"), py::arg("member"), py::arg("points"));
}
