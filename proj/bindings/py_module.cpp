#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ltp/curvature.hpp"
#include "ltp/experiments.hpp"
#include "ltp/flatness.hpp"
#include "ltp/holonomy.hpp"
#include "ltp/identities.hpp"
#include "ltp/models.hpp"
#include "ltp/report.hpp"
#include "ltp/transport.hpp"

namespace py = pybind11;
using namespace ltp;

namespace {

int resolve_steps(double s, double t, int steps) {
  return steps > 0 ? steps : default_steps(std::abs(t - s));
}

models::ModelOptions build_options(const std::optional<Mat>& constant_g, double torsion_c,
                                   const std::string& frame_name) {
  models::ModelOptions options;
  if (constant_g) options.constant_g = *constant_g;
  options.torsion_c = torsion_c;
  options.frame_name = frame_name;
  return options;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear transports along paths: transport integration, torsion and "
            "curvature operators, holonomy, Bianchi-type identities, flatness.";

  py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<numeric_error>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<not_flat_error>(m, "NotFlatError", PyExc_RuntimeError);

  py::class_<Interval>(m, "Interval")
      .def(py::init([](double a, double b) { return Interval{a, b}; }), py::arg("a"),
           py::arg("b"))
      .def_readonly("a", &Interval::a)
      .def_readonly("b", &Interval::b)
      .def("length", &Interval::length)
      .def("contains", &Interval::contains, py::arg("s"))
      .def("__repr__", [](const Interval& iv) {
        return "Interval(" + format_double(iv.a) + ", " + format_double(iv.b) + ")";
      });

  py::class_<Path>(m, "Path")
      .def_static("segment", &Path::segment, py::arg("x"), py::arg("y"),
                  py::arg("label") = "segment")
      .def_static("polyline", &Path::polyline, py::arg("nodes"), py::arg("label") = "polyline")
      .def_static("quadratic_arc", &Path::quadratic_arc, py::arg("x"), py::arg("via"),
                  py::arg("y"), py::arg("label") = "arc")
      .def("domain", &Path::domain)
      .def("point", &Path::point, py::arg("s"))
      .def("velocity", &Path::velocity, py::arg("s"))
      .def("base_dim", &Path::base_dim)
      .def("label", &Path::label)
      .def("leg_count", &Path::leg_count)
      .def("leg", &Path::leg, py::arg("k"))
      .def("reparametrized", &Path::reparametrized, py::arg("c"), py::arg("d"),
           py::arg("label") = "")
      .def("__repr__", [](const Path& p) {
        return "Path(" + p.label() + ", [" + format_double(p.domain().a) + ", " +
               format_double(p.domain().b) + "])";
      });

  py::class_<Family>(m, "Family")
      .def("s_domain", &Family::s_domain)
      .def("t_domain", &Family::t_domain)
      .def("point", &Family::point, py::arg("s"), py::arg("t"))
      .def("d_s", &Family::d_s, py::arg("s"), py::arg("t"))
      .def("d_t", &Family::d_t, py::arg("s"), py::arg("t"))
      .def("has_mixed_partial", &Family::has_mixed_partial)
      .def("label", &Family::label)
      .def("base_dim", &Family::base_dim);

  py::class_<MultiFamily>(m, "MultiFamily")
      .def("k", &MultiFamily::k)
      .def("basepoint", &MultiFamily::basepoint)
      .def("with_basepoint", &MultiFamily::with_basepoint, py::arg("basepoint"))
      .def("point", &MultiFamily::point, py::arg("s"))
      .def("axis_path", &MultiFamily::axis_path, py::arg("a"))
      .def("label", &MultiFamily::label);

  m.def("extract_pair_family", &extract_pair_family, py::arg("mf"), py::arg("a"), py::arg("b"));
  m.def("extract_row_path", &extract_row_path, py::arg("family"), py::arg("t"));
  m.def("extract_col_path", &extract_col_path, py::arg("family"), py::arg("s"));

  py::class_<CoefficientProvider>(m, "CoefficientProvider")
      .def("name", &CoefficientProvider::name)
      .def("fibre_dim", &CoefficientProvider::fibre_dim)
      .def("base_dim", &CoefficientProvider::base_dim)
      .def("is_connection_induced", &CoefficientProvider::is_connection_induced)
      .def("coeff", &CoefficientProvider::coeff, py::arg("path"), py::arg("s"))
      .def("__repr__", [](const CoefficientProvider& p) {
        return "CoefficientProvider(" + p.name() + ")";
      });

  py::class_<FrameMap>(m, "FrameMap")
      .def("fibre_dim", &FrameMap::fibre_dim)
      .def("name", &FrameMap::name)
      .def("frame", &FrameMap::frame, py::arg("path"), py::arg("s"));

  py::class_<FrameField>(m, "FrameField")
      .def("basis_at", &FrameField::basis_at, py::arg("x"))
      .def("name", &FrameField::name);

  py::class_<TransportMatrix>(m, "TransportMatrix")
      .def_readonly("value", &TransportMatrix::value)
      .def_readonly("path_id", &TransportMatrix::path_id)
      .def_readonly("s", &TransportMatrix::s)
      .def_readonly("t", &TransportMatrix::t)
      .def_readonly("steps", &TransportMatrix::steps);

  py::class_<OrderFit>(m, "OrderFit")
      .def_readonly("slope", &OrderFit::slope)
      .def_readonly("intercept", &OrderFit::intercept)
      .def_readonly("at_floor", &OrderFit::at_floor)
      .def("__repr__", [](const OrderFit& f) {
        return "OrderFit(slope=" + format_double(f.slope) +
               (f.at_floor ? ", at_floor=True)" : ")");
      });

  py::class_<DoubleTransportDefect>(m, "DoubleTransportDefect")
      .def_readonly("composed_difference", &DoubleTransportDefect::composed_difference)
      .def_readonly("bracket", &DoubleTransportDefect::bracket)
      .def_readonly("torsion_term", &DoubleTransportDefect::torsion_term)
      .def_readonly("remainder", &DoubleTransportDefect::remainder);

  py::class_<HolonomyEstimate>(m, "HolonomyEstimate")
      .def_readonly("value", &HolonomyEstimate::value)
      .def_readonly("estimates", &HolonomyEstimate::estimates)
      .def_readonly("residual_fit", &HolonomyEstimate::residual_fit)
      .def_readonly("fitted_order", &HolonomyEstimate::fitted_order);

  py::class_<BianchiFirstSides>(m, "BianchiFirstSides")
      .def_readonly("lhs", &BianchiFirstSides::lhs)
      .def_readonly("rhs", &BianchiFirstSides::rhs)
      .def_readonly("residual", &BianchiFirstSides::residual);

  py::class_<RegionGrid>(m, "RegionGrid")
      .def(py::init<Vec, Vec, int, int>(), py::arg("lo"), py::arg("hi"), py::arg("nx"),
           py::arg("ny"))
      .def("lo", &RegionGrid::lo)
      .def("hi", &RegionGrid::hi)
      .def("nx", &RegionGrid::nx)
      .def("ny", &RegionGrid::ny)
      .def("node_count", &RegionGrid::node_count)
      .def("node", &RegionGrid::node, py::arg("i"), py::arg("j"))
      .def("nodes", &RegionGrid::nodes)
      .def("center", &RegionGrid::center);

  py::class_<FlatnessVerdict>(m, "FlatnessVerdict")
      .def_readonly("curvature_sup", &FlatnessVerdict::curvature_sup)
      .def_readonly("max_defect", &FlatnessVerdict::max_defect)
      .def_readonly("worst_pair", &FlatnessVerdict::worst_pair)
      .def_readonly("curvature_tolerance", &FlatnessVerdict::curvature_tolerance)
      .def_readonly("defect_tolerance", &FlatnessVerdict::defect_tolerance)
      .def_readonly("flat_by_curvature", &FlatnessVerdict::flat_by_curvature)
      .def_readonly("flat_by_transport", &FlatnessVerdict::flat_by_transport)
      .def_readonly("consistent", &FlatnessVerdict::consistent);

  py::class_<models::ModelSetup>(m, "ModelSetup")
      .def_readonly("name", &models::ModelSetup::name)
      .def_readonly("provider", &models::ModelSetup::provider)
      .def_readonly("family", &models::ModelSetup::family)
      .def_readonly("s0", &models::ModelSetup::s0)
      .def_readonly("t0", &models::ModelSetup::t0)
      .def_readonly("tangent_bundle", &models::ModelSetup::tangent_bundle)
      .def_readonly("expect_zero_curvature", &models::ModelSetup::expect_zero_curvature)
      .def_readonly("region_lo", &models::ModelSetup::region_lo)
      .def_readonly("region_hi", &models::ModelSetup::region_hi)
      .def_readonly("basepoint", &models::ModelSetup::basepoint)
      .def("make_chart_bundle",
           [](const models::ModelSetup& s, int k) { return s.make_chart_bundle(k); },
           py::arg("k"))
      .def("__repr__",
           [](const models::ModelSetup& s) { return "ModelSetup(" + s.name + ")"; });

  m.def("make_model",
        [](const std::string& name, const std::optional<Mat>& constant_g, double torsion_c,
           const std::string& frame_name) {
          return models::make_model(name, build_options(constant_g, torsion_c, frame_name));
        },
        py::arg("name"), py::arg("constant_g") = std::nullopt, py::arg("torsion_c") = 0.4,
        py::arg("frame_name") = "rotation");
  m.def("model_names", &models::model_names);
  m.def("make_frame", &models::make_frame, py::arg("name"));
  m.def("make_frame_map_transport", &models::make_frame_map_transport, py::arg("frame_map"),
        py::arg("base_dim") = 2);
  m.def("coordinate_family", &models::coordinate_family, py::arg("origin"), py::arg("s_dom"),
        py::arg("t_dom"));

  m.def("default_steps", &default_steps, py::arg("span"));
  m.def("transport_matrix",
        [](const CoefficientProvider& provider, const Path& path, double s, double t,
           int steps) { return transport_matrix(provider, path, s, t, resolve_steps(s, t, steps)); },
        py::arg("provider"), py::arg("path"), py::arg("s"), py::arg("t"), py::arg("steps") = 0);
  m.def("transport_vector",
        [](const CoefficientProvider& provider, const Path& path, double s, double t,
           const Vec& u, int steps) {
          return transport_vector(provider, path, s, t, u, resolve_steps(s, t, steps));
        },
        py::arg("provider"), py::arg("path"), py::arg("s"), py::arg("t"), py::arg("u"),
        py::arg("steps") = 0);
  m.def("transport_from_frame_map", &transport_from_frame_map, py::arg("frame_map"),
        py::arg("path"), py::arg("s"), py::arg("t"));
  m.def("coefficients_from_transport", &coefficients_from_transport, py::arg("provider"),
        py::arg("path"), py::arg("s"), py::arg("h"));
  m.def("expansion_check", &expansion_check, py::arg("provider"), py::arg("path"),
        py::arg("s"), py::arg("eps"));

  m.def("torsion_components", &torsion_components, py::arg("provider"), py::arg("family"),
        py::arg("s"), py::arg("t"));
  m.def("torsion_operator", &torsion_operator, py::arg("provider"), py::arg("family"),
        py::arg("s"), py::arg("t"));
  m.def("curvature_matrix", &curvature_matrix, py::arg("provider"), py::arg("family"),
        py::arg("s"), py::arg("t"), py::arg("fd_step") = 1e-4);
  m.def("curvature_matrix_analytic", &curvature_matrix_analytic, py::arg("provider"),
        py::arg("family"), py::arg("s"), py::arg("t"));

  m.def("pentagon_defect", &pentagon_defect, py::arg("provider"), py::arg("family"),
        py::arg("s"), py::arg("t"), py::arg("delta"), py::arg("eps"), py::arg("steps") = 0);
  m.def("double_transport_defect", &double_transport_defect, py::arg("provider"),
        py::arg("family"), py::arg("s"), py::arg("t"), py::arg("delta"), py::arg("eps"),
        py::arg("steps") = 0);
  m.def("loop_holonomy", &loop_holonomy, py::arg("provider"), py::arg("family"), py::arg("s"),
        py::arg("t"), py::arg("delta"), py::arg("eps"), py::arg("steps") = 0);
  m.def("holonomy_curvature_estimate", &holonomy_curvature_estimate, py::arg("provider"),
        py::arg("family"), py::arg("s"), py::arg("t"), py::arg("h_sequence"),
        py::arg("steps") = 0);
  m.def("convergence_order", &convergence_order, py::arg("h_and_residual"));

  m.def("check_antisymmetry", &check_antisymmetry, py::arg("provider"), py::arg("mf"),
        py::arg("a"), py::arg("b"), py::arg("fd_step") = 1e-4);
  m.def("check_bianchi_first", &check_bianchi_first, py::arg("provider"), py::arg("mf"),
        py::arg("fd_step") = 1e-3, py::arg("a") = 0, py::arg("b") = 1, py::arg("c") = 2);
  m.def("check_bianchi_second", &check_bianchi_second, py::arg("provider"), py::arg("mf"),
        py::arg("test_vec"), py::arg("fd_step") = 1e-3, py::arg("a") = 0, py::arg("b") = 1,
        py::arg("c") = 2);
  m.def("check_four_point", &check_four_point, py::arg("provider"), py::arg("mf"),
        py::arg("test_vec"), py::arg("fd_step") = 1e-4, py::arg("a") = 0, py::arg("b") = 1,
        py::arg("c") = 2, py::arg("d") = 3);

  m.def("path_independence_defect", &path_independence_defect, py::arg("provider"),
        py::arg("path1"), py::arg("path2"), py::arg("steps") = 0);
  m.def("route_catalogue", &route_catalogue, py::arg("from_point"), py::arg("to_point"));
  m.def("flatness_verdict", &flatness_verdict, py::arg("provider"), py::arg("region"),
        py::arg("curvature_tolerance") = 1e-8, py::arg("defect_tolerance") = 1e-7,
        py::arg("steps") = 0, py::arg("fd_step") = 1e-4);
  m.def("construct_flat_frame", &construct_flat_frame, py::arg("provider"), py::arg("region"),
        py::arg("x0"), py::arg("seed_basis"), py::arg("steps") = 0,
        py::arg("defect_tolerance") = 1e-7);

  m.def("experiment_names", [] { return experiment_names(); });
  m.def("run_config",
        [](const std::string& config_text) {
          const ExperimentConfig cfg = parse_config(config_text, "<config>");
          return report_body_json(run_experiment(cfg));
        },
        py::arg("config_text"),
        "Run one experiment from JSON config text; returns the report body as JSON text.");
  m.def("run_config_csv",
        [](const std::string& config_text) {
          const ExperimentConfig cfg = parse_config(config_text, "<config>");
          return report_csv(run_experiment(cfg));
        },
        py::arg("config_text"),
        "Run one experiment from JSON config text; returns the check table as CSV text.");
}
