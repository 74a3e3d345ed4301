// Python module: chart loading, fixtures, the checkers, canonical-metric
// evaluations and the sampled curvature bound. Matrices are numpy arrays
// of base-point values; whole jets stay on the C++ side.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvforge/canonical.hpp"
#include "cvforge/chart_io.hpp"
#include "cvforge/commands.hpp"
#include "cvforge/correspondences.hpp"
#include "cvforge/errors.hpp"
#include "cvforge/fixtures.hpp"
#include "cvforge/formal_iso.hpp"
#include "cvforge/hyperbolicity.hpp"

namespace py = pybind11;
using namespace cvforge;

namespace {

ChartFile wrap(ChartBundle b) {
  ChartFile f;
  f.bundle = std::move(b);
  return f;
}

StructureReport tep_report(const ChartFile& c, const std::string& source, double tol) {
  if (source != "saito" && source != "cv") throw Error(ErrorKind::InvalidArgument, "source must be saito or cv");
  TepData t = source == "saito" ? saito_connection_raw(c.bundle, c.bundle.w) : cv_connection_raw(c.bundle, c.bundle.w);
  return check_tep(t.conn, t.P, t.w, tol);
}

}  // namespace

PYBIND11_MODULE(_cvforge, m) {
  m.doc() = "Jet-level checks for F-manifold, Saito and CV chart data";

  static py::exception<Error> error(m, "CvforgeError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object cls = py::reinterpret_borrow<py::object>(error.ptr());
      py::object exc = cls(e.what());
      exc.attr("kind") = error_kind_name(e.kind());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<ReportEntry>(m, "ReportEntry")
      .def_readonly("tag", &ReportEntry::tag)
      .def_readonly("residual", &ReportEntry::residual)
      .def_readonly("threshold", &ReportEntry::threshold)
      .def_readonly("passed", &ReportEntry::pass)
      .def_readonly("lower_bound", &ReportEntry::lower_bound)
      .def_readonly("note", &ReportEntry::note)
      .def("__repr__", [](const ReportEntry& e) {
        return "<ReportEntry " + e.tag + (e.pass ? " ok>" : " FAIL>");
      });

  py::class_<StructureReport>(m, "Report")
      .def_readonly("name", &StructureReport::name)
      .def_readonly("entries", &StructureReport::entries)
      .def_property_readonly("passed", &StructureReport::pass)
      .def_property_readonly("max_residual", &StructureReport::max_residual)
      .def("failing", &StructureReport::failing)
      .def("find", [](const StructureReport& r, const std::string& tag) -> py::object {
        const ReportEntry* e = r.find(tag);
        return e ? py::cast(*e) : py::none();
      })
      .def("__str__", &StructureReport::to_text);

  py::class_<ChartFile>(m, "Chart")
      .def_static("from_json", &import_chart, py::arg("text"))
      .def_static("load", &parse_chart, py::arg("path"))
      .def("to_json", [](const ChartFile& c) { return export_chart(c.bundle, c.f ? &*c.f : nullptr); })
      .def("save", [](const ChartFile& c, const std::string& path) { write_chart(path, c.bundle, c.f ? &*c.f : nullptr); })
      .def_property_readonly("m", [](const ChartFile& c) { return c.bundle.m(); })
      .def_property_readonly("n", [](const ChartFile& c) { return c.bundle.n; })
      .def_property_readonly("d", [](const ChartFile& c) { return c.bundle.ctx.d; })
      .def_property_readonly("w", [](const ChartFile& c) { return c.bundle.w; })
      .def_property_readonly("tangent", [](const ChartFile& c) { return c.bundle.tangent; })
      .def_property_readonly("has_f_structure", [](const ChartFile& c) { return c.f.has_value(); });

  m.def("example_rank1", [](int w, int d) { return wrap(example_rank1(w, d)); }, py::arg("w") = 0, py::arg("d") = 6);
  m.def("example_semisimple",
        [](int n, const std::vector<double>& offsets, int d, int w) { return wrap(example_semisimple(n, offsets, d, w)); },
        py::arg("n"), py::arg("offsets"), py::arg("d") = 6, py::arg("w") = 0);
  m.def("example_frobenius2", [](double s, int d) { return wrap(example_frobenius2(s, d)); }, py::arg("s") = 0.0,
        py::arg("d") = 6);
  m.def("sinh_gordon_jet", [](int order, int d, double b0) { return wrap(sinh_gordon_jet(order, d, b0)); },
        py::arg("order"), py::arg("d") = 8, py::arg("b0") = 0.0);
  m.def("sinh_gordon_unfolded", [](int d, double b0) { return wrap(sinh_gordon_unfolded(d, b0)); }, py::arg("d") = 6,
        py::arg("b0") = 0.0);

  m.def("check_higgs_pair", [](const ChartFile& c, double tol) { return check_higgs_pair(c.bundle, tol); },
        py::arg("chart"), py::arg("tol") = kDefaultTol);
  m.def("check_saito", [](const ChartFile& c, double tol) { return check_saito(c.bundle, tol); }, py::arg("chart"),
        py::arg("tol") = kDefaultTol);
  m.def("check_cv", [](const ChartFile& c, double tol) { return check_cv(c.bundle, tol); }, py::arg("chart"),
        py::arg("tol") = kDefaultTol);
  m.def("check_connection", &tep_report, py::arg("chart"), py::arg("source") = "saito", py::arg("tol") = kDefaultTol,
        "Axioms of the meromorphic connection built from the chart, without the axiom precheck.");

  m.def(
      "solve_formal_iso",
      [](const ChartFile& saito, const ChartFile& cv, int K, double tol) {
        FormalIso iso = solve_formal_iso(saito.bundle, cv.bundle, K, tol);
        py::list residuals;
        for (auto& l : iso.log) residuals.append(l.residual);
        py::dict out;
        out["achieved"] = iso.achieved;
        out["K"] = iso.K;
        out["residuals"] = residuals;
        if (iso.achieved >= 1) {
          MatrixJet pot = extract_potential(iso, cv.bundle);
          out["potential_base"] = pot.constant_term();
          out["harmonic"] = check_harmonic(saito.bundle, cv.bundle, pot, tol);
        }
        return out;
      },
      py::arg("saito"), py::arg("cv"), py::arg("K") = 6, py::arg("tol") = 1e-8);

  m.def(
      "canonical",
      [](const ChartFile& c, double tol) {
        CanonicalData cd_ = canonical_data(c.bundle);
        py::dict out;
        out["hM"] = cd_.hM.constant_term();
        out["gM"] = cd_.gM.constant_term();
        out["QM"] = cd_.QM.constant_term();
        out["report"] = check_canonical_props(cd_, c.bundle, tol);
        return out;
      },
      py::arg("chart"), py::arg("tol") = kDefaultTol,
      "Base-point values of the canonical metric data and the property report.");
  m.def(
      "curvature_discrepancy", [](const ChartFile& c) { return curvature_F(c.bundle).discrepancy; }, py::arg("chart"));
  m.def(
      "sectional_curvature",
      [](const ChartFile& c, const Eigen::VectorXcd& X) {
        Sectional s = sectional_curvature(canonical_data(c.bundle), c.bundle, X);
        return py::make_tuple(s.value, s.via_second_fundamental);
      },
      py::arg("chart"), py::arg("direction"), "Sectional curvature evaluated two ways.");

  m.def("rho", py::overload_cast<const Eigen::MatrixXcd&>(&rho), py::arg("A"));
  m.def("rho", py::overload_cast<const Eigen::MatrixXcd&, const Eigen::MatrixXcd&>(&rho), py::arg("A"),
        py::arg("H"));
  m.def(
      "sample_nilpotent_cone",
      [](int n, int count, std::uint64_t seed) {
        std::vector<Eigen::MatrixXcd> out;
        for (auto& s : sample_nilpotent_cone(n, count, seed)) out.push_back(s.A);
        return out;
      },
      py::arg("n"), py::arg("count"), py::arg("seed"));
  m.def(
      "bound_k0",
      [](const ChartFile& c, int count, std::uint64_t seed, bool refine) {
        K0Estimate k = bound_k0(c.bundle, count, seed, refine);
        py::dict out;
        out["k0"] = k.k0;
        out["argmax"] = k.argmax;
        out["evaluated"] = k.evaluated;
        out["sect_range"] = py::make_tuple(k.sect_min, k.sect_max);
        out["rho_range"] = py::make_tuple(k.rho_min, k.rho_max);
        out["histogram"] = k.histogram;
        return out;
      },
      py::arg("chart"), py::arg("count") = 2000, py::arg("seed") = 1, py::arg("refine") = false);
  m.def("bound_k1", &bound_k1, py::arg("k0"), py::arg("lambda0"));

  m.def(
      "run_command",
      [](const std::vector<std::string>& args) {
        CommandResult r = run_command(args);
        return py::make_tuple(r.exit_code, r.report);
      },
      py::arg("args"), "Run a CLI subcommand in-process; returns (exit_code, report).");
}
