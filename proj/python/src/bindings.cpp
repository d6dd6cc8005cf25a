#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pikl/bench.hpp"
#include "pikl/config.hpp"
#include "pikl/effdim.hpp"
#include "pikl/estimator.hpp"
#include "pikl/gram.hpp"
#include "pikl/report.hpp"
#include "pikl/wave_solvers.hpp"

namespace py = pybind11;
using namespace pikl;

namespace {

// JSON crosses the boundary as text; the Python side wraps it with json.
json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Physics-informed kernel learning: Fourier-space estimator and benchmarks.";

  auto base = py::register_exception<Error>(mod, "PiklError");
  py::register_exception<CapacityError>(mod, "CapacityError", base.ptr());
  py::register_exception<DimensionError>(mod, "DimensionError", base.ptr());
  py::register_exception<ConfigError>(mod, "ConfigError", base.ptr());
  py::register_exception<FactorizationError>(mod, "FactorizationError", base.ptr());
  py::register_exception<NumericError>(mod, "NumericError", base.ptr());

  py::class_<ModeSet>(mod, "ModeSet")
      .def(py::init<int, int, real>(), py::arg("m"), py::arg("d"), py::arg("half_width"))
      .def_property_readonly("m", &ModeSet::m)
      .def_property_readonly("dim", &ModeSet::dim)
      .def_property_readonly("half_width", &ModeSet::half_width)
      .def_property_readonly("size", &ModeSet::size)
      .def("mode", py::overload_cast<std::size_t>(&ModeSet::mode, py::const_))
      .def("index_of", [](const ModeSet& s, const std::vector<int>& k) { return s.index_of(k); })
      .def("__len__", &ModeSet::size)
      .def("__repr__", [](const ModeSet& s) {
        return "ModeSet(m=" + std::to_string(s.m()) + ", d=" + std::to_string(s.dim()) +
               ", half_width=" + format_real(s.half_width()) + ")";
      });

  py::class_<LinearDiffOp>(mod, "LinearDiffOp")
      .def_static("identity", &LinearDiffOp::identity, py::arg("d"))
      .def_static("ddx", &LinearDiffOp::ddx)
      .def_static("harmonic_oscillator", &LinearDiffOp::harmonic_oscillator)
      .def_static("heat", &LinearDiffOp::heat)
      .def_static("convection", &LinearDiffOp::convection, py::arg("beta"))
      .def_static("wave", &LinearDiffOp::wave, py::arg("c2"))
      .def_static("laplace", &LinearDiffOp::laplace, py::arg("d"))
      .def_static(
          "from_json", [](const std::string& text, int d) { return operator_from_json(parse_text(text), d); },
          py::arg("text"), py::arg("d"))
      .def_property_readonly("dim", &LinearDiffOp::dim)
      .def_property_readonly("order", &LinearDiffOp::order)
      .def("symbol", [](const LinearDiffOp& op, const std::vector<int>& k, real L) { return symbol(op, k, L); },
           py::arg("k"), py::arg("half_width"))
      .def("__repr__", &LinearDiffOp::describe);

  py::class_<Domain>(mod, "Domain")
      .def_static("cube", &Domain::cube, py::arg("d"), py::arg("half_width"))
      .def_static("ball2d", &Domain::ball2d, py::arg("half_width"))
      .def_static("torus", &Domain::torus, py::arg("d"), py::arg("half_width"))
      .def_static("scaled", &Domain::scaled, py::arg("inner"), py::arg("factor"))
      .def_static("translated", &Domain::translated, py::arg("inner"), py::arg("shift"))
      .def_static("disjoint_union", &Domain::disjoint_union, py::arg("parts"))
      .def_static("product", &Domain::product, py::arg("left"), py::arg("right"))
      .def_static(
          "from_json", [](const std::string& text, real L) { return domain_from_json(parse_text(text), L); },
          py::arg("text"), py::arg("half_width"))
      .def_property_readonly("dim", &Domain::dim)
      .def("volume", &Domain::volume)
      .def("contains", [](const Domain& d, const std::vector<real>& x) { return d.contains(x); })
      .def("char_fn", [](const Domain& d, const std::vector<int>& k) { return char_fn(d, k); }, py::arg("k"));

  py::enum_<SobolevScaling>(mod, "SobolevScaling")
      .value("PerAxis", SobolevScaling::PerAxis)
      .value("Volume", SobolevScaling::Volume);

  py::class_<GramSpec>(mod, "GramSpec")
      .def(py::init([](const ModeSet& modes, int s, real lambda, real mu, const LinearDiffOp& op, const Domain& dom,
                       SobolevScaling scaling) {
             GramSpec spec{modes, s, lambda, mu, op, dom, scaling};
             spec.validate();
             return spec;
           }),
           py::arg("modes"), py::arg("s"), py::arg("lambda_"), py::arg("mu"), py::arg("op"), py::arg("domain"),
           py::arg("scaling") = SobolevScaling::PerAxis)
      .def_readonly("modes", &GramSpec::modes)
      .def_readonly("s", &GramSpec::s)
      .def_readonly("lambda_", &GramSpec::lambda)
      .def_readonly("mu", &GramSpec::mu);

  py::class_<HermitianMatrix>(mod, "HermitianMatrix")
      .def_readonly("modes", &HermitianMatrix::modes)
      .def_readonly("entries", &HermitianMatrix::entries)
      .def("asymmetry", &HermitianMatrix::asymmetry)
      .def("__len__", &HermitianMatrix::size);

  mod.def("assemble_m", &assemble_m, py::arg("spec"), py::arg("threads") = 0u,
          "M = lambda diag(1 + w) + mu T for a GramSpec.");
  mod.def("assemble_c", &assemble_c, py::arg("spec"), py::arg("threads") = 0u);
  mod.def("penalty_form", py::overload_cast<const HermitianMatrix&, const VectorXc&>(&penalty_form), py::arg("m"),
          py::arg("z"));

  py::class_<PiklModel>(mod, "PiklModel")
      .def_readonly("modes", &PiklModel::modes)
      .def_readonly("z", &PiklModel::z)
      .def("predict", [](const PiklModel& model, const MatrixXr& x) { return predict(model, x); }, py::arg("x"));

  mod.def(
      "fit",
      [](const MatrixXr& X, const VectorXr& Y, const HermitianMatrix& m) {
        const Dataset data{X, Y};
        data.validate();
        SufficientStats stats(m.modes);
        stats.accumulate(data);
        return fit(stats, m);
      },
      py::arg("X"), py::arg("Y"), py::arg("m"), "Minimizes the empirical risk plus the PIKL penalty.");
  mod.def(
      "predict_dual",
      [](const HermitianMatrix& m, const MatrixXr& X, const VectorXr& Y, const MatrixXr& q) {
        return predict_dual(m, Dataset{X, Y}, q);
      },
      py::arg("m"), py::arg("X"), py::arg("Y"), py::arg("queries"));

  mod.def(
      "spectrum", [](const GramSpec& spec) { return compute_spectrum(spec).eigenvalues; }, py::arg("spec"),
      "Eigenvalues of C M^{-1} C, nonincreasing.");
  mod.def("effective_dimension", py::overload_cast<const VectorXr&>(&effective_dimension), py::arg("eigenvalues"));
  mod.def("loglog_slope", &loglog_slope, py::arg("x"), py::arg("y"));

  mod.def(
      "run_scenario",
      [](const std::string& config) {
        const Scenario sc = scenario_from_json(parse_text(config));
        RunReport report;
        {
          py::gil_scoped_release release;
          report = run_scenario(sc);
        }
        return report_to_json(report).dump();
      },
      py::arg("config"), "Runs a scenario given as JSON text; returns the report as JSON text.");
  mod.def(
      "scenario_preset", [](const std::string& name) { return to_json(Scenario::preset(name)).dump(); },
      py::arg("name"));

  mod.def(
      "solve_wave",
      [](const std::string& method, long n, real sigma, std::uint64_t seed) {
        const auto [l1, l2] = wave_grid_split(n);
        WaveOptions o;
        o.l1 = l1;
        o.l2 = l2;
        o.noise = {sigma, seed};
        py::gil_scoped_release release;
        return solve_wave(parse_wave_method(method), o).l2_error;
      },
      py::arg("method"), py::arg("n"), py::arg("sigma") = 0.0, py::arg("seed") = 1u,
      "Relative L2 error of a classic solver on the wave benchmark with n grid points.");

  mod.def("content_hash", &content_hash, py::arg("data"));
}
