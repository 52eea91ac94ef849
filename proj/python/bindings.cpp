#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loclab/cli.hpp"
#include "loclab/errors.hpp"

#include <sstream>

namespace py = pybind11;
using namespace loclab;

namespace {

SamplingConfig make_config(int trials, std::vector<int> env_dims, std::uint64_t seed, double tol) {
    SamplingConfig cfg;
    cfg.trials = trials;
    cfg.env_dims = std::move(env_dims);
    cfg.seed = RngSeed{seed};
    cfg.tolerance = tol;
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_loclab, m) {
    m.doc() = "loclab core bindings";
    m.attr("__version__") = version();

    py::register_exception<Error>(m, "LoclabError", PyExc_ValueError);

    py::enum_<TheoryTag>(m, "Theory")
        .value("pure", TheoryTag::Pure)
        .value("mixed", TheoryTag::Mixed);

    py::class_<TransFamily>(m, "TransFamily")
        .def_property_readonly("theory", &TransFamily::theory)
        .def_property_readonly("dim_in", &TransFamily::dim_in)
        .def_property_readonly("dim_out", &TransFamily::dim_out)
        .def_property_readonly("name", &TransFamily::name)
        .def("apply", &TransFamily::apply, py::arg("env_dim"), py::arg("state"));

    m.def("haar_unitary", py::overload_cast<int, RngSeed>(&haar_unitary), py::arg("d"), py::arg("seed"));
    m.def("random_density", py::overload_cast<int, RngSeed>(&random_density), py::arg("d"), py::arg("seed"));
    m.def("random_kraus_channel",
          py::overload_cast<int, int, int, RngSeed>(&random_kraus_channel), py::arg("d_in"),
          py::arg("d_out"), py::arg("rank"), py::arg("seed"));
    py::class_<RngSeed>(m, "Seed").def(py::init([](std::uint64_t v) { return RngSeed{v}; }));
    py::implicitly_convertible<py::int_, RngSeed>();

    m.def("bell_state", &bell_state);
    m.def("partial_trace",
          [](const ComplexMatrix& a, std::vector<int> dims, std::vector<int> keep) {
              return partial_trace(a, dims, keep);
          });

    m.def("lift_isometry", &lift_isometry, py::arg("v"), py::arg("tol") = kDefaultTolerance);
    m.def("lift_channel", &lift_channel, py::arg("kraus"), py::arg("tol") = kDefaultTolerance);
    m.def("zoo", [](const std::string& name, int dim, double theta) { return zoo(name, {dim, theta}); },
          py::arg("name"), py::arg("dim") = 2, py::arg("theta") = 0.7);
    m.def("compose", &compose_families, py::arg("second"), py::arg("first"));

    // Reports cross the boundary as JSON text; the Python layer decodes them.
    m.def("check_all_json",
          [](const TransFamily& l, int trials, std::vector<int> env_dims, std::uint64_t seed, double tol) {
              return to_json(check_all(l, make_config(trials, std::move(env_dims), seed, tol))).dump();
          });
    m.def("certify_json",
          [](const TransFamily& l, int trials, std::vector<int> env_dims, std::uint64_t seed, double tol) {
              return to_json(certify(l, make_config(trials, std::move(env_dims), seed, tol))).dump();
          });
    m.def("extract_pure_operator", [](const TransFamily& l) { return extract_pure_operator(l).matrix; });
    m.def("extract_choi", [](const TransFamily& l) {
        const ChoiMatrix c = extract_choi(l);
        return py::make_tuple(c.matrix, c.cp_defect, c.tp_defect);
    });

    py::class_<PureStateMap>(m, "PureStateMap")
        .def_property_readonly("name", &PureStateMap::name)
        .def_property_readonly("dim_in", &PureStateMap::dim_in)
        .def("__call__", &PureStateMap::operator());
    m.def("linear_map", [](const ComplexMatrix& v) { return PureStateMap::linear(v); });
    m.def("zoo_map", [](const std::string& name, int dim, double theta) { return zoo_map(name, dim, theta); },
          py::arg("name"), py::arg("dim") = 2, py::arg("theta") = 0.7);
    m.def("convex_linearity_gap", &convex_linearity_gap, py::arg("f"), py::arg("dim"),
          py::arg("pairs"), py::arg("seed"));
    m.def("nonlinearity_witness_json", [](const PureStateMap& f) { return to_json(nonlinearity_witness(f)).dump(); });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
