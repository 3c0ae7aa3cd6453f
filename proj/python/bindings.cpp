// Thin pybind11 layer. Structured inputs and reports cross as JSON text so
// the Python side sees exactly what the CLI writes.

#include "shiftgeom/bundle.hpp"
#include "shiftgeom/cli.hpp"
#include "shiftgeom/criteria.hpp"
#include "shiftgeom/io.hpp"
#include "shiftgeom/rkhs.hpp"
#include "shiftgeom/toeplitz.hpp"
#include "shiftgeom/weighted_shift.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace shiftgeom;

namespace {

AnalyticFrame frame_of(const std::string& text) { return parse_frame(Json::parse(text)); }
MatrixSymbol symbol_of(const std::string& text) { return parse_symbol(Json::parse(text)); }

std::string curvature(const std::string& frame, cplx lambda, std::size_t truncation) {
  const BundleCurvature c = full_bundle_curvature(frame_of(frame), lambda, truncation);
  return dump_json(Json{{"total", c.total},
                        {"shift_part", c.shift_part},
                        {"defect", c.defect},
                        {"direct_total", c.direct_total},
                        {"discrepancy", c.discrepancy},
                        {"truncation_error", c.truncation_error}});
}

std::string criteria(const std::string& frame, int radial, int angular, double margin) {
  auto g = std::make_shared<const ComplexGrid>(build_grid(radial, angular, margin));
  return dump_json(criteria_to_json(similarity_verdict(frame_of(frame), g), *g));
}

std::string counterexample(double epsilon, int spike_count, std::size_t length, std::vector<double> radii) {
  return dump_json(counterexample_to_json(build_counterexample(epsilon, spike_count, length, radii)));
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "shiftgeom");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("hardy_kernel", &hardy_kernel, py::arg("lam"), py::arg("z"));
  m.def("kernel_identities", [](cplx l) {
    const KernelIdentities k = kernel_identities(l);
    return py::make_tuple(k.k_norm_sq, k.ktilde_norm_sq, k.mixed_inner, k.combo_norm_sq);
  });
  m.def("green_function", &green_function, py::arg("z"), py::arg("lam"));
  m.def("grid_points", [](int k, int mm, double margin) {
    const ComplexGrid g = build_grid(k, mm, margin);
    return py::make_tuple(g.points(), g.area_weights());
  });

  m.def("curvature_defect", [](const std::string& f, cplx l) { return curvature_defect(frame_of(f), l); });
  m.def("curvature_json", &curvature, py::arg("frame"), py::arg("lam"), py::arg("truncation") = kDefaultTruncation);
  m.def("criteria_json", &criteria, py::arg("frame"), py::arg("radial_count") = 32, py::arg("angular_count") = 128,
        py::arg("margin") = 1e-3);

  m.def("multiplicativity_check", [](const std::string& f, const std::string& g, int n) {
    return multiplicativity_check(symbol_of(f), symbol_of(g), n);
  });
  m.def("intertwining_check", [](const std::string& f, int n) { return intertwining_check(symbol_of(f), n); });
  m.def("left_invertibility_margin", [](const std::string& f, int k, int mm, double margin) {
    return left_invertibility_margin(symbol_of(f), build_grid(k, mm, margin)).delta;
  });

  m.def("spike_weight", [](double eps, int j, std::size_t length) {
    if (length == 0) length = required_spike_length(eps, j);
    return build_spike_weight(eps, j, length).values();
  }, py::arg("epsilon"), py::arg("spike_count"), py::arg("length") = 0);
  m.def("counterexample_json", &counterexample, py::arg("epsilon") = 0.1, py::arg("spike_count") = 2,
        py::arg("length") = 0, py::arg("radii") = std::vector<double>{0.0, 0.5, 0.9, 0.99, 0.999});

  m.def("cli", &cli, py::arg("args"), py::call_guard<py::gil_scoped_release>());
}
