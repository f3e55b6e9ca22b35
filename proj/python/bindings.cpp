#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robcons/case_study.hpp"
#include "robcons/config.hpp"
#include "robcons/graphs.hpp"
#include "robcons/nugap.hpp"
#include "robcons/numerics.hpp"
#include "robcons/synthesis.hpp"

namespace py = pybind11;
using namespace robcons;

PYBIND11_MODULE(_robcons, m) {
  m.doc() = "Robust consensus protocol synthesis";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<StateSpace>(m, "StateSpace")
      .def(py::init<Matrix, Matrix, Matrix, Matrix>(), py::arg("A"),
           py::arg("B"), py::arg("C"), py::arg("D"))
      .def_property_readonly("A", &StateSpace::A)
      .def_property_readonly("B", &StateSpace::B)
      .def_property_readonly("C", &StateSpace::C)
      .def_property_readonly("D", &StateSpace::D)
      .def_property_readonly("states", &StateSpace::states)
      .def_property_readonly("inputs", &StateSpace::inputs)
      .def_property_readonly("outputs", &StateSpace::outputs);

  py::class_<Controller>(m, "Controller")
      .def(py::init([](Matrix KA, Matrix KB, Matrix KC, Matrix KD) {
             return Controller{std::move(KA), std::move(KB), std::move(KC),
                               std::move(KD)};
           }),
           py::arg("K_A"), py::arg("K_B"), py::arg("K_C"), py::arg("K_D"))
      .def_readwrite("K_A", &Controller::K_A)
      .def_readwrite("K_B", &Controller::K_B)
      .def_readwrite("K_C", &Controller::K_C)
      .def_readwrite("K_D", &Controller::K_D);

  m.def("solve_lyapunov",
        [](const Matrix& A, const Matrix& Q) { return solve_lyapunov(A, Q); },
        py::arg("A"), py::arg("Q"));
  m.def("solve_care",
        [](const Matrix& A, const Matrix& B, const Matrix& Q) {
          return solve_care(A, B, Q);
        },
        py::arg("A"), py::arg("B"), py::arg("Q"));
  m.def("hinf_norm", [](const StateSpace& s) { return hinf_norm(s); });
  m.def("hankel_norm", [](const StateSpace& s) { return hankel_norm(s); });
  m.def("freq_response", &freq_response, py::arg("sys"), py::arg("omega"));

  m.def("nu_gap",
        [](const StateSpace& P1, const StateSpace& P2) {
          const NuGapResult r = nu_gap(P1, P2);
          py::dict d;
          d["value"] = r.value;
          d["winding_ok"] = r.winding_ok;
          d["det_nonzero_ok"] = r.det_nonzero_ok;
          d["phi_norm"] = r.phi_norm;
          d["winding"] = r.winding;
          return d;
        },
        py::arg("P1"), py::arg("P2"));

  m.def("laplacian_eigenvalues",
        [](int n, const std::vector<std::pair<int, int>>& edges) {
          return nonzero_laplacian_eigenvalues(Graph(n, edges));
        },
        py::arg("n"), py::arg("edges"));

  m.def("max_stability_margin",
        [](const StateSpace& P) { return max_stability_margin(P); });
  m.def("generalized_stability_margin",
        [](const StateSpace& P, const Controller& K) {
          return generalized_stability_margin(P, K);
        },
        py::arg("P"), py::arg("K"));
  m.def("synthesize_controller",
        [](const StateSpace& P, double gamma_rel) {
          const SynthesisResult r = synthesize_controller(P, gamma_rel);
          py::dict d;
          d["controller"] = r.K;
          d["gamma"] = r.gamma;
          d["b_max"] = r.b_max;
          d["margin"] = r.margin;
          return d;
        },
        py::arg("P"), py::arg("gamma_rel") = 1.0);

  m.def("reference_controller", &uuv::reference_controller);
  m.def("default_config_json",
        [] { return to_json(uuv::default_config()).dump(2); });
  m.def("case_study_margin", [](int grid_count) {
    const Config c = uuv::default_config();
    PerturbationBox box = c.box;
    box.grid_count = grid_count;
    const PlantFamily family = build_plant_family(
        c.A, c.B, c.C, build_eigenvalue_pool(c.bank));
    const MarginReport r = check_conditions(family, box);
    py::dict d;
    d["b_max"] = r.b_max;
    d["eps_cp"] = r.eps_cp;
    d["psi_max"] = r.psi_max;
    d["cp_lambda"] = r.cp_lambda;
    d["xi"] = family.size();
    d["nominal_ok"] = r.nominal_ok;
    d["robust_ok"] = r.robust_ok;
    return d;
  }, py::arg("grid_count") = 3);
}
