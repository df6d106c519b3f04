// Python surface: the subcommand runner plus direct access to the fiber
// operators and model structures.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "genform/orbit.hpp"
#include "genform/runner.hpp"
#include "genform/structures.hpp"

namespace py = pybind11;
using namespace gf;

namespace {

StructureSpec spec_of(const std::string& kind, int n) {
  std::string j = n > 0 ? "{\"kind\":\"" + kind + "\",\"n\":" + std::to_string(n) + "}"
                        : "{\"kind\":\"" + kind + "\"}";
  return structure_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact laboratory for generalized geometric structures on tori";
  m.attr("__version__") = "0.1.0";

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("exit_code", &RunResult::exit_code)
      .def_readonly("report", &RunResult::report);

  m.def(
      "run",
      [](const std::string& command, const std::string& input, py::object tol, py::object trunc,
         py::object order, uint64_t seed, const std::string& suite,
         const std::string& flip_suite) {
        RunConfig cfg;
        cfg.command = command;
        cfg.input = input;
        if (!tol.is_none()) cfg.tol = tol.cast<double>();
        if (!trunc.is_none()) cfg.trunc = trunc.cast<int>();
        if (!order.is_none()) cfg.order = order.cast<int>();
        cfg.seed = seed;
        cfg.suite = suite;
        cfg.flip_suite = flip_suite;
        return run_command(cfg);
      },
      py::arg("command"), py::arg("input") = "", py::arg("tol") = py::none(),
      py::arg("trunc") = py::none(), py::arg("order") = py::none(), py::arg("seed") = 0,
      py::arg("suite") = "", py::arg("flip_suite") = "",
      "run one subcommand; returns exit code and json report text");

  m.def("cl2_dim", &cl2_dim, py::arg("n"), "packed length of a degree <= 2 element");

  m.def(
      "generator_matrix",
      [](int n, int a) {
        Basis b(n);
        if (a < 0 || a >= 2 * n) throw Error("generator_matrix: index out of range");
        return act_generator(b, a);
      },
      py::arg("n"), py::arg("a"),
      "fiber matrix of one generator, interior below n and wedge from n up");

  m.def(
      "quadratic_matrix",
      [](int n, const VectorXd& packed) {
        Basis b(n);
        if (packed.size() != cl2_dim(n)) throw Error("quadratic_matrix: packed length mismatch");
        return quantize_cl2(cl2_unpack(b, packed)).M;
      },
      py::arg("n"), py::arg("packed"), "fiber action of a packed degree <= 2 element");

  m.def(
      "structure_form",
      [](const std::string& kind, int n) {
        BuiltStructure built = build_structure(spec_of(kind, n));
        std::vector<VectorXcd> out;
        for (const auto& t : built.tuples) out.push_back(t.flatten());
        return py::make_tuple(built.basis.n, out);
      },
      py::arg("kind"), py::arg("n") = 0,
      "basis dimension and the flattened coefficient vectors of a model structure");

  m.def(
      "fiber_dims",
      [](const std::string& kind, int n, int depth) {
        BuiltStructure built = build_structure(spec_of(kind, n));
        FiberComplex fc = fiber_complex(built.tuples.front(), depth);
        return py::make_tuple(fc.complex_dims, fc.real_dims);
      },
      py::arg("kind"), py::arg("n") = 0, py::arg("depth") = 3,
      "complex and real dimensions of the word sweeps at one structure");
}
