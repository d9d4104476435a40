// Python bindings. Programs and compiled programs are opaque handles; models
// come back as plain lists and dicts so callers need no extra types.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "metac/compiler.hpp"
#include "metac/emit.hpp"
#include "metac/ht_solver.hpp"
#include "metac/htc.hpp"
#include "metac/mht.hpp"
#include "metac/parser.hpp"
#include "metac/verify.hpp"

namespace py = pybind11;
using namespace metac;

namespace {

py::object from_json(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

py::dict trace_dict(const TimedTrace& t) {
  py::list states;
  for (const auto& s : t.there()) {
    py::list atoms;
    for (const auto& a : s) atoms.append(a.str());
    states.append(atoms);
  }
  py::dict d;
  d["states"] = states;
  d["times"] = t.tau().values();
  return d;
}

py::list traces(const ModelSet<TimedTrace>& models) {
  py::list out;
  for (const auto& m : models) out.append(trace_dict(m));
  return out;
}

CompileContext context(Step lambda, std::optional<TimePoint> nu, bool simplify, std::optional<TimePoint> deadline) {
  CompileContext c;
  c.lambda = lambda;
  c.nu = nu;
  c.simplify = simplify;
  c.deadline = deadline;
  return c;
}

}  // namespace

PYBIND11_MODULE(_metac, m) {
  m.doc() = "Compiler and checker for metric logic programs";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());

  py::class_<MetricProgram>(m, "Program")
      .def("__str__", [](const MetricProgram& p) { return pretty_print(p); })
      .def("__len__", [](const MetricProgram& p) { return p.rules.size(); })
      .def("__eq__", [](const MetricProgram& a, const MetricProgram& b) { return a == b; })
      .def("alphabet", [](const MetricProgram& p) {
        std::vector<std::string> out;
        for (const auto& a : p.alphabet()) out.push_back(a.str());
        return out;
      })
      .def("scaled", &scale_durations, py::arg("factor"), "Same program with every window bound multiplied.");

  py::class_<GroundProgram>(m, "GroundProgram")
      .def_property_readonly("backend", [](const GroundProgram& g) { return backend_name(g.backend); })
      .def_property_readonly("lam", [](const GroundProgram& g) { return g.lambda; })
      .def_property_readonly("nu", [](const GroundProgram& g) { return g.nu; })
      .def("__len__", [](const GroundProgram& g) { return g.rules.size(); })
      .def("__eq__", [](const GroundProgram& a, const GroundProgram& b) { return a == b; })
      .def("asp", &emit_asp)
      .def("dc", &emit_dc, py::arg("head_shift") = true)
      .def("json", &emit_json)
      .def("stats", [](const GroundProgram& g) { return from_json(stats(g).json()); });

  m.def("parse", &parse_program_or_throw, py::arg("source"), py::arg("origin") = "<input>");
  m.def("load", &load_program, py::arg("path"));
  m.def("read_json", &read_json, py::arg("text"));

  m.def(
      "compile",
      [](const MetricProgram& p, const std::string& backend, Step lam, std::optional<TimePoint> nu, bool simplify,
         std::optional<TimePoint> deadline) {
        return metac::compile(p, parse_backend(backend), context(lam, nu, simplify, deadline));
      },
      py::arg("program"), py::arg("backend"), py::arg("lam"), py::arg("nu") = py::none(),
      py::arg("simplify") = true, py::arg("deadline") = py::none());

  m.def(
      "solve",
      [](const MetricProgram& p, const std::string& backend, Step lam, std::optional<TimePoint> nu,
         std::optional<TimePoint> deadline, std::size_t atom_cap) {
        const Backend b = parse_backend(backend);
        ModelSet<TimedTrace> models;
        if (b == Backend::Boolean) {
          SolverOptions so;
          so.atom_cap = atom_cap;
          const auto g = compile_bool(p, context(lam, nu, true, std::nullopt));
          py::gil_scoped_release release;
          models = traces_of_bool(enumerate_equilibrium_models(g, so), lam);
        } else {
          HtcOptions ho;
          ho.atom_cap = atom_cap;
          const auto g = compile_dc(p, context(lam, std::nullopt, true, deadline));
          py::gil_scoped_release release;
          models = traces_of_dc(enumerate_dc_models(g, nu, ho), lam);
        }
        return traces(models);
      },
      py::arg("program"), py::arg("backend"), py::arg("lam"), py::arg("nu") = py::none(),
      py::arg("deadline") = py::none(), py::arg("atom_cap") = 24,
      "Models as dicts {'states': [[atom, ...], ...], 'times': [...]}. For dc, nu lists every timing up to nu.");

  m.def(
      "metric_models",
      [](const MetricProgram& p, Step lam, TimePoint nu) {
        return traces(enumerate_metric_equilibrium_models(p, lam, nu));
      },
      py::arg("program"), py::arg("lam"), py::arg("nu"), "Reference models from the trace semantics.");

  m.def(
      "verify",
      [](const MetricProgram& p, Step lam, TimePoint nu, const std::string& backend) {
        VerificationReport r;
        if (backend == "bool") r = crosscheck_bool(p, lam, nu);
        else if (backend == "dc") r = crosscheck_dc(p, lam, nu);
        else if (backend == "both") r = crosscheck_backends(p, lam, nu);
        else throw InputError("backend must be bool, dc or both");
        return from_json(r.json());
      },
      py::arg("program"), py::arg("lam"), py::arg("nu"), py::arg("backend") = "bool");

  m.def(
      "random_programs",
      [](std::size_t count, std::uint64_t seed, std::size_t atoms, std::size_t max_rules, std::uint64_t max_bound) {
        RandomProgramOptions o;
        o.seed = seed;
        o.atoms = atoms;
        o.max_rules = max_rules;
        o.max_bound = max_bound;
        return random_corpus(count, o);
      },
      py::arg("count"), py::arg("seed") = 1, py::arg("atoms") = 3, py::arg("max_rules") = 4, py::arg("max_bound") = 3);
}
