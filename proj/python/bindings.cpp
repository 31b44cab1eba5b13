#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slmini/driver.hpp"
#include "slmini/machine.hpp"
#include "slmini/placement.hpp"

namespace py = pybind11;
using namespace slmini;

namespace {

py::dict diagnostic_dict(const Diagnostic& d) {
  py::dict out;
  out["severity"] = d.severity == Severity::Error ? "error" : "warning";
  out["code"] = d.code;
  out["message"] = d.message;
  out["file"] = d.span.file;
  out["line"] = d.span.line;
  out["column"] = d.span.column;
  return out;
}

py::dict event_dict(const TraceEvent& e) {
  py::dict out;
  out["step"] = e.step;
  out["event"] = e.event;
  out["core"] = e.core;
  out["family"] = e.family;
  out["thread"] = e.thread ? py::object(py::int_(*e.thread)) : py::object(py::none());
  out["detail"] = e.detail;
  return out;
}

struct Program {
  CompileResult compiled;

  bool ok() const { return compiled.ok(); }
  py::list diagnostics() const {
    py::list out;
    for (const auto& d : compiled.diagnostics) out.append(diagnostic_dict(d));
    return out;
  }
  std::string ir() const {
    if (!compiled.ok()) throw py::value_error("program has errors:\n" + compiled.format_diagnostics());
    return ir_dump(*compiled.ir);
  }
};

Program compile(const std::string& source, const std::string& file) { return Program{compile_source(source, file)}; }

py::dict run(const Program& prog, int cores, int hw_threads, int family_entries, std::uint64_t seed,
             std::uint64_t max_steps, bool serialize, bool forward_unwritten, bool trace) {
  if (!prog.ok()) throw py::value_error("program has errors:\n" + prog.compiled.format_diagnostics());
  MachineConfig cfg;
  cfg.num_cores = cores;
  cfg.hw_threads_per_core = hw_threads;
  cfg.family_entries_per_core = family_entries;
  cfg.seed = seed;
  cfg.max_steps = max_steps;
  RunOptions opts;
  opts.serialize_all = serialize;
  opts.forward_unwritten = forward_unwritten;
  opts.collect_trace = trace;
  RunResult r;
  {
    py::gil_scoped_release unlocked;
    r = run_program(*prog.compiled.ir, cfg, opts);
  }
  py::dict out;
  out["status"] = to_string(r.status);
  out["exit_code"] = exit_code(r.status);
  out["output"] = r.output;
  out["error_code"] = r.error_code;
  out["message"] = r.message;
  out["steps"] = r.steps;
  py::list events;
  for (const auto& e : r.trace) events.append(event_dict(e));
  out["trace"] = events;
  auto table = format_distribution(r, "");
  out["distribution"] = table.value_or("");
  py::list families;
  for (const auto& f : r.families) {
    py::dict fam;
    fam["id"] = f.id;
    fam["function"] = f.function;
    fam["kind"] = f.kind;
    fam["first_core"] = f.placement.first_core;
    fam["size"] = f.placement.size;
    fam["range"] = py::make_tuple(f.range.start, f.range.limit, f.range.step);
    fam["window"] = f.window;
    fam["dependent"] = f.dependent;
    py::list shares;
    for (const auto& s : f.shares) shares.append(py::make_tuple(s.core, f.range.at(s.first), s.count));
    fam["shares"] = shares;
    families.append(fam);
  }
  out["families"] = families;
  return out;
}

}  // namespace

PYBIND11_MODULE(_slmini, m) {
  m.doc() = "SL-mini compiler and SVP machine simulator";

  py::class_<Program>(m, "Program")
      .def_property_readonly("ok", &Program::ok)
      .def_property_readonly("diagnostics", &Program::diagnostics)
      .def("ir", &Program::ir, "lowered program as text");

  m.def("compile", &compile, py::arg("source"), py::arg("file") = "<input>");
  m.def("run", &run, py::arg("program"), py::kw_only(), py::arg("cores") = 4, py::arg("hw_threads") = 16,
        py::arg("family_entries") = 8, py::arg("seed") = 0, py::arg("max_steps") = 10'000'000,
        py::arg("serialize") = false, py::arg("forward_unwritten") = false, py::arg("trace") = false);

  m.def(
      "distribute",
      [](std::int64_t n, int size, bool shared, int first_core) {
        std::vector<std::tuple<int, std::int64_t, std::int64_t>> out;
        for (const auto& s : distribute(n, size, shared, first_core)) out.emplace_back(s.core, s.first, s.count);
        return out;
      },
      py::arg("n"), py::arg("placement_size"), py::arg("has_shared"), py::arg("first_core") = 0,
      "(core, first ordinal, count) per core");
  m.def("encode_placement", &encode_placement, py::arg("core"), py::arg("size"));
  m.def(
      "decode_placement",
      [](std::int64_t addr) {
        auto d = decode_placement(addr);
        return py::make_tuple(d.core, d.size);
      },
      py::arg("address"));

  py::register_exception<PlacementError>(m, "PlacementError", PyExc_ValueError);
}
