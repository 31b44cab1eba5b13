#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slmini/driver.hpp"
#include "slmini/machine.hpp"

namespace testing {

inline std::string corpus_path(const std::string& name) { return std::string(SLMINI_CORPUS_DIR) + "/" + name; }

inline std::string corpus_source(const std::string& name) { return slmini::read_file(corpus_path(name)); }

inline std::shared_ptr<const slmini::IrProgram> compile_ok(const std::string& src, const std::string& file = "<test>") {
  auto r = slmini::compile_source(src, file);
  if (!r.ok()) throw std::runtime_error("unexpected diagnostics:\n" + r.format_diagnostics());
  return r.ir;
}

inline std::vector<std::string> codes_of(const std::string& src) {
  std::vector<std::string> out;
  for (const auto& d : slmini::compile_source(src, "<test>").diagnostics)
    if (d.severity == slmini::Severity::Error) out.push_back(d.code);
  return out;
}

// The run flags of slc, interpreted the same way.
struct Setup {
  slmini::MachineConfig config;
  slmini::RunOptions options;
};

inline Setup setup_from_args(const std::vector<std::string>& args) {
  Setup s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= args.size()) throw std::invalid_argument(a + " needs a value");
      return args[++i];
    };
    if (a == "--cores") s.config.num_cores = std::stoi(next());
    else if (a == "--hw-threads") s.config.hw_threads_per_core = std::stoi(next());
    else if (a == "--family-entries") s.config.family_entries_per_core = std::stoi(next());
    else if (a == "--seed") s.config.seed = std::stoull(next());
    else if (a == "--max-steps") s.config.max_steps = std::stoull(next());
    else if (a == "--serialize") s.options.serialize_all = true;
    else if (a == "--forward-unwritten") s.options.forward_unwritten = true;
    else throw std::invalid_argument("unsupported flag " + a);
  }
  return s;
}

inline slmini::RunResult run(const slmini::IrProgram& prog, slmini::MachineConfig cfg = {}, bool trace = false,
                             bool serialize = false) {
  slmini::RunOptions opts;
  opts.collect_trace = trace;
  opts.serialize_all = serialize;
  return slmini::run_program(prog, cfg, opts);
}

inline slmini::RunResult run_source(const std::string& src, slmini::MachineConfig cfg = {}, bool trace = false,
                                    bool serialize = false) {
  return run(*compile_ok(src), cfg, trace, serialize);
}

inline std::string trace_bytes(const std::vector<slmini::TraceEvent>& trace) {
  std::string out;
  for (const auto& e : trace) out += slmini::format_json(e) + "\n";
  return out;
}

inline std::size_t count_events(const std::vector<slmini::TraceEvent>& trace, const std::string& name) {
  std::size_t n = 0;
  for (const auto& e : trace) n += e.event == name;
  return n;
}

}  // namespace testing
