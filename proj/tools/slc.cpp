// slc: check, dump, run and explain SL-mini programs.
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "slmini/driver.hpp"
#include "slmini/machine.hpp"
#include "slmini/trace.hpp"

namespace {

struct Flags {
  std::string file;
  int cores = 4;
  int hw_threads = 16;
  int family_entries = 8;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 10'000'000;
  bool serialize = false;
  bool forward_unwritten = false;
  std::string trace = "none";
  std::string trace_out;
  std::string config;
  std::string select;
};

struct MachineOpts {
  CLI::Option* cores;
  CLI::Option* hw;
  CLI::Option* entries;
  CLI::Option* seed;
  CLI::Option* steps;
};

MachineOpts add_machine_flags(CLI::App* cmd, Flags& f) {
  MachineOpts o;
  o.cores = cmd->add_option("--cores", f.cores, "number of cores")->check(CLI::Range(1, 65535));
  o.hw = cmd->add_option("--hw-threads", f.hw_threads, "hardware threads per core")->check(CLI::PositiveNumber);
  o.entries =
      cmd->add_option("--family-entries", f.family_entries, "family entries per core")->check(CLI::PositiveNumber);
  o.seed = cmd->add_option("--seed", f.seed, "scheduler seed");
  o.steps = cmd->add_option("--max-steps", f.max_steps, "step limit")->check(CLI::PositiveNumber);
  cmd->add_flag("--serialize", f.serialize, "run every family sequentially in its creator");
  cmd->add_flag("--forward-unwritten", f.forward_unwritten,
                "forward the incoming value of shared channels a thread did not write");
  cmd->add_option("--trace", f.trace, "trace format")->check(CLI::IsMember({"none", "text", "json"}));
  cmd->add_option("--trace-out", f.trace_out, "trace file (default: standard error)");
  cmd->add_option("--config", f.config, "machine configuration as JSON")->check(CLI::ExistingFile);
  return o;
}

// JSON config first, explicit flags win.
slmini::MachineConfig machine_config(const Flags& f, const MachineOpts& o) {
  slmini::MachineConfig cfg;
  if (!f.config.empty()) {
    auto j = nlohmann::json::parse(slmini::read_file(f.config));
    if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
    for (auto& [key, value] : j.items()) {
      if (key == "numCores")
        cfg.num_cores = value.get<int>();
      else if (key == "hwThreadsPerCore")
        cfg.hw_threads_per_core = value.get<int>();
      else if (key == "familyEntriesPerCore")
        cfg.family_entries_per_core = value.get<int>();
      else if (key == "schedulerSeed")
        cfg.seed = value.get<std::uint64_t>();
      else if (key == "maxSteps")
        cfg.max_steps = value.get<std::uint64_t>();
      else
        throw std::runtime_error("unknown config field '" + key + "'");
    }
  }
  if (o.cores->count()) cfg.num_cores = f.cores;
  if (o.hw->count()) cfg.hw_threads_per_core = f.hw_threads;
  if (o.entries->count()) cfg.family_entries_per_core = f.family_entries;
  if (o.seed->count()) cfg.seed = f.seed;
  if (o.steps->count()) cfg.max_steps = f.max_steps;
  cfg.validate();
  return cfg;
}

std::optional<slmini::CompileResult> compile(const std::string& path) {
  std::string src;
  try {
    src = slmini::read_file(path);
  } catch (const std::exception& e) {
    std::cerr << "slc: " << e.what() << "\n";
    return std::nullopt;
  }
  return slmini::compile_source(src, path);
}

int cmd_check(const Flags& f) {
  auto r = compile(f.file);
  if (!r) return 1;
  std::cerr << r->format_diagnostics();
  return r->ok() ? 0 : 1;
}

int cmd_ir(const Flags& f) {
  auto r = compile(f.file);
  if (!r) return 1;
  std::cerr << r->format_diagnostics();
  if (!r->ok()) return 1;
  std::cout << slmini::ir_dump(*r->ir);
  return 0;
}

int execute(const Flags& f, const MachineOpts& o, bool dist) {
  auto r = compile(f.file);
  if (!r) return 1;
  std::cerr << r->format_diagnostics();
  if (!r->ok()) return 1;

  slmini::MachineConfig cfg;
  try {
    cfg = machine_config(f, o);
  } catch (const std::exception& e) {
    std::cerr << "slc: invalid machine configuration: " << e.what() << "\n";
    return 1;
  }
  slmini::RunOptions opts;
  opts.serialize_all = f.serialize;
  opts.forward_unwritten = f.forward_unwritten;

  std::unique_ptr<std::ofstream> file;
  std::ostream* trace = &std::cerr;
  if (f.trace != "none") {
    if (!f.trace_out.empty()) {
      file = std::make_unique<std::ofstream>(f.trace_out, std::ios::binary);
      if (!*file) {
        std::cerr << "slc: cannot write '" << f.trace_out << "'\n";
        return 1;
      }
      trace = file.get();
    }
    bool json = f.trace == "json";
    opts.sink = [trace, json](const slmini::TraceEvent& e) {
      *trace << (json ? slmini::format_json(e) : slmini::format_text(e)) << "\n";
    };
  }

  slmini::RunResult res;
  try {
    res = slmini::run_program(*r->ir, cfg, opts);
  } catch (const std::exception& e) {
    std::cerr << "slc: " << e.what() << "\n";
    return 1;
  }
  if (!dist) std::cout << res.output << std::flush;
  if (res.status != slmini::RunStatus::Ok) {
    std::string status = slmini::to_string(res.status);
    std::cerr << "slc: ";
    if (res.message.rfind(status, 0) != 0) std::cerr << status << ": ";
    if (!res.error_code.empty()) std::cerr << "[" << res.error_code << "] ";
    std::cerr << res.message << "\n";
    return slmini::exit_code(res.status);
  }
  if (!dist) return 0;

  auto table = slmini::format_distribution(res, f.select);
  if (!table) {
    std::cerr << "slc: no family"
              << (f.select.empty() ? std::string() : " of thread function '" + f.select + "'")
              << " was created\n";
    return 1;
  }
  std::cout << *table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SL-mini compiler and SVP machine simulator"};
  app.require_subcommand(1);
  Flags f;

  auto* check = app.add_subcommand("check", "report diagnostics; exit 0 iff there are no errors");
  check->add_option("file", f.file, "source file")->required();
  auto* ir = app.add_subcommand("ir", "print the lowered program");
  ir->add_option("file", f.file, "source file")->required();
  auto* run = app.add_subcommand("run", "run the program on the simulated machine");
  run->add_option("file", f.file, "source file")->required();
  MachineOpts run_opts = add_machine_flags(run, f);
  auto* dist = app.add_subcommand("dist", "show how families were distributed over cores");
  dist->add_option("file", f.file, "source file")->required();
  dist->add_option("--select", f.select, "thread function whose families to show");
  MachineOpts dist_opts = add_machine_flags(dist, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*check) return cmd_check(f);
  if (*ir) return cmd_ir(f);
  if (*run) return execute(f, run_opts, false);
  return execute(f, dist_opts, true);
}
