// Runs every corpus program against its .expect.json sidecar.
#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"

using namespace slmini;
using nlohmann::json;

namespace {

std::vector<std::filesystem::path> corpus_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(SLMINI_CORPUS_DIR))
    if (e.path().extension() == ".sl") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

json sidecar(const std::filesystem::path& sl) {
  auto p = sl;
  p.replace_extension(".expect.json");
  return json::parse(read_file(p.string()));
}

std::vector<std::string> strings(const json& j) { return j.get<std::vector<std::string>>(); }

}  // namespace

TEST_CASE("corpus: every program has a sidecar") {
  auto files = corpus_files();
  CHECK(files.size() >= 20);
  for (const auto& f : files) {
    CAPTURE(f.string());
    auto p = f;
    p.replace_extension(".expect.json");
    CHECK(std::filesystem::exists(p));
  }
}

TEST_CASE("corpus: check and run expectations") {
  for (const auto& f : corpus_files()) {
    CAPTURE(f.filename().string());
    json expect = sidecar(f);
    auto compiled = compile_source(read_file(f.string()), f.filename().string());

    const json& check = expect.at("check");
    CHECK((compiled.ok() ? 0 : 1) == check.at("exit").get<int>());
    if (check.contains("codes")) {
      std::vector<std::string> got;
      for (const auto& d : compiled.diagnostics)
        if (d.severity == Severity::Error) got.push_back(d.code);
      CHECK(got == strings(check.at("codes")));
    }
    if (!compiled.ok()) continue;

    for (const auto& run : expect.value("runs", json::array())) {
      auto args = strings(run.at("args"));
      CAPTURE(run.dump());
      auto setup = testing::setup_from_args(args);
      setup.options.collect_trace = run.contains("trace_contains");
      auto r = run_program(*compiled.ir, setup.config, setup.options);
      CHECK(exit_code(r.status) == run.at("exit").get<int>());
      CHECK(r.output == run.at("stdout").get<std::string>());
      if (run.contains("stderr_contains")) {
        std::string text = r.error_code + " " + r.message;
        CHECK(text.find(run.at("stderr_contains").get<std::string>()) != std::string::npos);
      }
      if (run.contains("trace_contains"))
        CHECK(testing::count_events(r.trace, run.at("trace_contains").get<std::string>()) > 0);
    }
  }
}

TEST_CASE("corpus: deterministic programs agree with their serial run everywhere") {
  for (const auto& f : corpus_files()) {
    json expect = sidecar(f);
    if (!expect.value("deterministic", false)) continue;
    CAPTURE(f.filename().string());
    auto ir = testing::compile_ok(read_file(f.string()));
    std::string serial = testing::run(*ir, {}, false, true).output;

    MachineConfig starved;
    starved.num_cores = 1;
    starved.family_entries_per_core = 1;
    CHECK(testing::run(*ir, starved).output == serial);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      MachineConfig c;
      c.num_cores = 8;
      c.seed = seed;
      auto r = testing::run(*ir, c);
      CHECK(r.status == RunStatus::Ok);
      CHECK(r.output == serial);
    }
  }
}
