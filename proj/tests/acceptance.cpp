// One line per acceptance criterion; exit status 1 when any fails.
#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "properties.hpp"
#include "support.hpp"

using namespace slmini;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string note;
  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
};

std::shared_ptr<const IrProgram> load(const std::string& name) { return testing::compile_ok(testing::corpus_source(name)); }

MachineConfig shape(int cores, std::uint64_t seed) {
  MachineConfig c;
  c.num_cores = cores;
  c.seed = seed;
  return c;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// the two-stage program's vectors, summed directly
std::int64_t two_stage_oracle() {
  std::int64_t sum = 0;
  for (std::int64_t i = 0; i < 16; ++i) sum += (i + 1) * (2 * i + 1);
  return sum;
}

// nested_three.sl computed by plain loops
std::int64_t nested_oracle() {
  std::int64_t total = 0;
  for (int outer = 0; outer < 2; ++outer) {
    std::int64_t m = 0;
    for (int i = 0; i < 3; ++i) {
      std::int64_t t = 0;
      for (int leaf = 0; leaf < 4; ++leaf) t += leaf;
      m += t * (i + 1);
    }
    total += m;
  }
  return total;
}

Verdict program_outputs() {
  Verdict v;
  struct Case {
    const char* file;
    std::string expected;
  };
  std::vector<Case> cases{{"hello.sl", "hello world\n"},
                          {"hello_thread.sl", "hello world\n"},
                          {"sscal.sl", "9.000000\n"},
                          {"innerprod.sl", "143\n"},
                          {"two_stage_reduction.sl", std::to_string(two_stage_oracle()) + "\n"}};
  double slowest = 0;
  int runs = 0;
  for (const auto& c : cases) {
    auto ir = load(c.file);
    for (int cores : {1, 4, 8})
      for (std::uint64_t seed : {1, 2, 3}) {
        auto t0 = Clock::now();
        auto r = testing::run(*ir, shape(cores, seed));
        double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        ++runs;
        if (r.output != c.expected || r.status != RunStatus::Ok)
          v.fail(std::string(c.file) + " on " + std::to_string(cores) + " cores, seed " + std::to_string(seed));
        if (dt >= 1.0) v.fail(std::string(c.file) + " took " + std::to_string(dt) + " s");
      }
  }
  if (v.pass) {
    std::ostringstream s;
    s << runs << " runs, slowest " << slowest * 1000 << " ms";
    v.note = s.str();
  }
  return v;
}

Verdict ten_threads_property() {
  Verdict v;
  auto ir = load("ten_threads.sl");
  RunOptions serial;
  serial.serialize_all = true;
  if (run_program(*ir, {}, serial).output != "012345678910\n") v.fail("--serialize output");
  std::set<std::string> orders;
  int runs = 0;
  for (int cores : {1, 4, 8})
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto r = testing::run(*ir, shape(cores, seed), true);
      ++runs;
      std::string out = r.output;
      std::string digits = out.substr(0, std::min<std::size_t>(10, out.size()));
      std::string sorted = digits;
      std::sort(sorted.begin(), sorted.end());
      if (out.size() != 13 || sorted != "0123456789" || out.substr(10) != "10\n")
        v.fail("output '" + out + "' on seed " + std::to_string(seed));
      auto causal = testing::check_chain_causality(r.trace);
      if (!causal.empty()) v.fail(causal);
      // each thread printed its incoming value
      for (const auto& e : r.trace)
        if (e.event == "print" && e.family == 1 && e.detail != std::to_string(*e.thread))
          v.fail("thread " + std::to_string(*e.thread) + " printed " + e.detail);
      orders.insert(digits);
    }
  if (v.pass) v.note = std::to_string(runs) + " runs, " + std::to_string(orders.size()) + " distinct digit orders";
  return v;
}

Verdict two_stage_distribution() {
  Verdict v;
  auto r = testing::run(*load("two_stage_reduction.sl"), shape(4, 0));
  auto table = format_distribution(r, "innerprod");
  if (!table || *table != "core 0: [0,4)\ncore 1: [4,8)\ncore 2: [8,12)\ncore 3: [12,16)\n")
    v.fail("inner stage table: " + table.value_or("<none>"));

  auto h = testing::run(*load("dist100.sl"), shape(16, 0));
  std::int64_t total = 0;
  int cores = 0;
  for (const auto& fam : h.families) {
    if (fam.function != "bar") continue;
    for (const auto& s : fam.shares) {
      ++cores;
      total += s.count;
      if (s.count != 6 && s.count != 7) v.fail("core " + std::to_string(s.core) + " got " + std::to_string(s.count));
    }
  }
  if (total != 100 || cores != 16) v.fail("100 over 16: total " + std::to_string(total));
  for (const auto& fam : h.families)
    if (fam.function == "chain" && (fam.shares.size() != 1 || fam.shares[0].count != 100))
      v.fail("dependent family was spread");
  if (v.pass) v.note = "core k -> [4k,4k+4); 100 threads as 6/7 per core over 16 cores";
  return v;
}

Verdict exclusive_ordering() {
  Verdict v;
  auto ir = load("exclusive_progress.sl");
  for (int cores : {1, 4})
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      auto out = testing::run(*ir, shape(cores, seed)).output;
      if (out != "computing...\n55\n") v.fail("exclusive_progress printed '" + out + "' with seed " + std::to_string(seed));
    }
  auto split = load("exclusive_retargeted.sl");
  int first = 0, second = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto out = testing::run(*split, shape(4, seed)).output;
    if (out == "computing...\n55\n")
      ++first;
    else if (out == "55\ncomputing...\n")
      ++second;
    else
      v.fail("retargeted run printed '" + out + "'");
  }
  if (first == 0 || second == 0) v.fail("retargeted creates showed only one order");
  if (v.pass)
    v.note = "100 ordered runs; different cores: " + std::to_string(first) + " progress-first, " +
             std::to_string(second) + " result-first";
  return v;
}

Verdict resource_exhaustion() {
  Verdict v;
  MachineConfig one;
  one.family_entries_per_core = 1;
  auto r = testing::run(*load("nested_three.sl"), one, true);
  if (r.output != std::to_string(nested_oracle()) + "\n") v.fail("nested creates printed '" + r.output + "'");
  auto fallbacks = testing::count_events(r.trace, "serialize-fallback");
  if (fallbacks == 0) v.fail("no serialize-fallback event");

  auto fw = testing::run(*load("deadlock_forcewait.sl"), one, true);
  if (exit_code(fw.status) != 3) v.fail("forcewait self-create did not deadlock");
  if (fw.message.find("blocked on allocate") == std::string::npos ||
      fw.message.find("sl__forcewait") == std::string::npos)
    v.fail("forcewait report does not name the allocation");
  auto ex = testing::run(*load("deadlock_exclusive.sl"), {}, true);
  if (exit_code(ex.status) != 3) v.fail("exclusive self-create did not deadlock");
  if (ex.message.find("blocked on allocate of the exclusive context") == std::string::npos)
    v.fail("exclusive report does not name the allocation");
  if (v.pass) v.note = std::to_string(fallbacks) + " fallbacks; both self-referential creates exit 3";
  return v;
}

Verdict invariant_suites() {
  Verdict v;
  auto t0 = Clock::now();
  auto result = testing::run_property_suite(1000);
  double dt = seconds_since(t0);
  if (!result.failures.empty()) v.fail(result.failures.front());
  if (result.programs < 1000) v.fail("only " + std::to_string(result.programs) + " programs");
  if (result.windowed == 0) v.fail("no program used a window of 1 or 2");
  if (dt >= 120) v.fail("took " + std::to_string(dt) + " s");
  if (v.pass) {
    std::ostringstream s;
    s << result.programs << " programs, " << result.runs << " runs, " << result.windowed << " windowed, "
      << static_cast<int>(dt) << " s";
    v.note = s.str();
  }
  return v;
}

Verdict negative_corpus() {
  Verdict v;
  auto codes = [](const std::string& file) {
    std::vector<std::string> out;
    for (const auto& d : compile_source(testing::corpus_source(file), file).diagnostics)
      if (d.severity == Severity::Error) out.push_back(d.code);
    return out;
  };
  if (codes("create_as_statement.sl") != std::vector<std::string>{"E_CREATE_NOT_BLOCK_ITEM"})
    v.fail("create_as_statement");
  if (codes("invalid_endpoints.sl") != std::vector<std::string>{"E_SETA_OUTSIDE", "E_GETA_BEFORE_SYNC"})
    v.fail("invalid_endpoints");
  if (codes("sig_mismatch.sl") != std::vector<std::string>{"E_SIG_MISMATCH"}) v.fail("signature mismatch");
  auto r = testing::run(*load("double_setp.sl"));
  if (exit_code(r.status) != 2 || r.error_code != "E_DOUBLE_WRITE") v.fail("double setp");
  if (v.pass) v.note = "parse error, E_SETA_OUTSIDE + E_GETA_BEFORE_SYNC, E_SIG_MISMATCH, exit 2";
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<Verdict()> check;
  };
  std::vector<Criterion> all{{1, "program outputs", program_outputs},
                             {2, "ten-thread chain property", ten_threads_property},
                             {3, "two-stage distribution", two_stage_distribution},
                             {4, "exclusive ordering", exclusive_ordering},
                             {5, "resource exhaustion", resource_exhaustion},
                             {6, "invariant suites", invariant_suites},
                             {7, "negative corpus", negative_corpus}};
  int failed = 0;
  for (const auto& c : all) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << "criterion " << c.number << " " << (v.pass ? "PASS" : "FAIL") << ": " << c.title << " (" << v.note
              << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
