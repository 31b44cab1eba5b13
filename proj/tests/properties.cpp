#include "properties.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

namespace testing {
namespace {

using slmini::TraceEvent;

int channel_of(const std::string& detail) {
  auto p = detail.find("ch=");
  return p == std::string::npos ? -1 : std::stoi(detail.substr(p + 3));
}

std::string where(const TraceEvent& e) {
  return "step " + std::to_string(e.step) + " family " + std::to_string(e.family) + " " + e.event;
}

}  // namespace

std::string check_context_conservation(const std::vector<TraceEvent>& trace) {
  std::set<std::int64_t> granted;
  std::map<std::int64_t, int> released;
  for (const auto& e : trace) {
    if (e.event == "allocate" && e.detail.find("outcome=context") != std::string::npos) granted.insert(e.family);
    if (e.event == "release") {
      if (!granted.count(e.family)) return "release without a granted context at " + where(e);
      if (++released[e.family] > 1) return "second release at " + where(e);
    }
  }
  for (auto f : granted)
    if (!released.count(f)) return "context of family " + std::to_string(f) + " never released";
  return "";
}

std::string check_window_bound(const std::vector<TraceEvent>& trace) {
  static const std::regex ws_re(R"(ws=(\d+))");
  std::map<std::int64_t, long> window;
  std::map<std::pair<std::int64_t, int>, long> live;
  for (const auto& e : trace) {
    std::smatch m;
    if (e.event == "configure" && std::regex_search(e.detail, m, ws_re)) window[e.family] = std::stol(m[1]);
    if (e.event == "thread-start" && e.family != 0) {
      long n = ++live[{e.family, e.core}];
      long ws = window.count(e.family) ? window[e.family] : 0;
      if (ws > 0 && n > ws) return "window " + std::to_string(ws) + " exceeded at " + where(e);
    }
    if (e.event == "thread-end" && e.family != 0) --live[{e.family, e.core}];
  }
  return "";
}

std::string check_single_assignment(const std::vector<TraceEvent>& trace) {
  std::set<std::tuple<std::int64_t, int, std::int64_t>> writes;
  std::set<std::pair<std::int64_t, int>> puts;
  for (const auto& e : trace) {
    if (e.event == "write" && !writes.insert({e.family, channel_of(e.detail), e.thread.value_or(-1)}).second)
      return "second write at " + where(e);
    if (e.event == "put" && !puts.insert({e.family, channel_of(e.detail)}).second) return "second put at " + where(e);
  }
  return "";
}

std::string check_chain_causality(const std::vector<TraceEvent>& trace) {
  // family -> channel -> index -> position of first read / of write
  std::map<std::int64_t, std::map<int, std::map<std::int64_t, std::size_t>>> first_read, write;
  std::map<std::int64_t, std::set<std::int64_t>> indices;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto& e = trace[k];
    if (e.event == "thread-start" && e.family != 0) indices[e.family].insert(*e.thread);
    if (e.event == "read") first_read[e.family][channel_of(e.detail)].emplace(*e.thread, k);
    if (e.event == "write") write[e.family][channel_of(e.detail)].emplace(*e.thread, k);
  }
  for (const auto& [fam, channels] : write) {
    std::vector<std::int64_t> order(indices[fam].begin(), indices[fam].end());
    for (const auto& [ch, writes] : channels) {
      auto& reads = first_read[fam][ch];
      for (std::size_t k = 1; k < order.size(); ++k) {
        auto w = writes.find(order[k - 1]);
        auto r = reads.find(order[k]);
        if (r == reads.end()) continue;
        if (w == writes.end() || w->second > r->second)
          return "family " + std::to_string(fam) + " channel " + std::to_string(ch) + ": thread " +
                 std::to_string(order[k]) + " read before thread " + std::to_string(order[k - 1]) + " wrote";
      }
    }
  }
  return "";
}

std::string check_index_coverage(const std::vector<TraceEvent>& trace) {
  static const std::regex range_re(R"(range=\((-?\d+),(-?\d+),(-?\d+)\))");
  std::map<std::int64_t, std::multiset<std::int64_t>> expected, seen;
  for (const auto& e : trace) {
    std::smatch m;
    if (e.event == "configure" && std::regex_search(e.detail, m, range_re)) {
      std::int64_t start = std::stoll(m[1]), limit = std::stoll(m[2]), step = std::stoll(m[3]);
      auto& want = expected[e.family];
      for (std::int64_t i = start; step > 0 && i < limit; i += step) want.insert(i);
    }
    if (e.event == "thread-start" && e.family != 0) seen[e.family].insert(*e.thread);
  }
  for (const auto& [fam, want] : expected)
    if (seen[fam] != want) return "family " + std::to_string(fam) + " ran the wrong set of indices";
  return "";
}

}  // namespace testing

#include "generator.hpp"
#include "support.hpp"

namespace testing {

SuiteResult run_property_suite(int count, std::uint64_t first_seed, std::size_t max_failures) {
  using namespace slmini;
  SuiteResult out;
  for (int k = 0; k < count && out.failures.size() < max_failures; ++k) {
    std::uint64_t seed = first_seed + static_cast<std::uint64_t>(k);
    auto g = generate_program(seed);
    auto fail = [&](const std::string& what) {
      out.failures.push_back("program " + std::to_string(seed) + ": " + what);
    };
    ++out.programs;
    auto compiled = compile_source(g.source, "gen" + std::to_string(seed) + ".sl");
    if (!compiled.ok()) {
      fail("does not compile: " + compiled.format_diagnostics());
      continue;
    }
    out.windowed += g.uses_window;
    auto serial = run(*compiled.ir, {}, true, true);
    ++out.runs;
    if (serial.status != RunStatus::Ok) {
      fail("serialized run: " + serial.message);
      continue;
    }

    MachineConfig configs[3];
    configs[0].num_cores = 1;
    configs[0].family_entries_per_core = 1;
    configs[1].num_cores = 4;
    configs[1].seed = seed * 7 + 1;
    configs[2].num_cores = 8;
    configs[2].hw_threads_per_core = 2;
    configs[2].seed = seed * 13 + 5;
    for (const auto& cfg : configs) {
      auto r = run(*compiled.ir, cfg, true);
      ++out.runs;
      std::string shape = " (cores " + std::to_string(cfg.num_cores) + ")";
      if (r.status != RunStatus::Ok) {
        fail(std::string(to_string(r.status)) + shape + ": " + r.message);
        continue;
      }
      if (r.output != serial.output) fail("output differs from the serialized run" + shape);
      for (const auto& verdict : {check_context_conservation(r.trace), check_window_bound(r.trace),
                                  check_single_assignment(r.trace), check_chain_causality(r.trace),
                                  check_index_coverage(r.trace)})
        if (!verdict.empty()) fail(verdict + shape);
    }
    auto a = run(*compiled.ir, configs[1], true);
    auto b = run(*compiled.ir, configs[1], true);
    out.runs += 2;
    if (trace_bytes(a.trace) != trace_bytes(b.trace)) fail("same seed, different trace");
  }
  return out;
}

}  // namespace testing
