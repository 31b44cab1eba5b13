#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slmini/trace.hpp"

namespace testing {

/// Trace invariants; each returns an empty string when it holds and a
/// description of the first violation otherwise.
std::string check_context_conservation(const std::vector<slmini::TraceEvent>& trace);
std::string check_window_bound(const std::vector<slmini::TraceEvent>& trace);
std::string check_single_assignment(const std::vector<slmini::TraceEvent>& trace);
std::string check_chain_causality(const std::vector<slmini::TraceEvent>& trace);
std::string check_index_coverage(const std::vector<slmini::TraceEvent>& trace);

}  // namespace testing

namespace testing {

struct SuiteResult {
  int programs = 0;
  int runs = 0;
  int windowed = 0;  // programs with a window size of 1 or 2
  std::vector<std::string> failures;
};

/// Generates `count` programs from consecutive seeds and checks, on three
/// machine shapes: serial-oracle output, context conservation, window
/// bound, single assignment, chain causality, index coverage, and
/// identical traces for a repeated seed. Stops after `max_failures`.
SuiteResult run_property_suite(int count, std::uint64_t first_seed = 0, std::size_t max_failures = 20);

}  // namespace testing
