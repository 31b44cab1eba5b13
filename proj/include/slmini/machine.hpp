#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slmini/ir.hpp"
#include "slmini/placement.hpp"
#include "slmini/trace.hpp"

namespace slmini {

struct MachineConfig {
  int num_cores = 4;
  int hw_threads_per_core = 16;
  int family_entries_per_core = 8;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 10'000'000;

  /// Throws std::invalid_argument when a field is not positive.
  void validate() const;
};

struct RunOptions {
  bool serialize_all = false;
  bool forward_unwritten = false;
  bool collect_trace = false;
  TraceSink sink;  // optional streaming consumer
};

enum class RunStatus { Ok, DataflowError, Deadlock, StepLimit };

const char* to_string(RunStatus s);
/// 0 ok, 2 dataflow error, 3 deadlock, 4 step limit.
int exit_code(RunStatus s);

struct IndexRange {
  std::int64_t start = 0;
  std::int64_t limit = 1;
  std::int64_t step = 1;

  /// ceil((limit - start) / step), 0 for an empty range; step must be > 0.
  std::int64_t count() const;
  std::int64_t at(std::int64_t ordinal) const { return start + ordinal * step; }
};

/// Logical threads of one family assigned to one core: ordinals
/// [first, first + count) of the range.
struct CoreShare {
  int core = 0;
  std::int64_t first = 0;
  std::int64_t count = 0;

  friend bool operator==(const CoreShare&, const CoreShare&) = default;
};

/// Dependent families (with a shared channel) run on the first core;
/// otherwise the first N mod P cores get ceil(N/P) threads and the rest
/// floor(N/P), in index order. Cores with no threads are omitted.
std::vector<CoreShare> distribute(std::int64_t n, int placement_size, bool has_shared, int first_core = 0);

struct FamilySummary {
  std::int64_t id = 0;
  std::string function;
  std::string kind;  // regular, exclusive, serialized
  ResolvedPlacement placement;
  IndexRange range;
  std::int64_t window = 0;
  bool dependent = false;
  std::vector<CoreShare> shares;
};

struct RunResult {
  RunStatus status = RunStatus::Ok;
  std::string output;
  std::string error_code;  // runtime trap code, when status is DataflowError
  std::string message;     // trap message or deadlock report
  std::uint64_t steps = 0;
  std::vector<TraceEvent> trace;  // filled when collect_trace is set
  std::vector<FamilySummary> families;
};

/// Runs `program` from its entry function on a fresh machine.
RunResult run_program(const IrProgram& program, const MachineConfig& config, const RunOptions& options = {});

}  // namespace slmini
