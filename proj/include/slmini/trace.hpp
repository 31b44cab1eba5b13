#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

namespace slmini {

/// One scheduler-visible event. `event` is a control event name
/// (allocate, configure, create, sync, release, put, get, read, write)
/// or one of thread-start, thread-end, print, serialize-fallback, deadlock.
struct TraceEvent {
  std::uint64_t step = 0;
  std::string event;
  int core = 0;
  std::int64_t family = 0;
  std::optional<std::int64_t> thread;
  std::string detail;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using TraceSink = std::function<void(const TraceEvent&)>;

/// {"step":..,"event":..,"core":..,"family":..,"thread":..|null,"detail":..}
std::string format_json(const TraceEvent& e);
/// Human-oriented single line.
std::string format_text(const TraceEvent& e);
/// Inverse of format_json; nullopt on malformed input.
std::optional<TraceEvent> parse_json(const std::string& line);

}  // namespace slmini
