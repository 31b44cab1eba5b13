#include "slmini/trace.hpp"

#include <cstdio>

#include "json.hpp"

namespace slmini {

std::string format_json(const TraceEvent& e) {
  nlohmann::ordered_json j;
  j["step"] = e.step;
  j["event"] = e.event;
  j["core"] = e.core;
  j["family"] = e.family;
  if (e.thread)
    j["thread"] = *e.thread;
  else
    j["thread"] = nullptr;
  j["detail"] = e.detail;
  return j.dump();
}

std::string format_text(const TraceEvent& e) {
  char head[96];
  std::snprintf(head, sizeof head, "%8llu  core %-3d fam %-4lld ", static_cast<unsigned long long>(e.step), e.core,
                static_cast<long long>(e.family));
  std::string out = head;
  out += e.thread ? "thr " + std::to_string(*e.thread) : std::string("thr -");
  out += "  " + e.event;
  if (!e.detail.empty()) {
    std::string d;
    for (char c : e.detail) d += c == '\n' ? std::string("\\n") : std::string(1, c);
    out += " " + d;
  }
  return out;
}

std::optional<TraceEvent> parse_json(const std::string& line) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    TraceEvent e;
    e.step = j.at("step").get<std::uint64_t>();
    e.event = j.at("event").get<std::string>();
    e.core = j.at("core").get<int>();
    e.family = j.at("family").get<std::int64_t>();
    if (!j.at("thread").is_null()) e.thread = j.at("thread").get<std::int64_t>();
    e.detail = j.at("detail").get<std::string>();
    return e;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

}  // namespace slmini
