#include "slmini/channels.hpp"

namespace slmini {

const char* to_string(ChannelStatus s) {
  switch (s) {
    case ChannelStatus::Ok: return "ok";
    case ChannelStatus::Blocked: return "blocked";
    case ChannelStatus::DoubleWrite: return "double write";
    case ChannelStatus::NotShared: return "write to a global channel";
    case ChannelStatus::ClassMismatch: return "value class mismatch";
  }
  return "?";
}

namespace {

bool fits(ValueClass cls, const Value& v) {
  if (cls == ValueClass::FloatScalar) return v.kind == Value::Kind::Float;
  return v.kind != Value::Kind::Float;
}

}  // namespace

ChannelStatus GlobalChannel::put(Value v) {
  if (!fits(cls_, v)) return ChannelStatus::ClassMismatch;
  return cell_.fill(v);
}

ChannelStatus SharedChain::put(Value v) {
  if (!fits(cls_, v)) return ChannelStatus::ClassMismatch;
  return source_.fill(v);
}

std::optional<Value> SharedChain::incoming(std::size_t ordinal) const {
  return ordinal == 0 ? source_.value() : links_.at(ordinal - 1).value();
}

ChannelStatus SharedChain::write(std::size_t ordinal, Value v) {
  if (!fits(cls_, v)) return ChannelStatus::ClassMismatch;
  return links_.at(ordinal).fill(v);
}

std::optional<Value> SharedChain::final_value() const {
  return links_.empty() ? source_.value() : links_.back().value();
}

FamilyChannels::FamilyChannels(const ChannelSignature& sig, std::size_t threads) {
  for (const auto& k : sig) {
    if (k.direction == Direction::Shared)
      channels_.emplace_back(SharedChain(k.value_class, threads));
    else
      channels_.emplace_back(GlobalChannel(k.value_class));
  }
}

bool FamilyChannels::is_shared(std::size_t ch) const {
  return std::holds_alternative<SharedChain>(channels_.at(ch));
}

ChannelStatus FamilyChannels::put(std::size_t ch, Value v) {
  return std::visit([&](auto& c) { return c.put(v); }, channels_.at(ch));
}

ChannelStatus FamilyChannels::read(std::size_t ch, std::size_t ordinal, Value& out) const {
  std::optional<Value> v;
  if (auto* g = std::get_if<GlobalChannel>(&channels_.at(ch)))
    v = g->read();
  else
    v = std::get<SharedChain>(channels_[ch]).incoming(ordinal);
  if (!v) return ChannelStatus::Blocked;
  out = *v;
  return ChannelStatus::Ok;
}

ChannelStatus FamilyChannels::write(std::size_t ch, std::size_t ordinal, Value v) {
  auto* s = std::get_if<SharedChain>(&channels_.at(ch));
  if (!s) return ChannelStatus::NotShared;
  return s->write(ordinal, v);
}

std::optional<Value> FamilyChannels::get(std::size_t ch) const {
  if (auto* g = std::get_if<GlobalChannel>(&channels_.at(ch))) return g->get();
  return std::get<SharedChain>(channels_[ch]).final_value();
}

std::vector<std::size_t> FamilyChannels::unwritten(std::size_t ordinal) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < channels_.size(); ++i)
    if (auto* s = std::get_if<SharedChain>(&channels_[i]); s && !s->written(ordinal)) out.push_back(i);
  return out;
}

}  // namespace slmini
