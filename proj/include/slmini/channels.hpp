#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "slmini/ast.hpp"
#include "slmini/value.hpp"

namespace slmini {

enum class ChannelStatus { Ok, Blocked, DoubleWrite, NotShared, ClassMismatch };

const char* to_string(ChannelStatus s);

/// Single-assignment cell.
class Cell {
 public:
  bool full() const { return value_.has_value(); }
  const std::optional<Value>& value() const { return value_; }
  ChannelStatus fill(Value v) {
    if (value_) return ChannelStatus::DoubleWrite;
    value_ = v;
    return ChannelStatus::Ok;
  }

 private:
  std::optional<Value> value_;
};

/// One producer (the creator), every thread of the family reads.
class GlobalChannel {
 public:
  explicit GlobalChannel(ValueClass cls) : cls_(cls) {}
  ChannelStatus put(Value v);
  std::optional<Value> read() const { return cell_.value(); }
  std::optional<Value> get() const { return cell_.value(); }
  ValueClass value_class() const { return cls_; }

 private:
  ValueClass cls_;
  Cell cell_;
};

/// Source cell, then one outgoing link per logical thread in index order.
/// Link k's input is the source for k = 0 and link k-1 otherwise; the
/// last link (or the source for an empty family) is the final value.
class SharedChain {
 public:
  SharedChain(ValueClass cls, std::size_t links) : cls_(cls), links_(links) {}
  ChannelStatus put(Value v);
  std::optional<Value> incoming(std::size_t ordinal) const;
  ChannelStatus write(std::size_t ordinal, Value v);
  bool written(std::size_t ordinal) const { return links_.at(ordinal).full(); }
  std::optional<Value> final_value() const;
  std::size_t size() const { return links_.size(); }
  ValueClass value_class() const { return cls_; }

 private:
  ValueClass cls_;
  Cell source_;
  std::vector<Cell> links_;
};

/// All channels of one family, indexed by position in the signature.
class FamilyChannels {
 public:
  FamilyChannels() = default;
  FamilyChannels(const ChannelSignature& sig, std::size_t threads);

  std::size_t size() const { return channels_.size(); }
  bool is_shared(std::size_t ch) const;

  ChannelStatus put(std::size_t ch, Value v);
  /// Blocked when the thread's input is not yet available.
  ChannelStatus read(std::size_t ch, std::size_t ordinal, Value& out) const;
  ChannelStatus write(std::size_t ch, std::size_t ordinal, Value v);
  /// Final value after sync: shared chain end or global source.
  std::optional<Value> get(std::size_t ch) const;
  /// Shared channels whose outgoing link is still empty for this thread.
  std::vector<std::size_t> unwritten(std::size_t ordinal) const;

 private:
  std::vector<std::variant<GlobalChannel, SharedChain>> channels_;
};

}  // namespace slmini
