#pragma once

#include <cstdint>
#include <string>

namespace slmini {

/// Runtime value: 64-bit integer, 64-bit float, or an array handle.
struct Value {
  enum class Kind { Int, Float, Array };
  Kind kind = Kind::Int;
  std::int64_t i = 0;  // integer payload, or the array id for handles
  double f = 0.0;
  bool explicit_placement = false;  // produced by a placement builtin

  static Value of_int(std::int64_t v) { return Value{Kind::Int, v, 0.0, false}; }
  static Value of_float(double v) { return Value{Kind::Float, 0, v, false}; }
  static Value of_array(std::int64_t id) { return Value{Kind::Array, id, 0.0, false}; }
  static Value of_placement(std::int64_t v) { return Value{Kind::Int, v, 0.0, true}; }

  bool is_float() const { return kind == Kind::Float; }
  double as_float() const { return kind == Kind::Float ? f : static_cast<double>(i); }
  std::int64_t as_int() const { return kind == Kind::Float ? static_cast<std::int64_t>(f) : i; }
  bool truthy() const { return kind == Kind::Float ? f != 0.0 : i != 0; }

  friend bool operator==(const Value&, const Value&) = default;
};

/// Debug/IR rendering: 3, 2.5f, &7 for array 7, @131073 for a placement.
std::string to_string(const Value& v);

}  // namespace slmini
