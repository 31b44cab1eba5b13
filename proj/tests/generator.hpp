#pragma once

#include <cstdint>
#include <string>

namespace testing {

struct GeneratedProgram {
  std::string source;
  int creates = 0;        // create constructs in the text
  bool uses_window = false;
};

/// Small SL-mini program whose output does not depend on the schedule:
/// shared chains fold with order-sensitive arithmetic, every thread writes
/// its own array cell, detached families only touch arrays nobody prints.
GeneratedProgram generate_program(std::uint64_t seed);

}  // namespace testing
