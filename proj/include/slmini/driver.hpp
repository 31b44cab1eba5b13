#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slmini/ir.hpp"
#include "slmini/machine.hpp"
#include "slmini/source.hpp"

namespace slmini {

struct CompileResult {
  std::vector<Diagnostic> diagnostics;  // errors and warnings, in source order
  std::shared_ptr<const IrProgram> ir;  // set when there are no errors

  bool ok() const { return ir != nullptr; }
  std::string format_diagnostics() const;
};

/// tokenize, parse, check and lower.
CompileResult compile_source(const std::string& source, const std::string& file = "<input>");

/// One `core K: [lo,hi)` line per core share of the families running
/// `function` (every family when empty), ordered by core then index;
/// ` step S` is appended for strided ranges. nullopt when nothing matches.
std::optional<std::string> format_distribution(const RunResult& result, const std::string& function);

/// Reads a whole file; throws std::runtime_error with an I/O message.
std::string read_file(const std::string& path);

}  // namespace slmini
