#include "slmini/source.hpp"

#include <algorithm>

namespace slmini {

std::string Diagnostic::format() const {
  std::string out = span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) + ": ";
  out += severity == Severity::Error ? "error: " : "warning: ";
  if (!code.empty()) out += "[" + code + "] ";
  out += message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

CompileError::CompileError(Diagnostic diag) : std::runtime_error(diag.format()), diag_(std::move(diag)) {}

}  // namespace slmini
