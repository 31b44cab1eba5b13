#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace slmini {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
};

enum class Severity { Error, Warning };

/// A compile-time finding. Codes are stable; see docs/diagnostics.md.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;

  /// `file:line:col: error: [CODE] message`
  std::string format() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);

/// Thrown by the lexer and parser; they stop at the first error.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(Diagnostic diag);
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

}  // namespace slmini
