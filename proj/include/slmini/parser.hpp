#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slmini/ast.hpp"
#include "slmini/token.hpp"

namespace slmini {

/// Parses a token stream produced by tokenize(). Throws CompileError with a
/// span inside the offending construct on the first syntax error.
/// Non-fatal findings (W_SHORT_CREATE) are appended to `warnings` when given.
AstProgram parse_program(const std::vector<Token>& tokens, const std::string& file = "<input>",
                         std::vector<Diagnostic>* warnings = nullptr);

/// tokenize() + parse_program().
AstProgram parse_source(std::string_view source, const std::string& file = "<input>",
                        std::vector<Diagnostic>* warnings = nullptr);

}  // namespace slmini
