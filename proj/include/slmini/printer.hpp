#pragma once

#include <string>

#include "slmini/ast.hpp"

namespace slmini {

/// Canonical source text: every create uses the full seven-slot form and
/// every compound subexpression is parenthesized, so that reparsing the
/// result gives a structurally equal program.
std::string print_ast(const AstProgram& program);

std::string print_expr(const Expr& expr);

}  // namespace slmini
