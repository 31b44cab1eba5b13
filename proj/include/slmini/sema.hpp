#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "slmini/ast.hpp"

namespace slmini {

struct ThreadSymbol {
  std::string name;
  bool is_static = false;
  const ThreadFunctionDef* definition = nullptr;
  std::vector<const ThreadFunctionDecl*> declarations;
  ChannelSignature signature;
  SourceSpan span;
};

struct SymbolTable {
  std::map<std::string, ThreadSymbol> threads;
  std::map<std::string, const CFunction*> functions;  // definitions, else the first prototype

  const ThreadSymbol* thread(const std::string& name) const;
  const CFunction* function(const std::string& name) const;
};

struct ResolveResult {
  SymbolTable symbols;
  std::vector<Diagnostic> diagnostics;
};

/// Builds the symbol table and resolves every create target.
/// Codes: E_DUP, E_UNDEF, E_NOT_THREAD_FN, E_SIG_MISMATCH (decl vs def).
ResolveResult resolve(const AstProgram& program);

/// Channel usage and signature rules. Codes: E_SETP_GLOBAL, E_GETA_BEFORE_SYNC,
/// E_GETA_AFTER_DETACH, E_SIG_MISMATCH, E_SETA_OUTSIDE, E_UNFED_CHANNEL,
/// E_NOT_PARAM, E_CHANNEL_CLASS, E_DOUBLE_WRITE, E_INDEX_DUP, E_INDEX_OUTSIDE.
std::vector<Diagnostic> check_channels(const AstProgram& program, const SymbolTable& symbols);

/// Typing of the host C subset. Codes: E_TYPE, E_UNDEF, E_DUP, E_SYNTAX.
std::vector<Diagnostic> check_types(const AstProgram& program, const SymbolTable& symbols);

/// Static type of every expression, as computed by the checker. Entries
/// exist only for well-typed expressions.
using ExprTypes = std::unordered_map<const Expr*, CType>;
ExprTypes expression_types(const AstProgram& program, const SymbolTable& symbols);

/// resolve + check_channels + check_types, sorted by position.
std::vector<Diagnostic> check_program(const AstProgram& program);

/// Signatures of the built-in functions of the C subset.
struct Builtin {
  const char* name;
  std::vector<CType> params;  // string parameters are listed as void
  CType result;
};
const Builtin* find_builtin(const std::string& name);

}  // namespace slmini
