#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slmini/source.hpp"

namespace slmini {

enum class Direction { Global, Shared };
enum class ValueClass { IntegerScalar, FloatScalar, ArrayHandle };

const char* to_string(Direction d);
const char* to_string(ValueClass c);

/// Scalar category of a host-language type.
enum class BaseType { Int, Float, Void };

/// A host type of the C subset: a scalar, or an opaque handle to an array
/// of scalars when `pointer` is set.
struct CType {
  BaseType base = BaseType::Int;
  bool pointer = false;

  friend bool operator==(const CType&, const CType&) = default;
};

/// Maps declared type text ("int", "size_t", "float*", ...) to a CType.
std::optional<CType> ctype_from_text(const std::string& text);

std::string to_string(CType t);

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

enum class ExprKind {
  IntLit,
  FloatLit,
  StrLit,
  Var,
  Index,   // args[0][args[1]]
  Call,    // text(args...)
  Unary,   // text args[0]
  Binary,  // args[0] text args[1]
  Assign,  // args[0] text args[1], text is "=", "+=", ...
  IncDec,  // text is "++" or "--", `prefix` tells the position
  GetP,    // sl_getp(text)
  GetA,    // sl_geta(text)
};

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  std::string text;
  bool prefix = false;
  std::vector<ExprPtr> args;
  SourceSpan span;
};

/// One endpoint declaration, either a thread-function parameter
/// (sl_glparm ...) or a create argument (sl_glarg ...).
struct ChannelEndpoint {
  Direction direction = Direction::Global;
  bool float_keyword = false;  // declared with the *f* spelling
  std::string type_text;       // normalized, e.g. "int*"
  std::optional<std::string> name;
  ExprPtr init;                // create arguments only
  bool spelled_as_arg = false; // sl_*arg rather than sl_*parm
  SourceSpan span;

  ValueClass value_class() const;
};

struct Declarator {
  std::string name;
  bool pointer = false;
  std::optional<std::int64_t> array_size;
  ExprPtr init;
  bool has_init_list = false;
  std::vector<ExprPtr> init_list;
  SourceSpan span;
};

enum class CreateSpecifier { Exclusive, ForceSeq, ForceWait };
enum class Terminator { Sync, Detach };

const char* to_string(CreateSpecifier s);

struct CreateConstruct {
  ExprPtr placement;
  ExprPtr start;
  ExprPtr limit;
  ExprPtr step;
  ExprPtr window;
  std::optional<CreateSpecifier> specifier;
  std::string target;
  SourceSpan target_span;
  std::vector<ChannelEndpoint> args;
  std::vector<StmtPtr> body;  // block items between sl_create and its terminator
  Terminator terminator = Terminator::Sync;
  SourceSpan terminator_span;
  SourceSpan span;
};

enum class StmtKind {
  Block,
  Decl,
  Expr,
  If,
  While,
  For,
  Return,
  Break,
  Continue,
  IndexDecl,  // sl_index(name);
  SetP,       // sl_setp(name, expr);
  SetA,       // sl_seta(name, expr);
  Create,
  Empty,
};

struct Stmt {
  StmtKind kind = StmtKind::Empty;
  SourceSpan span;

  std::string name;                   // IndexDecl / SetP / SetA
  std::string type_text;              // Decl
  CType type;                         // Decl base type (pointer per declarator)
  std::vector<Declarator> declarators;
  ExprPtr expr;                       // Expr, Return, SetP/SetA value, loop/if condition
  ExprPtr step;                       // For increment
  StmtPtr init;                       // For initializer
  std::vector<StmtPtr> items;         // Block
  StmtPtr then_branch;                // If then, While/For body
  StmtPtr else_branch;
  std::unique_ptr<CreateConstruct> create;
};

struct ThreadFunctionDef {
  std::string name;
  bool is_static = false;
  std::vector<ChannelEndpoint> params;
  std::vector<StmtPtr> body;
  SourceSpan span;
};

struct ThreadFunctionDecl {
  std::string name;
  bool is_static = false;
  std::vector<ChannelEndpoint> params;
  SourceSpan span;
};

struct CParam {
  std::string type_text;
  CType type;
  std::string name;
  SourceSpan span;
};

struct CFunction {
  std::string return_type_text;
  CType return_type;
  std::string name;
  std::vector<CParam> params;
  bool is_prototype = false;
  std::vector<StmtPtr> body;
  SourceSpan span;
};

using TopLevel = std::variant<ThreadFunctionDef, ThreadFunctionDecl, CFunction>;

struct AstProgram {
  std::string file;
  std::vector<TopLevel> items;
};

/// Structural equality; source spans are ignored.
bool structurally_equal(const AstProgram& a, const AstProgram& b);
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);

}  // namespace slmini

namespace slmini {

/// One position of a thread function's channel interface.
struct ChannelKind {
  Direction direction = Direction::Global;
  ValueClass value_class = ValueClass::IntegerScalar;
  CType type;

  friend bool operator==(const ChannelKind&, const ChannelKind&) = default;
};

using ChannelSignature = std::vector<ChannelKind>;

/// Signature derived from parameter declarations; unsupported type text
/// maps to an int scalar (the checker reports it separately).
ChannelSignature signature_of(const std::vector<ChannelEndpoint>& params);
bool has_shared(const ChannelSignature& sig);
std::string to_string(const ChannelSignature& sig);

}  // namespace slmini
