#include "slmini/ast.hpp"

#include <sstream>

namespace slmini {

const char* to_string(Direction d) { return d == Direction::Global ? "global" : "shared"; }

const char* to_string(ValueClass c) {
  switch (c) {
    case ValueClass::IntegerScalar: return "int";
    case ValueClass::FloatScalar: return "float";
    case ValueClass::ArrayHandle: return "handle";
  }
  return "?";
}

const char* to_string(CreateSpecifier s) {
  switch (s) {
    case CreateSpecifier::Exclusive: return "sl__exclusive";
    case CreateSpecifier::ForceSeq: return "sl__forceseq";
    case CreateSpecifier::ForceWait: return "sl__forcewait";
  }
  return "?";
}

std::optional<CType> ctype_from_text(const std::string& text) {
  std::string base = text;
  CType t;
  if (!base.empty() && base.back() == '*') {
    t.pointer = true;
    base.pop_back();
    if (!base.empty() && base.back() == '*') return std::nullopt;
  }
  std::istringstream words(base);
  std::string w;
  int ints = 0, floats = 0, voids = 0, typedefs = 0, count = 0;
  while (words >> w) {
    if (w == "const") continue;
    ++count;
    if (w == "int" || w == "long" || w == "short" || w == "char" || w == "unsigned" || w == "signed")
      ++ints;
    else if (w == "float" || w == "double")
      ++floats;
    else if (w == "void")
      ++voids;
    else if (w == "size_t" || w == "ssize_t" || w == "ptrdiff_t" || w == "int64_t" || w == "int32_t" ||
             w == "uint64_t" || w == "uint32_t" || w == "sl_place_t" || w == "sl_placement_t")
      ++typedefs;
    else
      return std::nullopt;
  }
  if (count == 0) return std::nullopt;
  if (voids == 1 && count == 1) {
    if (t.pointer) return std::nullopt;
    t.base = BaseType::Void;
    return t;
  }
  if (typedefs == 1 && count == 1) {
    t.base = BaseType::Int;
    return t;
  }
  if (ints == count) {
    t.base = BaseType::Int;
    return t;
  }
  if (floats == 1 && (count == 1 || (count == 2 && base.find("long") != std::string::npos))) {
    t.base = BaseType::Float;
    return t;
  }
  return std::nullopt;
}

std::string to_string(CType t) {
  std::string s = t.base == BaseType::Int ? "int" : t.base == BaseType::Float ? "float" : "void";
  if (t.pointer) s += "*";
  return s;
}

ValueClass ChannelEndpoint::value_class() const {
  if (float_keyword) return ValueClass::FloatScalar;
  if (!type_text.empty() && type_text.back() == '*') return ValueClass::ArrayHandle;
  return ValueClass::IntegerScalar;
}

namespace {

bool eq(const ExprPtr& a, const ExprPtr& b);
bool eq(const StmtPtr& a, const StmtPtr& b);
bool eq(const ChannelEndpoint& a, const ChannelEndpoint& b);
bool eq(const Declarator& a, const Declarator& b);
bool eq(const CParam& a, const CParam& b);
bool eq(const TopLevel& a, const TopLevel& b);

bool eq(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

bool eq(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

template <typename T>
bool eq_list(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!eq(a[i], b[i])) return false;
  return true;
}

bool eq(const ChannelEndpoint& a, const ChannelEndpoint& b) {
  return a.direction == b.direction && a.float_keyword == b.float_keyword && a.type_text == b.type_text &&
         a.name == b.name && a.spelled_as_arg == b.spelled_as_arg && eq(a.init, b.init);
}

bool eq(const Declarator& a, const Declarator& b) {
  return a.name == b.name && a.pointer == b.pointer && a.array_size == b.array_size && eq(a.init, b.init) &&
         a.has_init_list == b.has_init_list && eq_list(a.init_list, b.init_list);
}

bool eq(const CParam& a, const CParam& b) { return a.type_text == b.type_text && a.type == b.type && a.name == b.name; }

bool eq(const CreateConstruct& a, const CreateConstruct& b) {
  return eq(a.placement, b.placement) && eq(a.start, b.start) && eq(a.limit, b.limit) && eq(a.step, b.step) &&
         eq(a.window, b.window) && a.specifier == b.specifier && a.target == b.target && eq_list(a.args, b.args) &&
         eq_list(a.body, b.body) && a.terminator == b.terminator;
}

bool eq(const TopLevel& a, const TopLevel& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<ThreadFunctionDef>(&a)) {
    auto& y = std::get<ThreadFunctionDef>(b);
    return x->name == y.name && x->is_static == y.is_static && eq_list(x->params, y.params) &&
           eq_list(x->body, y.body);
  }
  if (auto* x = std::get_if<ThreadFunctionDecl>(&a)) {
    auto& y = std::get<ThreadFunctionDecl>(b);
    return x->name == y.name && x->is_static == y.is_static && eq_list(x->params, y.params);
  }
  auto& x = std::get<CFunction>(a);
  auto& y = std::get<CFunction>(b);
  return x.return_type_text == y.return_type_text && x.return_type == y.return_type && x.name == y.name &&
         eq_list(x.params, y.params) && x.is_prototype == y.is_prototype && eq_list(x.body, y.body);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.text == b.text && a.prefix == b.prefix && eq_list(a.args, b.args);
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.type_text != b.type_text || !(a.type == b.type)) return false;
  if (!eq_list(a.declarators, b.declarators) || !eq(a.expr, b.expr) || !eq(a.step, b.step) || !eq(a.init, b.init))
    return false;
  if (!eq_list(a.items, b.items) || !eq(a.then_branch, b.then_branch) || !eq(a.else_branch, b.else_branch))
    return false;
  if (!a.create || !b.create) return !a.create && !b.create;
  return eq(*a.create, *b.create);
}

bool structurally_equal(const AstProgram& a, const AstProgram& b) { return eq_list(a.items, b.items); }

}  // namespace slmini

namespace slmini {

ChannelSignature signature_of(const std::vector<ChannelEndpoint>& params) {
  ChannelSignature sig;
  for (const auto& p : params) {
    ChannelKind k;
    k.direction = p.direction;
    k.value_class = p.value_class();
    k.type = ctype_from_text(p.type_text).value_or(CType{});
    sig.push_back(k);
  }
  return sig;
}

bool has_shared(const ChannelSignature& sig) {
  for (const auto& k : sig)
    if (k.direction == Direction::Shared) return true;
  return false;
}

std::string to_string(const ChannelSignature& sig) {
  std::string out = "(";
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (i) out += ",";
    out += std::string(to_string(sig[i].direction)) + " " + to_string(sig[i].type);
  }
  return out + ")";
}

}  // namespace slmini
