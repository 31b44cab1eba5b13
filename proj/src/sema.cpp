#include "slmini/sema.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>

namespace slmini {

namespace {

constexpr CType kInt{BaseType::Int, false};
constexpr CType kFloat{BaseType::Float, false};
constexpr CType kVoid{BaseType::Void, false};

const std::array<Builtin, 8>& builtins() {
  static const std::array<Builtin, 8> table = {{
      {"print_int", {kInt}, kVoid},
      {"print_float", {kFloat}, kVoid},
      {"print_str", {kVoid}, kVoid},
      {"sl_default_placement", {}, kInt},
      {"sl_placement_size", {kInt}, kInt},
      {"sl_first_processor_address", {kInt}, kInt},
      {"sl_local_processor_address", {}, kInt},
      {"sl_placement", {kInt, kInt}, kInt},
  }};
  return table;
}

Diagnostic error(const std::string& code, const std::string& msg, const SourceSpan& at) {
  return Diagnostic{Severity::Error, code, msg, at};
}

bool is_scalar(CType t) { return !t.pointer && t.base != BaseType::Void; }

bool convertible(CType from, CType to) {
  if (is_scalar(from) && is_scalar(to)) return true;
  return from.pointer && to.pointer && from.base == to.base;
}

template <typename F>
void visit_stmts(const std::vector<StmtPtr>& items, F&& f);

template <typename F>
void visit_stmt(const Stmt& s, F&& f) {
  f(s);
  if (s.init) visit_stmt(*s.init, f);
  visit_stmts(s.items, f);
  if (s.then_branch) visit_stmt(*s.then_branch, f);
  if (s.else_branch) visit_stmt(*s.else_branch, f);
  if (s.create) visit_stmts(s.create->body, f);
}

template <typename F>
void visit_stmts(const std::vector<StmtPtr>& items, F&& f) {
  for (const auto& s : items) visit_stmt(*s, f);
}

template <typename F>
void for_each_body(const AstProgram& prog, F&& f) {
  for (const auto& item : prog.items) {
    if (auto* d = std::get_if<ThreadFunctionDef>(&item)) visit_stmts(d->body, f);
    if (auto* c = std::get_if<CFunction>(&item)) visit_stmts(c->body, f);
  }
}

// ---------------------------------------------------------------------------
// Channel and type walker. One pass computes both families of diagnostics.

class Walker {
 public:
  Walker(const AstProgram& prog, const SymbolTable& syms) : prog_(prog), syms_(syms) {}

  std::vector<Diagnostic> channel;
  std::vector<Diagnostic> typing;
  ExprTypes types;

  void run() {
    for (const auto& item : prog_.items) {
      if (auto* d = std::get_if<ThreadFunctionDef>(&item)) thread_def(*d);
      if (auto* d = std::get_if<ThreadFunctionDecl>(&item)) endpoints(d->params);
      if (auto* c = std::get_if<CFunction>(&item)) c_function(*c);
    }
  }

 private:
  struct VarInfo {
    CType type;
    bool is_array = false;
  };
  enum class ArgState { Active, Synced, Detached };
  struct ArgInfo {
    const ChannelEndpoint* ep = nullptr;
    CType type;
    ArgState state = ArgState::Active;
    std::size_t create_level = 0;
  };
  struct Scope {
    std::map<std::string, VarInfo> vars;
    std::map<std::string, ArgInfo> args;
  };
  struct CreateCtx {
    const CreateConstruct* create;
    std::map<std::string, int> fed;      // name -> number of sl_seta seen
    std::map<std::string, int> fed_top;  // name -> number at the top level of the body
    int nesting = 0;
  };

  void chan(const std::string& code, const std::string& msg, const SourceSpan& at) {
    channel.push_back(error(code, msg, at));
  }
  void type_err(const std::string& msg, const SourceSpan& at, const std::string& code = "E_TYPE") {
    typing.push_back(error(code, msg, at));
  }

  // ---- endpoints ----
  void endpoints(const std::vector<ChannelEndpoint>& eps) {
    std::set<std::string> names;
    for (const auto& ep : eps) {
      endpoint_class(ep);
      if (ep.name && !ep.spelled_as_arg && !names.insert(*ep.name).second)
        chan("E_DUP", "duplicate channel parameter '" + *ep.name + "'", ep.span);
    }
  }

  std::optional<CType> endpoint_class(const ChannelEndpoint& ep) {
    auto t = ctype_from_text(ep.type_text);
    if (!t || t->base == BaseType::Void) {
      type_err("unsupported channel type '" + ep.type_text + "'", ep.span);
      return std::nullopt;
    }
    bool fp_scalar = !t->pointer && t->base == BaseType::Float;
    if (ep.float_keyword && !fp_scalar)
      chan("E_CHANNEL_CLASS",
           "floating-point channel keyword used with non floating-point type '" + ep.type_text +
               "'; array bases are integer channels",
           ep.span);
    if (!ep.float_keyword && fp_scalar)
      chan("E_CHANNEL_CLASS",
           "floating-point channel of type '" + ep.type_text + "' must be declared with the f-variant keyword",
           ep.span);
    return t;
  }

  // ---- functions ----
  void thread_def(const ThreadFunctionDef& def) {
    thread_ = &def;
    cfn_ = nullptr;
    params_.clear();
    for (std::size_t i = 0; i < def.params.size(); ++i)
      if (def.params[i].name) params_.emplace(*def.params[i].name, i);
    endpoints(def.params);
    index_decls_ = 0;
    top_setp_.clear();
    begin_function();
    body(def.body);
    end_function();
    thread_ = nullptr;
  }

  void c_function(const CFunction& fn) {
    if (fn.is_prototype) return;
    thread_ = nullptr;
    cfn_ = &fn;
    params_.clear();
    begin_function();
    if (fn.name == "main" && !fn.params.empty()) type_err("main must take no parameters", fn.span);
    for (const auto& p : fn.params) declare(p.name, VarInfo{p.type, false}, p.span);
    body(fn.body);
    end_function();
    cfn_ = nullptr;
  }

  void begin_function() {
    scopes_.clear();
    scopes_.emplace_back();
    creates_.clear();
    misplaced_.clear();
    nesting_ = 0;
    loops_ = 0;
  }

  void end_function() { scopes_.clear(); }

  void body(const std::vector<StmtPtr>& items) {
    for (const auto& s : items) stmt(*s);
  }

  void declare(const std::string& name, VarInfo info, const SourceSpan& at) {
    if (!scopes_.back().vars.emplace(name, info).second)
      type_err("redeclaration of '" + name + "' in the same scope", at, "E_DUP");
  }

  const VarInfo* lookup_var(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->vars.find(name);
      if (f != it->vars.end()) return &f->second;
    }
    return nullptr;
  }

  ArgInfo* lookup_arg(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->args.find(name);
      if (f != it->args.end()) return &f->second;
    }
    return nullptr;
  }

  // Named arg of the innermost active create, if any.
  ArgInfo* innermost_active_arg(const std::string& name) {
    if (creates_.empty()) return nullptr;
    ArgInfo* a = lookup_arg(name);
    if (a && a->state == ArgState::Active && a->create_level == creates_.size()) return a;
    return nullptr;
  }

  // ---- statements ----
  void nested(const Stmt& s) {
    ++nesting_;
    if (!creates_.empty()) ++creates_.back().nesting;
    scopes_.emplace_back();
    stmt(s);
    scopes_.pop_back();
    if (!creates_.empty()) --creates_.back().nesting;
    --nesting_;
  }

  void condition(const Expr& e) {
    auto t = expr(e);
    if (t && !is_scalar(*t)) type_err("condition must be a scalar", e.span);
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Empty:
      case StmtKind::Break:
      case StmtKind::Continue:
        if (s.kind != StmtKind::Empty && loops_ == 0)
          type_err(std::string(s.kind == StmtKind::Break ? "break" : "continue") + " outside of a loop", s.span,
                   "E_SYNTAX");
        return;
      case StmtKind::Block:
        ++nesting_;
        if (!creates_.empty()) ++creates_.back().nesting;
        scopes_.emplace_back();
        body(s.items);
        scopes_.pop_back();
        if (!creates_.empty()) --creates_.back().nesting;
        --nesting_;
        return;
      case StmtKind::Decl: declaration(s); return;
      case StmtKind::Expr: expr(*s.expr); return;
      case StmtKind::If:
        condition(*s.expr);
        nested(*s.then_branch);
        if (s.else_branch) nested(*s.else_branch);
        return;
      case StmtKind::While:
        condition(*s.expr);
        ++loops_;
        nested(*s.then_branch);
        --loops_;
        return;
      case StmtKind::For:
        ++nesting_;
        if (!creates_.empty()) ++creates_.back().nesting;
        scopes_.emplace_back();
        if (s.init) stmt(*s.init);
        if (s.expr) condition(*s.expr);
        if (s.step) expr(*s.step);
        ++loops_;
        nested(*s.then_branch);
        --loops_;
        scopes_.pop_back();
        if (!creates_.empty()) --creates_.back().nesting;
        --nesting_;
        return;
      case StmtKind::Return: ret(s); return;
      case StmtKind::IndexDecl:
        if (!thread_) {
          chan("E_INDEX_OUTSIDE", "sl_index is only valid inside a thread function", s.span);
        } else if (++index_decls_ > 1) {
          chan("E_INDEX_DUP", "a thread function body may declare sl_index only once", s.span);
        }
        declare(s.name, VarInfo{kInt, false}, s.span);
        return;
      case StmtKind::SetP: setp(s); return;
      case StmtKind::SetA: seta(s, "sl_seta"); return;
      case StmtKind::Create: create(*s.create); return;
    }
  }

  void declaration(const Stmt& s) {
    for (const auto& d : s.declarators) {
      CType t{s.type.base, d.pointer || d.array_size.has_value()};
      if (d.init) {
        auto it = expr(*d.init);
        if (d.array_size) {
          type_err("array '" + d.name + "' must be initialized with a brace list", d.span);
        } else if (it && !convertible(*it, t)) {
          type_err("cannot initialize '" + d.name + "' of type " + to_string(t) + " with " + to_string(*it),
                   d.init->span);
        }
      }
      if (d.has_init_list) {
        if (!d.array_size) type_err("brace initializer for non-array '" + d.name + "'", d.span);
        if (d.array_size && static_cast<std::int64_t>(d.init_list.size()) > *d.array_size)
          type_err("too many initializers for '" + d.name + "'", d.span);
        for (const auto& e : d.init_list) {
          auto it = expr(*e);
          if (it && !is_scalar(*it)) type_err("array elements must be scalars", e->span);
        }
      }
      declare(d.name, VarInfo{t, d.array_size.has_value()}, d.span);
    }
  }

  void ret(const Stmt& s) {
    std::optional<CType> t;
    if (s.expr) t = expr(*s.expr);
    if (thread_) {
      if (s.expr) type_err("thread functions cannot return a value", s.span);
      return;
    }
    if (!cfn_) return;
    CType rt = cfn_->return_type;
    if (rt.base == BaseType::Void && !rt.pointer) {
      if (s.expr) type_err("void function '" + cfn_->name + "' returns a value", s.span);
      return;
    }
    if (!s.expr) {
      type_err("non-void function '" + cfn_->name + "' must return a value", s.span);
      return;
    }
    if (t && !convertible(*t, rt)) type_err("cannot return " + to_string(*t) + " from " + cfn_->name, s.span);
  }

  void setp(const Stmt& s) {
    auto vt = expr(*s.expr);
    if (thread_) {
      auto p = params_.find(s.name);
      if (p != params_.end()) {
        const ChannelEndpoint& ep = thread_->params[p->second];
        if (ep.direction != Direction::Shared) {
          chan("E_SETP_GLOBAL", "sl_setp on global channel '" + s.name + "'; only shared channels can be written",
               s.span);
        }
        auto pt = ctype_from_text(ep.type_text);
        if (pt && vt && !convertible(*vt, *pt))
          type_err("cannot write " + to_string(*vt) + " to channel '" + s.name + "' of type " + ep.type_text, s.span);
        if (nesting_ == 0 && ++top_setp_[s.name] == 2)
          chan("E_DOUBLE_WRITE", "channel '" + s.name + "' is written twice", s.span);
        return;
      }
    }
    // Outside thread parameters, sl_setp on a create argument behaves as sl_seta.
    if (lookup_arg(s.name)) {
      seta(s, "sl_setp", vt);
      return;
    }
    chan("E_NOT_PARAM",
         thread_ ? "'" + s.name + "' is not a channel parameter of thread function " + thread_->name
                 : "sl_setp on '" + s.name + "' outside a thread function",
         s.span);
  }

  void seta(const Stmt& s, const std::string& kw, std::optional<std::optional<CType>> known = std::nullopt) {
    std::optional<CType> vt = known ? *known : expr(*s.expr);
    ArgInfo* a = innermost_active_arg(s.name);
    if (!a) {
      misplaced_.insert(s.name);
      chan("E_SETA_OUTSIDE",
           kw + "(" + s.name + ", ...) must appear between sl_create and sl_sync of the create that names '" +
               s.name + "'",
           s.span);
      return;
    }
    CreateCtx& ctx = creates_.back();
    ctx.fed[s.name]++;
    if (ctx.nesting == 0) {
      int n = ++ctx.fed_top[s.name];
      if (n == 2 || (n == 1 && a->ep->init))
        chan("E_DOUBLE_WRITE", "channel argument '" + s.name + "' receives more than one source value", s.span);
    }
    if (vt && !convertible(*vt, a->type))
      type_err("cannot send " + to_string(*vt) + " on channel '" + s.name + "' of type " + a->ep->type_text, s.span);
  }

  void create(const CreateConstruct& c) {
    const SourceSpan& at = c.span;
    auto slot = [&](const ExprPtr& e, const char* what) {
      if (!e) return;
      auto t = expr(*e);
      if (t && (t->pointer || t->base != BaseType::Int))
        type_err(std::string(what) + " of sl_create must be an integer", e->span);
    };
    slot(c.placement, "placement");
    slot(c.start, "start");
    slot(c.limit, "limit");
    slot(c.step, "step");
    slot(c.window, "window size");

    // Signature against the target.
    const ThreadSymbol* target = syms_.thread(c.target);
    std::vector<std::optional<CType>> arg_types;
    for (const auto& a : c.args) {
      auto t = endpoint_class(a);
      arg_types.push_back(t);
      if (a.init) {
        auto it = expr(*a.init);
        if (it && t && !convertible(*it, *t))
          type_err("cannot send " + to_string(*it) + " on channel of type " + a.type_text, a.init->span);
      }
    }
    if (target) signature_check(c, *target);

    creates_.push_back(CreateCtx{&c, {}, {}, 0});
    std::set<std::string> local_names;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      const auto& a = c.args[i];
      if (!a.name) continue;
      if (!local_names.insert(*a.name).second) chan("E_DUP", "duplicate channel argument '" + *a.name + "'", a.span);
      scopes_.back().args[*a.name] = ArgInfo{&a, arg_types[i].value_or(kInt), ArgState::Active, creates_.size()};
    }
    body(c.body);
    CreateCtx ctx = std::move(creates_.back());
    creates_.pop_back();

    for (const auto& a : c.args) {
      if (a.init) continue;
      if (!a.name) {
        chan("E_UNFED_CHANNEL", "anonymous channel argument must carry a source value", a.span);
        continue;
      }
      if (ctx.fed.count(*a.name) || misplaced_.count(*a.name)) continue;
      chan("E_UNFED_CHANNEL", "channel argument '" + *a.name + "' never receives a source value before " +
                                  (c.terminator == Terminator::Sync ? "sl_sync" : "sl_detach"),
           a.span);
    }
    ArgState done = c.terminator == Terminator::Sync ? ArgState::Synced : ArgState::Detached;
    for (const auto& a : c.args) {
      if (!a.name) continue;
      auto it = scopes_.back().args.find(*a.name);
      if (it != scopes_.back().args.end() && it->second.ep == &a) it->second.state = done;
    }
    (void)at;
  }

  void signature_check(const CreateConstruct& c, const ThreadSymbol& target) {
    const auto& params = target.definition ? target.definition->params : target.declarations.front()->params;
    if (c.args.size() != params.size()) {
      chan("E_SIG_MISMATCH",
           "thread function " + c.target + " expects " + std::to_string(params.size()) + " channel(s), " +
               std::to_string(c.args.size()) + " given",
           c.target_span);
      return;
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      const auto& a = c.args[i];
      const auto& p = params[i];
      std::string why;
      if (a.direction != p.direction)
        why = std::string("direction ") + to_string(a.direction) + " vs " + to_string(p.direction);
      else if (a.value_class() != p.value_class())
        why = std::string("value class ") + to_string(a.value_class()) + " vs " + to_string(p.value_class());
      else if (a.type_text != p.type_text)
        why = "type '" + a.type_text + "' vs '" + p.type_text + "'";
      if (!why.empty())
        chan("E_SIG_MISMATCH",
             "channel " + std::to_string(i) + " of create does not match " + c.target + ": " + why, a.span);
    }
  }

  // ---- expressions ----
  std::optional<CType> remember(const Expr& e, std::optional<CType> t) {
    if (t) types[&e] = *t;
    return t;
  }

  std::optional<CType> expr(const Expr& e) { return remember(e, expr_impl(e)); }

  std::optional<CType> lvalue_type(const Expr& e) {
    if (e.kind == ExprKind::Var) {
      const VarInfo* v = lookup_var(e.text);
      if (v && v->is_array) {
        type_err("cannot assign to array '" + e.text + "'", e.span);
        expr(e);
        return std::nullopt;
      }
    }
    return expr(e);
  }

  std::optional<CType> expr_impl(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return kInt;
      case ExprKind::FloatLit: return kFloat;
      case ExprKind::StrLit:
        type_err("string literals may only be passed to print_str", e.span);
        return std::nullopt;
      case ExprKind::Var: {
        const VarInfo* v = lookup_var(e.text);
        if (!v) {
          type_err("use of undeclared identifier '" + e.text + "'", e.span, "E_UNDEF");
          return std::nullopt;
        }
        return v->type;
      }
      case ExprKind::Index: {
        auto base = expr(*e.args[0]);
        auto idx = expr(*e.args[1]);
        if (idx && (idx->pointer || idx->base != BaseType::Int)) type_err("array index must be an integer", e.span);
        if (!base) return std::nullopt;
        if (!base->pointer) {
          type_err("subscripted value is not an array", e.span);
          return std::nullopt;
        }
        return CType{base->base, false};
      }
      case ExprKind::Call: return call(e);
      case ExprKind::Unary: {
        auto t = expr(*e.args[0]);
        if (!t) return std::nullopt;
        if (!is_scalar(*t)) {
          type_err("operand of unary '" + e.text + "' must be a scalar", e.span);
          return std::nullopt;
        }
        return e.text == "!" ? kInt : *t;
      }
      case ExprKind::Binary: return binary(e);
      case ExprKind::Assign: {
        auto lt = lvalue_type(*e.args[0]);
        auto rt = expr(*e.args[1]);
        if (!lt || !rt) return lt;
        if (e.text == "=") {
          if (!convertible(*rt, *lt)) {
            type_err("cannot assign " + to_string(*rt) + " to " + to_string(*lt), e.span);
            return std::nullopt;
          }
          return lt;
        }
        if (!is_scalar(*lt) || !is_scalar(*rt)) {
          type_err("operands of '" + e.text + "' must be scalars", e.span);
          return std::nullopt;
        }
        if (e.text == "%=" && (lt->base != BaseType::Int || rt->base != BaseType::Int)) {
          type_err("operands of '%=' must be integers", e.span);
          return std::nullopt;
        }
        return lt;
      }
      case ExprKind::IncDec: {
        auto t = lvalue_type(*e.args[0]);
        if (t && !is_scalar(*t)) {
          type_err("operand of '" + e.text + "' must be a scalar", e.span);
          return std::nullopt;
        }
        return t;
      }
      case ExprKind::GetP: return getp(e);
      case ExprKind::GetA: return geta(e, "sl_geta");
    }
    return std::nullopt;
  }

  std::optional<CType> binary(const Expr& e) {
    auto l = expr(*e.args[0]);
    auto r = expr(*e.args[1]);
    if (!l || !r) return std::nullopt;
    const std::string& op = e.text;
    if (op == "&&" || op == "||") {
      if (!is_scalar(*l) || !is_scalar(*r)) {
        type_err("operands of '" + op + "' must be scalars", e.span);
        return std::nullopt;
      }
      return kInt;
    }
    if ((op == "==" || op == "!=") && l->pointer && r->pointer) {
      if (l->base != r->base) type_err("comparison of distinct array types", e.span);
      return kInt;
    }
    if (!is_scalar(*l) || !is_scalar(*r)) {
      type_err("operands of '" + op + "' must be scalars (no pointer arithmetic)", e.span);
      return std::nullopt;
    }
    if (op == "%" && (l->base != BaseType::Int || r->base != BaseType::Int)) {
      type_err("operands of '%' must be integers", e.span);
      return std::nullopt;
    }
    if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" || op == ">=") return kInt;
    return (l->base == BaseType::Float || r->base == BaseType::Float) ? kFloat : kInt;
  }

  std::optional<CType> call(const Expr& e) {
    if (const Builtin* b = find_builtin(e.text)) {
      if (e.args.size() != b->params.size()) {
        type_err(e.text + " expects " + std::to_string(b->params.size()) + " argument(s)", e.span);
        for (const auto& a : e.args)
          if (a->kind != ExprKind::StrLit) expr(*a);
        return b->result;
      }
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (b->params[i].base == BaseType::Void) {
          if (e.args[i]->kind != ExprKind::StrLit) type_err(e.text + " expects a string literal", e.args[i]->span);
          continue;
        }
        auto t = expr(*e.args[i]);
        if (t && !(is_scalar(*t) && convertible(*t, b->params[i])))
          type_err("argument " + std::to_string(i + 1) + " of " + e.text + " must be a scalar", e.args[i]->span);
      }
      return b->result;
    }
    if (syms_.thread(e.text)) {
      type_err("thread function '" + e.text + "' cannot be called; use sl_create", e.span);
      for (const auto& a : e.args) expr(*a);
      return std::nullopt;
    }
    const CFunction* fn = syms_.function(e.text);
    if (!fn) {
      type_err("call to undeclared function '" + e.text + "'", e.span, "E_UNDEF");
      for (const auto& a : e.args) expr(*a);
      return std::nullopt;
    }
    if (e.args.size() != fn->params.size()) {
      type_err(e.text + " expects " + std::to_string(fn->params.size()) + " argument(s), " +
                   std::to_string(e.args.size()) + " given",
               e.span);
    }
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      auto t = expr(*e.args[i]);
      if (i < fn->params.size() && t && !convertible(*t, fn->params[i].type))
        type_err("argument " + std::to_string(i + 1) + " of " + e.text + ": cannot pass " + to_string(*t) +
                     " as " + to_string(fn->params[i].type),
                 e.args[i]->span);
    }
    return fn->return_type;
  }

  std::optional<CType> getp(const Expr& e) {
    if (thread_) {
      auto p = params_.find(e.text);
      if (p != params_.end()) return ctype_from_text(thread_->params[p->second].type_text);
    }
    if (lookup_arg(e.text)) return geta(e, "sl_getp");
    chan("E_NOT_PARAM",
         thread_ ? "'" + e.text + "' is not a channel parameter of thread function " + thread_->name
                 : "sl_getp on '" + e.text + "' outside a thread function",
         e.span);
    return std::nullopt;
  }

  std::optional<CType> geta(const Expr& e, const std::string& kw) {
    ArgInfo* a = lookup_arg(e.text);
    if (!a) {
      chan("E_UNDEF", "unknown channel endpoint '" + e.text + "'", e.span);
      return std::nullopt;
    }
    if (a->state == ArgState::Active) {
      chan("E_GETA_BEFORE_SYNC", kw + "(" + e.text + ") is only valid after the family's sl_sync", e.span);
    } else if (a->state == ArgState::Detached) {
      chan("E_GETA_AFTER_DETACH", kw + "(" + e.text + ") on a detached family; its final value is never available",
           e.span);
    }
    return a->type;
  }

  const AstProgram& prog_;
  const SymbolTable& syms_;
  const ThreadFunctionDef* thread_ = nullptr;
  const CFunction* cfn_ = nullptr;
  std::map<std::string, std::size_t> params_;
  std::vector<Scope> scopes_;
  std::vector<CreateCtx> creates_;
  std::set<std::string> misplaced_;
  std::map<std::string, int> top_setp_;
  int index_decls_ = 0;
  int nesting_ = 0;
  int loops_ = 0;
};

void sort_diags(std::vector<Diagnostic>& d) {
  std::stable_sort(d.begin(), d.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
  });
}

}  // namespace

const Builtin* find_builtin(const std::string& name) {
  for (const auto& b : builtins())
    if (name == b.name) return &b;
  return nullptr;
}

const ThreadSymbol* SymbolTable::thread(const std::string& name) const {
  auto it = threads.find(name);
  return it == threads.end() ? nullptr : &it->second;
}

const CFunction* SymbolTable::function(const std::string& name) const {
  auto it = functions.find(name);
  return it == functions.end() ? nullptr : it->second;
}

ResolveResult resolve(const AstProgram& program) {
  ResolveResult r;
  auto& syms = r.symbols;
  auto& diags = r.diagnostics;
  std::set<std::string> defined_c;

  auto clash_builtin = [&](const std::string& name, const SourceSpan& at) {
    if (find_builtin(name)) {
      diags.push_back(error("E_DUP", "'" + name + "' redefines a built-in function", at));
      return true;
    }
    return false;
  };

  for (const auto& item : program.items) {
    if (auto* def = std::get_if<ThreadFunctionDef>(&item)) {
      if (clash_builtin(def->name, def->span)) continue;
      if (syms.functions.count(def->name)) {
        diags.push_back(error("E_DUP", "'" + def->name + "' is already defined as a C function", def->span));
        continue;
      }
      auto [it, fresh] = syms.threads.try_emplace(def->name);
      ThreadSymbol& t = it->second;
      if (t.definition) {
        diags.push_back(error("E_DUP", "duplicate definition of thread function '" + def->name + "'", def->span));
        continue;
      }
      t.name = def->name;
      t.definition = def;
      t.is_static = def->is_static;
      t.signature = signature_of(def->params);
      t.span = def->span;
      for (const auto* d : t.declarations)
        if (signature_of(d->params) != t.signature)
          diags.push_back(error("E_SIG_MISMATCH", "definition of '" + def->name + "' does not match its declaration",
                                def->span));
      (void)fresh;
    } else if (auto* decl = std::get_if<ThreadFunctionDecl>(&item)) {
      if (clash_builtin(decl->name, decl->span)) continue;
      if (syms.functions.count(decl->name)) {
        diags.push_back(error("E_DUP", "'" + decl->name + "' is already defined as a C function", decl->span));
        continue;
      }
      ThreadSymbol& t = syms.threads[decl->name];
      ChannelSignature sig = signature_of(decl->params);
      if (t.definition || !t.declarations.empty()) {
        if (sig != t.signature)
          diags.push_back(error("E_SIG_MISMATCH", "declaration of '" + decl->name + "' conflicts with an earlier one",
                                decl->span));
      } else {
        t.signature = sig;
        t.span = decl->span;
        t.name = decl->name;
        t.is_static = decl->is_static;
      }
      t.declarations.push_back(decl);
    } else {
      const auto& fn = std::get<CFunction>(item);
      if (clash_builtin(fn.name, fn.span)) continue;
      if (syms.threads.count(fn.name)) {
        diags.push_back(error("E_DUP", "'" + fn.name + "' is already declared as a thread function", fn.span));
        continue;
      }
      if (!fn.is_prototype) {
        if (!defined_c.insert(fn.name).second) {
          diags.push_back(error("E_DUP", "duplicate definition of function '" + fn.name + "'", fn.span));
          continue;
        }
        syms.functions[fn.name] = &fn;
      } else if (!syms.functions.count(fn.name)) {
        syms.functions[fn.name] = &fn;
      }
    }
  }

  const CFunction* entry = syms.function("main");
  if (!entry || entry->is_prototype)
    diags.push_back(error("E_UNDEF", "program has no main function", SourceSpan{program.file, 1, 1}));

  for (const auto& [name, fn] : syms.functions)
    if (fn->is_prototype)
      diags.push_back(error("E_UNDEF", "function '" + name + "' is declared but never defined", fn->span));

  for_each_body(program, [&](const Stmt& s) {
    if (s.kind != StmtKind::Create) return;
    const CreateConstruct& c = *s.create;
    if (const ThreadSymbol* t = syms.thread(c.target)) {
      if (!t->definition)
        diags.push_back(
            error("E_UNDEF", "thread function '" + c.target + "' is declared but never defined", c.target_span));
    } else if (syms.function(c.target)) {
      diags.push_back(error("E_NOT_THREAD_FN", "'" + c.target + "' is a C function, not a thread function",
                            c.target_span));
    } else {
      diags.push_back(error("E_UNDEF", "create of undefined thread function '" + c.target + "'", c.target_span));
    }
  });
  return r;
}

std::vector<Diagnostic> check_channels(const AstProgram& program, const SymbolTable& symbols) {
  Walker w(program, symbols);
  w.run();
  return w.channel;
}

std::vector<Diagnostic> check_types(const AstProgram& program, const SymbolTable& symbols) {
  Walker w(program, symbols);
  w.run();
  return w.typing;
}

ExprTypes expression_types(const AstProgram& program, const SymbolTable& symbols) {
  Walker w(program, symbols);
  w.run();
  return std::move(w.types);
}

std::vector<Diagnostic> check_program(const AstProgram& program) {
  ResolveResult r = resolve(program);
  Walker w(program, r.symbols);
  w.run();
  std::vector<Diagnostic> all = std::move(r.diagnostics);
  all.insert(all.end(), w.channel.begin(), w.channel.end());
  all.insert(all.end(), w.typing.begin(), w.typing.end());
  sort_diags(all);
  return all;
}

}  // namespace slmini
