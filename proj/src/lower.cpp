#include "slmini/lower.hpp"

#include <cstdlib>
#include <set>
#include <stdexcept>

#include "slmini/token.hpp"

namespace slmini {

namespace {

constexpr CType kInt{BaseType::Int, false};
constexpr CType kFloat{BaseType::Float, false};

void collect_reads(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::GetA || e.kind == ExprKind::GetP) out.insert(e.text);
  for (const auto& a : e.args) collect_reads(*a, out);
}

void collect_reads(const Stmt& s, std::set<std::string>& out);

void collect_reads(const std::vector<StmtPtr>& items, std::set<std::string>& out) {
  for (const auto& s : items) collect_reads(*s, out);
}

void collect_reads(const Stmt& s, std::set<std::string>& out) {
  if (s.expr) collect_reads(*s.expr, out);
  if (s.step) collect_reads(*s.step, out);
  if (s.init) collect_reads(*s.init, out);
  for (const auto& d : s.declarators) {
    if (d.init) collect_reads(*d.init, out);
    for (const auto& e : d.init_list) collect_reads(*e, out);
  }
  collect_reads(s.items, out);
  if (s.then_branch) collect_reads(*s.then_branch, out);
  if (s.else_branch) collect_reads(*s.else_branch, out);
  if (s.create) {
    const auto& c = *s.create;
    for (const ExprPtr* e : {&c.placement, &c.start, &c.limit, &c.step, &c.window})
      if (*e) collect_reads(**e, out);
    for (const auto& a : c.args)
      if (a.init) collect_reads(*a.init, out);
    collect_reads(c.body, out);
  }
}

// Does this statement feed one of `names` (not descending into nested creates)?
bool feeds(const Stmt& s, const std::set<std::string>& names) {
  if ((s.kind == StmtKind::SetA || s.kind == StmtKind::SetP) && names.count(s.name)) return true;
  for (const auto& i : s.items)
    if (feeds(*i, names)) return true;
  if (s.init && feeds(*s.init, names)) return true;
  if (s.then_branch && feeds(*s.then_branch, names)) return true;
  if (s.else_branch && feeds(*s.else_branch, names)) return true;
  return false;
}

class FunctionLowerer {
 public:
  FunctionLowerer(IrProgram& prog, IrFunction& fn, const SymbolTable& syms, const ExprTypes& types)
      : prog_(prog), fn_(fn), syms_(syms), types_(types) {}

  void thread(const ThreadFunctionDef& def) {
    fn_.is_thread = true;
    fn_.signature = signature_of(def.params);
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      const auto& p = def.params[i];
      if (p.name) params_[*p.name] = {static_cast<int>(i), ctype_from_text(p.type_text).value_or(kInt)};
    }
    collect_reads(def.body, reads_);
    scopes_.emplace_back();
    block_items(def.body);
    if (needs_fallthrough_return()) emit(Opcode::Return, def.span);
  }

  void function(const CFunction& cf) {
    fn_.result = cf.return_type;
    scopes_.emplace_back();
    for (const auto& p : cf.params) {
      fn_.params.push_back(p.type);
      scopes_.back().vars[p.name] = Var{new_slot(), p.type};
    }
    collect_reads(cf.body, reads_);
    block_items(cf.body);
    if (!needs_fallthrough_return()) return;
    IrOp& r = emit(Opcode::Return, cf.span);
    if (!(cf.return_type.base == BaseType::Void && !cf.return_type.pointer))
      r.args.push_back(imm(cf.return_type.base == BaseType::Float ? Value::of_float(0) : Value::of_int(0)));
  }

 private:
  // false when the code already ends in RET and nothing jumps past it
  bool needs_fallthrough_return() const {
    if (fn_.code.empty() || fn_.code.back().op != Opcode::Return) return true;
    int end = static_cast<int>(fn_.code.size());
    for (const auto& op : fn_.code)
      if ((op.op == Opcode::Jump || op.op == Opcode::JumpIfZero) && op.target == end) return true;
    return false;
  }

  struct Var {
    int slot;
    CType type;
  };
  struct Arg {
    int ctx;
    int channel;
    CType type;
    int final_slot = -1;
  };
  struct Scope {
    std::map<std::string, Var> vars;
    std::map<std::string, Arg> args;
  };
  struct Param {
    int channel;
    CType type;
  };
  struct Loop {
    std::vector<std::size_t> breaks;
    std::vector<std::size_t> continues;
  };

  static Operand imm(Value v) { return Operand::of_value(v); }
  static Operand slot(int s) { return Operand::of_slot(s); }

  int new_slot() { return fn_.num_slots++; }

  IrOp& emit(Opcode op, const SourceSpan& at) {
    IrOp o;
    o.op = op;
    o.span = at;
    fn_.code.push_back(std::move(o));
    return fn_.code.back();
  }

  std::size_t here() const { return fn_.code.size(); }

  CType type_of(const Expr& e) const {
    auto it = types_.find(&e);
    return it == types_.end() ? kInt : it->second;
  }

  const Var* var(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->vars.find(name);
      if (f != it->vars.end()) return &f->second;
    }
    return nullptr;
  }

  Arg* arg(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->args.find(name);
      if (f != it->args.end()) return &f->second;
    }
    return nullptr;
  }

  const Param* param(const std::string& name) const {
    auto it = params_.find(name);
    return it == params_.end() ? nullptr : &it->second;
  }

  Operand coerce(Operand v, CType from, CType to, const SourceSpan& at) {
    if (from.pointer || to.pointer || from.base == to.base || to.base == BaseType::Void) return v;
    bool to_float = to.base == BaseType::Float;
    if (v.immediate) {
      return imm(to_float ? Value::of_float(v.value.as_float()) : Value::of_int(v.value.as_int()));
    }
    int t = new_slot();
    IrOp& o = emit(to_float ? Opcode::ToFloat : Opcode::ToInt, at);
    o.dst = t;
    o.args = {v};
    return slot(t);
  }

  Operand typed(const Expr& e, CType to) { return coerce(expr(e), type_of(e), to, e.span); }

  // ---- statements ----
  void block_items(const std::vector<StmtPtr>& items) {
    for (const auto& s : items) stmt(*s);
  }

  void scoped(const Stmt& s) {
    scopes_.emplace_back();
    stmt(s);
    scopes_.pop_back();
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Empty: return;
      case StmtKind::Block:
        scopes_.emplace_back();
        block_items(s.items);
        scopes_.pop_back();
        return;
      case StmtKind::Decl: declaration(s); return;
      case StmtKind::Expr: expr(*s.expr); return;
      case StmtKind::If: {
        Operand c = expr(*s.expr);
        std::size_t jz = here();
        emit(Opcode::JumpIfZero, s.span).args = {c};
        scoped(*s.then_branch);
        if (s.else_branch) {
          std::size_t jend = here();
          emit(Opcode::Jump, s.span);
          fn_.code[jz].target = static_cast<int>(here());
          scoped(*s.else_branch);
          fn_.code[jend].target = static_cast<int>(here());
        } else {
          fn_.code[jz].target = static_cast<int>(here());
        }
        return;
      }
      case StmtKind::While: {
        std::size_t top = here();
        Operand c = expr(*s.expr);
        std::size_t jz = here();
        emit(Opcode::JumpIfZero, s.span).args = {c};
        loops_.emplace_back();
        scoped(*s.then_branch);
        emit(Opcode::Jump, s.span).target = static_cast<int>(top);
        close_loop(top, jz);
        return;
      }
      case StmtKind::For: {
        scopes_.emplace_back();
        if (s.init) stmt(*s.init);
        std::size_t top = here();
        std::size_t jz = SIZE_MAX;
        if (s.expr) {
          Operand c = expr(*s.expr);
          jz = here();
          emit(Opcode::JumpIfZero, s.span).args = {c};
        }
        loops_.emplace_back();
        scoped(*s.then_branch);
        std::size_t cont = here();
        if (s.step) expr(*s.step);
        emit(Opcode::Jump, s.span).target = static_cast<int>(top);
        close_loop(cont, jz);
        scopes_.pop_back();
        return;
      }
      case StmtKind::Break:
        loops_.back().breaks.push_back(here());
        emit(Opcode::Jump, s.span);
        return;
      case StmtKind::Continue:
        loops_.back().continues.push_back(here());
        emit(Opcode::Jump, s.span);
        return;
      case StmtKind::Return: {
        if (fn_.is_thread || !s.expr) {
          emit(Opcode::Return, s.span);
          return;
        }
        Operand v = typed(*s.expr, fn_.result);
        emit(Opcode::Return, s.span).args = {v};
        return;
      }
      case StmtKind::IndexDecl: {
        int t = new_slot();
        emit(Opcode::Index, s.span).dst = t;
        scopes_.back().vars[s.name] = Var{t, kInt};
        return;
      }
      case StmtKind::SetP:
        if (const Param* p = param(s.name)) {
          Operand v = typed(*s.expr, p->type);
          IrOp& w = emit(Opcode::Write, s.span);
          w.channel = p->channel;
          w.args = {v};
          return;
        }
        put(s);
        return;
      case StmtKind::SetA: put(s); return;
      case StmtKind::Create: create(*s.create); return;
    }
  }

  void close_loop(std::size_t continue_target, std::size_t exit_jump) {
    Loop l = std::move(loops_.back());
    loops_.pop_back();
    int end = static_cast<int>(here());
    if (exit_jump != SIZE_MAX) fn_.code[exit_jump].target = end;
    for (auto b : l.breaks) fn_.code[b].target = end;
    for (auto c : l.continues) fn_.code[c].target = static_cast<int>(continue_target);
  }

  void put(const Stmt& s) {
    Arg* a = arg(s.name);
    if (!a) throw std::logic_error("lower: unknown channel argument " + s.name);
    Operand v = typed(*s.expr, a->type);
    IrOp& p = emit(Opcode::Put, s.span);
    p.channel = a->channel;
    p.args = {slot(a->ctx), v};
  }

  void declaration(const Stmt& s) {
    for (const auto& d : s.declarators) {
      CType t{s.type.base, d.pointer || d.array_size.has_value()};
      int sl = new_slot();
      if (d.array_size) {
        IrOp& n = emit(Opcode::NewArray, d.span);
        n.dst = sl;
        n.args = {imm(Value::of_int(*d.array_size))};
        n.flag = s.type.base == BaseType::Float;
        CType elem{s.type.base, false};
        for (std::size_t i = 0; i < d.init_list.size(); ++i) {
          Operand v = typed(*d.init_list[i], elem);
          emit(Opcode::Store, d.span).args = {slot(sl), imm(Value::of_int(static_cast<std::int64_t>(i))), v};
        }
      } else if (d.init) {
        Operand v = typed(*d.init, t);
        IrOp& m = emit(Opcode::Move, d.span);
        m.dst = sl;
        m.args = {v};
      } else {
        IrOp& m = emit(Opcode::Const, d.span);
        m.dst = sl;
        m.args = {imm(t.base == BaseType::Float && !t.pointer ? Value::of_float(0) : Value::of_int(0))};
      }
      scopes_.back().vars[d.name] = Var{sl, t};
    }
  }

  void create(const CreateConstruct& c) {
    const ThreadSymbol* target = syms_.thread(c.target);
    if (!target) throw std::logic_error("lower: unresolved thread function " + c.target);

    int ctx = new_slot();
    Operand place = c.placement ? typed(*c.placement, kInt) : imm(Value::of_int(0));
    IrOp& al = emit(Opcode::Allocate, c.span);
    al.dst = ctx;
    al.args = {place};
    if (c.specifier == CreateSpecifier::Exclusive) {
      al.kind = ContextKind::Exclusive;
      al.mode = FailureMode::Wait;
    } else if (c.specifier == CreateSpecifier::ForceWait) {
      al.mode = FailureMode::Wait;
    } else if (c.specifier == CreateSpecifier::ForceSeq) {
      al.mode = FailureMode::ForceSeq;
    }

    auto range = [&](const ExprPtr& e, std::int64_t dflt) {
      return e ? typed(*e, kInt) : imm(Value::of_int(dflt));
    };
    Operand start = range(c.start, 0);
    Operand limit = range(c.limit, 1);
    Operand step = range(c.step, 1);
    Operand ws = range(c.window, 0);
    IrOp& cf = emit(Opcode::Configure, c.span);
    cf.args = {slot(ctx), start, limit, step, ws};
    cf.signature = target->signature;

    std::set<std::string> named;
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      const auto& a = c.args[i];
      CType t = ctype_from_text(a.type_text).value_or(kInt);
      if (a.init) {
        Operand v = typed(*a.init, t);
        IrOp& p = emit(Opcode::Put, a.span);
        p.channel = static_cast<int>(i);
        p.args = {slot(ctx), v};
      }
      if (a.name) {
        scopes_.back().args[*a.name] = Arg{ctx, static_cast<int>(i), t};
        if (!param(*a.name)) named.insert(*a.name);
      }
    }

    std::size_t last_feed = 0;
    for (std::size_t i = 0; i < c.body.size(); ++i)
      if (feeds(*c.body[i], named)) last_feed = i + 1;
    for (std::size_t i = 0; i < last_feed; ++i) stmt(*c.body[i]);
    IrOp& cr = emit(Opcode::Create, c.span);
    cr.args = {slot(ctx)};
    cr.name = c.target;
    for (std::size_t i = last_feed; i < c.body.size(); ++i) stmt(*c.body[i]);

    if (c.terminator == Terminator::Sync) {
      emit(Opcode::Sync, c.terminator_span).args = {slot(ctx)};
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        const auto& a = c.args[i];
        if (!a.name || !reads_.count(*a.name)) continue;
        Arg* rec = arg(*a.name);
        if (!rec || rec->ctx != ctx) continue;
        rec->final_slot = new_slot();
        IrOp& g = emit(Opcode::Get, c.terminator_span);
        g.dst = rec->final_slot;
        g.channel = static_cast<int>(i);
        g.args = {slot(ctx)};
      }
      emit(Opcode::Release, c.terminator_span).args = {slot(ctx)};
    } else {
      IrOp& r = emit(Opcode::Release, c.terminator_span);
      r.args = {slot(ctx)};
      r.flag = true;
    }
  }

  // ---- expressions ----
  Operand temp_op(Opcode op, const SourceSpan& at, std::vector<Operand> args, const std::string& name = {}) {
    int t = new_slot();
    IrOp& o = emit(op, at);
    o.dst = t;
    o.args = std::move(args);
    o.name = name;
    return slot(t);
  }

  Operand expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit: return imm(Value::of_int(std::strtoll(e.text.c_str(), nullptr, 0)));
      case ExprKind::FloatLit: return imm(Value::of_float(std::strtod(e.text.c_str(), nullptr)));
      case ExprKind::StrLit: return imm(Value::of_int(0));
      case ExprKind::Var: {
        const Var* v = var(e.text);
        if (!v) throw std::logic_error("lower: unknown variable " + e.text);
        return slot(v->slot);
      }
      case ExprKind::Index: {
        Operand base = expr(*e.args[0]);
        Operand idx = typed(*e.args[1], kInt);
        return temp_op(Opcode::Load, e.span, {base, idx});
      }
      case ExprKind::Call: return call(e);
      case ExprKind::Unary: {
        Operand a = expr(*e.args[0]);
        if (e.text == "+") return a;
        return temp_op(Opcode::Unary, e.span, {a}, e.text);
      }
      case ExprKind::Binary:
        if (e.text == "&&" || e.text == "||") return logical(e);
        {
          Operand l = expr(*e.args[0]);
          Operand r = expr(*e.args[1]);
          return temp_op(Opcode::Binary, e.span, {l, r}, e.text);
        }
      case ExprKind::Assign: return assign(e);
      case ExprKind::IncDec: return incdec(e);
      case ExprKind::GetP:
        if (const Param* p = param(e.text)) {
          int t = new_slot();
          IrOp& r = emit(Opcode::Read, e.span);
          r.dst = t;
          r.channel = p->channel;
          return slot(t);
        }
        [[fallthrough]];
      case ExprKind::GetA: {
        Arg* a = arg(e.text);
        if (!a || a->final_slot < 0) throw std::logic_error("lower: channel " + e.text + " read before sync");
        return slot(a->final_slot);
      }
    }
    return imm(Value::of_int(0));
  }

  Operand logical(const Expr& e) {
    bool is_and = e.text == "&&";
    int t = new_slot();
    Operand l = expr(*e.args[0]);
    std::vector<std::size_t> to_false, to_true;
    if (is_and) {
      to_false.push_back(here());
      emit(Opcode::JumpIfZero, e.span).args = {l};
    } else {
      std::size_t jz = here();
      emit(Opcode::JumpIfZero, e.span).args = {l};
      to_true.push_back(here());
      emit(Opcode::Jump, e.span);
      fn_.code[jz].target = static_cast<int>(here());
    }
    Operand r = expr(*e.args[1]);
    to_false.push_back(here());
    emit(Opcode::JumpIfZero, e.span).args = {r};
    for (auto j : to_true) fn_.code[j].target = static_cast<int>(here());
    IrOp& one = emit(Opcode::Const, e.span);
    one.dst = t;
    one.args = {imm(Value::of_int(1))};
    std::size_t jend = here();
    emit(Opcode::Jump, e.span);
    for (auto j : to_false) fn_.code[j].target = static_cast<int>(here());
    IrOp& zero = emit(Opcode::Const, e.span);
    zero.dst = t;
    zero.args = {imm(Value::of_int(0))};
    fn_.code[jend].target = static_cast<int>(here());
    return slot(t);
  }

  // Stores `v` (already of the lvalue's type) into the lvalue.
  void store(const Expr& lv, Operand v, const Operand* base = nullptr, const Operand* idx = nullptr) {
    if (lv.kind == ExprKind::Var) {
      IrOp& m = emit(Opcode::Move, lv.span);
      m.dst = var(lv.text)->slot;
      m.args = {v};
      return;
    }
    emit(Opcode::Store, lv.span).args = {*base, *idx, v};
  }

  Operand assign(const Expr& e) {
    const Expr& lv = *e.args[0];
    CType lt = type_of(lv);
    Operand base, idx;
    if (lv.kind == ExprKind::Index) {
      base = expr(*lv.args[0]);
      idx = typed(*lv.args[1], kInt);
    }
    Operand v;
    if (e.text == "=") {
      v = typed(*e.args[1], lt);
    } else {
      Operand cur = lv.kind == ExprKind::Var ? slot(var(lv.text)->slot) : temp_op(Opcode::Load, lv.span, {base, idx});
      Operand r = expr(*e.args[1]);
      Operand res = temp_op(Opcode::Binary, e.span, {cur, r}, e.text.substr(0, e.text.size() - 1));
      CType rt = (lt.base == BaseType::Float || type_of(*e.args[1]).base == BaseType::Float) ? kFloat : kInt;
      v = coerce(res, rt, lt, e.span);
    }
    store(lv, v, &base, &idx);
    return lv.kind == ExprKind::Var ? slot(var(lv.text)->slot) : v;
  }

  Operand incdec(const Expr& e) {
    const Expr& lv = *e.args[0];
    Operand base, idx, cur;
    if (lv.kind == ExprKind::Index) {
      base = expr(*lv.args[0]);
      idx = typed(*lv.args[1], kInt);
      cur = temp_op(Opcode::Load, lv.span, {base, idx});
    } else {
      cur = temp_op(Opcode::Move, lv.span, {slot(var(lv.text)->slot)});
    }
    Operand next = temp_op(Opcode::Binary, e.span, {cur, imm(Value::of_int(1))}, e.text == "++" ? "+" : "-");
    store(lv, next, &base, &idx);
    return e.prefix ? next : cur;
  }

  Operand call(const Expr& e) {
    const std::string& n = e.text;
    auto print = [&](Opcode op, CType t) {
      Operand v = typed(*e.args[0], t);
      emit(op, e.span).args = {v};
      return imm(Value::of_int(0));
    };
    if (n == "print_int") return print(Opcode::PrintInt, kInt);
    if (n == "print_float") return print(Opcode::PrintFloat, kFloat);
    if (n == "print_str") {
      prog_.strings.push_back(unescape_string(e.args[0]->text));
      emit(Opcode::PrintStr, e.span).channel = static_cast<int>(prog_.strings.size() - 1);
      return imm(Value::of_int(0));
    }
    if (n == "sl_default_placement") return temp_op(Opcode::PlaceDefault, e.span, {});
    if (n == "sl_local_processor_address") return temp_op(Opcode::PlaceLocal, e.span, {});
    if (n == "sl_placement_size") return temp_op(Opcode::PlaceSize, e.span, {typed(*e.args[0], kInt)});
    if (n == "sl_first_processor_address") return temp_op(Opcode::PlaceFirst, e.span, {typed(*e.args[0], kInt)});
    if (n == "sl_placement") {
      Operand l = typed(*e.args[0], kInt);
      Operand s = typed(*e.args[1], kInt);
      return temp_op(Opcode::PlaceMake, e.span, {l, s});
    }
    const CFunction* fn = syms_.function(n);
    if (!fn) throw std::logic_error("lower: unknown function " + n);
    std::vector<Operand> args;
    for (std::size_t i = 0; i < e.args.size(); ++i) args.push_back(typed(*e.args[i], fn->params[i].type));
    IrOp& c = emit(Opcode::Call, e.span);
    c.name = n;
    c.args = std::move(args);
    bool is_void = fn->return_type.base == BaseType::Void && !fn->return_type.pointer;
    if (is_void) return imm(Value::of_int(0));
    int t = new_slot();
    fn_.code.back().dst = t;
    return slot(t);
  }

  IrProgram& prog_;
  IrFunction& fn_;
  const SymbolTable& syms_;
  const ExprTypes& types_;
  std::map<std::string, Param> params_;
  std::set<std::string> reads_;
  std::vector<Scope> scopes_;
  std::vector<Loop> loops_;
};

}  // namespace

IrProgram lower(const AstProgram& program, const SymbolTable& symbols) {
  ExprTypes types = expression_types(program, symbols);
  IrProgram prog;
  for (const auto& item : program.items) {
    if (auto* def = std::get_if<ThreadFunctionDef>(&item)) {
      IrFunction& fn = prog.functions[def->name];
      fn.name = def->name;
      FunctionLowerer(prog, fn, symbols, types).thread(*def);
    } else if (auto* cf = std::get_if<CFunction>(&item)) {
      if (cf->is_prototype) continue;
      IrFunction& fn = prog.functions[cf->name];
      fn.name = cf->name;
      FunctionLowerer(prog, fn, symbols, types).function(*cf);
    }
  }
  return prog;
}

}  // namespace slmini
