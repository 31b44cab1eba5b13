#include "slmini/printer.hpp"

namespace slmini {
namespace {

bool is_compound(const Expr& e) {
  return e.kind == ExprKind::Binary || e.kind == ExprKind::Unary || e.kind == ExprKind::Assign ||
         e.kind == ExprKind::IncDec;
}

std::string expr_text(const Expr& e, bool top) {
  std::string out;
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
    case ExprKind::StrLit:
    case ExprKind::Var: return e.text;
    case ExprKind::GetP: return "sl_getp(" + e.text + ")";
    case ExprKind::GetA: return "sl_geta(" + e.text + ")";
    case ExprKind::Index: return expr_text(*e.args[0], false) + "[" + expr_text(*e.args[1], true) + "]";
    case ExprKind::Call: {
      out = e.text + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        out += expr_text(*e.args[i], true);
      }
      return out + ")";
    }
    case ExprKind::Unary: out = e.text + expr_text(*e.args[0], false); break;
    case ExprKind::IncDec:
      out = e.prefix ? e.text + expr_text(*e.args[0], false) : expr_text(*e.args[0], false) + e.text;
      break;
    case ExprKind::Binary:
    case ExprKind::Assign:
      out = expr_text(*e.args[0], false) + " " + e.text + " " + expr_text(*e.args[1], false);
      break;
  }
  return top || !is_compound(e) ? out : "(" + out + ")";
}

std::string endpoint_text(const ChannelEndpoint& ep) {
  std::string kw = ep.direction == Direction::Global ? "sl_gl" : "sl_sh";
  if (ep.float_keyword) kw += "f";
  kw += ep.spelled_as_arg ? "arg" : "parm";
  std::string out = kw + "(" + ep.type_text + ", " + ep.name.value_or("");
  if (ep.init) out += ", " + expr_text(*ep.init, true);
  return out + ")";
}

std::string thread_header(const std::string& kw, const std::string& name, bool is_static,
                          const std::vector<ChannelEndpoint>& params) {
  std::string out = kw + "(" + name;
  if (is_static || !params.empty()) out += is_static ? ", sl__static" : ", ";
  for (const auto& p : params) out += ", " + endpoint_text(p);
  return out + ")";
}

class Printer {
 public:
  std::string run(const AstProgram& prog) {
    for (std::size_t i = 0; i < prog.items.size(); ++i) {
      if (i) out_ += "\n";
      std::visit([this](const auto& item) { top(item); }, prog.items[i]);
    }
    return out_;
  }

 private:
  void line(const std::string& text) {
    out_.append(static_cast<std::size_t>(indent_) * 2, ' ');
    out_ += text;
    out_ += "\n";
  }

  void top(const ThreadFunctionDef& def) {
    line(thread_header("sl_def", def.name, def.is_static, def.params));
    block(def.body);
    line("sl_enddef");
  }

  void top(const ThreadFunctionDecl& decl) {
    line(thread_header("sl_decl", decl.name, decl.is_static, decl.params) + ";");
  }

  void top(const CFunction& fn) {
    std::string head = fn.return_type_text + " " + fn.name + "(";
    if (fn.params.empty()) head += "void";
    for (std::size_t i = 0; i < fn.params.size(); ++i) {
      if (i) head += ", ";
      head += fn.params[i].type_text + " " + fn.params[i].name;
    }
    head += ")";
    if (fn.is_prototype) {
      line(head + ";");
      return;
    }
    line(head);
    block(fn.body);
  }

  void block(const std::vector<StmtPtr>& items) {
    line("{");
    ++indent_;
    for (const auto& s : items) stmt(*s);
    --indent_;
    line("}");
  }

  std::string decl_text(const Stmt& s) {
    std::string out = s.type_text + " ";
    for (std::size_t i = 0; i < s.declarators.size(); ++i) {
      const Declarator& d = s.declarators[i];
      if (i) out += ", ";
      if (d.pointer) out += "*";
      out += d.name;
      if (d.array_size) out += "[" + std::to_string(*d.array_size) + "]";
      if (d.init) out += " = " + expr_text(*d.init, true);
      if (d.has_init_list) {
        out += " = {";
        for (std::size_t k = 0; k < d.init_list.size(); ++k) {
          if (k) out += ", ";
          out += expr_text(*d.init_list[k], true);
        }
        out += "}";
      }
    }
    return out;
  }

  void nested(const Stmt& s) {
    if (s.kind == StmtKind::Block) {
      stmt(s);
      return;
    }
    ++indent_;
    stmt(s);
    --indent_;
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Block: block(s.items); break;
      case StmtKind::Empty: line(";"); break;
      case StmtKind::Decl: line(decl_text(s) + ";"); break;
      case StmtKind::Expr: line(expr_text(*s.expr, true) + ";"); break;
      case StmtKind::Return: line(s.expr ? "return " + expr_text(*s.expr, true) + ";" : "return;"); break;
      case StmtKind::Break: line("break;"); break;
      case StmtKind::Continue: line("continue;"); break;
      case StmtKind::IndexDecl: line("sl_index(" + s.name + ");"); break;
      case StmtKind::SetP: line("sl_setp(" + s.name + ", " + expr_text(*s.expr, true) + ");"); break;
      case StmtKind::SetA: line("sl_seta(" + s.name + ", " + expr_text(*s.expr, true) + ");"); break;
      case StmtKind::If:
        line("if (" + expr_text(*s.expr, true) + ")");
        nested(*s.then_branch);
        if (s.else_branch) {
          line("else");
          nested(*s.else_branch);
        }
        break;
      case StmtKind::While:
        line("while (" + expr_text(*s.expr, true) + ")");
        nested(*s.then_branch);
        break;
      case StmtKind::For: {
        std::string init;
        if (s.init) init = s.init->kind == StmtKind::Decl ? decl_text(*s.init) : expr_text(*s.init->expr, true);
        line("for (" + init + "; " + (s.expr ? expr_text(*s.expr, true) : "") + "; " +
             (s.step ? expr_text(*s.step, true) : "") + ")");
        nested(*s.then_branch);
        break;
      }
      case StmtKind::Create: create(*s.create); break;
    }
  }

  void create(const CreateConstruct& c) {
    auto slot = [](const ExprPtr& e) { return e ? expr_text(*e, true) : std::string(); };
    std::string head = "sl_create(, " + slot(c.placement) + ", " + slot(c.start) + ", " + slot(c.limit) + ", " +
                       slot(c.step) + ", " + slot(c.window) + ", " +
                       (c.specifier ? std::string(to_string(*c.specifier)) : std::string()) + ", " + c.target;
    for (const auto& a : c.args) head += ", " + endpoint_text(a);
    line(head + ");");
    ++indent_;
    for (const auto& s : c.body) stmt(*s);
    --indent_;
    line(c.terminator == Terminator::Sync ? "sl_sync();" : "sl_detach();");
  }

  std::string out_;
  int indent_ = 0;
};

}  // namespace

std::string print_expr(const Expr& expr) { return expr_text(expr, true); }

std::string print_ast(const AstProgram& program) { return Printer().run(program); }

}  // namespace slmini
