#include "slmini/parser.hpp"

#include <array>
#include <charconv>

namespace slmini {
namespace {

constexpr std::array kTypedefNames = {"size_t", "ssize_t", "ptrdiff_t", "int64_t", "int32_t",
                                      "uint64_t", "uint32_t", "sl_place_t", "sl_placement_t"};

constexpr std::array kTypeKeywords = {"int", "long", "short", "char", "unsigned", "signed",
                                      "float", "double", "void", "const"};

bool is_typedef_name(const Token& t) {
  if (t.kind != TokenKind::Identifier) return false;
  for (std::string_view n : kTypedefNames)
    if (n == t.text) return true;
  return false;
}

bool is_type_keyword(const Token& t) {
  if (t.kind != TokenKind::Keyword) return false;
  for (std::string_view n : kTypeKeywords)
    if (n == t.text) return true;
  return false;
}

bool starts_type(const Token& t) { return is_type_keyword(t) || is_typedef_name(t); }

bool is_arg_keyword(const Token& t) {
  return t.is_keyword("sl_glarg") || t.is_keyword("sl_sharg") || t.is_keyword("sl_glfarg") ||
         t.is_keyword("sl_shfarg");
}

bool is_parm_keyword(const Token& t) {
  return t.is_keyword("sl_glparm") || t.is_keyword("sl_shparm") || t.is_keyword("sl_glfparm") ||
         t.is_keyword("sl_shfparm");
}

std::optional<CreateSpecifier> specifier_of(const Token& t) {
  if (t.is_keyword("sl__exclusive")) return CreateSpecifier::Exclusive;
  if (t.is_keyword("sl__forceseq")) return CreateSpecifier::ForceSeq;
  if (t.is_keyword("sl__forcewait")) return CreateSpecifier::ForceWait;
  return std::nullopt;
}

std::string normalize_type(TokenSlice toks) {
  std::string out;
  for (const Token& t : toks) {
    if (t.is_punct("*")) {
      out += "*";
      continue;
    }
    if (!out.empty()) out += " ";
    out += t.text;
  }
  return out;
}

[[noreturn]] void fail(const SourceSpan& at, const std::string& msg, const std::string& code = "E_SYNTAX") {
  throw CompileError(Diagnostic{Severity::Error, code, msg, at});
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string file, std::vector<Diagnostic>* warnings)
      : toks_(std::move(tokens)), file_(std::move(file)), warnings_(warnings) {}

  AstProgram program() {
    AstProgram prog;
    prog.file = file_;
    while (!at_end()) prog.items.push_back(top_level());
    return prog;
  }

  ExprPtr whole_expression() {
    ExprPtr e = expression();
    if (!at_end()) fail(cur().span, "unexpected '" + cur().text + "' in expression");
    return e;
  }

 private:
  // ---- token cursor ----
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at_end() const { return cur().kind == TokenKind::End; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (!at_end()) ++pos_;
    return t;
  }
  bool accept_punct(std::string_view p) {
    if (cur().is_punct(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect_punct(std::string_view p, std::string_view context) {
    if (!cur().is_punct(p))
      fail(cur().span, "expected '" + std::string(p) + "' " + std::string(context) + ", found " + describe(cur()));
    return take();
  }
  std::string expect_identifier(std::string_view context) {
    if (cur().kind != TokenKind::Identifier)
      fail(cur().span, "expected identifier " + std::string(context) + ", found " + describe(cur()));
    return take().text;
  }
  static std::string describe(const Token& t) {
    return t.kind == TokenKind::End ? std::string("end of input") : "'" + t.text + "'";
  }

  // Tokens between the parentheses following the SL keyword at pos_;
  // leaves pos_ after the closing parenthesis.
  TokenSlice construct_arguments() {
    const Token& kw = take();
    if (!cur().is_punct("(")) fail(cur().span, "expected '(' after " + kw.text);
    std::size_t open = pos_;
    std::size_t close = find_closing(toks_, open);
    pos_ = close + 1;
    return TokenSlice(toks_).subspan(open + 1, close - open - 1);
  }

  SourceSpan slice_span(TokenSlice s, const SourceSpan& fallback) const {
    return s.empty() ? fallback : s.front().span;
  }

  ExprPtr slice_expression(TokenSlice s) {
    if (s.empty()) return nullptr;
    std::vector<Token> sub(s.begin(), s.end());
    sub.push_back(Token{TokenKind::End, "", s.back().span});
    Parser p(std::move(sub), file_, warnings_);
    return p.whole_expression();
  }

  static std::string slice_identifier(TokenSlice s, const SourceSpan& at, std::string_view what) {
    if (s.size() != 1 || s[0].kind != TokenKind::Identifier)
      fail(s.empty() ? at : s[0].span, "expected identifier for " + std::string(what));
    return s[0].text;
  }

  // ---- top level ----
  TopLevel top_level() {
    if (cur().is_keyword("sl_def")) return thread_definition();
    if (cur().is_keyword("sl_decl")) return thread_declaration();
    if (starts_type(cur())) return c_function();
    fail(cur().span, "expected a thread function, declaration or C function, found " + describe(cur()));
  }

  // Parses "name [, [sl__static] [, endpoint]*]" slices.
  void thread_header(TokenSlice args, const SourceSpan& at, bool is_decl, std::string& name, bool& is_static,
                     std::vector<ChannelEndpoint>& params) {
    auto slices = split_arguments(args);
    if (slices.empty()) fail(at, "thread function without a name");
    name = slice_identifier(slices[0], at, "thread function name");
    if (slices.size() >= 2) {
      TokenSlice spec = slices[1];
      if (spec.size() == 1 && spec[0].is_keyword("sl__static")) {
        is_static = true;
      } else if (!spec.empty()) {
        fail(spec[0].span, "expected empty slot or sl__static before channel parameters");
      }
    }
    for (std::size_t i = 2; i < slices.size(); ++i) params.push_back(endpoint(slices[i], at, is_decl ? 2 : 1));
  }

  // mode 1: parameter (sl_*parm only), mode 2: declaration (either spelling),
  // mode 3: create argument (sl_*arg only)
  ChannelEndpoint endpoint(TokenSlice s, const SourceSpan& at, int mode) {
    if (s.empty()) fail(at, "empty channel slot");
    const Token& kw = s[0];
    bool arg = is_arg_keyword(kw);
    bool parm = is_parm_keyword(kw);
    if ((mode == 1 && !parm) || (mode == 3 && !arg) || (mode == 2 && !arg && !parm))
      fail(kw.span, mode == 3 ? "expected sl_glarg, sl_sharg, sl_glfarg or sl_shfarg, found '" + kw.text + "'"
                              : "expected a channel parameter (sl_glparm, sl_shparm, ...), found '" + kw.text + "'");
    if (s.size() < 2 || !s[1].is_punct("(")) fail(kw.span, "expected '(' after " + kw.text);
    std::size_t close = find_closing(s, 1);
    if (close + 1 != s.size()) fail(s[close + 1].span, "unexpected '" + s[close + 1].text + "' after " + kw.text);
    auto parts = split_arguments(s.subspan(2, close - 2));

    ChannelEndpoint ep;
    ep.span = kw.span;
    ep.spelled_as_arg = arg;
    ep.direction = (kw.text == "sl_shparm" || kw.text == "sl_shfparm" || kw.text == "sl_sharg" || kw.text == "sl_shfarg")
                       ? Direction::Shared
                       : Direction::Global;
    ep.float_keyword =
        kw.text == "sl_glfparm" || kw.text == "sl_shfparm" || kw.text == "sl_glfarg" || kw.text == "sl_shfarg";
    if (parts.empty() || parts[0].empty()) fail(kw.span, "missing type in " + kw.text);
    ep.type_text = normalize_type(parts[0]);
    if (!arg) {
      if (parts.size() != 2) fail(kw.span, kw.text + " takes a type and a name");
      ep.name = slice_identifier(parts[1], kw.span, "channel name");
      return ep;
    }
    if (parts.size() < 2 || parts.size() > 3) fail(kw.span, kw.text + " takes a type, an optional name and an optional value");
    if (!parts[1].empty()) ep.name = slice_identifier(parts[1], kw.span, "channel name");
    if (parts.size() == 3) {
      if (parts[2].empty()) fail(kw.span, "empty initializer in " + kw.text);
      if (mode == 2) fail(parts[2][0].span, "declarations cannot carry channel values");
      ep.init = slice_expression(parts[2]);
    }
    return ep;
  }

  ThreadFunctionDef thread_definition() {
    ThreadFunctionDef def;
    def.span = cur().span;
    TokenSlice args = construct_arguments();
    thread_header(args, def.span, false, def.name, def.is_static, def.params);
    if (!cur().is_punct("{")) fail(cur().span, "expected '{' to open the body of thread function " + def.name);
    def.body = compound_items();
    if (cur().is_keyword("sl_enddef")) {
      take();
      accept_punct(";");
      return def;
    }
    std::string hint = cur().kind == TokenKind::Identifier && cur().text == "sl_endif" ? " (did you mean sl_enddef?)" : "";
    fail(cur().span, "missing sl_enddef after the body of thread function " + def.name + hint, "E_MISSING_ENDDEF");
  }

  ThreadFunctionDecl thread_declaration() {
    ThreadFunctionDecl decl;
    decl.span = cur().span;
    TokenSlice args = construct_arguments();
    thread_header(args, decl.span, true, decl.name, decl.is_static, decl.params);
    expect_punct(";", "after sl_decl(...)");
    return decl;
  }

  std::string type_spec(CType& type) {
    SourceSpan at = cur().span;
    std::size_t begin = pos_;
    if (is_typedef_name(cur())) {
      take();
    } else {
      while (is_type_keyword(cur())) take();
    }
    std::string text = normalize_type(TokenSlice(toks_).subspan(begin, pos_ - begin));
    auto t = ctype_from_text(text);
    if (!t) fail(at, "unsupported type '" + text + "'");
    type = *t;
    return text;
  }

  CFunction c_function() {
    CFunction fn;
    fn.span = cur().span;
    fn.return_type_text = type_spec(fn.return_type);
    if (accept_punct("*")) {
      fn.return_type.pointer = true;
      fn.return_type_text += "*";
    }
    fn.span = cur().span;
    fn.name = expect_identifier("for function name");
    expect_punct("(", "after function name");
    if (cur().is_keyword("void") && peek().is_punct(")")) take();
    if (!cur().is_punct(")")) {
      while (true) {
        CParam p;
        p.span = cur().span;
        if (!starts_type(cur())) fail(cur().span, "expected parameter type, found " + describe(cur()));
        p.type_text = type_spec(p.type);
        if (accept_punct("*")) {
          p.type.pointer = true;
          p.type_text += "*";
        }
        p.name = expect_identifier("for parameter name");
        if (accept_punct("[")) {
          expect_punct("]", "in array parameter");
          p.type.pointer = true;
          p.type_text += "*";
        }
        if (p.type.base == BaseType::Void && !p.type.pointer) fail(p.span, "parameter of type void");
        fn.params.push_back(std::move(p));
        if (!accept_punct(",")) break;
      }
    }
    expect_punct(")", "after parameters");
    if (accept_punct(";")) {
      fn.is_prototype = true;
      return fn;
    }
    if (!cur().is_punct("{")) fail(cur().span, "expected '{' to open the body of " + fn.name);
    fn.body = compound_items();
    return fn;
  }

  // ---- statements ----
  std::vector<StmtPtr> compound_items() {
    expect_punct("{", "");
    std::vector<StmtPtr> items;
    while (!cur().is_punct("}")) {
      if (at_end()) fail(cur().span, "unexpected end of input inside block");
      items.push_back(statement(true));
    }
    take();
    return items;
  }

  StmtPtr make(StmtKind kind, const SourceSpan& at) {
    auto s = std::make_unique<Stmt>();
    s->kind = kind;
    s->span = at;
    return s;
  }

  bool starts_declaration() const {
    if (is_type_keyword(cur())) return true;
    return is_typedef_name(cur()) && (peek().kind == TokenKind::Identifier || peek().is_punct("*"));
  }

  StmtPtr statement(bool block_item) {
    const Token& t = cur();
    SourceSpan at = t.span;
    if (t.is_punct("{")) {
      auto s = make(StmtKind::Block, at);
      s->items = compound_items();
      return s;
    }
    if (t.is_punct(";")) {
      take();
      return make(StmtKind::Empty, at);
    }
    if (t.is_keyword("sl_create")) {
      if (!block_item)
        fail(at, "create construct must appear within a compound statement", "E_CREATE_NOT_BLOCK_ITEM");
      return create_construct();
    }
    if (t.is_keyword("sl_sync") || t.is_keyword("sl_detach"))
      fail(at, t.text + " without a matching sl_create");
    if (starts_declaration()) {
      if (!block_item) fail(at, "a declaration is not a statement; wrap it in braces");
      auto s = declaration();
      expect_punct(";", "after declaration");
      return s;
    }
    if (t.is_keyword("if")) {
      take();
      auto s = make(StmtKind::If, at);
      expect_punct("(", "after if");
      s->expr = expression();
      expect_punct(")", "after if condition");
      s->then_branch = statement(false);
      if (cur().is_keyword("else")) {
        take();
        s->else_branch = statement(false);
      }
      return s;
    }
    if (t.is_keyword("while")) {
      take();
      auto s = make(StmtKind::While, at);
      expect_punct("(", "after while");
      s->expr = expression();
      expect_punct(")", "after while condition");
      s->then_branch = statement(false);
      return s;
    }
    if (t.is_keyword("for")) {
      take();
      auto s = make(StmtKind::For, at);
      expect_punct("(", "after for");
      if (!cur().is_punct(";")) {
        if (starts_declaration()) {
          s->init = declaration();
        } else {
          auto e = make(StmtKind::Expr, cur().span);
          e->expr = expression();
          s->init = std::move(e);
        }
      }
      expect_punct(";", "in for header");
      if (!cur().is_punct(";")) s->expr = expression();
      expect_punct(";", "in for header");
      if (!cur().is_punct(")")) s->step = expression();
      expect_punct(")", "after for header");
      s->then_branch = statement(false);
      return s;
    }
    if (t.is_keyword("return")) {
      take();
      auto s = make(StmtKind::Return, at);
      if (!cur().is_punct(";")) s->expr = expression();
      expect_punct(";", "after return");
      return s;
    }
    if (t.is_keyword("break") || t.is_keyword("continue")) {
      take();
      auto s = make(t.text == "break" ? StmtKind::Break : StmtKind::Continue, at);
      expect_punct(";", "after " + t.text);
      return s;
    }
    if (t.is_keyword("sl_index")) {
      auto s = make(StmtKind::IndexDecl, at);
      auto parts = split_arguments(construct_arguments());
      if (parts.size() != 1) fail(at, "sl_index takes one identifier");
      s->name = slice_identifier(parts[0], at, "sl_index");
      expect_punct(";", "after sl_index(...)");
      return s;
    }
    if (t.is_keyword("sl_setp") || t.is_keyword("sl_seta")) {
      auto s = make(t.is_keyword("sl_setp") ? StmtKind::SetP : StmtKind::SetA, at);
      std::string kw = t.text;
      auto parts = split_arguments(construct_arguments());
      if (parts.size() != 2 || parts[1].empty()) fail(at, kw + " takes a channel name and a value");
      s->name = slice_identifier(parts[0], at, kw);
      s->expr = slice_expression(parts[1]);
      expect_punct(";", "after " + kw + "(...)");
      return s;
    }
    if (t.kind == TokenKind::Keyword && is_sl_keyword(t.text) && !t.is_keyword("sl_getp") && !t.is_keyword("sl_geta"))
      fail(at, "unexpected " + t.text + " here");
    if (t.kind == TokenKind::Keyword && (t.text == "do" || t.text == "else"))
      fail(at, "unexpected '" + t.text + "'");
    auto s = make(StmtKind::Expr, at);
    s->expr = expression();
    expect_punct(";", "after expression");
    return s;
  }

  StmtPtr declaration() {
    auto s = make(StmtKind::Decl, cur().span);
    s->type_text = type_spec(s->type);
    if (s->type.base == BaseType::Void) fail(s->span, "variables cannot have type void");
    while (true) {
      Declarator d;
      d.span = cur().span;
      d.pointer = accept_punct("*");
      d.span = cur().span;
      d.name = expect_identifier("in declaration");
      if (accept_punct("[")) {
        if (cur().kind != TokenKind::IntLiteral) fail(cur().span, "array size must be an integer literal");
        std::int64_t n = 0;
        auto [p, ec] = std::from_chars(cur().text.data(), cur().text.data() + cur().text.size(), n);
        if (ec != std::errc() || n <= 0) fail(cur().span, "invalid array size '" + cur().text + "'");
        take();
        d.array_size = n;
        expect_punct("]", "after array size");
        if (d.pointer) fail(d.span, "arrays of pointers are not supported");
      }
      if (accept_punct("=")) {
        if (cur().is_punct("{")) {
          take();
          d.has_init_list = true;
          if (!cur().is_punct("}")) {
            while (true) {
              d.init_list.push_back(assignment());
              if (!accept_punct(",")) break;
              if (cur().is_punct("}")) break;
            }
          }
          expect_punct("}", "after initializer list");
        } else {
          d.init = assignment();
        }
      }
      s->declarators.push_back(std::move(d));
      if (!accept_punct(",")) break;
    }
    return s;
  }

  StmtPtr create_construct() {
    SourceSpan at = cur().span;
    auto s = make(StmtKind::Create, at);
    auto c = std::make_unique<CreateConstruct>();
    c->span = at;
    TokenSlice inside = construct_arguments();
    auto slices = split_arguments(inside);
    std::size_t first_arg = slices.size();
    for (std::size_t i = 0; i < slices.size(); ++i) {
      if (!slices[i].empty() && is_arg_keyword(slices[i][0])) {
        first_arg = i;
        break;
      }
    }
    if (first_arg == 0) fail(at, "sl_create without a thread function", "E_CREATE_ARITY");
    std::size_t target = first_arg - 1;
    if (target > 7)
      fail(slice_span(slices[7], at), "too many parameter slots before the thread function (at most 7)",
           "E_CREATE_ARITY");
    if (target == 0) fail(at, "sl_create without parameter slots", "E_CREATE_ARITY");
    if (!slices[0].empty()) fail(slices[0][0].span, "the first slot of sl_create is reserved and must be empty",
                                 "E_CREATE_ARITY");
    ExprPtr* numeric[] = {nullptr, &c->placement, &c->start, &c->limit, &c->step, &c->window};
    for (std::size_t i = 1; i < target; ++i) {
      TokenSlice slot = slices[i];
      if (!slot.empty() && specifier_of(slot[0])) {
        if (i != 6 || slot.size() != 1) fail(slot[0].span, "create specifier " + slot[0].text + " out of place");
        c->specifier = specifier_of(slot[0]);
        continue;
      }
      if (i == 6) {
        if (!slot.empty()) fail(slot[0].span, "expected a create specifier in the seventh slot");
        continue;
      }
      *numeric[i] = slice_expression(slot);
    }
    if (target < 7 && (c->start || c->limit || c->step || c->window || c->specifier) && warnings_) {
      warnings_->push_back(Diagnostic{Severity::Warning, "W_SHORT_CREATE",
                                      "sl_create has " + std::to_string(target) +
                                          " parameter slots; missing trailing slots are taken as absent",
                                      at});
    }
    c->target_span = slice_span(slices[target], at);
    c->target = slice_identifier(slices[target], at, "the created thread function");
    for (std::size_t i = first_arg; i < slices.size(); ++i) c->args.push_back(endpoint(slices[i], at, 3));
    expect_punct(";", "after sl_create(...)");

    while (!(cur().is_keyword("sl_sync") || cur().is_keyword("sl_detach"))) {
      if (at_end() || cur().is_punct("}"))
        fail(at, "sl_create without a matching sl_sync() or sl_detach() in the same block", "E_MISSING_SYNC");
      c->body.push_back(statement(true));
    }
    c->terminator_span = cur().span;
    c->terminator = cur().is_keyword("sl_sync") ? Terminator::Sync : Terminator::Detach;
    std::string kw = cur().text;
    if (!construct_arguments().empty()) fail(c->terminator_span, kw + " takes no arguments");
    expect_punct(";", "after " + kw + "()");
    s->create = std::move(c);
    return s;
  }

  // ---- expressions ----
  ExprPtr node(ExprKind kind, std::string text, const SourceSpan& at) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->text = std::move(text);
    e->span = at;
    return e;
  }

  ExprPtr expression() { return assignment(); }

  ExprPtr assignment() {
    ExprPtr lhs = logical_or();
    const Token& t = cur();
    if (t.kind == TokenKind::Punct &&
        (t.text == "=" || t.text == "+=" || t.text == "-=" || t.text == "*=" || t.text == "/=" || t.text == "%=")) {
      if (lhs->kind != ExprKind::Var && lhs->kind != ExprKind::Index)
        fail(t.span, "left side of '" + t.text + "' is not assignable");
      SourceSpan at = t.span;
      std::string op = take().text;
      auto e = node(ExprKind::Assign, op, at);
      e->args.push_back(std::move(lhs));
      e->args.push_back(assignment());
      return e;
    }
    return lhs;
  }

  template <typename Next>
  ExprPtr binary_level(std::initializer_list<std::string_view> ops, Next next) {
    ExprPtr lhs = (this->*next)();
    while (true) {
      bool matched = false;
      for (std::string_view op : ops) {
        if (cur().is_punct(op)) {
          SourceSpan at = cur().span;
          take();
          auto e = node(ExprKind::Binary, std::string(op), at);
          e->args.push_back(std::move(lhs));
          e->args.push_back((this->*next)());
          lhs = std::move(e);
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  ExprPtr logical_or() { return binary_level({"||"}, &Parser::logical_and); }
  ExprPtr logical_and() { return binary_level({"&&"}, &Parser::equality); }
  ExprPtr equality() { return binary_level({"==", "!="}, &Parser::relational); }
  ExprPtr relational() { return binary_level({"<=", ">=", "<", ">"}, &Parser::additive); }
  ExprPtr additive() { return binary_level({"+", "-"}, &Parser::multiplicative); }
  ExprPtr multiplicative() { return binary_level({"*", "/", "%"}, &Parser::unary); }

  ExprPtr unary() {
    const Token& t = cur();
    SourceSpan at = t.span;
    if (t.is_punct("-") || t.is_punct("+") || t.is_punct("!")) {
      std::string op = take().text;
      auto e = node(ExprKind::Unary, op, at);
      e->args.push_back(unary());
      return e;
    }
    if (t.is_punct("++") || t.is_punct("--")) {
      std::string op = take().text;
      auto e = node(ExprKind::IncDec, op, at);
      e->prefix = true;
      ExprPtr target = unary();
      if (target->kind != ExprKind::Var && target->kind != ExprKind::Index)
        fail(at, "operand of '" + op + "' is not assignable");
      e->args.push_back(std::move(target));
      return e;
    }
    if (t.is_punct("&")) fail(at, "address-of is not part of the supported C subset");
    if (t.is_punct("*")) fail(at, "pointer dereference is not supported; index the array instead");
    if (t.is_punct("(") && starts_type(peek())) fail(at, "casts are not part of the supported C subset");
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (true) {
      SourceSpan at = cur().span;
      if (accept_punct("[")) {
        auto idx = node(ExprKind::Index, "", at);
        idx->args.push_back(std::move(e));
        idx->args.push_back(expression());
        expect_punct("]", "after array index");
        e = std::move(idx);
      } else if (cur().is_punct("++") || cur().is_punct("--")) {
        if (e->kind != ExprKind::Var && e->kind != ExprKind::Index)
          fail(at, "operand of '" + cur().text + "' is not assignable");
        auto inc = node(ExprKind::IncDec, take().text, at);
        inc->prefix = false;
        inc->args.push_back(std::move(e));
        e = std::move(inc);
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    const Token& t = cur();
    SourceSpan at = t.span;
    switch (t.kind) {
      case TokenKind::IntLiteral: {
        std::int64_t v = 0;
        bool hex = t.text.size() > 2 && (t.text[1] == 'x' || t.text[1] == 'X');
        const char* b = t.text.data() + (hex ? 2 : 0);
        auto [p, ec] = std::from_chars(b, t.text.data() + t.text.size(), v, hex ? 16 : 10);
        if (ec != std::errc()) fail(at, "integer literal '" + t.text + "' out of range");
        return node(ExprKind::IntLit, take().text, at);
      }
      case TokenKind::FloatLiteral: return node(ExprKind::FloatLit, take().text, at);
      case TokenKind::StringLiteral: return node(ExprKind::StrLit, take().text, at);
      case TokenKind::Identifier: {
        std::string name = take().text;
        if (!cur().is_punct("(")) return node(ExprKind::Var, name, at);
        take();
        auto call = node(ExprKind::Call, name, at);
        if (!cur().is_punct(")")) {
          while (true) {
            call->args.push_back(assignment());
            if (!accept_punct(",")) break;
          }
        }
        expect_punct(")", "after call arguments");
        return call;
      }
      case TokenKind::Keyword:
        if (t.is_keyword("sl_getp") || t.is_keyword("sl_geta")) {
          ExprKind kind = t.is_keyword("sl_getp") ? ExprKind::GetP : ExprKind::GetA;
          std::string kw = t.text;
          auto parts = split_arguments(construct_arguments());
          if (parts.size() != 1) fail(at, kw + " takes one channel name");
          return node(kind, slice_identifier(parts[0], at, kw), at);
        }
        if (t.is_keyword("sl_create"))
          fail(at, "create construct must appear within a compound statement", "E_CREATE_NOT_BLOCK_ITEM");
        fail(at, "unexpected keyword '" + t.text + "' in expression");
      case TokenKind::Punct:
        if (t.is_punct("(")) {
          take();
          ExprPtr e = expression();
          expect_punct(")", "to close parenthesized expression");
          return e;
        }
        fail(at, "unexpected '" + t.text + "' in expression");
      case TokenKind::End: fail(at, "unexpected end of input in expression");
    }
    fail(at, "unexpected token");
  }

  std::vector<Token> toks_;
  std::string file_;
  std::vector<Diagnostic>* warnings_;
  std::size_t pos_ = 0;
};

}  // namespace

AstProgram parse_program(const std::vector<Token>& tokens, const std::string& file,
                         std::vector<Diagnostic>* warnings) {
  std::vector<Token> toks = tokens;
  if (toks.empty() || toks.back().kind != TokenKind::End)
    toks.push_back(Token{TokenKind::End, "", toks.empty() ? SourceSpan{file, 1, 1} : toks.back().span});
  return Parser(std::move(toks), file, warnings).program();
}

AstProgram parse_source(std::string_view source, const std::string& file, std::vector<Diagnostic>* warnings) {
  return parse_program(tokenize(source, file), file, warnings);
}

}  // namespace slmini
