#include <array>
#include <cctype>

#include "slmini/token.hpp"

namespace slmini {
namespace {

constexpr std::array kSlKeywords = {
    "sl_def",      "sl_enddef",   "sl_decl",     "sl_create",     "sl_sync",
    "sl_detach",   "sl_index",    "sl_getp",     "sl_setp",       "sl_geta",
    "sl_seta",     "sl_glparm",   "sl_shparm",   "sl_glfparm",    "sl_shfparm",
    "sl_glarg",    "sl_sharg",    "sl_glfarg",   "sl_shfarg",     "sl__static",
    "sl__exclusive", "sl__forcewait", "sl__forceseq",
};

constexpr std::array kCKeywords = {
    "int",   "long",   "short", "char",  "unsigned", "signed", "float", "double", "void",
    "if",    "else",   "while", "for",   "do",       "return", "break", "continue", "const",
};

// Longest first so that maximal munch works with a linear scan.
constexpr std::array kPunct = {
    "++", "--", "+=", "-=", "*=", "/=", "%=", "==", "!=", "<=", ">=", "&&", "||",
    "(",  ")",  "[",  "]",  "{",  "}",  ",",  ";",  "+",  "-",  "*",  "/",  "%",
    "<",  ">",  "=",  "!",  "&",  "?",  ":",  ".",
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool line_start = true;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        advance();
        line_start = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        advance();
        continue;
      }
      if (c == '#' && line_start) {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      line_start = false;
      if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        SourceSpan at = here();
        advance();
        advance();
        while (true) {
          if (pos_ >= src_.size()) fail(at, "unterminated comment");
          if (src_[pos_] == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
        continue;
      }
      out.push_back(next_token());
    }
    out.push_back(Token{TokenKind::End, "", here()});
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  SourceSpan here() const { return SourceSpan{file_, line_, col_}; }

  [[noreturn]] void fail(const SourceSpan& at, const std::string& msg) const {
    throw CompileError(Diagnostic{Severity::Error, "E_LEX", msg, at});
  }

  Token next_token() {
    SourceSpan at = here();
    std::size_t begin = pos_;
    char c = src_[pos_];
    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      std::string word(src_.substr(begin, pos_ - begin));
      TokenKind kind = (is_sl_keyword(word) || is_c_keyword(word)) ? TokenKind::Keyword : TokenKind::Identifier;
      return Token{kind, std::move(word), at};
    }
    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return number(at);
    if (c == '"') {
      advance();
      while (true) {
        if (pos_ >= src_.size() || src_[pos_] == '\n') fail(at, "unterminated string literal");
        if (src_[pos_] == '\\') {
          advance();
          if (pos_ >= src_.size()) fail(at, "unterminated string literal");
          advance();
          continue;
        }
        if (src_[pos_] == '"') {
          advance();
          break;
        }
        advance();
      }
      return Token{TokenKind::StringLiteral, std::string(src_.substr(begin, pos_ - begin)), at};
    }
    for (std::string_view p : kPunct) {
      if (src_.substr(pos_, p.size()) == p) {
        for (std::size_t i = 0; i < p.size(); ++i) advance();
        return Token{TokenKind::Punct, std::string(p), at};
      }
    }
    fail(at, std::string("illegal character '") + c + "'");
  }

  Token number(const SourceSpan& at) {
    std::size_t begin = pos_;
    bool is_float = false;
    if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance();
      advance();
      if (!std::isxdigit(static_cast<unsigned char>(peek(0)))) fail(at, "malformed hexadecimal literal");
      while (std::isxdigit(static_cast<unsigned char>(peek(0)))) advance();
    } else {
      while (is_digit(peek(0))) advance();
      if (peek(0) == '.') {
        is_float = true;
        advance();
        while (is_digit(peek(0))) advance();
      }
      if (peek(0) == 'e' || peek(0) == 'E') {
        std::size_t sign = (peek(1) == '+' || peek(1) == '-') ? 1 : 0;
        if (is_digit(peek(1 + sign))) {
          is_float = true;
          advance();
          if (sign) advance();
          while (is_digit(peek(0))) advance();
        }
      }
      if (is_float && (peek(0) == 'f' || peek(0) == 'F')) advance();
    }
    if (is_ident_char(peek(0))) fail(here(), "malformed numeric literal");
    return Token{is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral,
                 std::string(src_.substr(begin, pos_ - begin)), at};
  }

  std::string_view src_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_open(const Token& t) { return t.is_punct("(") || t.is_punct("[") || t.is_punct("{"); }
bool is_close(const Token& t) { return t.is_punct(")") || t.is_punct("]") || t.is_punct("}"); }

char closer_for(const std::string& open) { return open == "(" ? ')' : open == "[" ? ']' : '}'; }

}  // namespace

bool is_sl_keyword(std::string_view word) {
  for (std::string_view k : kSlKeywords)
    if (k == word) return true;
  return false;
}

bool is_c_keyword(std::string_view word) {
  for (std::string_view k : kCKeywords)
    if (k == word) return true;
  return false;
}

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
  return Lexer(source, file).run();
}

std::vector<TokenSlice> split_arguments(TokenSlice tokens) {
  std::vector<TokenSlice> slices;
  if (tokens.empty()) return slices;
  std::vector<const Token*> stack;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (is_open(t)) {
      stack.push_back(&t);
    } else if (is_close(t)) {
      if (stack.empty() || t.text[0] != closer_for(stack.back()->text))
        throw CompileError(Diagnostic{Severity::Error, "E_SYNTAX", "unbalanced '" + t.text + "'", t.span});
      stack.pop_back();
    } else if (t.is_punct(",") && stack.empty()) {
      slices.push_back(tokens.subspan(begin, i - begin));
      begin = i + 1;
    }
  }
  if (!stack.empty())
    throw CompileError(
        Diagnostic{Severity::Error, "E_SYNTAX", "unbalanced '" + stack.back()->text + "'", stack.back()->span});
  slices.push_back(tokens.subspan(begin));
  return slices;
}

std::size_t find_closing(TokenSlice tokens, std::size_t open) {
  std::vector<std::size_t> stack;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::End) break;
    if (is_open(t)) {
      stack.push_back(i);
    } else if (is_close(t)) {
      if (stack.empty() || t.text[0] != closer_for(tokens[stack.back()].text))
        throw CompileError(Diagnostic{Severity::Error, "E_SYNTAX", "unbalanced '" + t.text + "'", t.span});
      stack.pop_back();
      if (stack.empty()) return i;
    }
  }
  throw CompileError(Diagnostic{Severity::Error, "E_SYNTAX", "unbalanced '" + tokens[open].text + "'",
                                tokens[open].span});
}

std::string unescape_string(std::string_view literal) {
  std::string out;
  std::string_view body = literal.substr(1, literal.size() - 2);
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '\\' || i + 1 == body.size()) {
      out += body[i];
      continue;
    }
    char e = body[++i];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '0': out += '\0'; break;
      default: out += e; break;
    }
  }
  return out;
}

}  // namespace slmini
