#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slmini/source.hpp"

namespace slmini {

enum class TokenKind { Keyword, Identifier, IntLiteral, FloatLiteral, StringLiteral, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourceSpan span;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
  bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
};

using TokenSlice = std::span<const Token>;

/// True for the SL construct words (sl_def, sl_create, ...).
bool is_sl_keyword(std::string_view word);

/// True for the C keywords of the host subset (int, if, while, ...).
bool is_c_keyword(std::string_view word);

/// Splits source text into tokens. Comments and preprocessor lines are
/// dropped. The returned vector always ends with a TokenKind::End token.
std::vector<Token> tokenize(std::string_view source, const std::string& file = "<input>");

/// Splits the tokens found between the parentheses of an SL construct on
/// top-level commas. Empty slots are kept as empty slices; an empty input
/// yields no slices. Throws CompileError on unbalanced brackets.
std::vector<TokenSlice> split_arguments(TokenSlice tokens);

/// Index of the bracket closing the one at `open`, or throws CompileError.
std::size_t find_closing(TokenSlice tokens, std::size_t open);

/// Decodes the escapes of a string literal token (quotes included).
std::string unescape_string(std::string_view literal);

}  // namespace slmini
