#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mutgen::java {

enum class TokenKind {
  Keyword,
  Separator,
  Operator,
  Identifier,
  IntLit,
  FloatLit,
  StringLit,
  CharLit,
  BoolLit,
  NullLit,
  IdToken,  // abstraction placeholder such as VAR_1 or STRING_3
};

struct Position {
  int line = 1;
  int column = 1;
};

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;
  Position pos;

  bool is(std::string_view t) const { return text == t; }
};

class LexError : public std::runtime_error {
 public:
  LexError(Position p, const std::string& what)
      : std::runtime_error("lex error at " + std::to_string(p.line) + ":" +
                           std::to_string(p.column) + ": " + what),
        pos(p) {}
  Position pos;
};

// Tokenizes a Java source fragment. Comments and annotations are dropped;
// `>>` and `>>>` stay single tokens. Throws LexError on malformed input.
std::vector<Token> lex(std::string_view source);

// Single-space joined token texts; lex(canonical_text(lex(s))) is stable.
std::string canonical_text(const std::vector<Token>& tokens);

bool is_keyword(std::string_view text);
bool is_separator_text(std::string_view text);
bool is_operator_text(std::string_view text);
bool is_id_token_text(std::string_view text);
// True when the token begins with a placeholder category prefix (e.g. "VAR_"),
// whether or not the remainder forms a valid placeholder.
bool has_id_token_prefix(std::string_view text);

inline bool is_literal(const Token& t) {
  switch (t.kind) {
    case TokenKind::IntLit:
    case TokenKind::FloatLit:
    case TokenKind::StringLit:
    case TokenKind::CharLit:
      return true;
    default:
      return false;
  }
}

}  // namespace mutgen::java
