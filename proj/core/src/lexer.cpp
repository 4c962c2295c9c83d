#include "mutgen/lexer.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace mutgen::java {
namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
    "class", "const", "continue", "default", "do", "double", "else", "enum",
    "extends", "final", "finally", "float", "for", "goto", "if", "implements",
    "import", "instanceof", "int", "interface", "long", "native", "new",
    "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "try", "void", "volatile", "while"};

// Longest first within each leading character; matched greedily.
const std::array<std::string_view, 38> kOperators = {
    ">>>=", ">>>", ">>=", ">>", ">=", ">",  "<<=", "<<", "<=", "<",
    "->",   "--",  "-=",  "-",  "++", "+=", "+",   "&&", "&=", "&",
    "||",   "|=",  "|",   "==", "=",  "!=", "!",   "*=", "*",  "/=",
    "/",    "%=",  "%",   "^=", "^",  "~",  "?",   ":"};

const std::array<std::string_view, 12> kSeparators = {
    "...", "::", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@"};

bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}
bool ident_part(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> raw;
    for (;;) {
      skip_space_and_comments();
      if (at_end()) break;
      raw.push_back(next_token());
    }
    return strip_annotations(std::move(raw));
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t off = 0) const {
    return i_ + off < src_.size() ? src_[i_ + off] : '\0';
  }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  Position here() const { return {line_, col_}; }

  void skip_space_and_comments() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      if (peek() == '/' && peek(1) == '*') {
        Position start = here();
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (at_end()) throw LexError(start, "unterminated block comment");
          advance();
        }
        advance();
        advance();
        continue;
      }
      return;
    }
  }

  Token next_token() {
    const Position pos = here();
    const char c = peek();

    if (ident_start(static_cast<unsigned char>(c))) return word(pos);
    if (std::isdigit(static_cast<unsigned char>(c))) return number(pos);
    if (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) return number(pos);
    if (c == '"') return string_lit(pos);
    if (c == '\'') return char_lit(pos);

    for (std::string_view sep : kSeparators) {
      if (match(sep)) return {TokenKind::Separator, std::string(sep), pos};
    }
    for (std::string_view op : kOperators) {
      if (match(op)) return {TokenKind::Operator, std::string(op), pos};
    }
    throw LexError(pos, std::string("unexpected character '") + c + "'");
  }

  bool match(std::string_view text) {
    if (src_.compare(i_, text.size(), text) != 0) return false;
    for (std::size_t k = 0; k < text.size(); ++k) advance();
    return true;
  }

  Token word(Position pos) {
    const std::size_t begin = i_;
    while (!at_end() && ident_part(static_cast<unsigned char>(peek()))) advance();
    std::string text(src_.substr(begin, i_ - begin));
    if (text == "true" || text == "false") return {TokenKind::BoolLit, text, pos};
    if (text == "null") return {TokenKind::NullLit, text, pos};
    if (is_keyword(text)) return {TokenKind::Keyword, text, pos};
    if (is_id_token_text(text)) return {TokenKind::IdToken, text, pos};
    return {TokenKind::Identifier, text, pos};
  }

  Token number(Position pos) {
    const std::size_t begin = i_;
    bool is_float = false;

    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance();
      advance();
      while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
    } else if (peek() == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
      advance();
      advance();
      while (peek() == '0' || peek() == '1' || peek() == '_') advance();
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      if (peek() == '.') {
        is_float = true;
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        std::size_t save = i_;
        int save_line = line_, save_col = col_;
        advance();
        if (peek() == '+' || peek() == '-') advance();
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
          is_float = true;
          while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
        } else {
          i_ = save;
          line_ = save_line;
          col_ = save_col;
        }
      }
    }

    if (peek() == 'f' || peek() == 'F' || peek() == 'd' || peek() == 'D') {
      is_float = true;
      advance();
    } else if (peek() == 'l' || peek() == 'L') {
      advance();
    }
    std::string text(src_.substr(begin, i_ - begin));
    return {is_float ? TokenKind::FloatLit : TokenKind::IntLit, text, pos};
  }

  Token string_lit(Position pos) {
    if (peek(1) == '"' && peek(2) == '"') throw LexError(pos, "text blocks are not supported");
    const std::size_t begin = i_;
    advance();  // opening quote
    for (;;) {
      if (at_end() || peek() == '\n' || peek() == '\r')
        throw LexError(pos, "unterminated string literal");
      if (peek() == '\\') {
        advance();
        if (at_end()) throw LexError(pos, "unterminated string literal");
        advance();
        continue;
      }
      if (peek() == '"') {
        advance();
        break;
      }
      advance();
    }
    return {TokenKind::StringLit, std::string(src_.substr(begin, i_ - begin)), pos};
  }

  Token char_lit(Position pos) {
    const std::size_t begin = i_;
    advance();  // opening quote
    if (at_end()) throw LexError(pos, "unterminated character literal");
    if (peek() == '\'') throw LexError(pos, "empty character literal");
    if (peek() == '\\') {
      advance();
      if (at_end()) throw LexError(pos, "unterminated character literal");
      advance();
      // octal escapes may span up to three digits
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())) && peek() != '\'' &&
             i_ - begin < 5)
        advance();
    } else {
      advance();
    }
    if (peek() != '\'') throw LexError(pos, "unterminated character literal");
    advance();
    return {TokenKind::CharLit, std::string(src_.substr(begin, i_ - begin)), pos};
  }

  // Annotations are metadata, not behavior; remove `@Name`, `@a.b.Name` and
  // any balanced argument list. A bare `@` before `interface` is dropped so
  // the declaration scanner can skip the annotation-type body as a whole.
  static std::vector<Token> strip_annotations(std::vector<Token>&& raw) {
    std::vector<Token> out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
      if (raw[i].kind != TokenKind::Separator || raw[i].text != "@") {
        out.push_back(std::move(raw[i]));
        ++i;
        continue;
      }
      const Position pos = raw[i].pos;
      ++i;  // '@'
      if (i < raw.size() && raw[i].is("interface")) continue;
      if (i >= raw.size() || raw[i].kind != TokenKind::Identifier)
        throw LexError(pos, "stray '@'");
      ++i;  // annotation name
      while (i + 1 < raw.size() && raw[i].is(".") && raw[i + 1].kind == TokenKind::Identifier)
        i += 2;
      if (i < raw.size() && raw[i].is("(")) {
        int depth = 0;
        do {
          if (raw[i].is("(")) ++depth;
          if (raw[i].is(")")) --depth;
          ++i;
          if (i > raw.size()) break;
        } while (depth > 0 && i < raw.size());
        if (depth > 0) throw LexError(pos, "unterminated annotation arguments");
      }
    }
    return out;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view source) { return Scanner(source).run(); }

std::string canonical_text(const std::vector<Token>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].text;
  }
  return out;
}

bool is_keyword(std::string_view text) { return kKeywords.count(text) > 0; }

bool is_separator_text(std::string_view text) {
  for (std::string_view sep : kSeparators)
    if (sep == text) return true;
  return false;
}

bool is_operator_text(std::string_view text) {
  for (std::string_view op : kOperators)
    if (op == text) return true;
  return false;
}

bool has_id_token_prefix(std::string_view text) {
  static const std::array<std::string_view, 7> kPrefixes = {
      "VAR_", "METHOD_", "TYPE_", "STRING_", "INT_", "FLOAT_", "CHAR_"};
  for (std::string_view p : kPrefixes)
    if (text.size() > p.size() - 1 && text.compare(0, p.size(), p) == 0) return true;
  return false;
}

bool is_id_token_text(std::string_view text) {
  static const std::array<std::string_view, 7> kPrefixes = {
      "VAR_", "METHOD_", "TYPE_", "STRING_", "INT_", "FLOAT_", "CHAR_"};
  for (std::string_view p : kPrefixes) {
    if (text.size() > p.size() && text.compare(0, p.size(), p) == 0) {
      for (std::size_t i = p.size(); i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
      return true;
    }
  }
  return false;
}

}  // namespace mutgen::java
