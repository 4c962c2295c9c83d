#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mutgen/ast.hpp"
#include "mutgen/lexer.hpp"

namespace mutgen::java {

class ParseError : public std::runtime_error {
 public:
  ParseError(Position p, const std::string& what)
      : std::runtime_error("parse error at " + std::to_string(p.line) + ":" +
                           std::to_string(p.column) + ": " + what),
        pos(p) {}
  Position pos;
};

// Parses exactly one method declaration (modifiers through body). Every
// input token appears as exactly one leaf, in order. Throws ParseError on
// unbalanced or truncated input, or when tokens remain after the method.
AstNode parse_method(const std::vector<Token>& tokens);

struct SyntaxCheck {
  bool lexes = false;   // tokenizes and all placeholder-prefixed tokens are well formed
  bool parses = false;  // lexes and forms a complete method declaration
};

// Validates generated token text without throwing.
SyntaxCheck check_syntax(const std::string& source);

struct MethodInfo {
  std::string name;
  int arity = 0;
  std::vector<Token> tokens;
  AstNode ast;
};

// Extracts the parseable method and constructor declarations of a compilation
// unit, nested types included. Methods that fail to parse are skipped and
// reported through `diags` when given. Throws LexError if the file does not
// tokenize.
std::vector<MethodInfo> extract_methods(std::string_view source,
                                        std::vector<std::string>* diags = nullptr);

}  // namespace mutgen::java
