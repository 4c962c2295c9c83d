#pragma once

#include <vector>

#include "mutgen/lexer.hpp"

namespace mutgen::java {

// Syntactic role of an identifier, decided from its local token context.
// The classifier is a deterministic approximation: without symbol tables a
// receiver such as `Type.method()` is indistinguishable from a variable
// receiver, and qualified names keep only their head in type position.
enum class Role {
  None,    // not an identifier
  Var,
  Method,
  Type,
};

// One role per token, aligned with the input. Non-identifiers map to None.
std::vector<Role> classify_roles(const std::vector<Token>& tokens);

}  // namespace mutgen::java
