#include "mutgen/roles.hpp"

namespace mutgen::java {
namespace {

bool is_primitive(const Token& t) {
  if (t.kind != TokenKind::Keyword) return false;
  return t.is("boolean") || t.is("byte") || t.is("char") || t.is("double") || t.is("float") ||
         t.is("int") || t.is("long") || t.is("short") || t.is("void");
}

bool ident_like(const Token& t) {
  return t.kind == TokenKind::Identifier || t.kind == TokenKind::IdToken;
}

// Validates `< ... >` starting at the opening angle bracket as a plausible
// generic argument list. Returns one past the closing bracket, or 0 on
// failure. `>>` and `>>>` close two and three levels.
std::size_t scan_generic(const std::vector<Token>& toks, std::size_t open) {
  int depth = 0;
  std::size_t i = open;
  const std::size_t limit = std::min(toks.size(), open + 64);
  while (i < limit) {
    const Token& t = toks[i];
    if (t.is("<")) {
      ++depth;
    } else if (t.is(">") || t.is(">>") || t.is(">>>")) {
      depth -= static_cast<int>(t.text.size());
      if (depth < 0) return 0;
      if (depth == 0) return i + 1;
    } else if (ident_like(t) || is_primitive(t) || t.is(",") || t.is(".") || t.is("?") ||
               t.is("extends") || t.is("super") || t.is("[") || t.is("]") || t.is("&")) {
      // acceptable inside a type argument list
    } else {
      return 0;
    }
    ++i;
  }
  return 0;
}

bool castable_start(const Token& t) {
  if (ident_like(t) || is_literal(t)) return true;
  if (t.kind == TokenKind::BoolLit || t.kind == TokenKind::NullLit) return true;
  return t.is("(") || t.is("!") || t.is("~") || t.is("this") || t.is("super") || t.is("new");
}

}  // namespace

std::vector<Role> classify_roles(const std::vector<Token>& toks) {
  const std::size_t n = toks.size();
  std::vector<Role> roles(n, Role::None);

  auto at = [&](std::size_t i) -> const Token& { return toks[i]; };
  auto has = [&](std::size_t i) { return i < n; };

  for (std::size_t i = 0; i < n; ++i) {
    if (toks[i].kind != TokenKind::Identifier) continue;
    if (roles[i] != Role::None) continue;  // already set by a generic span

    // call: walk the qualifier chain back to see whether `new` heads it
    if (has(i + 1) && at(i + 1).is("(")) {
      std::size_t j = i;
      while (j >= 2 && at(j - 1).is(".") && ident_like(at(j - 2))) j -= 2;
      roles[i] = (j >= 1 && at(j - 1).is("new")) ? Role::Type : Role::Method;
      continue;
    }
    if (i >= 1 && at(i - 1).is("new")) {
      roles[i] = Role::Type;
      continue;
    }
    if (i >= 1 && (at(i - 1).is("instanceof") || at(i - 1).is("extends") ||
                   at(i - 1).is("implements") || at(i - 1).is("throws"))) {
      roles[i] = Role::Type;
      continue;
    }
    if (has(i + 1) && ident_like(at(i + 1))) {
      roles[i] = Role::Type;
      continue;
    }
    if (has(i + 1) && at(i + 1).is("<")) {
      std::size_t end = scan_generic(toks, i + 1);
      if (end != 0) {
        roles[i] = Role::Type;
        for (std::size_t k = i + 2; k + 1 < end; ++k)
          if (toks[k].kind == TokenKind::Identifier) roles[k] = Role::Type;
        continue;
      }
    }
    if (has(i + 2) && at(i + 1).is("[") && at(i + 2).is("]")) {
      const bool prev_blocks =
          i >= 1 && (ident_like(at(i - 1)) || is_primitive(at(i - 1)) || at(i - 1).is("]"));
      if (!prev_blocks) {
        roles[i] = Role::Type;
        continue;
      }
    }
    if (i >= 1 && at(i - 1).is("(") && has(i + 2) && at(i + 1).is(")") &&
        castable_start(at(i + 2))) {
      roles[i] = Role::Type;
      continue;
    }
    roles[i] = Role::Var;
  }
  return roles;
}

}  // namespace mutgen::java
