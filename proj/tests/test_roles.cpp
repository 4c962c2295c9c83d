#include <doctest.h>

#include <mutgen/roles.hpp>

using namespace mutgen::java;

namespace {

Role role_of(const std::string& source, const std::string& ident) {
  auto toks = lex(source);
  auto roles = classify_roles(toks);
  for (std::size_t i = 0; i < toks.size(); ++i)
    if (toks[i].text == ident) return roles[i];
  FAIL("identifier not found: ", ident);
  return Role::None;
}

}  // namespace

TEST_CASE("call and constructor positions") {
  CHECK(role_of("foo(1);", "foo") == Role::Method);
  CHECK(role_of("obj.foo(1);", "foo") == Role::Method);
  CHECK(role_of("obj.foo(1);", "obj") == Role::Var);
  CHECK(role_of("new Foo(1);", "Foo") == Role::Type);
  CHECK(role_of("new a.b.Foo(1);", "Foo") == Role::Type);
  CHECK(role_of("x = a.b.foo(1);", "foo") == Role::Method);
}

TEST_CASE("declaration positions") {
  CHECK(role_of("List xs = null;", "List") == Role::Type);
  CHECK(role_of("List xs = null;", "xs") == Role::Var);
  CHECK(role_of("List<String> xs;", "List") == Role::Type);
  CHECK(role_of("List<String> xs;", "String") == Role::Type);
  CHECK(role_of("Map<String, List<Integer>> m;", "Integer") == Role::Type);
  CHECK(role_of("String[] parts;", "String") == Role::Type);
  CHECK(role_of("int counts[] = null;", "counts") == Role::Var);
  CHECK(role_of("for (Item it : items) {}", "Item") == Role::Type);
  CHECK(role_of("for (Item it : items) {}", "items") == Role::Var);
}

TEST_CASE("operator and keyword contexts") {
  CHECK(role_of("if (a < b) {}", "a") == Role::Var);
  CHECK(role_of("if (a < b) {}", "b") == Role::Var);
  CHECK(role_of("boolean t = x instanceof Widget;", "Widget") == Role::Type);
  CHECK(role_of("void f() throws IOError {}", "IOError") == Role::Type);
  CHECK(role_of("Object y = (Shape) x;", "Shape") == Role::Type);
  CHECK(role_of("int y = (total) + 1;", "total") == Role::Var);
}

TEST_CASE("receiver of a static style call stays a variable") {
  // without symbol tables `Type.method()` receivers look like variables
  CHECK(role_of("Math.abs(x);", "Math") == Role::Var);
}

TEST_CASE("alignment and non identifiers") {
  auto toks = lex("a.b(c)");
  auto roles = classify_roles(toks);
  REQUIRE(roles.size() == toks.size());
  CHECK(roles[1] == Role::None);  // '.'
  CHECK(roles[3] == Role::None);  // '('
}
