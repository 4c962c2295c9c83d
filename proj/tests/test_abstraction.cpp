#include <doctest.h>

#include <sstream>

#include <mutgen/abstraction.hpp>
#include <mutgen/parser.hpp>

#include "support/fixtures.hpp"

using namespace mutgen;
using java::lex;

namespace {

std::string joined(const std::vector<std::string>& toks) {
  std::string out;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out.push_back(' ');
    out += toks[i];
  }
  return out;
}

IdiomSet idioms_of(std::initializer_list<const char*> items) {
  IdiomSet set;
  for (const char* s : items) set.items.insert(s);
  return set;
}

}  // namespace

TEST_CASE("placeholders are typed and numbered by first occurrence") {
  auto fixed = lex("public int getValue(int count) { if (count < 0) { return 0; } return count + 1; }");
  auto buggy = lex("public int getValue(int count) { if (count < 0) { return 0; } return count + 2; }");
  auto r = abstract_pair(fixed, buggy, idioms_of({"0", "1"}));

  CHECK(joined(r.fixed) ==
        "public int METHOD_1 ( int VAR_1 ) { if ( VAR_1 < 0 ) { return 0 ; } return VAR_1 + 1 ; }");
  CHECK(joined(r.buggy) ==
        "public int METHOD_1 ( int VAR_1 ) { if ( VAR_1 < 0 ) { return 0 ; } return VAR_1 + INT_1 ; }");
  REQUIRE(r.novel_literal_ids.size() == 1);
  CHECK(r.novel_literal_ids[0] == "INT_1");
  CHECK(r.novel_identifier_ids.empty());
}

TEST_CASE("counters run per category and continue onto the buggy side") {
  auto fixed = lex("void put(String key, String value) { table.set(key, value); }");
  auto buggy = lex("void put(String key, String value) { table.set(value, key); cache.drop(key); }");
  auto r = abstract_pair(fixed, buggy, IdiomSet{});

  CHECK(joined(r.fixed) ==
        "void METHOD_1 ( TYPE_1 VAR_1 , TYPE_1 VAR_2 ) { VAR_3 . METHOD_2 ( VAR_1 , VAR_2 ) ; }");
  CHECK(joined(r.buggy) ==
        "void METHOD_1 ( TYPE_1 VAR_1 , TYPE_1 VAR_2 ) { VAR_3 . METHOD_2 ( VAR_2 , VAR_1 ) ; "
        "VAR_4 . METHOD_3 ( VAR_1 ) ; }");
  CHECK(r.novel_identifier_ids == std::vector<std::string>{"VAR_4", "METHOD_3"});
}

TEST_CASE("same text always maps to the same placeholder") {
  auto fixed = lex("int size() { return size; }");
  auto r = abstract_pair(fixed, fixed, IdiomSet{});
  // `size` is first seen in method position; later variable uses reuse the id
  CHECK(joined(r.fixed) == "int METHOD_1 ( ) { return METHOD_1 ; }");
  // bijectivity: one entry per distinct text
  CHECK(r.map.size() == 1);
}

TEST_CASE("keywords, operators and boolean or null literals stay verbatim") {
  auto toks = lex("boolean f() { return true && false || x != null; }");
  IdMap map;
  auto out = abstract_stream(toks, IdiomSet{}, map);
  CHECK(joined(out) == "boolean METHOD_1 ( ) { return true && false || VAR_1 != null ; }");
}

TEST_CASE("idioms survive abstraction verbatim") {
  auto toks = lex("int next(int i) { return list.get(i).size() + 1; }");
  IdMap map;
  auto out = abstract_stream(toks, idioms_of({"i", "size", "1", "get"}), map);
  CHECK(joined(out) == "int METHOD_1 ( int i ) { return VAR_1 . get ( i ) . size ( ) + 1 ; }");
}

TEST_CASE("abstracted vocabulary is bounded") {
  IdiomSet idioms = idioms_of({"0", "1", "i", "size"});
  auto pairs = fixtures::method_pairs(120, 11);
  for (const auto& p : pairs) {
    auto r = abstract_pair(lex(p.fixed), lex(p.buggy), idioms);
    for (const auto& side : {r.fixed, r.buggy}) {
      for (const std::string& tok : side) {
        const bool ok = java::is_keyword(tok) || java::is_separator_text(tok) ||
                        java::is_operator_text(tok) || java::is_id_token_text(tok) ||
                        idioms.contains(tok) || tok == "true" || tok == "false" || tok == "null";
        CAPTURE(tok);
        CHECK(ok);
      }
    }
  }
}

TEST_CASE("abstraction commutes with parsing") {
  // abstracted streams must still parse, with placeholders as leaves
  auto pairs = fixtures::method_pairs(40, 3);
  for (const auto& p : pairs) {
    auto r = abstract_pair(lex(p.fixed), lex(p.buggy), idioms_of({"0", "1"}));
    CHECK(java::check_syntax(joined(r.fixed)).parses);
    CHECK(java::check_syntax(joined(r.buggy)).parses);
  }
}

TEST_CASE("idiom file round trip and validation") {
  std::istringstream in(
      "# frequent tokens\n"
      "i\n"
      "size\n"
      "0\n"
      "\n"
      "new\n"   // keyword: dropped
      ";\n"     // separator: dropped
      "&&\n"    // operator: dropped
      "true\n"  // boolean literal: dropped
      "\"n\"\n");
  std::vector<std::string> diags;
  IdiomSet set = load_idioms(in, &diags);
  CHECK(set.items == std::set<std::string>{"i", "size", "0", "\"n\""});
  CHECK(diags.size() == 4);

  std::ostringstream out;
  save_idioms(set, out);
  std::istringstream back(out.str());
  CHECK(load_idioms(back).items == set.items);
}

TEST_CASE("idiom mining ranks by frequency with boundary ties") {
  std::vector<std::vector<java::Token>> methods;
  // `i` appears 4 times, `n` 3, `x` and `y` 2, `z` 1; `if`/`(` etc never count
  methods.push_back(lex("void a() { i = i + i; n = i; }"));
  methods.push_back(lex("void b() { n = n + x; x = y; y = z; }"));

  auto top1 = mine_idioms(methods, 1e-9);  // k clamps to 1
  CHECK(top1.items == std::set<std::string>{"i"});

  // distinct tokens: a b i n x y z (7) -> k = ceil(0.3*7) = 3, but x ties y
  auto top = mine_idioms(methods, 0.3);
  CHECK(top.items.count("i") == 1);
  CHECK(top.items.count("n") == 1);
  CHECK(top.items.count("x") == 1);
  CHECK(top.items.count("y") == 1);
  CHECK(top.items.count("z") == 0);
}

TEST_CASE("concretization restores the original source exactly") {
  auto pairs = fixtures::method_pairs(200, 19);
  IdiomSet idioms = idioms_of({"0", "1", "i", "size", "get"});
  for (const auto& p : pairs) {
    auto ftoks = lex(p.fixed);
    auto btoks = lex(p.buggy);
    auto r = abstract_pair(ftoks, btoks, idioms);
    auto f_back = concretize(r.fixed, r.map, 5);
    auto b_back = concretize(r.buggy, r.map, 5);
    CHECK(joined(f_back.tokens) == java::canonical_text(ftoks));
    CHECK(joined(b_back.tokens) == java::canonical_text(btoks));
    CHECK(f_back.synthesized.empty());
    CHECK(b_back.synthesized.empty());
  }
}

TEST_CASE("unknown literal placeholders get fresh deterministic values") {
  auto fixed = lex("int f(int a) { return a + 1; }");
  auto r = abstract_pair(fixed, fixed, idioms_of({"1"}));

  std::vector<std::string> predicted = {"int", "METHOD_1", "(",      "int", "VAR_1", ")", "{",
                                        "return", "VAR_1",  "+",      "INT_5", ";",     "}"};
  auto c1 = concretize(predicted, r.map, 123);
  auto c2 = concretize(predicted, r.map, 123);
  auto c3 = concretize(predicted, r.map, 456);
  REQUIRE(c1.synthesized.count("INT_5") == 1);
  CHECK(c1.tokens == c2.tokens);
  CHECK(c1.synthesized.at("INT_5") != "1");  // the idiom text is not in the map but `a` is
  CHECK(c3.synthesized.count("INT_5") == 1);

  // the same placeholder appearing twice gets one value
  std::vector<std::string> twice = {"int", "METHOD_1", "(", ")", "{", "return",
                                    "INT_9", "+", "INT_9", ";", "}"};
  auto c4 = concretize(twice, r.map, 9);
  CHECK(c4.tokens[6] == c4.tokens[8]);
  CHECK(c4.synthesized.size() == 1);
}

TEST_CASE("unknown identifier placeholders are unmappable") {
  auto fixed = lex("int f(int a) { return a; }");
  auto r = abstract_pair(fixed, fixed, IdiomSet{});
  std::vector<std::string> predicted = {"int", "METHOD_1", "(", ")", "{",
                                        "return", "VAR_9", ";", "}"};
  CHECK_THROWS_AS(concretize(predicted, r.map, 1), UnmappableIdentifier);
  try {
    concretize(predicted, r.map, 1);
  } catch (const UnmappableIdentifier& e) {
    CHECK(e.id_token == "VAR_9");
  }
}

TEST_CASE("synthesized literals avoid forbidden values") {
  std::set<std::string> forbidden;
  std::string first = synthesize_literal(IdCategory::Char, forbidden, 42);
  forbidden.insert(first);
  std::string second = synthesize_literal(IdCategory::Char, forbidden, 42);
  CHECK(first != second);
  CHECK(synthesize_literal(IdCategory::Int, {}, 7) == synthesize_literal(IdCategory::Int, {}, 7));
  CHECK(synthesize_literal(IdCategory::String, {}, 7).front() == '"');
}
