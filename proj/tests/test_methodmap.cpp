#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <mutgen/parser.hpp>
#include <mutgen/rng.hpp>
#include <mutgen/treediff.hpp>

using namespace mutgen;
using java::MethodInfo;

namespace {

using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

double oracle_dice(const MethodInfo& a, const MethodInfo& b) {
  std::multiset<std::string> ma, mb;
  for (const auto& t : a.tokens) ma.insert(t.text);
  for (const auto& t : b.tokens) mb.insert(t.text);
  std::vector<std::string> shared;
  std::set_intersection(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(shared));
  if (ma.empty() && mb.empty()) return 1.0;
  return 2.0 * static_cast<double>(shared.size()) / static_cast<double>(ma.size() + mb.size());
}

struct MatchScore {
  int signature = 0;
  int name = 0;
  int pairs = 0;
  double sim = 0.0;

  bool operator<(const MatchScore& o) const {
    if (signature != o.signature) return signature < o.signature;
    if (name != o.name) return name < o.name;
    if (pairs != o.pairs) return pairs < o.pairs;
    return sim < o.sim;
  }
};

MatchScore score_of(const Pairing& pairing, const std::vector<MethodInfo>& buggy,
                    const std::vector<MethodInfo>& fixed) {
  MatchScore s;
  for (auto [b, f] : pairing) {
    const bool same_name = buggy[b].name == fixed[f].name;
    s.signature += same_name && buggy[b].arity == fixed[f].arity ? 1 : 0;
    s.name += same_name ? 1 : 0;
    s.pairs += 1;
    s.sim += oracle_dice(buggy[b], fixed[f]);
  }
  return s;
}

bool pair_allowed(const MethodInfo& b, const MethodInfo& f) {
  return b.name == f.name || oracle_dice(b, f) >= 0.6;
}

// exhaustive search over all injective partial matchings, for small files
void best_matching_rec(std::size_t b, const std::vector<MethodInfo>& buggy,
                       const std::vector<MethodInfo>& fixed, std::vector<bool>& taken,
                       Pairing& current, Pairing& best, MatchScore& best_score) {
  if (b == buggy.size()) {
    MatchScore s = score_of(current, buggy, fixed);
    if (best_score < s) {
      best_score = s;
      best = current;
    }
    return;
  }
  best_matching_rec(b + 1, buggy, fixed, taken, current, best, best_score);
  for (std::size_t f = 0; f < fixed.size(); ++f) {
    if (taken[f] || !pair_allowed(buggy[b], fixed[f])) continue;
    taken[f] = true;
    current.emplace_back(b, f);
    best_matching_rec(b + 1, buggy, fixed, taken, current, best, best_score);
    current.pop_back();
    taken[f] = false;
  }
}

Pairing best_matching(const std::vector<MethodInfo>& buggy, const std::vector<MethodInfo>& fixed) {
  REQUIRE(buggy.size() <= 5);
  REQUIRE(fixed.size() <= 5);
  std::vector<bool> taken(fixed.size(), false);
  Pairing current, best;
  MatchScore best_score{-1, -1, -1, -1.0};
  best_matching_rec(0, buggy, fixed, taken, current, best, best_score);
  std::sort(best.begin(), best.end());
  return best;
}

std::vector<MethodInfo> methods_of(const std::string& body) {
  std::vector<std::string> diags;
  auto out = java::extract_methods("class A {\n" + body + "\n}", &diags);
  REQUIRE(diags.empty());
  return out;
}

// distinctive base methods: distinct names, identifiers and literals, so
// cross similarities stay well under the 0.6 floor
const char* kBases[] = {
    "int sumValues(int[] xs) { int total = 0; for (int i = 0; i < xs.length; i = i + 1) { "
    "total = total + xs[i]; } return total; }",
    "String greetUser(String person) { if (person == null) { return \"guest 0\"; } return "
    "\"hello \" + person; }",
    "boolean cacheEmpty() { return head == null && stored == 0; }",
    "void pushItem(Object element) { ensureRoom(count + 1); slots[count] = element; count = "
    "count + 1; }",
    "double circleArea(double radius) { double pi = 3.14159; return pi * radius * radius; }",
    "long fibonacci(long n) { if (n < 2) { return n; } return fibonacci(n - 1) + fibonacci(n "
    "- 2); }",
    "void wipeBuckets() { try { registry.drop(buckets); } catch (Exception boom) { "
    "log.warn(boom); } filled = 0; }",
    "String formatRow(int width, char pad) { if (width < 1) { return \"\"; } StringBuilder "
    "sb = new StringBuilder(); while (sb.length() < width) { sb.append(pad); } return "
    "sb.toString(); }",
};
constexpr std::size_t kBaseCount = std::size(kBases);

std::string tweak_literal(const std::string& source) {
  std::string out = source;
  auto pos = out.find('0');
  if (pos == std::string::npos) pos = out.find('1');
  REQUIRE(pos != std::string::npos);
  out[pos] = '7';
  return out;
}

std::string rename_method(const std::string& source, const std::string& name,
                          const std::string& fresh) {
  std::string out = source;
  auto pos = out.find(name);
  REQUIRE(pos != std::string::npos);
  out.replace(pos, name.size(), fresh);
  return out;
}

std::string method_name(const std::string& source) {
  auto open = source.find('(');
  auto start = source.rfind(' ', open);
  return source.substr(start + 1, open - start - 1);
}

}  // namespace

TEST_CASE("base fixture methods are pairwise dissimilar") {
  std::string all;
  for (const char* b : kBases) all += std::string(b) + "\n";
  auto ms = java::extract_methods("class A {" + all + "}");
  REQUIRE(ms.size() == kBaseCount);
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(oracle_dice(ms[i], ms[j]) < 0.55);
      CHECK(token_bag_similarity(ms[i].tokens, ms[j].tokens) ==
            doctest::Approx(oracle_dice(ms[i], ms[j])).epsilon(1e-12));
    }
}

TEST_CASE("identical files map every method to its namesake") {
  std::string body;
  for (std::size_t i = 0; i < 4; ++i) body += std::string(kBases[i]) + "\n";
  auto buggy = methods_of(body);
  auto fixed = methods_of(body);
  auto pairs = map_methods(buggy, fixed);
  REQUIRE(pairs.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(pairs[i].first == i);
    CHECK(pairs[i].second == i);
  }
}

TEST_CASE("methods present on only one side stay unmatched") {
  auto buggy = methods_of(std::string(kBases[0]) + "\n" + kBases[1]);  // [1] removed by fix
  auto fixed = methods_of(std::string(kBases[0]) + "\n" + kBases[2]);  // [2] added by fix
  auto pairs = map_methods(buggy, fixed);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
}

TEST_CASE("a renamed method pairs through body similarity") {
  auto buggy = methods_of(std::string(kBases[0]) + "\n" + kBases[4]);
  auto fixed = methods_of(rename_method(kBases[0], "sumValues", "sumAll") + "\n" + kBases[4]);
  auto pairs = map_methods(buggy, fixed);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(pairs[1] == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(pairs == best_matching(buggy, fixed));
}

TEST_CASE("same-signature methods resolve by body similarity") {
  // two same-arity siblings named alike; each buggy body must find its twin
  std::string a = "int pick(int left) { return left + 10; }";
  std::string b = "int pick(String tag) { return tag.length() * 3; }";
  auto buggy = methods_of(a + "\n" + b);
  auto fixed = methods_of(b + "\n" + tweak_literal(a));
  auto pairs = map_methods(buggy, fixed);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(pairs[1] == std::pair<std::size_t, std::size_t>{1, 0});
}

TEST_CASE("random perturbed files agree with the exhaustive optimum") {
  Rng rng(derive_seed(0x3A9, 4));
  int renames = 0, drops = 0;
  for (int round = 0; round < 150; ++round) {
    CAPTURE(round);

    // pick up to 4 shared bases, then perturb the buggy side
    std::vector<std::size_t> bases;
    for (std::size_t i = 0; i < kBaseCount; ++i) bases.push_back(i);
    rng.shuffle(bases);
    const std::size_t shared = 2 + rng.next_below(3);

    std::vector<std::string> buggy_src, fixed_src;
    std::vector<std::string> truth;  // names of fixed methods expected to pair
    for (std::size_t i = 0; i < shared; ++i) {
      std::string fixed_method = kBases[bases[i]];
      std::string buggy_method = fixed_method;
      switch (rng.next_below(3)) {
        case 0: break;  // unmodified
        case 1: buggy_method = tweak_literal(fixed_method); break;
        case 2: {
          const std::string name = method_name(fixed_method);
          fixed_method = rename_method(fixed_method, name, name + "Redone");
          ++renames;
          break;
        }
      }
      buggy_src.push_back(buggy_method);
      fixed_src.push_back(fixed_method);
      truth.push_back(method_name(fixed_method));
    }
    // one deleted (buggy only) and one created (fixed only) method
    if (rng.next_below(2) == 0 && shared + 2 <= kBaseCount) {
      buggy_src.push_back(kBases[bases[shared]]);
      fixed_src.push_back(kBases[bases[shared + 1]]);
      ++drops;
    }
    rng.shuffle(buggy_src);
    rng.shuffle(fixed_src);

    std::string bj, fj;
    for (const auto& s : buggy_src) bj += s + "\n";
    for (const auto& s : fixed_src) fj += s + "\n";
    auto buggy = methods_of(bj);
    auto fixed = methods_of(fj);

    Pairing got = map_methods(buggy, fixed);
    std::sort(got.begin(), got.end());
    CHECK(got == best_matching(buggy, fixed));

    std::set<std::string> got_fixed_names;
    for (auto [b, f] : got) got_fixed_names.insert(fixed[f].name);
    CHECK(got_fixed_names == std::set<std::string>(truth.begin(), truth.end()));
  }
  CHECK(renames > 30);
  CHECK(drops > 30);
}

TEST_CASE("action documents list one word per action in order") {
  EditScript empty;
  CHECK(action_document(empty).empty());

  EditScript script;
  script.actions.push_back({EditOp::Upd, java::NodeLabel::Literal, "1"});
  script.actions.push_back({EditOp::Del, java::NodeLabel::Call, ""});
  script.actions.push_back({EditOp::Ins, java::NodeLabel::If, ""});
  script.actions.push_back({EditOp::Mov, java::NodeLabel::Return, ""});
  CHECK(action_document(script) ==
        std::vector<std::string>{"UPD:Literal", "DEL:Call", "INS:If", "MOV:Return"});
}

TEST_CASE("action list comparison covers frequency and membership") {
  auto script_of = [](std::initializer_list<std::pair<EditOp, java::NodeLabel>> items) {
    EditScript s;
    for (auto [op, label] : items) s.actions.push_back({op, label, ""});
    return s;
  };
  using L = java::NodeLabel;

  auto a = script_of({{EditOp::Del, L::Call}, {EditOp::Ins, L::If}});
  auto b = script_of({{EditOp::Ins, L::If}, {EditOp::Del, L::Call}});
  auto c = script_of({{EditOp::Del, L::Call}, {EditOp::Del, L::Call}});
  auto d = script_of({{EditOp::Del, L::Call}});
  auto e = script_of({{EditOp::Upd, L::Literal}});

  auto r = compare_action_lists(a, b);
  CHECK(r.same_multiset);
  CHECK(r.same_set);

  r = compare_action_lists(c, d);
  CHECK_FALSE(r.same_multiset);
  CHECK(r.same_set);

  r = compare_action_lists(a, e);
  CHECK_FALSE(r.same_multiset);
  CHECK_FALSE(r.same_set);

  for (const EditScript* s : {&a, &b, &c, &d, &e}) {
    auto self = compare_action_lists(*s, *s);
    CHECK(self.same_multiset);
    CHECK(self.same_set);
  }

  // same_multiset implies same_set on random scripts
  Rng rng(derive_seed(0x3A9, 5));
  const L labels[] = {L::Call, L::If, L::Return, L::Literal, L::Assign};
  const EditOp ops[] = {EditOp::Ins, EditOp::Del, EditOp::Upd, EditOp::Mov};
  for (int i = 0; i < 200; ++i) {
    EditScript x, y;
    for (std::uint64_t n = rng.next_below(4); n > 0; --n)
      x.actions.push_back({ops[rng.next_below(4)], labels[rng.next_below(5)], ""});
    for (std::uint64_t n = rng.next_below(4); n > 0; --n)
      y.actions.push_back({ops[rng.next_below(4)], labels[rng.next_below(5)], ""});
    auto cmp = compare_action_lists(x, y);
    if (cmp.same_multiset) CHECK(cmp.same_set);
  }
}
