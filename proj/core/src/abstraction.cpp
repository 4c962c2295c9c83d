#include "mutgen/abstraction.hpp"

#include <algorithm>
#include <cctype>

#include "mutgen/rng.hpp"
#include "mutgen/roles.hpp"

namespace mutgen {

using java::Token;
using java::TokenKind;

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool never_idiom(const std::string& text) {
  return java::is_keyword(text) || java::is_separator_text(text) ||
         java::is_operator_text(text) || text == "true" || text == "false" || text == "null";
}

}  // namespace

IdiomSet load_idioms(std::istream& in, std::vector<std::string>* diags) {
  IdiomSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    if (never_idiom(text)) {
      if (diags)
        diags->push_back("idioms line " + std::to_string(line_no) + ": '" + text +
                         "' is a keyword, separator or operator; dropped");
      continue;
    }
    set.items.insert(text);
  }
  return set;
}

void save_idioms(const IdiomSet& idioms, std::ostream& out) {
  for (const std::string& item : idioms.items) out << item << '\n';
}

IdiomSet mine_idioms(const std::vector<std::vector<Token>>& methods, double quantile) {
  std::map<std::string, std::size_t> freq;
  for (const auto& toks : methods) {
    for (const Token& t : toks) {
      if (t.kind == TokenKind::Identifier || java::is_literal(t)) freq[t.text] += 1;
    }
  }
  IdiomSet set;
  if (freq.empty()) return set;

  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  const std::size_t n = ranked.size();
  std::size_t k = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n)));
  if (k < 1) k = 1;
  if (k > n) k = n;
  const std::size_t cutoff = ranked[k - 1].second;
  for (const auto& [text, count] : ranked) {
    if (count < cutoff) break;
    set.items.insert(text);
  }
  return set;
}

std::string_view category_prefix(IdCategory cat) {
  switch (cat) {
    case IdCategory::Var: return "VAR_";
    case IdCategory::Method: return "METHOD_";
    case IdCategory::Type: return "TYPE_";
    case IdCategory::String: return "STRING_";
    case IdCategory::Int: return "INT_";
    case IdCategory::Float: return "FLOAT_";
    case IdCategory::Char: return "CHAR_";
  }
  return "VAR_";
}

const std::string& IdMap::intern(const std::string& text, IdCategory cat) {
  auto it = by_text_.find(text);
  if (it != by_text_.end()) return it->second;
  int index = ++next_[cat];
  std::string id = std::string(category_prefix(cat)) + std::to_string(index);
  entries_.emplace_back(id, text);
  by_id_.emplace(id, text);
  auto [pos, inserted] = by_text_.emplace(text, std::move(id));
  return pos->second;
}

const std::string* IdMap::id_for(const std::string& text) const {
  auto it = by_text_.find(text);
  return it == by_text_.end() ? nullptr : &it->second;
}

const std::string* IdMap::text_for(const std::string& id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

namespace {

IdCategory category_of_prefix(const std::string& id_token) {
  if (id_token.rfind("METHOD_", 0) == 0) return IdCategory::Method;
  if (id_token.rfind("TYPE_", 0) == 0) return IdCategory::Type;
  if (id_token.rfind("STRING_", 0) == 0) return IdCategory::String;
  if (id_token.rfind("INT_", 0) == 0) return IdCategory::Int;
  if (id_token.rfind("FLOAT_", 0) == 0) return IdCategory::Float;
  if (id_token.rfind("CHAR_", 0) == 0) return IdCategory::Char;
  return IdCategory::Var;
}

bool is_identifier_category(IdCategory cat) {
  return cat == IdCategory::Var || cat == IdCategory::Method || cat == IdCategory::Type;
}

}  // namespace

std::vector<std::string> abstract_stream(const std::vector<Token>& tokens, const IdiomSet& idioms,
                                         IdMap& map, std::vector<std::string>* novel) {
  std::vector<java::Role> roles = java::classify_roles(tokens);
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    IdCategory cat;
    switch (t.kind) {
      case TokenKind::Identifier:
        cat = roles[i] == java::Role::Method ? IdCategory::Method
              : roles[i] == java::Role::Type ? IdCategory::Type
                                             : IdCategory::Var;
        break;
      case TokenKind::IdToken:
        cat = category_of_prefix(t.text);
        break;
      case TokenKind::IntLit:
        cat = IdCategory::Int;
        break;
      case TokenKind::FloatLit:
        cat = IdCategory::Float;
        break;
      case TokenKind::StringLit:
        cat = IdCategory::String;
        break;
      case TokenKind::CharLit:
        cat = IdCategory::Char;
        break;
      default:
        out.push_back(t.text);  // keywords, separators, operators, true/false/null
        continue;
    }
    if (idioms.contains(t.text)) {
      out.push_back(t.text);
      continue;
    }
    const bool known = map.id_for(t.text) != nullptr;
    const std::string& id = map.intern(t.text, cat);
    if (!known && novel) novel->push_back(id);
    out.push_back(id);
  }
  return out;
}

AbstractedPair abstract_pair(const std::vector<Token>& fixed, const std::vector<Token>& buggy,
                             const IdiomSet& idioms) {
  AbstractedPair result;
  result.fixed = abstract_stream(fixed, idioms, result.map);
  std::vector<std::string> novel;
  result.buggy = abstract_stream(buggy, idioms, result.map, &novel);
  for (const std::string& id : novel) {
    if (is_identifier_category(category_of_prefix(id)))
      result.novel_identifier_ids.push_back(id);
    else
      result.novel_literal_ids.push_back(id);
  }
  return result;
}

std::string synthesize_literal(IdCategory cat, const std::set<std::string>& forbidden,
                               std::uint64_t seed) {
  Rng rng(seed);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::string value;
    switch (cat) {
      case IdCategory::Int:
        value = std::to_string(rng.next_below(1u << 31));
        break;
      case IdCategory::Float:
        value = std::to_string(rng.next_below(1000)) + "." + std::to_string(rng.next_below(10));
        break;
      case IdCategory::String:
        value = "\"lit" + std::to_string(rng.next_below(1000000)) + "\"";
        break;
      case IdCategory::Char: {
        static const char kAlphabet[] =
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
        value = std::string("'") + kAlphabet[rng.next_below(sizeof(kAlphabet) - 1)] + "'";
        break;
      }
      default:
        throw std::logic_error("synthesize_literal: not a literal category");
    }
    if (!forbidden.count(value)) return value;
  }
  throw std::runtime_error("synthesize_literal: could not find a fresh value");
}

ConcretizeResult concretize(const std::vector<std::string>& abstract_tokens, const IdMap& map,
                            std::uint64_t seed) {
  ConcretizeResult result;
  result.tokens.reserve(abstract_tokens.size());

  std::set<std::string> taken;
  for (const auto& [id, text] : map.entries()) taken.insert(text);

  std::size_t fresh = 0;
  for (const std::string& tok : abstract_tokens) {
    if (!java::is_id_token_text(tok)) {
      result.tokens.push_back(tok);
      continue;
    }
    if (const std::string* text = map.text_for(tok)) {
      result.tokens.push_back(*text);
      continue;
    }
    auto memo = result.synthesized.find(tok);
    if (memo != result.synthesized.end()) {
      result.tokens.push_back(memo->second);
      continue;
    }
    IdCategory cat = category_of_prefix(tok);
    if (is_identifier_category(cat)) throw UnmappableIdentifier(tok);
    std::string value = synthesize_literal(cat, taken, derive_seed(seed, fresh++));
    taken.insert(value);
    result.synthesized.emplace(tok, value);
    result.tokens.push_back(value);
  }
  return result;
}

}  // namespace mutgen
