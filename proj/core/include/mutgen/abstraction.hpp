#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "mutgen/lexer.hpp"

namespace mutgen {

// Frequent identifiers and literals that stay verbatim during abstraction.
struct IdiomSet {
  std::set<std::string> items;

  bool contains(const std::string& text) const { return items.count(text) > 0; }
  std::size_t size() const { return items.size(); }
};

// One idiom per line; blank lines and '#' comments ignored. Keywords,
// separators, operators and the boolean/null literals can never be idioms
// and are dropped (reported through `diags` when given).
IdiomSet load_idioms(std::istream& in, std::vector<std::string>* diags = nullptr);
void save_idioms(const IdiomSet& idioms, std::ostream& out);

// Ranks distinct identifier/literal tokens by frequency and keeps the top
// `quantile` share (at least one; ties at the boundary included).
IdiomSet mine_idioms(const std::vector<std::vector<java::Token>>& methods, double quantile);

enum class IdCategory { Var, Method, Type, String, Int, Float, Char };

std::string_view category_prefix(IdCategory cat);

// Bijective text <-> placeholder map. Placeholders are numbered 1..n per
// category in the order texts are first seen.
class IdMap {
 public:
  // returns the existing placeholder for `text` or assigns the next one
  const std::string& intern(const std::string& text, IdCategory cat);

  const std::string* id_for(const std::string& text) const;
  const std::string* text_for(const std::string& id) const;

  // (placeholder, original text) in first-seen order
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::unordered_map<std::string, std::string> by_text_;
  std::unordered_map<std::string, std::string> by_id_;
  std::map<IdCategory, int> next_;
};

struct AbstractedPair {
  std::vector<std::string> fixed;
  std::vector<std::string> buggy;
  IdMap map;
  // placeholders first introduced by the buggy side
  std::vector<std::string> novel_identifier_ids;
  std::vector<std::string> novel_literal_ids;
};

// Abstracts the fixed stream first, then the buggy stream against the same
// map, so shared names get identical placeholders on both sides.
AbstractedPair abstract_pair(const std::vector<java::Token>& fixed,
                             const std::vector<java::Token>& buggy, const IdiomSet& idioms);

// Single-stream abstraction (used when mutating new input).
std::vector<std::string> abstract_stream(const std::vector<java::Token>& tokens,
                                         const IdiomSet& idioms, IdMap& map,
                                         std::vector<std::string>* novel = nullptr);

class UnmappableIdentifier : public std::runtime_error {
 public:
  explicit UnmappableIdentifier(const std::string& id)
      : std::runtime_error("placeholder has no source text and cannot be invented: " + id),
        id_token(id) {}
  std::string id_token;
};

struct ConcretizeResult {
  std::vector<std::string> tokens;
  // placeholder -> invented literal, for placeholders absent from the map
  std::map<std::string, std::string> synthesized;
};

// Maps placeholders back to source text. Unknown literal placeholders get
// deterministic fresh values (same placeholder, same value); unknown
// identifier placeholders throw UnmappableIdentifier.
ConcretizeResult concretize(const std::vector<std::string>& abstract_tokens, const IdMap& map,
                            std::uint64_t seed);

// Deterministic fresh literal of the given category avoiding `forbidden`.
std::string synthesize_literal(IdCategory cat, const std::set<std::string>& forbidden,
                               std::uint64_t seed);

}  // namespace mutgen
