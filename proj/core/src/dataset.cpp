#include "mutgen/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "mutgen/parser.hpp"
#include "mutgen/rng.hpp"
#include "mutgen/treediff.hpp"

namespace mutgen {
namespace {

const IdCategory kCategories[] = {IdCategory::Var,    IdCategory::Method, IdCategory::Type,
                                  IdCategory::String, IdCategory::Int,    IdCategory::Float,
                                  IdCategory::Char};

bool is_literal_category(IdCategory cat) {
  return cat == IdCategory::String || cat == IdCategory::Int || cat == IdCategory::Float ||
         cat == IdCategory::Char;
}

// category of a well-formed placeholder like VAR_3, or nothing
std::optional<IdCategory> placeholder_category(const std::string& text) {
  for (IdCategory cat : kCategories) {
    const std::string_view prefix = category_prefix(cat);
    if (text.size() <= prefix.size() || text.compare(0, prefix.size(), prefix) != 0) continue;
    const std::string_view digits(text.data() + prefix.size(), text.size() - prefix.size());
    if (std::all_of(digits.begin(), digits.end(),
                    [](char c) { return c >= '0' && c <= '9'; }))
      return cat;
  }
  return std::nullopt;
}

std::string joined(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    std::size_t j = line.find(' ', i);
    if (j == std::string::npos) j = line.size();
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

bool same_tokens(const std::vector<java::Token>& a, const std::vector<java::Token>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].kind != b[i].kind || a[i].text != b[i].text) return false;
  return true;
}

}  // namespace

std::vector<TransformationPair> build_tps(const FilePair& pair, const IdiomSet& idioms,
                                          std::vector<std::string>* diags) {
  std::vector<TransformationPair> tps;
  std::vector<java::MethodInfo> buggy, fixed;
  try {
    buggy = java::extract_methods(pair.buggy_source, diags);
    fixed = java::extract_methods(pair.fixed_source, diags);
  } catch (const std::exception& e) {
    if (diags) diags->push_back(pair.path + ": " + e.what());
    return tps;
  }

  int index = 0;
  for (auto [b, f] : map_methods(buggy, fixed)) {
    const java::MethodInfo& mb = buggy[b];
    const java::MethodInfo& mf = fixed[f];
    if (same_tokens(mb.tokens, mf.tokens)) continue;

    EditScript script = edit_script(mb.ast, mf.ast);
    if (script.size() == 0) continue;

    AbstractedPair abs = abstract_pair(mf.tokens, mb.tokens, idioms);
    java::SyntaxCheck cf = java::check_syntax(joined(abs.fixed));
    java::SyntaxCheck cb = java::check_syntax(joined(abs.buggy));
    if (!cf.parses || !cb.parses) {
      if (diags)
        diags->push_back(pair.path + ": abstracted form of " + mf.name + " does not parse");
      continue;
    }

    TransformationPair tp;
    tp.id = pair.commit_id + ":" + pair.path + "#" + std::to_string(index++);
    tp.repo = pair.repo;
    tp.commit_id = pair.commit_id;
    tp.path = pair.path;
    tp.method = mf.name;
    tp.abstract_f = std::move(abs.fixed);
    tp.abstract_b = std::move(abs.buggy);
    tp.actions = action_document(script);
    tp.map = std::move(abs.map);
    tps.push_back(std::move(tp));
  }
  return tps;
}

std::string_view tp_drop_reason_name(TpDropReason reason) {
  switch (reason) {
    case TpDropReason::TooManyActions: return "too_many_actions";
    case TpDropReason::TooLong: return "too_long";
    case TpDropReason::EqualAfterAbstraction: return "equal";
  }
  return "";
}

TpDecision filter_tp(const TransformationPair& tp, int max_actions, int max_tokens) {
  if (static_cast<int>(tp.actions.size()) > max_actions)
    return {false, TpDropReason::TooManyActions};
  if (static_cast<int>(tp.abstract_f.size()) > max_tokens ||
      static_cast<int>(tp.abstract_b.size()) > max_tokens)
    return {false, TpDropReason::TooLong};
  if (tp.abstract_f == tp.abstract_b) return {false, TpDropReason::EqualAfterAbstraction};
  return {true, std::nullopt};
}

NovelIds novel_ids(const std::vector<std::string>& fixed, const std::vector<std::string>& buggy) {
  std::set<std::string> known;
  for (const std::string& t : fixed)
    if (placeholder_category(t)) known.insert(t);

  NovelIds out;
  std::set<std::string> seen;
  for (const std::string& t : buggy) {
    auto cat = placeholder_category(t);
    if (!cat || known.count(t) || !seen.insert(t).second) continue;
    (is_literal_category(*cat) ? out.literals : out.identifiers).push_back(t);
  }
  return out;
}

IdentPartition partition_ident_sets(const std::vector<TransformationPair>& tps) {
  IdentPartition parts;
  for (const TransformationPair& tp : tps) {
    NovelIds novel = novel_ids(tp.abstract_f, tp.abstract_b);
    if (!novel.identifiers.empty()) continue;
    parts.ident.push_back(tp);
    if (novel.literals.empty()) parts.ident_lit.push_back(tp);
  }
  return parts;
}

DatasetSplit split_dataset(std::vector<TransformationPair> tps, std::uint64_t seed) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<TransformationPair> unique;
  for (TransformationPair& tp : tps)
    if (seen.insert({joined(tp.abstract_f), joined(tp.abstract_b)}).second)
      unique.push_back(std::move(tp));

  if (unique.size() < 10) throw DatasetTooSmall(unique.size());

  Rng rng(seed);
  rng.shuffle(unique);

  const auto n = static_cast<double>(unique.size());
  const auto n_val = static_cast<std::size_t>(std::llround(n * 0.10));
  const auto n_test = static_cast<std::size_t>(std::llround(n * 0.10));
  const std::size_t n_train = unique.size() - n_val - n_test;

  DatasetSplit split;
  auto it = unique.begin();
  split.train.assign(std::make_move_iterator(it), std::make_move_iterator(it + n_train));
  it += n_train;
  split.validation.assign(std::make_move_iterator(it), std::make_move_iterator(it + n_val));
  it += n_val;
  split.test.assign(std::make_move_iterator(it), std::make_move_iterator(unique.end()));
  return split;
}

Json tp_to_json(const TransformationPair& tp) {
  NovelIds novel = novel_ids(tp.abstract_f, tp.abstract_b);
  Json sets = Json::array();
  if (novel.identifiers.empty()) {
    sets.push_back("ident");
    if (novel.literals.empty()) sets.push_back("ident_lit");
  }
  Json map = Json::array();
  for (const auto& [id, text] : tp.map.entries()) map.push_back(Json::array({id, text}));
  Json out{{"id", tp.id},
           {"repo", tp.repo},
           {"commit", tp.commit_id},
           {"path", tp.path},
           {"method", tp.method},
           {"abstract_f", joined(tp.abstract_f)},
           {"abstract_b", joined(tp.abstract_b)},
           {"actions", tp.actions},
           {"map", std::move(map)},
           {"sets", std::move(sets)}};
  if (tp.cluster) out["cluster"] = *tp.cluster;
  return out;
}

TransformationPair tp_from_json(const Json& value) {
  if (!value.is_object()) throw std::runtime_error("transformation pair is not an object");
  auto text = [&](const char* key) {
    auto it = value.find(key);
    if (it == value.end() || !it->is_string())
      throw std::runtime_error(std::string("missing or non-string field: ") + key);
    return it->get<std::string>();
  };

  TransformationPair tp;
  tp.id = text("id");
  tp.repo = text("repo");
  tp.commit_id = text("commit");
  tp.path = text("path");
  tp.method = text("method");
  tp.abstract_f = split_tokens(text("abstract_f"));
  tp.abstract_b = split_tokens(text("abstract_b"));

  auto actions = value.find("actions");
  if (actions == value.end() || !actions->is_array())
    throw std::runtime_error("missing or non-array field: actions");
  for (const Json& a : *actions) tp.actions.push_back(a.get<std::string>());

  auto map = value.find("map");
  if (map == value.end() || !map->is_array())
    throw std::runtime_error("missing or non-array field: map");
  for (const Json& entry : *map) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::runtime_error("map entry is not an [id, text] pair");
    const auto id = entry[0].get<std::string>();
    const auto original = entry[1].get<std::string>();
    auto cat = placeholder_category(id);
    if (!cat) throw std::runtime_error("map id is not a placeholder: " + id);
    if (tp.map.intern(original, *cat) != id)
      throw std::runtime_error("map entries out of order at " + id);
  }

  auto cluster = value.find("cluster");
  if (cluster != value.end() && !cluster->is_null())
    tp.cluster = cluster->get<int>();
  return tp;
}

}  // namespace mutgen
