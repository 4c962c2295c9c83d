#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mutgen/abstraction.hpp"
#include "mutgen/corpus.hpp"
#include "mutgen/jsonl.hpp"

namespace mutgen {

// One learnable fix: a mapped method pair, abstracted on both sides, plus
// the edit actions leading from the buggy tree to the fixed one.
struct TransformationPair {
  std::string id;
  std::string repo;
  std::string commit_id;
  std::string path;
  std::string method;
  std::vector<std::string> abstract_f;
  std::vector<std::string> abstract_b;
  std::vector<std::string> actions;  // `OP:LABEL` words, buggy -> fixed
  IdMap map;
  std::optional<int> cluster;
};

// Extracts one TP per mapped, modified method of the file pair. Methods that
// fail to lex/parse, map to nothing, or are unmodified produce no TP;
// problems go to `diags` when given.
std::vector<TransformationPair> build_tps(const FilePair& pair, const IdiomSet& idioms,
                                          std::vector<std::string>* diags = nullptr);

enum class TpDropReason { TooManyActions, TooLong, EqualAfterAbstraction };

std::string_view tp_drop_reason_name(TpDropReason reason);

struct TpDecision {
  bool keep = false;
  std::optional<TpDropReason> reason;
};

// Drops oversized or no-op pairs: more than `max_actions` edit actions,
// either side longer than `max_tokens`, or both sides equal after
// abstraction (checked in that order).
TpDecision filter_tp(const TransformationPair& tp, int max_actions = 100, int max_tokens = 50);

// Placeholders appearing in `buggy` but not in `fixed`, split by category.
struct NovelIds {
  std::vector<std::string> identifiers;  // VAR / METHOD / TYPE
  std::vector<std::string> literals;     // STRING / INT / FLOAT / CHAR
};

NovelIds novel_ids(const std::vector<std::string>& fixed, const std::vector<std::string>& buggy);

// ident: pairs whose buggy side introduces no new identifier placeholders
// (new literals allowed); ident_lit: the subset that introduces no new
// literal placeholders either. Pairs introducing identifiers land in neither.
struct IdentPartition {
  std::vector<TransformationPair> ident;
  std::vector<TransformationPair> ident_lit;
};

IdentPartition partition_ident_sets(const std::vector<TransformationPair>& tps);

class DatasetTooSmall : public std::runtime_error {
 public:
  explicit DatasetTooSmall(std::size_t n)
      : std::runtime_error("dataset has only " + std::to_string(n) +
                           " unique pairs; at least 10 are required") {}
};

struct DatasetSplit {
  std::vector<TransformationPair> train;
  std::vector<TransformationPair> validation;
  std::vector<TransformationPair> test;
};

// Collapses duplicate (abstract_f, abstract_b) pairs (first occurrence
// wins), shuffles with the seed, and splits 80/10/10 (sizes rounded half
// up for the two small parts). Throws DatasetTooSmall below 10 unique pairs.
DatasetSplit split_dataset(std::vector<TransformationPair> tps, std::uint64_t seed);

Json tp_to_json(const TransformationPair& tp);
TransformationPair tp_from_json(const Json& value);

}  // namespace mutgen
