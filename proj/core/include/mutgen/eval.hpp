#pragma once

// Evaluation of model predictions against buggy-side references: BLEU-4,
// paired bootstrap significance, prediction classification, token and AST
// operation analysis, syntactic validity rates, and report emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mutgen/dataset.hpp"
#include "mutgen/jsonl.hpp"
#include "mutgen/seq2seq.hpp"

namespace mutgen {

using TokenSeq = std::vector<std::string>;

// BLEU-4 in [0, 1]: geometric mean of clipped 1..4-gram precisions with
// brevity penalty, no smoothing. Any empty precision numerator or
// denominator yields 0. A sentence score is a corpus of one pair.
double sentence_bleu(const TokenSeq& candidate, const TokenSeq& reference);

// Corpus-level BLEU-4: clipped match and total counts are summed over all
// pairs before the precisions are formed. Empty input yields 0.
double corpus_bleu(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs);

// One test example: fixed input, buggy reference, model prediction.
struct EvalTriple {
  TokenSeq fixed;
  TokenSeq buggy;
  TokenSeq predicted;
};

// Paired bootstrap over delta = BLEU(predicted, buggy) - BLEU(fixed, buggy).
struct BootstrapResult {
  int m = 0;                   // number of resamples
  std::vector<double> deltas;  // one per resample, in resample order
  double ci_low = 0.0;         // 2.5th percentile, nearest rank
  double ci_high = 0.0;        // 97.5th percentile, nearest rank
  bool significant = false;    // true when the interval excludes zero
};

// Draws m resamples of size |test| with replacement; resample i uses its own
// generator derived from (seed, i), so results are reproducible and
// insensitive to m. Throws EmptyInput when test is empty, and
// std::invalid_argument when m < 1.
BootstrapResult bootstrap_delta(const std::vector<EvalTriple>& test, int m,
                                std::uint64_t seed);

enum class PredictionCategory { Perfect, Mutated, Bad };

std::string_view category_name(PredictionCategory c);

// Perfect: prediction equals the buggy reference. Bad: prediction equals the
// fixed input (no change introduced). Mutated: anything else.
PredictionCategory classify_prediction(const TokenSeq& fixed,
                                       const TokenSeq& buggy,
                                       const TokenSeq& predicted);

enum class TokenOp { Insertion, Changes, Deletion, None };

std::string_view token_op_name(TokenOp op);

// Token-level effect of the prediction relative to the fixed input:
// longer = Insertion, shorter = Deletion, same length but different =
// Changes, identical = None.
TokenOp token_ops(const TokenSeq& fixed, const TokenSeq& predicted);

struct AstOpsResult {
  bool same_set = false;       // edit actions agree as sets
  bool same_multiset = false;  // edit actions agree with frequencies
  bool unparseable = false;    // prediction did not lex or parse
};

// Compares the AST edit script fixed->buggy against fixed->predicted. A
// prediction that fails to lex or parse is reported as a non-match with the
// unparseable flag set. The fixed and buggy sides must parse; failures there
// propagate as exceptions.
AstOpsResult ast_ops_match(const TokenSeq& fixed, const TokenSeq& buggy,
                           const TokenSeq& predicted);

struct PredictionRecord {
  std::string tp_id;
  TokenSeq abstract_f;
  TokenSeq abstract_b;
  TokenSeq abstract_p;
  PredictionCategory category = PredictionCategory::Bad;
  TokenOp token_op = TokenOp::None;
  bool lexical_ok = true;
  bool syntactic_ok = true;
  std::optional<AstOpsResult> ast;  // present for mutated predictions only
};

// Builds the full record for one prediction. Perfect and bad predictions are
// syntactically valid by construction; mutated predictions are checked.
PredictionRecord evaluate_prediction(const TransformationPair& tp,
                                     const TokenSeq& predicted);

struct SyntacticRates {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t mutated_total = 0;
  std::size_t mutated_correct = 0;
  double overall_rate = 1.0;
  double mutated_rate = 1.0;
  bool overall_defined = false;  // false when there are no records
  bool mutated_defined = false;  // false when there are no mutated records
};

// Fraction of predictions that parse, overall and among mutated ones.
// A zero denominator leaves the rate at 1.0 with the defined flag false.
SyntacticRates syntactic_rates(const std::vector<PredictionRecord>& records);

struct DistributionSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::vector<int> counts;  // per-input values the summary is taken over
};

// Five-number summary plus mean over integer counts; quartiles use linear
// interpolation between order statistics (R type 7). Empty input yields an
// all-zero summary.
DistributionSummary summarize_counts(const std::vector<int>& counts);

// For each input, counts how many distinct greedy outputs the given models
// produce, then summarizes those counts. Throws std::invalid_argument when
// models is empty.
DistributionSummary unique_mutants(const std::vector<TokenSeq>& inputs,
                                   const std::vector<Checkpoint>& models);

// Integer percentage of part in whole, half up: floor(100*part/whole + 0.5).
// A zero whole yields 0.
int percent_half_up(std::size_t part, std::size_t whole);

struct EvalReport {
  int schema_version = 1;

  std::size_t total = 0;
  std::size_t perfect = 0;
  std::size_t mutated = 0;
  std::size_t bad = 0;
  int perfect_percent = 0;
  int mutated_percent = 0;
  int bad_percent = 0;

  // Corpus-level scores are primary; mean sentence scores are informational.
  double bleu_baseline_corpus = 0.0;  // candidate = fixed input
  double bleu_model_corpus = 0.0;     // candidate = prediction
  double bleu_baseline_mean_sentence = 0.0;
  double bleu_model_mean_sentence = 0.0;
  BootstrapResult bootstrap;

  std::size_t op_insertion = 0;
  std::size_t op_changes = 0;
  std::size_t op_deletion = 0;
  std::size_t op_none = 0;

  // AST agreement over mutated predictions; percentages are of mutated.
  bool ast_defined = false;  // false when there are no mutated predictions
  std::size_t ast_same_set = 0;
  std::size_t ast_same_multiset = 0;
  std::size_t ast_unparseable = 0;
  int ast_same_set_percent = 0;
  int ast_same_multiset_percent = 0;

  SyntacticRates syntactic;

  // Present only when multiple models were compared.
  std::optional<DistributionSummary> mutants;
};

// Aggregates records into a report, including the bootstrap test with m
// resamples. Empty records yield a zeroed report with no bootstrap run.
EvalReport build_report(const std::vector<PredictionRecord>& records,
                        int bootstrap_m, std::uint64_t seed);

// Serialization omits the raw bootstrap delta and count vectors; the
// round trip report_to_json(report_from_json(j)) == j holds.
Json report_to_json(const EvalReport& report);
EvalReport report_from_json(const Json& j);

// Writes the JSON report, and when csv_dir is given, flat CSV companions
// (classification, token_ops, ast_ops, syntactic, bleu, unique_mutants)
// into that directory. Rewriting the same report is byte-identical.
void emit_report(const EvalReport& report, const std::filesystem::path& json_path,
                 const std::optional<std::filesystem::path>& csv_dir = std::nullopt);

}  // namespace mutgen
