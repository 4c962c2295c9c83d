#include "mutgen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mutgen/lexer.hpp"
#include "mutgen/parser.hpp"
#include "mutgen/rng.hpp"
#include "mutgen/treediff.hpp"

namespace mutgen {

namespace {

constexpr int kMaxOrder = 4;

std::string joined(const TokenSeq& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

// n-gram key: tokens joined with an unprintable separator
std::map<std::string, long long> ngram_counts(const TokenSeq& s, int n) {
  std::map<std::string, long long> counts;
  if (static_cast<int>(s.size()) < n) return counts;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    std::string key;
    for (int j = 0; j < n; ++j) {
      if (j) key += '\x1f';
      key += s[i + j];
    }
    ++counts[key];
  }
  return counts;
}

struct BleuTally {
  long long matches[kMaxOrder] = {0, 0, 0, 0};
  long long totals[kMaxOrder] = {0, 0, 0, 0};
  long long candidate_len = 0;
  long long reference_len = 0;

  void add(const TokenSeq& candidate, const TokenSeq& reference) {
    candidate_len += static_cast<long long>(candidate.size());
    reference_len += static_cast<long long>(reference.size());
    for (int n = 1; n <= kMaxOrder; ++n) {
      const auto cand = ngram_counts(candidate, n);
      const auto ref = ngram_counts(reference, n);
      for (const auto& [key, count] : cand) {
        totals[n - 1] += count;
        auto it = ref.find(key);
        if (it != ref.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }

  double score() const {
    if (candidate_len == 0) return 0.0;
    double log_precision = 0.0;
    for (int n = 0; n < kMaxOrder; ++n) {
      if (totals[n] == 0 || matches[n] == 0) return 0.0;
      log_precision += std::log(static_cast<double>(matches[n]) /
                                static_cast<double>(totals[n]));
    }
    double bp = 1.0;
    if (candidate_len < reference_len)
      bp = std::exp(1.0 - static_cast<double>(reference_len) /
                              static_cast<double>(candidate_len));
    return bp * std::exp(log_precision / kMaxOrder);
  }
};

java::AstNode parse_tokens(const TokenSeq& tokens) {
  return java::parse_method(java::lex(joined(tokens)));
}

// nearest-rank percentile over an ascending-sorted sample
double percentile_nearest_rank(const std::vector<double>& sorted, double q) {
  const auto m = static_cast<double>(sorted.size());
  auto rank = static_cast<long long>(std::ceil(q * m));
  if (rank < 1) rank = 1;
  if (rank > static_cast<long long>(sorted.size()))
    rank = static_cast<long long>(sorted.size());
  return sorted[static_cast<std::size_t>(rank - 1)];
}

// linear interpolation between order statistics (R type 7)
double quantile_type7(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - std::floor(h);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::string format_rate(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

double corpus_bleu(const std::vector<std::pair<TokenSeq, TokenSeq>>& pairs) {
  BleuTally tally;
  for (const auto& [candidate, reference] : pairs) tally.add(candidate, reference);
  return tally.score();
}

double sentence_bleu(const TokenSeq& candidate, const TokenSeq& reference) {
  return corpus_bleu({{candidate, reference}});
}

BootstrapResult bootstrap_delta(const std::vector<EvalTriple>& test, int m,
                                std::uint64_t seed) {
  if (test.empty()) throw EmptyInput("bootstrap requires a non-empty test set");
  if (m < 1) throw std::invalid_argument("bootstrap resample count must be >= 1");

  BootstrapResult result;
  result.m = m;
  result.deltas.reserve(static_cast<std::size_t>(m));
  const std::size_t n = test.size();
  for (int i = 0; i < m; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    BleuTally model;
    BleuTally baseline;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& t = test[rng.next_below(n)];
      model.add(t.predicted, t.buggy);
      baseline.add(t.fixed, t.buggy);
    }
    result.deltas.push_back(model.score() - baseline.score());
  }

  std::vector<double> sorted = result.deltas;
  std::sort(sorted.begin(), sorted.end());
  result.ci_low = percentile_nearest_rank(sorted, 0.025);
  result.ci_high = percentile_nearest_rank(sorted, 0.975);
  result.significant = result.ci_low > 0.0 || result.ci_high < 0.0;
  return result;
}

std::string_view category_name(PredictionCategory c) {
  switch (c) {
    case PredictionCategory::Perfect: return "perfect";
    case PredictionCategory::Mutated: return "mutated";
    case PredictionCategory::Bad: return "bad";
  }
  throw std::logic_error("unknown prediction category");
}

PredictionCategory classify_prediction(const TokenSeq& fixed, const TokenSeq& buggy,
                                       const TokenSeq& predicted) {
  if (predicted == buggy) return PredictionCategory::Perfect;
  if (predicted == fixed) return PredictionCategory::Bad;
  return PredictionCategory::Mutated;
}

std::string_view token_op_name(TokenOp op) {
  switch (op) {
    case TokenOp::Insertion: return "insertion";
    case TokenOp::Changes: return "changes";
    case TokenOp::Deletion: return "deletion";
    case TokenOp::None: return "none";
  }
  throw std::logic_error("unknown token op");
}

TokenOp token_ops(const TokenSeq& fixed, const TokenSeq& predicted) {
  if (predicted.size() > fixed.size()) return TokenOp::Insertion;
  if (predicted.size() < fixed.size()) return TokenOp::Deletion;
  return predicted == fixed ? TokenOp::None : TokenOp::Changes;
}

AstOpsResult ast_ops_match(const TokenSeq& fixed, const TokenSeq& buggy,
                           const TokenSeq& predicted) {
  AstOpsResult result;
  java::AstNode ast_p;
  try {
    ast_p = parse_tokens(predicted);
  } catch (const std::runtime_error&) {
    result.unparseable = true;
    return result;
  }
  const java::AstNode ast_f = parse_tokens(fixed);
  const java::AstNode ast_b = parse_tokens(buggy);
  const EditScript wanted = edit_script(ast_f, ast_b);
  const EditScript produced = edit_script(ast_f, ast_p);
  const ActionComparison cmp = compare_action_lists(wanted, produced);
  result.same_set = cmp.same_set;
  result.same_multiset = cmp.same_multiset;
  return result;
}

PredictionRecord evaluate_prediction(const TransformationPair& tp,
                                     const TokenSeq& predicted) {
  PredictionRecord record;
  record.tp_id = tp.id;
  record.abstract_f = tp.abstract_f;
  record.abstract_b = tp.abstract_b;
  record.abstract_p = predicted;
  record.category = classify_prediction(tp.abstract_f, tp.abstract_b, predicted);
  record.token_op = token_ops(tp.abstract_f, predicted);
  if (record.category == PredictionCategory::Mutated) {
    const java::SyntaxCheck check = java::check_syntax(joined(predicted));
    record.lexical_ok = check.lexes;
    record.syntactic_ok = check.parses;
    record.ast = ast_ops_match(tp.abstract_f, tp.abstract_b, predicted);
  }
  return record;
}

SyntacticRates syntactic_rates(const std::vector<PredictionRecord>& records) {
  SyntacticRates rates;
  for (const auto& record : records) {
    ++rates.total;
    if (record.syntactic_ok) ++rates.correct;
    if (record.category == PredictionCategory::Mutated) {
      ++rates.mutated_total;
      if (record.syntactic_ok) ++rates.mutated_correct;
    }
  }
  if (rates.total > 0) {
    rates.overall_defined = true;
    rates.overall_rate = static_cast<double>(rates.correct) /
                         static_cast<double>(rates.total);
  }
  if (rates.mutated_total > 0) {
    rates.mutated_defined = true;
    rates.mutated_rate = static_cast<double>(rates.mutated_correct) /
                         static_cast<double>(rates.mutated_total);
  }
  return rates;
}

DistributionSummary summarize_counts(const std::vector<int>& counts) {
  DistributionSummary summary;
  summary.counts = counts;
  if (counts.empty()) return summary;
  std::vector<double> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());
  summary.min = sorted.front();
  summary.max = sorted.back();
  summary.q1 = quantile_type7(sorted, 0.25);
  summary.median = quantile_type7(sorted, 0.5);
  summary.q3 = quantile_type7(sorted, 0.75);
  double sum = 0.0;
  for (double v : sorted) sum += v;
  summary.mean = sum / static_cast<double>(sorted.size());
  return summary;
}

DistributionSummary unique_mutants(const std::vector<TokenSeq>& inputs,
                                   const std::vector<Checkpoint>& models) {
  if (models.empty()) throw std::invalid_argument("unique_mutants needs at least one model");
  std::vector<int> counts;
  counts.reserve(inputs.size());
  for (const auto& input : inputs) {
    std::set<TokenSeq> outputs;
    for (const auto& model : models) outputs.insert(predict_greedy(model, input));
    counts.push_back(static_cast<int>(outputs.size()));
  }
  return summarize_counts(counts);
}

int percent_half_up(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0;
  const double value = 100.0 * static_cast<double>(part) / static_cast<double>(whole);
  return static_cast<int>(std::floor(value + 0.5));
}

EvalReport build_report(const std::vector<PredictionRecord>& records,
                        int bootstrap_m, std::uint64_t seed) {
  EvalReport report;
  report.total = records.size();

  std::vector<EvalTriple> triples;
  std::vector<std::pair<TokenSeq, TokenSeq>> baseline_pairs;
  std::vector<std::pair<TokenSeq, TokenSeq>> model_pairs;
  triples.reserve(records.size());
  baseline_pairs.reserve(records.size());
  model_pairs.reserve(records.size());

  double baseline_sentence_sum = 0.0;
  double model_sentence_sum = 0.0;
  for (const auto& record : records) {
    switch (record.category) {
      case PredictionCategory::Perfect: ++report.perfect; break;
      case PredictionCategory::Mutated: ++report.mutated; break;
      case PredictionCategory::Bad: ++report.bad; break;
    }
    switch (record.token_op) {
      case TokenOp::Insertion: ++report.op_insertion; break;
      case TokenOp::Changes: ++report.op_changes; break;
      case TokenOp::Deletion: ++report.op_deletion; break;
      case TokenOp::None: ++report.op_none; break;
    }
    if (record.ast) {
      if (record.ast->same_set) ++report.ast_same_set;
      if (record.ast->same_multiset) ++report.ast_same_multiset;
      if (record.ast->unparseable) ++report.ast_unparseable;
    }
    triples.push_back({record.abstract_f, record.abstract_b, record.abstract_p});
    baseline_pairs.emplace_back(record.abstract_f, record.abstract_b);
    model_pairs.emplace_back(record.abstract_p, record.abstract_b);
    baseline_sentence_sum += sentence_bleu(record.abstract_f, record.abstract_b);
    model_sentence_sum += sentence_bleu(record.abstract_p, record.abstract_b);
  }

  report.perfect_percent = percent_half_up(report.perfect, report.total);
  report.mutated_percent = percent_half_up(report.mutated, report.total);
  report.bad_percent = percent_half_up(report.bad, report.total);

  report.ast_defined = report.mutated > 0;
  report.ast_same_set_percent = percent_half_up(report.ast_same_set, report.mutated);
  report.ast_same_multiset_percent =
      percent_half_up(report.ast_same_multiset, report.mutated);

  report.syntactic = syntactic_rates(records);

  if (!records.empty()) {
    report.bleu_baseline_corpus = corpus_bleu(baseline_pairs);
    report.bleu_model_corpus = corpus_bleu(model_pairs);
    report.bleu_baseline_mean_sentence =
        baseline_sentence_sum / static_cast<double>(records.size());
    report.bleu_model_mean_sentence =
        model_sentence_sum / static_cast<double>(records.size());
    if (bootstrap_m > 0)
      report.bootstrap = bootstrap_delta(triples, bootstrap_m, seed);
  }
  return report;
}

Json report_to_json(const EvalReport& report) {
  Json j;
  j["schema_version"] = report.schema_version;
  j["counts"] = {{"total", report.total},
                 {"perfect", report.perfect},
                 {"mutated", report.mutated},
                 {"bad", report.bad}};
  j["percentages"] = {{"perfect", report.perfect_percent},
                      {"mutated", report.mutated_percent},
                      {"bad", report.bad_percent}};
  j["bleu"] = {{"baseline_corpus", report.bleu_baseline_corpus},
               {"model_corpus", report.bleu_model_corpus},
               {"baseline_mean_sentence", report.bleu_baseline_mean_sentence},
               {"model_mean_sentence", report.bleu_model_mean_sentence}};
  j["bootstrap"] = {{"m", report.bootstrap.m},
                    {"ci_low", report.bootstrap.ci_low},
                    {"ci_high", report.bootstrap.ci_high},
                    {"significant", report.bootstrap.significant}};
  j["token_ops"] = {{"insertion", report.op_insertion},
                    {"changes", report.op_changes},
                    {"deletion", report.op_deletion},
                    {"none", report.op_none}};
  if (report.ast_defined) {
    j["ast_ops"] = {{"same_set", report.ast_same_set},
                    {"same_multiset", report.ast_same_multiset},
                    {"unparseable", report.ast_unparseable},
                    {"same_set_percent", report.ast_same_set_percent},
                    {"same_multiset_percent", report.ast_same_multiset_percent}};
  } else {
    j["ast_ops"] = nullptr;
  }
  j["syntactic"] = {{"total", report.syntactic.total},
                    {"correct", report.syntactic.correct},
                    {"mutated_total", report.syntactic.mutated_total},
                    {"mutated_correct", report.syntactic.mutated_correct},
                    {"overall_rate", report.syntactic.overall_rate},
                    {"mutated_rate", report.syntactic.mutated_rate},
                    {"overall_defined", report.syntactic.overall_defined},
                    {"mutated_defined", report.syntactic.mutated_defined}};
  if (report.mutants) {
    j["unique_mutants"] = {{"min", report.mutants->min},
                           {"q1", report.mutants->q1},
                           {"median", report.mutants->median},
                           {"mean", report.mutants->mean},
                           {"q3", report.mutants->q3},
                           {"max", report.mutants->max}};
  } else {
    j["unique_mutants"] = nullptr;
  }
  return j;
}

EvalReport report_from_json(const Json& j) {
  EvalReport report;
  report.schema_version = j.at("schema_version").get<int>();
  const Json& counts = j.at("counts");
  report.total = counts.at("total").get<std::size_t>();
  report.perfect = counts.at("perfect").get<std::size_t>();
  report.mutated = counts.at("mutated").get<std::size_t>();
  report.bad = counts.at("bad").get<std::size_t>();
  const Json& percentages = j.at("percentages");
  report.perfect_percent = percentages.at("perfect").get<int>();
  report.mutated_percent = percentages.at("mutated").get<int>();
  report.bad_percent = percentages.at("bad").get<int>();
  const Json& bleu = j.at("bleu");
  report.bleu_baseline_corpus = bleu.at("baseline_corpus").get<double>();
  report.bleu_model_corpus = bleu.at("model_corpus").get<double>();
  report.bleu_baseline_mean_sentence = bleu.at("baseline_mean_sentence").get<double>();
  report.bleu_model_mean_sentence = bleu.at("model_mean_sentence").get<double>();
  const Json& bootstrap = j.at("bootstrap");
  report.bootstrap.m = bootstrap.at("m").get<int>();
  report.bootstrap.ci_low = bootstrap.at("ci_low").get<double>();
  report.bootstrap.ci_high = bootstrap.at("ci_high").get<double>();
  report.bootstrap.significant = bootstrap.at("significant").get<bool>();
  const Json& token_ops = j.at("token_ops");
  report.op_insertion = token_ops.at("insertion").get<std::size_t>();
  report.op_changes = token_ops.at("changes").get<std::size_t>();
  report.op_deletion = token_ops.at("deletion").get<std::size_t>();
  report.op_none = token_ops.at("none").get<std::size_t>();
  const Json& ast = j.at("ast_ops");
  if (!ast.is_null()) {
    report.ast_defined = true;
    report.ast_same_set = ast.at("same_set").get<std::size_t>();
    report.ast_same_multiset = ast.at("same_multiset").get<std::size_t>();
    report.ast_unparseable = ast.at("unparseable").get<std::size_t>();
    report.ast_same_set_percent = ast.at("same_set_percent").get<int>();
    report.ast_same_multiset_percent = ast.at("same_multiset_percent").get<int>();
  }
  const Json& syntactic = j.at("syntactic");
  report.syntactic.total = syntactic.at("total").get<std::size_t>();
  report.syntactic.correct = syntactic.at("correct").get<std::size_t>();
  report.syntactic.mutated_total = syntactic.at("mutated_total").get<std::size_t>();
  report.syntactic.mutated_correct = syntactic.at("mutated_correct").get<std::size_t>();
  report.syntactic.overall_rate = syntactic.at("overall_rate").get<double>();
  report.syntactic.mutated_rate = syntactic.at("mutated_rate").get<double>();
  report.syntactic.overall_defined = syntactic.at("overall_defined").get<bool>();
  report.syntactic.mutated_defined = syntactic.at("mutated_defined").get<bool>();
  const Json& mutants = j.at("unique_mutants");
  if (!mutants.is_null()) {
    DistributionSummary summary;
    summary.min = mutants.at("min").get<double>();
    summary.q1 = mutants.at("q1").get<double>();
    summary.median = mutants.at("median").get<double>();
    summary.mean = mutants.at("mean").get<double>();
    summary.q3 = mutants.at("q3").get<double>();
    summary.max = mutants.at("max").get<double>();
    report.mutants = summary;
  }
  return report;
}

void emit_report(const EvalReport& report, const std::filesystem::path& json_path,
                 const std::optional<std::filesystem::path>& csv_dir) {
  if (json_path.has_parent_path())
    std::filesystem::create_directories(json_path.parent_path());
  write_text_file(json_path, report_to_json(report).dump(2) + "\n");
  if (!csv_dir) return;
  std::filesystem::create_directories(*csv_dir);

  std::string classification = "category,count,percent\n";
  classification += "perfect," + std::to_string(report.perfect) + "," +
                    std::to_string(report.perfect_percent) + "\n";
  classification += "mutated," + std::to_string(report.mutated) + "," +
                    std::to_string(report.mutated_percent) + "\n";
  classification += "bad," + std::to_string(report.bad) + "," +
                    std::to_string(report.bad_percent) + "\n";
  write_text_file(*csv_dir / "classification.csv", classification);

  std::string ops = "op,count\n";
  ops += "insertion," + std::to_string(report.op_insertion) + "\n";
  ops += "changes," + std::to_string(report.op_changes) + "\n";
  ops += "deletion," + std::to_string(report.op_deletion) + "\n";
  ops += "none," + std::to_string(report.op_none) + "\n";
  write_text_file(*csv_dir / "token_ops.csv", ops);

  std::string bleu = "metric,value\n";
  bleu += "baseline_corpus," + format_rate(report.bleu_baseline_corpus) + "\n";
  bleu += "model_corpus," + format_rate(report.bleu_model_corpus) + "\n";
  bleu += "baseline_mean_sentence," +
          format_rate(report.bleu_baseline_mean_sentence) + "\n";
  bleu += "model_mean_sentence," + format_rate(report.bleu_model_mean_sentence) + "\n";
  bleu += "bootstrap_ci_low," + format_rate(report.bootstrap.ci_low) + "\n";
  bleu += "bootstrap_ci_high," + format_rate(report.bootstrap.ci_high) + "\n";
  bleu += std::string("bootstrap_significant,") +
          (report.bootstrap.significant ? "true" : "false") + "\n";
  write_text_file(*csv_dir / "bleu.csv", bleu);

  if (report.ast_defined) {
    std::string ast = "metric,count,percent\n";
    ast += "same_set," + std::to_string(report.ast_same_set) + "," +
           std::to_string(report.ast_same_set_percent) + "\n";
    ast += "same_multiset," + std::to_string(report.ast_same_multiset) + "," +
           std::to_string(report.ast_same_multiset_percent) + "\n";
    ast += "unparseable," + std::to_string(report.ast_unparseable) + "," +
           std::to_string(percent_half_up(report.ast_unparseable, report.mutated)) +
           "\n";
    write_text_file(*csv_dir / "ast_ops.csv", ast);
  }

  std::string syntactic = "scope,total,correct,rate\n";
  syntactic += "overall," + std::to_string(report.syntactic.total) + "," +
               std::to_string(report.syntactic.correct) + "," +
               format_rate(report.syntactic.overall_rate) + "\n";
  syntactic += "mutated," + std::to_string(report.syntactic.mutated_total) + "," +
               std::to_string(report.syntactic.mutated_correct) + "," +
               format_rate(report.syntactic.mutated_rate) + "\n";
  write_text_file(*csv_dir / "syntactic.csv", syntactic);

  if (report.mutants) {
    std::string mutants = "min,q1,median,mean,q3,max\n";
    mutants += format_rate(report.mutants->min) + "," +
               format_rate(report.mutants->q1) + "," +
               format_rate(report.mutants->median) + "," +
               format_rate(report.mutants->mean) + "," +
               format_rate(report.mutants->q3) + "," +
               format_rate(report.mutants->max) + "\n";
    write_text_file(*csv_dir / "unique_mutants.csv", mutants);
  }
}

}  // namespace mutgen
