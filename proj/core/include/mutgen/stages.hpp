#pragma once

// File-to-file drivers for the pipeline stages. Each function reads its
// inputs, writes its artifacts, and logs per-stage counters (records in,
// records out, drop reasons) to the given stream. Artifacts contain no
// timestamps or machine state, so identical inputs, config, and seed give
// byte-identical outputs. Data problems throw std::runtime_error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mutgen/config.hpp"
#include "mutgen/corpus.hpp"
#include "mutgen/dataset.hpp"
#include "mutgen/eval.hpp"
#include "mutgen/seq2seq.hpp"

namespace mutgen::stages {

struct IngestOutcome {
  IngestStats stats;
  std::size_t pairs_written = 0;
};

// commits JSONL -> bug-fix file pairs JSONL
IngestOutcome run_ingest(const std::filesystem::path& corpus,
                         const std::filesystem::path& out, int max_files,
                         std::ostream& log);

struct MineOutcome {
  std::size_t methods = 0;
  std::size_t idioms = 0;
};

// file pairs JSONL -> idiom list (one token per line); both sides of every
// pair contribute their parseable methods to the frequency distribution
MineOutcome run_mine_idioms(const std::filesystem::path& pairs,
                            const std::filesystem::path& out, double quantile,
                            std::ostream& log);

struct ExtractOutcome {
  std::size_t pairs_in = 0;
  std::size_t tps_built = 0;
  std::size_t dropped_too_many_actions = 0;
  std::size_t dropped_too_long = 0;
  std::size_t dropped_equal = 0;
  std::size_t kept = 0;
};

// file pairs JSONL -> transformation pairs JSONL; empty idiom path means no
// idioms stay verbatim
ExtractOutcome run_extract(const std::filesystem::path& pairs,
                           const std::filesystem::path& idioms,
                           const std::filesystem::path& out, int max_tokens,
                           int max_actions, std::ostream& log);

struct ClusterSpec {
  bool auto_k = true;
  int k = 0;   // used when auto_k is false
  int k_min = 2;
  int k_max = 8;
  int dim = 64;
  int epochs = 20;
};

struct ClusterOutcome {
  int k = 0;
  double silhouette = 0.0;
  double inertia = 0.0;
  std::vector<std::size_t> sizes;
};

// tps JSONL -> same records with a cluster field, in input order, plus a
// JSON summary. Embedding and k-means run on derived child seeds of `seed`.
ClusterOutcome run_cluster(const std::filesystem::path& tps_in, const ClusterSpec& spec,
                           std::uint64_t seed, const std::filesystem::path& tps_out,
                           const std::filesystem::path& report, std::ostream& log);

struct TrainOutcome {
  std::size_t selected = 0;  // TPs after set/cluster filtering
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  double best_val_loss = 0.0;
};

// tps JSONL -> model directory with the best checkpoint at the root, the
// final one under last/, the split under splits/, and the idiom list copied
// alongside when given. The split uses child seed (seed, 1) and the model
// child seed (seed, 2).
TrainOutcome run_train(const std::filesystem::path& tps, const std::string& set_name,
                       std::optional<int> cluster, Seq2SeqConfig config,
                       std::uint64_t seed, const std::filesystem::path& idioms,
                       const std::filesystem::path& out_dir, std::ostream& log);

struct MutateOutcome {
  std::size_t hypotheses = 0;  // beam results considered
  std::size_t emitted = 0;     // concretized mutants written
  std::size_t unmappable = 0;  // skipped: placeholder with no source text
};

// model dir + one Java method source file -> up to `beam` concretized
// mutants on `mutants_out` (one per line) and a JSON sidecar with the
// abstract forms, scores, synthesized literals, and skipped hypotheses.
// The idiom list is read from the model directory when present.
MutateOutcome run_mutate(const std::filesystem::path& model_dir,
                         const std::filesystem::path& input, int beam,
                         std::uint64_t seed, const std::filesystem::path& sidecar,
                         std::ostream& mutants_out, std::ostream& log);

struct EvaluateOutcome {
  EvalReport report;
};

// model dir + tps JSONL -> report JSON (+ optional CSV tables): greedy
// predictions on every abstract_f, scored against abstract_b
EvaluateOutcome run_evaluate(const std::filesystem::path& model_dir,
                             const std::filesystem::path& test, int bootstrap_m,
                             std::uint64_t seed, const std::filesystem::path& report_path,
                             const std::optional<std::filesystem::path>& csv_dir,
                             std::ostream& log);

struct PipelineOutcome {
  IngestOutcome ingest;
  MineOutcome idioms;
  ExtractOutcome extract;
  ClusterOutcome cluster;
  TrainOutcome train;
  EvaluateOutcome evaluate;
};

// Chains every stage under config.out_dir: pairs.jsonl, idioms.txt,
// tps.jsonl, tps.clustered.jsonl, clusters.json, model/, report.json,
// tables/. The model is evaluated on its own held-out test split.
PipelineOutcome run_pipeline(const PipelineConfig& config, std::ostream& log);

}  // namespace mutgen::stages
