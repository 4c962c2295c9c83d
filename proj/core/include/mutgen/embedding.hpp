#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mutgen {

// An edit-action word list under a stable document id.
struct ActionDoc {
  std::string id;
  std::vector<std::string> words;
};

struct DocEmbedding {
  std::string doc_id;
  std::vector<double> vector;
};

struct EmbedConfig {
  int dim = 64;
  int epochs = 20;
  int negatives = 5;
  double learning_rate = 0.025;      // decays linearly over all updates
  double min_learning_rate = 1e-4;
};

// Distributed bag-of-words paragraph vectors with negative sampling: each
// document vector learns to score its own words above noise words drawn
// from the unigram^0.75 distribution. Training order and per-document RNG
// streams are keyed by document id, so permuting the input only permutes
// the output (one embedding per doc, input order). Empty documents get the
// zero vector. Ids must be unique; throws std::runtime_error otherwise.
std::vector<DocEmbedding> embed_documents(const std::vector<ActionDoc>& docs,
                                          const EmbedConfig& config, std::uint64_t seed);

}  // namespace mutgen
