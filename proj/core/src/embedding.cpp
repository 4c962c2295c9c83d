#include "mutgen/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "mutgen/rng.hpp"

namespace mutgen {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// cumulative unigram^0.75 table; sampling is a binary search over it
struct NoiseTable {
  std::vector<double> cumulative;
  double total = 0.0;

  explicit NoiseTable(const std::vector<double>& counts) {
    cumulative.reserve(counts.size());
    for (double c : counts) {
      total += std::pow(c, 0.75);
      cumulative.push_back(total);
    }
  }

  int sample(Rng& rng) const {
    const double u = rng.next_double() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<int>(it - cumulative.begin());
  }
};

}  // namespace

std::vector<DocEmbedding> embed_documents(const std::vector<ActionDoc>& docs,
                                          const EmbedConfig& config, std::uint64_t seed) {
  if (config.dim < 1) throw std::runtime_error("embedding dimension must be positive");

  // canonical processing order: sorted by id, so input order cannot matter
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return docs[a].id < docs[b].id; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (docs[order[i - 1]].id == docs[order[i]].id)
      throw std::runtime_error("duplicate document id: " + docs[order[i]].id);

  std::unordered_map<std::string, int> vocab;
  std::vector<double> counts;
  std::vector<std::vector<int>> doc_words(docs.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const ActionDoc& doc = docs[order[rank]];
    for (const std::string& w : doc.words) {
      auto [it, inserted] = vocab.try_emplace(w, static_cast<int>(counts.size()));
      if (inserted) counts.push_back(0.0);
      counts[it->second] += 1.0;
      doc_words[rank].push_back(it->second);
    }
  }

  Eigen::MatrixXd dvec(order.size(), config.dim);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    Rng init(derive_seed(seed, 0x1000000 + rank));
    for (int j = 0; j < config.dim; ++j)
      dvec(static_cast<Eigen::Index>(rank), j) = (init.next_double() - 0.5) / config.dim;
  }
  Eigen::MatrixXd wvec = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(counts.size()),
                                               config.dim);

  std::size_t total_words = 0;
  for (const auto& ws : doc_words) total_words += ws.size();
  const double total_updates =
      std::max<double>(1.0, static_cast<double>(total_words) * config.epochs);

  if (!counts.empty()) {
    const NoiseTable noise(counts);
    std::size_t processed = 0;
    Eigen::VectorXd verr(config.dim);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (doc_words[rank].empty()) continue;
        Rng rng(derive_seed(derive_seed(seed, rank), static_cast<std::uint64_t>(epoch)));
        auto row = dvec.row(static_cast<Eigen::Index>(rank));
        for (int wi : doc_words[rank]) {
          const double progress = static_cast<double>(processed++) / total_updates;
          const double lr = std::max(config.min_learning_rate,
                                     config.learning_rate * (1.0 - progress));
          verr.setZero();
          for (int t = 0; t <= config.negatives; ++t) {
            const int target = t == 0 ? wi : noise.sample(rng);
            if (t > 0 && target == wi) continue;
            const double label = t == 0 ? 1.0 : 0.0;
            const double e = (sigmoid(row.dot(wvec.row(target))) - label) * lr;
            verr += e * wvec.row(target).transpose();
            wvec.row(target) -= e * row;
          }
          row -= verr.transpose();
        }
      }
    }
  }

  std::vector<DocEmbedding> out(docs.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    DocEmbedding& e = out[order[rank]];
    e.doc_id = docs[order[rank]].id;
    e.vector.assign(static_cast<std::size_t>(config.dim), 0.0);
    if (!doc_words[rank].empty())
      for (int j = 0; j < config.dim; ++j)
        e.vector[static_cast<std::size_t>(j)] = dvec(static_cast<Eigen::Index>(rank), j);
  }
  return out;
}

}  // namespace mutgen
