#include "mutgen/clustering.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>

#include "mutgen/rng.hpp"

namespace mutgen {

namespace {

double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

std::size_t count_distinct(const std::vector<std::vector<double>>& vectors) {
  std::set<std::vector<double>> seen(vectors.begin(), vectors.end());
  return seen.size();
}

// k-means++: first centroid uniform, then each next one with probability
// proportional to the squared distance from the nearest chosen centroid.
std::vector<std::vector<double>> seed_centroids(
    const std::vector<std::vector<double>>& vectors, int k, Rng& rng) {
  std::vector<std::vector<double>> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  centroids.push_back(vectors[rng.next_below(vectors.size())]);

  std::vector<double> nearest(vectors.size());
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      double best = sq_distance(vectors[i], centroids[0]);
      for (std::size_t c = 1; c < centroids.size(); ++c) {
        best = std::min(best, sq_distance(vectors[i], centroids[c]));
      }
      nearest[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // every point coincides with a centroid; any leftover pick works
      centroids.push_back(vectors[rng.next_below(vectors.size())]);
      continue;
    }
    double ticket = rng.next_double() * total;
    std::size_t chosen = vectors.size() - 1;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      ticket -= nearest[i];
      if (ticket <= 0.0) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(vectors[chosen]);
  }
  return centroids;
}

int nearest_centroid(const std::vector<double>& point,
                     const std::vector<std::vector<double>>& centroids) {
  int best = 0;
  double best_d = sq_distance(point, centroids[0]);
  for (std::size_t c = 1; c < centroids.size(); ++c) {
    const double d = sq_distance(point, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

double total_inertia(const std::vector<std::vector<double>>& vectors,
                     const std::vector<int>& assignments,
                     const std::vector<std::vector<double>>& centroids) {
  double sum = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    sum += sq_distance(vectors[i], centroids[static_cast<std::size_t>(assignments[i])]);
  }
  return sum;
}

ClusteringResult lloyd_run(const std::vector<std::vector<double>>& vectors, int k,
                           Rng& rng) {
  const std::size_t dim = vectors[0].size();
  ClusteringResult result;
  result.k = k;
  result.centroids = seed_centroids(vectors, k, rng);
  result.assignments.assign(vectors.size(), 0);

  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int round = 0; round < 300; ++round) {
    bool changed = false;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const int c = nearest_centroid(vectors[i], result.centroids);
      if (c != result.assignments[i]) {
        result.assignments[i] = c;
        changed = true;
      }
    }
    if (!changed && round > 0) break;

    std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                          std::vector<double>(dim, 0.0));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const auto c = static_cast<std::size_t>(result.assignments[i]);
      for (std::size_t d = 0; d < dim; ++d) sums[c][d] += vectors[i][d];
      ++counts[c];
    }
    for (int c = 0; c < k; ++c) {
      const auto cu = static_cast<std::size_t>(c);
      if (counts[cu] == 0) {
        // revive the cluster at the point farthest from its own centroid;
        // that point gains a distance-0 option, nobody else gets worse
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < vectors.size(); ++i) {
          const double d = sq_distance(
              vectors[i], result.centroids[static_cast<std::size_t>(result.assignments[i])]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        result.centroids[cu] = vectors[far];
        continue;
      }
      for (std::size_t d = 0; d < dim; ++d) {
        result.centroids[cu][d] = sums[cu][d] / counts[cu];
      }
    }

    const double inertia = total_inertia(vectors, result.assignments, result.centroids);
    assert(inertia <= prev_inertia + 1e-9);
    prev_inertia = inertia;
  }

  // final reassignment so assignments match the latest centroids
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    result.assignments[i] = nearest_centroid(vectors[i], result.centroids);
  }
  result.inertia = total_inertia(vectors, result.assignments, result.centroids);
  return result;
}

}  // namespace

ClusteringResult kmeans(const std::vector<std::vector<double>>& vectors, int k,
                        std::uint64_t seed, int restarts) {
  const std::size_t distinct = count_distinct(vectors);
  if (k < 1 || static_cast<std::size_t>(k) > distinct) throw InvalidK(k, distinct);

  ClusteringResult best;
  double best_inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    ClusteringResult run = lloyd_run(vectors, k, rng);
    if (run.inertia < best_inertia) {
      best_inertia = run.inertia;
      best = std::move(run);
    }
  }
  best.silhouette = k >= 2 ? silhouette(vectors, best.assignments)
                           : std::numeric_limits<double>::quiet_NaN();
  return best;
}

double silhouette(const std::vector<std::vector<double>>& vectors,
                  const std::vector<int>& assignments) {
  const std::size_t n = vectors.size();
  int k = 0;
  for (const int a : assignments) k = std::max(k, a + 1);
  if (k < 2) throw UndefinedForSingleCluster();

  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (const int a : assignments) ++sizes[static_cast<std::size_t>(a)];
  for (int c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] == 0) {
      throw std::runtime_error("cluster " + std::to_string(c) + " is empty");
    }
  }

  double total = 0.0;
  std::vector<double> mean_to(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = static_cast<std::size_t>(assignments[i]);
    if (sizes[own] == 1) continue;  // singleton scores 0

    std::fill(mean_to.begin(), mean_to.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_to[static_cast<std::size_t>(assignments[j])] +=
          std::sqrt(sq_distance(vectors[i], vectors[j]));
    }
    const double a = mean_to[own] / (sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
      if (c == own) continue;
      b = std::min(b, mean_to[c] / sizes[c]);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

std::size_t best_by_silhouette(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

ClusteringResult select_k(const std::vector<std::vector<double>>& vectors, int k_min,
                          int k_max, std::uint64_t seed) {
  if (k_min < 2 || k_max < k_min) {
    throw InvalidK(k_min, count_distinct(vectors));
  }
  std::vector<ClusteringResult> runs;
  std::vector<double> scores;
  for (int k = k_min; k <= k_max; ++k) {
    runs.push_back(kmeans(vectors, k, derive_seed(seed, static_cast<std::uint64_t>(k))));
    scores.push_back(runs.back().silhouette);
  }
  return runs[best_by_silhouette(scores)];
}

}  // namespace mutgen
