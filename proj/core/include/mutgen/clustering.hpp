#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mutgen {

class InvalidK : public std::runtime_error {
 public:
  InvalidK(int k, std::size_t distinct)
      : std::runtime_error("k = " + std::to_string(k) + " needs 1 <= k <= " +
                           std::to_string(distinct) + " distinct vectors") {}
};

class UndefinedForSingleCluster : public std::runtime_error {
 public:
  UndefinedForSingleCluster()
      : std::runtime_error("silhouette needs at least two clusters") {}
};

struct ClusteringResult {
  int k = 0;
  std::vector<int> assignments;  // parallel to the input vectors
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;     // sum of squared distances to assigned centroids
  double silhouette = 0.0;  // NaN when k = 1 (undefined)
};

// Lloyd's algorithm with k-means++ seeding, best inertia over `restarts`
// independent runs. Each run iterates to an assignment fixpoint (at most
// 300 rounds); an emptied cluster is re-seeded at the point farthest from
// its assigned centroid. Ties in assignment go to the lowest centroid
// index. Throws InvalidK unless 1 <= k <= #distinct vectors.
ClusteringResult kmeans(const std::vector<std::vector<double>>& vectors, int k,
                        std::uint64_t seed, int restarts = 10);

// Mean over points of (b - a) / max(a, b) with Euclidean distances, where a
// is the mean distance to the point's own cluster and b the smallest mean
// distance to another cluster. Singletons score 0, as does a point whose a
// and b are both 0. Throws UndefinedForSingleCluster when every point lands
// in one cluster, std::runtime_error on an empty cluster label gap.
double silhouette(const std::vector<std::vector<double>>& vectors,
                  const std::vector<int>& assignments);

// index of the best score; exact ties go to the earliest entry
std::size_t best_by_silhouette(const std::vector<double>& scores);

// Runs kmeans for every k in [k_min, k_max] and keeps the silhouette
// winner (ties to the smallest k). Infeasible ks propagate InvalidK.
ClusteringResult select_k(const std::vector<std::vector<double>>& vectors, int k_min,
                          int k_max, std::uint64_t seed);

}  // namespace mutgen
