#pragma once

#include <cstdint>
#include <vector>

namespace csp {

struct KMeansResult {
  std::vector<int> labels;                       // cluster per point
  std::vector<std::vector<double>> centroids;    // k rows (may go unused/empty)
  int iterations = 0;
};

// Plain Lloyd iteration with distance-weighted (k-means++ style) seeding from
// a fixed seed. Assignment ties keep the current cluster, then go to the
// lowest centroid index; empty clusters are repaired by stealing the point
// farthest from its centroid. Fully deterministic, and every cluster is
// populated whenever k <= point count.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed, int max_iters = 100);

}  // namespace csp
