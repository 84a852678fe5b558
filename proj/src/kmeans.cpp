#include "csp/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "csp/rng.hpp"

namespace csp {
namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    std::uint64_t seed, int max_iters) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  const std::size_t n = points.size();
  KMeansResult res;
  res.labels.assign(n, 0);
  if (n == 0) {
    res.centroids.assign(static_cast<std::size_t>(k), {});
    return res;
  }

  Rng rng(seed);
  std::vector<std::vector<double>> centroids;
  centroids.push_back(points[rng.next_index(n)]);
  std::vector<double> d2(n, 0.0);
  while (centroids.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centroids) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // All remaining mass sits on existing centroids; duplicate one.
      centroids.push_back(points[rng.next_index(n)]);
      continue;
    }
    double target = rng.next_canonical() * total;
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target <= 0.0) {
        pick = i;
        break;
      }
    }
    centroids.push_back(points[pick]);
  }

  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::max();
      for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = sq_dist(points[i], centroids[c]);
        // Distance ties keep the point's current cluster (so singleton
        // repairs below stay put), then fall to the lowest index.
        if (d < best_d || (d == best_d && static_cast<int>(c) == res.labels[i])) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      if (res.labels[i] != best) {
        res.labels[i] = best;
        changed = true;
      }
    }
    res.iterations = iter + 1;
    if (!changed && iter > 0) break;

    const std::size_t dim = points[0].size();
    std::vector<std::vector<double>> sums(centroids.size(),
                                          std::vector<double>(dim, 0.0));
    std::vector<int> counts(centroids.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = res.labels[i];
      ++counts[static_cast<std::size_t>(c)];
      for (std::size_t d = 0; d < dim; ++d)
        sums[static_cast<std::size_t>(c)][d] += points[i][d];
    }
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (counts[c] == 0) continue;  // handled by the repair pass below
      for (std::size_t d = 0; d < dim; ++d)
        centroids[c][d] = sums[c][d] / counts[c];
    }

    // Singleton repair: an empty cluster steals the point farthest from its
    // own centroid (the usual remedy, e.g. duplicate points under k-means++
    // seeding), so k clusters stay populated whenever k <= n.
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      if (counts[c] != 0) continue;
      std::size_t donor = n;
      double worst = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto owner = static_cast<std::size_t>(res.labels[i]);
        if (counts[owner] <= 1) continue;
        const double d = sq_dist(points[i], centroids[owner]);
        if (d > worst) {
          worst = d;
          donor = i;
        }
      }
      if (donor == n) break;  // fewer points than clusters
      --counts[static_cast<std::size_t>(res.labels[donor])];
      res.labels[donor] = static_cast<int>(c);
      counts[c] = 1;
      centroids[c] = points[donor];
    }
  }
  res.centroids = std::move(centroids);
  return res;
}

}  // namespace csp
