#pragma once

#include <optional>

#include "csp/optimizer.hpp"

namespace csp {

struct BaselineResult {
  std::optional<Solution> solution;
  bool timed_out = false;
};

// Interference-aware allocation (after Paolieri et al.): cache split evenly
// across cores up front, tasks placed first-fit in order of decreasing cache
// sensitivity so the tasks most hurt by a small allocation are packed first.
BaselineResult run_ia3(const TaskSet& ts, const CoreTestFn& test,
                       std::optional<Deadline> deadline = std::nullopt);

// Period-driven partitioning (after Berna & Puaut): one critical task per
// core with spaced periods, remaining tasks nested under the closest critical
// task of no smaller period, per-core cache sized afterwards. Overloaded
// cores shed their lowest-priority failing task to the next eligible core.
// A solution whose cache demand exceeds the platform is rejected.
BaselineResult run_pdpa(const TaskSet& ts, const CoreTestFn& test,
                        std::optional<Deadline> deadline = std::nullopt);

// Clustering allocation (after the k-means approach): tasks clustered by
// slowdown shape, one cluster per core, cache split in proportion to how
// much utilization each cluster can reclaim, leftovers placed first-fit.
BaselineResult run_cam(const TaskSet& ts, const CoreTestFn& test,
                       std::optional<Deadline> deadline = std::nullopt);

// Per-core greedy trim: lowers each populated core's allocation while the
// test keeps passing; idle cores drop to zero. Single pass, never raises.
Solution minimize_cache(const TaskSet& ts, Solution sol, const CoreTestFn& test);

}  // namespace csp
