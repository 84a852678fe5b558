#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "csp/analysis.hpp"
#include "csp/taskmodel.hpp"

namespace csp {

// Ordering used by the inner allocation layer. kComp packs compatible periods
// together (rate-monotonic-friendly); kCase packs by ascending cache
// sensitivity potential so cache-hungry tasks are considered late, when the
// partial core already shows whether they fit.
enum class SortCriterion { kComp, kCase };

const char* criterion_name(SortCriterion c);

using CoreTestFn = std::function<bool(std::span<const Task* const>, int mu)>;

CoreTestFn make_core_test(Policy policy);

// A node of the outer search: cores 1..x already populated, the rest open.
struct PartialSolution {
  std::vector<std::vector<int>> task_alloc;  // task ids per populated core
  std::vector<int> cache_part;               // partitions per populated core
  std::vector<int> tasks_left;               // ids not yet placed, ascending
  int cache_left = 0;
  Frac rem_sched_demand;                     // scheduling_demand(tasks_left)

  bool complete() const { return tasks_left.empty(); }
};

struct Solution {
  std::vector<std::vector<int>> task_alloc;  // exactly n_cores entries
  std::vector<int> cache_part;               // 0 partitions marks an idle core
  int total_cache_used = 0;
};

struct OptimizerStats {
  long alloc_task_calls = 0;
  long test_calls = 0;
  std::vector<std::size_t> frontier_after_prune;  // per depth
  bool frontier_bound_ok = true;
  double best_rem_demand = 0.0;  // smallest unplaced demand seen (diagnostic)
  bool timed_out = false;
};

struct OptimizeResult {
  std::optional<Solution> solution;
  OptimizerStats stats;
};

using Deadline = std::chrono::steady_clock::time_point;

// Stable sort of the candidate tasks for one core at a given allocation.
// kComp: period ascending; kCase: sensitivity potential at mu ascending.
// Ties fall back to id, so the order is total and deterministic.
std::vector<const Task*> sort_tasks(std::vector<const Task*> tasks,
                                    SortCriterion criterion, int mu);

// Greedy inner layer: walk the sorted candidates and keep every task the
// core test still accepts alongside the ones already kept.
std::vector<const Task*> alloc_task(std::span<const Task* const> tasks_left,
                                    int mu, SortCriterion criterion,
                                    const CoreTestFn& test,
                                    OptimizerStats* stats = nullptr);

// a dominates b when it has strictly more cache left without more unplaced
// demand, or the same cache left and strictly less unplaced demand.
bool dominates(const PartialSolution& a, const PartialSolution& b);

// Drops dominated nodes; among exact (cache_left, demand) ties only the
// earliest-inserted node survives.
std::vector<PartialSolution> remove_dominated(std::vector<PartialSolution> nodes);

// Outer layer: breadth-first over core depths. Every open node branches on
// the partitions granted to the next core; complete nodes ride along so a
// cheaper full solution can still prune costlier partial ones. Returns the
// complete solution using the least cache, or nothing.
OptimizeResult optimize(const TaskSet& ts, SortCriterion criterion,
                        const CoreTestFn& test,
                        std::optional<Deadline> deadline = std::nullopt);

OptimizeResult optimize(const TaskSet& ts, SortCriterion criterion, Policy policy,
                        std::optional<Deadline> deadline = std::nullopt);

// Re-runs the configured test on every populated core of a solution.
bool solution_passes(const TaskSet& ts, const Solution& sol, const CoreTestFn& test);
bool solution_passes(const TaskSet& ts, const Solution& sol, Policy policy);

}  // namespace csp
