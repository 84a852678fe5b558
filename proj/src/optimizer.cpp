#include "csp/optimizer.hpp"

#include <algorithm>
#include <stdexcept>

namespace csp {
namespace {

bool past(const std::optional<Deadline>& deadline) {
  return deadline && std::chrono::steady_clock::now() > *deadline;
}

std::vector<const Task*> resolve(const TaskSet& ts, const std::vector<int>& ids) {
  std::vector<const Task*> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(&ts.task(id));
  return out;
}

Solution finalize(const TaskSet& ts, const PartialSolution& node) {
  Solution sol;
  sol.task_alloc = node.task_alloc;
  sol.cache_part = node.cache_part;
  const std::size_t n_cores = static_cast<std::size_t>(ts.platform().n_cores);
  while (sol.task_alloc.size() < n_cores) {
    sol.task_alloc.emplace_back();
    sol.cache_part.push_back(0);
  }
  for (auto& ids : sol.task_alloc) std::sort(ids.begin(), ids.end());
  for (int mu : sol.cache_part) sol.total_cache_used += mu;
  return sol;
}

}  // namespace

const char* criterion_name(SortCriterion c) {
  return c == SortCriterion::kComp ? "comp" : "case";
}

CoreTestFn make_core_test(Policy policy) {
  return [policy](std::span<const Task* const> tasks, int mu) {
    return tasks_schedulable_on_core(tasks, mu, policy);
  };
}

std::vector<const Task*> sort_tasks(std::vector<const Task*> tasks,
                                    SortCriterion criterion, int mu) {
  if (criterion == SortCriterion::kComp) {
    std::sort(tasks.begin(), tasks.end(), [](const Task* a, const Task* b) {
      if (a->period() != b->period()) return a->period() < b->period();
      return a->id() < b->id();
    });
  } else {
    std::sort(tasks.begin(), tasks.end(), [mu](const Task* a, const Task* b) {
      const Frac ga = cache_sensitivity_potential(*a, mu);
      const Frac gb = cache_sensitivity_potential(*b, mu);
      if (ga != gb) return ga < gb;
      return a->id() < b->id();
    });
  }
  return tasks;
}

std::vector<const Task*> alloc_task(std::span<const Task* const> tasks_left,
                                    int mu, SortCriterion criterion,
                                    const CoreTestFn& test, OptimizerStats* stats) {
  if (mu < 1) throw std::invalid_argument("alloc_task: mu must be >= 1");
  if (stats) ++stats->alloc_task_calls;

  std::vector<const Task*> order =
      sort_tasks({tasks_left.begin(), tasks_left.end()}, criterion, mu);

  std::vector<const Task*> kept;
  for (const Task* t : order) {
    kept.push_back(t);
    if (stats) ++stats->test_calls;
    if (!test(kept, mu)) kept.pop_back();
  }
  return kept;
}

bool dominates(const PartialSolution& a, const PartialSolution& b) {
  if (a.cache_left > b.cache_left && a.rem_sched_demand <= b.rem_sched_demand)
    return true;
  return a.cache_left == b.cache_left && a.rem_sched_demand < b.rem_sched_demand;
}

std::vector<PartialSolution> remove_dominated(std::vector<PartialSolution> nodes) {
  std::vector<PartialSolution> kept;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    bool drop = false;
    for (std::size_t j = 0; j < nodes.size() && !drop; ++j) {
      if (i == j) continue;
      if (dominates(nodes[j], nodes[i])) drop = true;
      // Exact tie: the earlier insertion wins.
      if (j < i && nodes[j].cache_left == nodes[i].cache_left &&
          nodes[j].rem_sched_demand == nodes[i].rem_sched_demand)
        drop = true;
    }
    if (!drop) kept.push_back(std::move(nodes[i]));
  }
  return kept;
}

OptimizeResult optimize(const TaskSet& ts, SortCriterion criterion,
                        const CoreTestFn& test, std::optional<Deadline> deadline) {
  const PlatformConfig& pf = ts.platform();
  OptimizeResult result;
  OptimizerStats& stats = result.stats;

  PartialSolution root;
  root.cache_left = pf.n_partitions;
  for (const Task& t : ts.tasks()) root.tasks_left.push_back(t.id());
  root.rem_sched_demand = scheduling_demand(resolve(ts, root.tasks_left), pf);
  stats.best_rem_demand = root.rem_sched_demand.to_double();

  const long call_ceiling =
      static_cast<long>(pf.n_cores) * pf.n_partitions * pf.n_partitions;

  std::vector<PartialSolution> frontier{root};
  for (int depth = 1; depth <= pf.n_cores; ++depth) {
    std::vector<PartialSolution> next;
    for (const PartialSolution& node : frontier) {
      if (node.complete()) {
        next.push_back(node);  // finished solutions ride along
        continue;
      }
      if (past(deadline)) {
        stats.timed_out = true;
        return result;
      }
      const std::vector<const Task*> left = resolve(ts, node.tasks_left);
      for (int mu = 1; mu <= node.cache_left; ++mu) {
        const std::vector<const Task*> placed =
            alloc_task(left, mu, criterion, test, &stats);
        if (placed.empty()) continue;

        PartialSolution child = node;
        child.task_alloc.emplace_back();
        for (const Task* t : placed) child.task_alloc.back().push_back(t->id());
        child.cache_part.push_back(mu);
        child.cache_left -= mu;
        for (const Task* t : placed) {
          child.tasks_left.erase(std::find(child.tasks_left.begin(),
                                           child.tasks_left.end(), t->id()));
          child.rem_sched_demand -= base_utilization(*t, pf);
        }
        stats.best_rem_demand =
            std::min(stats.best_rem_demand, child.rem_sched_demand.to_double());

        // Dead end: tasks remain but no core or no cache is left to serve them.
        if (!child.complete() && (depth == pf.n_cores || child.cache_left == 0))
          continue;
        next.push_back(std::move(child));
      }
    }
    frontier = remove_dominated(std::move(next));
    stats.frontier_after_prune.push_back(frontier.size());
    const long node_bound = static_cast<long>(pf.n_partitions) + 2 - depth;
    if (static_cast<long>(frontier.size()) > node_bound)
      stats.frontier_bound_ok = false;
  }
  if (stats.alloc_task_calls > call_ceiling) stats.frontier_bound_ok = false;

  // Any complete survivor dominates complete survivors with less cache left,
  // so after pruning at most one remains.
  for (const PartialSolution& node : frontier) {
    if (!node.complete()) continue;
    result.solution = finalize(ts, node);
    break;
  }
  return result;
}

OptimizeResult optimize(const TaskSet& ts, SortCriterion criterion, Policy policy,
                        std::optional<Deadline> deadline) {
  return optimize(ts, criterion, make_core_test(policy), deadline);
}

bool solution_passes(const TaskSet& ts, const Solution& sol, const CoreTestFn& test) {
  if (sol.task_alloc.size() != sol.cache_part.size()) return false;
  if (sol.task_alloc.size() != static_cast<std::size_t>(ts.platform().n_cores))
    return false;
  int used = 0;
  std::vector<bool> seen(static_cast<std::size_t>(ts.size()), false);
  for (std::size_t j = 0; j < sol.task_alloc.size(); ++j) {
    const std::vector<int>& ids = sol.task_alloc[j];
    const int mu = sol.cache_part[j];
    used += mu;
    if (ids.empty()) continue;
    if (mu < 1) return false;
    for (int id : ids) {
      if (id < 0 || id >= ts.size() || seen[static_cast<std::size_t>(id)])
        return false;
      seen[static_cast<std::size_t>(id)] = true;
    }
    if (!test(resolve(ts, ids), mu)) return false;
  }
  for (bool s : seen)
    if (!s) return false;
  return used <= ts.platform().n_partitions;
}

bool solution_passes(const TaskSet& ts, const Solution& sol, Policy policy) {
  return solution_passes(ts, sol, make_core_test(policy));
}

}  // namespace csp
