#include "csp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "csp/rng.hpp"

namespace csp {
namespace {

constexpr TimeTick kHorizonCap = 10'000'000;

// Memoized per-(task-subset, mu) core test; subsets are bitmasks over ids.
class SubsetTestCache {
 public:
  SubsetTestCache(const TaskSet& ts, const CoreTestFn& test)
      : ts_(ts), test_(test),
        memo_(std::size_t{1} << ts.size(),
              std::vector<signed char>(
                  static_cast<std::size_t>(ts.platform().n_partitions) + 1, -1)) {}

  bool passes(std::uint32_t mask, int mu) {
    signed char& slot = memo_[mask][static_cast<std::size_t>(mu)];
    if (slot < 0) {
      std::vector<const Task*> tasks;
      for (int id = 0; id < ts_.size(); ++id)
        if (mask & (1u << id)) tasks.push_back(&ts_.task(id));
      slot = test_(tasks, mu) ? 1 : 0;
    }
    return slot == 1;
  }

 private:
  const TaskSet& ts_;
  const CoreTestFn& test_;
  std::vector<std::vector<signed char>> memo_;
};

Solution make_witness(const TaskSet& ts, const std::vector<int>& core_of,
                      const std::vector<int>& split) {
  Solution sol;
  sol.task_alloc.assign(static_cast<std::size_t>(ts.platform().n_cores), {});
  sol.cache_part.assign(static_cast<std::size_t>(ts.platform().n_cores), 0);
  for (int id = 0; id < ts.size(); ++id)
    sol.task_alloc[static_cast<std::size_t>(core_of[static_cast<std::size_t>(id)])]
        .push_back(id);
  for (std::size_t j = 0; j < split.size(); ++j) {
    sol.cache_part[j] = split[j];
    sol.total_cache_used += split[j];
  }
  return sol;
}

}  // namespace

OracleVerdict exhaustive_search(const TaskSet& ts, const CoreTestFn& test) {
  const PlatformConfig& pf = ts.platform();
  if (ts.size() > 8 || pf.n_cores > 3 || pf.n_partitions > 6)
    throw std::invalid_argument(
        "exhaustive_search: instance exceeds the n_tasks<=8, n_cores<=3, "
        "n_partitions<=6 guard");

  SubsetTestCache cache(ts, test);
  OracleVerdict verdict;

  const int n_c = pf.n_cores;
  const int n_p = pf.n_partitions;
  std::vector<int> core_of(static_cast<std::size_t>(ts.size()), 0);
  std::vector<std::uint32_t> core_mask(static_cast<std::size_t>(n_c), 0);
  std::vector<int> split(static_cast<std::size_t>(n_c), 0);

  // Odometer over task->core assignments.
  while (true) {
    std::fill(core_mask.begin(), core_mask.end(), 0u);
    for (int id = 0; id < ts.size(); ++id)
      core_mask[static_cast<std::size_t>(core_of[static_cast<std::size_t>(id)])] |=
          1u << id;

    // Recursive odometer over splits: populated cores get 1..n_p, empty get 0.
    auto try_splits = [&](auto&& self, int core, int left) -> bool {
      if (core == n_c) {
        ++verdict.explored;
        for (int j = 0; j < n_c; ++j)
          if (core_mask[static_cast<std::size_t>(j)] != 0 &&
              !cache.passes(core_mask[static_cast<std::size_t>(j)],
                            split[static_cast<std::size_t>(j)]))
            return false;
        return true;
      }
      if (core_mask[static_cast<std::size_t>(core)] == 0) {
        split[static_cast<std::size_t>(core)] = 0;
        return self(self, core + 1, left);
      }
      for (int mu = 1; mu <= left; ++mu) {
        split[static_cast<std::size_t>(core)] = mu;
        if (self(self, core + 1, left - mu)) return true;
      }
      return false;
    };
    if (try_splits(try_splits, 0, n_p)) {
      verdict.exists_schedulable = true;
      verdict.witness = make_witness(ts, core_of, split);
      return verdict;
    }

    int id = 0;
    for (; id < ts.size(); ++id) {
      int& c = core_of[static_cast<std::size_t>(id)];
      if (++c < n_c) break;
      c = 0;
    }
    if (id == ts.size()) break;
  }
  return verdict;
}

OracleVerdict exhaustive_search(const TaskSet& ts, Policy policy) {
  return exhaustive_search(ts, make_core_test(policy));
}

SimResult simulate_core(const CoreAssignment& assignment, Policy policy,
                        const SimPattern& pattern, TimeTick horizon) {
  if (policy == Policy::kPEdf)
    throw std::invalid_argument("simulate_core: non-preemptive policies only");
  const auto& tasks = assignment.tasks;
  SimResult result;
  result.max_response.assign(tasks.size(), 0);
  if (tasks.empty()) return result;

  struct Job {
    TimeTick release;
    TimeTick deadline;
  };
  std::vector<std::deque<Job>> pending(tasks.size());
  std::vector<TimeTick> next_release(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i)
    next_release[i] = (static_cast<int>(tasks[i].id) == pattern.blocker_id)
                          ? 0
                          : pattern.follower_offset;

  auto release_due = [&](TimeTick now) {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      while (next_release[i] <= now && next_release[i] < horizon) {
        pending[i].push_back({next_release[i], next_release[i] + tasks[i].period});
        next_release[i] += tasks[i].period;
      }
  };
  auto earliest_future_release = [&]() {
    TimeTick best = kHorizonCap * 8;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (next_release[i] < horizon) best = std::min(best, next_release[i]);
    return best;
  };
  // Head-of-line job of task a beats task b's under the policy?
  auto favored = [&](std::size_t a, std::size_t b) {
    if (policy == Policy::kNpFp) return higher_priority(tasks[a], tasks[b]);
    const Job& ja = pending[a].front();
    const Job& jb = pending[b].front();
    if (ja.deadline != jb.deadline) return ja.deadline < jb.deadline;
    if (tasks[a].id != tasks[b].id) return tasks[a].id < tasks[b].id;
    return ja.release < jb.release;
  };

  TimeTick now = 0;
  bool first_dispatch = true;
  while (now < horizon) {
    release_due(now);
    std::size_t pick = tasks.size();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (pending[i].empty()) continue;
      if (first_dispatch && static_cast<int>(tasks[i].id) == pattern.blocker_id) {
        pick = i;
        break;
      }
      if (pick == tasks.size() || favored(i, pick)) pick = i;
    }
    if (pick == tasks.size()) {
      const TimeTick next = earliest_future_release();
      if (next >= horizon) break;
      now = next;
      continue;
    }
    first_dispatch = false;
    const Job job = pending[pick].front();
    pending[pick].pop_front();
    now += tasks[pick].exec;  // runs to completion
    result.max_response[pick] = std::max(result.max_response[pick], now - job.release);
    if (now > job.deadline) result.deadline_miss = true;
  }

  // Whatever is still queued never completed; a deadline inside the horizon
  // is therefore definitively missed, later ones are undecided.
  release_due(horizon - 1);
  for (const auto& queue : pending)
    for (const Job& job : queue) {
      result.truncated = true;
      if (job.deadline <= horizon) result.deadline_miss = true;
    }
  return result;
}

TimeTick default_horizon(const CoreAssignment& assignment) {
  TimeTick hyper = 1;
  for (const AnalyzedTask& t : assignment.tasks) {
    hyper = std::lcm(hyper, t.period);
    if (hyper > kHorizonCap / 2) return kHorizonCap;
  }
  return std::min<TimeTick>(2 * hyper, kHorizonCap);
}

std::vector<TimeTick> npfp_observed_responses(const CoreAssignment& assignment) {
  const TimeTick horizon = default_horizon(assignment);
  std::vector<TimeTick> observed(assignment.tasks.size(), 0);
  auto fold = [&](const SimResult& run) {
    for (std::size_t i = 0; i < observed.size(); ++i)
      observed[i] = std::max(observed[i], run.max_response[i]);
  };
  fold(simulate_core(assignment, Policy::kNpFp, SimPattern::synchronous(), horizon));
  for (const AnalyzedTask& blocker : assignment.tasks)
    fold(simulate_core(assignment, Policy::kNpFp, SimPattern{blocker.id, 0}, horizon));
  return observed;
}

TaskSet random_small_instance(std::uint64_t seed) {
  Rng rng = make_stream(seed, 0x0facadeULL, 0x5eedULL);
  const PlatformConfig pf{2, 2 + static_cast<int>(rng.next_index(3)), 64};
  const int n_tasks = 2 + static_cast<int>(rng.next_index(5));
  static constexpr TimeTick kPeriods[] = {8, 10, 12, 16, 20, 24, 40};

  std::vector<Task> tasks;
  for (int id = 0; id < n_tasks; ++id) {
    const TimeTick period = kPeriods[rng.next_index(std::size(kPeriods))];
    const double u_base = 0.05 + 0.45 * rng.next_canonical();
    const TimeTick e_full = std::max<TimeTick>(
        1, static_cast<TimeTick>(u_base * static_cast<double>(period) + 0.5));
    const double inflate = 1.0 + 0.6 * rng.next_canonical();  // per lost partition
    std::vector<TimeTick> eps(static_cast<std::size_t>(pf.n_partitions));
    for (int mu = 1; mu <= pf.n_partitions; ++mu) {
      const double factor = std::pow(inflate, pf.n_partitions - mu);
      eps[static_cast<std::size_t>(mu - 1)] = static_cast<TimeTick>(
          std::ceil(static_cast<double>(e_full) * factor - 1e-9));
    }
    tasks.emplace_back(id, period, ExecProfile(std::move(eps)));
  }
  return TaskSet(std::move(tasks), pf);
}

bool npedf_sim_schedulable(const CoreAssignment& assignment) {
  const TimeTick horizon = default_horizon(assignment);
  if (simulate_core(assignment, Policy::kNpEdf, SimPattern::synchronous(), horizon)
          .deadline_miss)
    return false;
  for (const AnalyzedTask& blocker : assignment.tasks)
    if (simulate_core(assignment, Policy::kNpEdf, SimPattern{blocker.id, 1}, horizon)
            .deadline_miss)
      return false;
  return true;
}

}  // namespace csp
