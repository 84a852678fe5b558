#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csp/analysis.hpp"
#include "csp/optimizer.hpp"
#include "csp/taskmodel.hpp"

namespace csp {

// Ground truth for small instances, obtained independently of every
// allocation heuristic: brute force over the configuration space plus a
// discrete-event simulator for the per-core scheduling policies.

struct OracleVerdict {
  bool exists_schedulable = false;
  std::optional<Solution> witness;  // present iff exists_schedulable
  std::int64_t explored = 0;        // (assignment, split) pairs examined
};

// Enumerates every assignment of tasks to cores (cores may stay empty) and
// every cache split with sum <= n_partitions and at least one partition per
// populated core. Stops at the first configuration the test accepts. Guarded
// to n_tasks <= 8, n_cores <= 3, n_partitions <= 6; throws beyond that.
OracleVerdict exhaustive_search(const TaskSet& ts, const CoreTestFn& test);
OracleVerdict exhaustive_search(const TaskSet& ts, Policy policy);

// Release pattern for one simulation run. Every task releases jobs
// periodically from its offset. blocker_id >= 0 names a task that releases
// at 0 and is put on the core at t=0 regardless of policy order — the
// integer-time stand-in for a lower-priority job that started an instant
// before everyone else arrived. The remaining tasks release at
// follower_offset (0 keeps the release synchronous with the blocker's start).
struct SimPattern {
  int blocker_id = -1;
  TimeTick follower_offset = 0;

  static SimPattern synchronous() { return {}; }
};

struct SimResult {
  // Max completion - release per task, aligned with assignment.tasks order;
  // 0 for a task none of whose jobs completed inside the horizon.
  std::vector<TimeTick> max_response;
  bool deadline_miss = false;  // a job finished past its period, or could not
                               // have finished by a deadline inside the horizon
  bool truncated = false;      // jobs were still unfinished at the horizon
};

// Event-driven single-core simulation of a non-preemptive policy (NP-FP or
// NP-EDF): whenever the core idles, the pending job the policy favors starts
// and runs to completion. Jobs release in [0, horizon).
SimResult simulate_core(const CoreAssignment& assignment, Policy policy,
                        const SimPattern& pattern, TimeTick horizon);

// Twice the hyperperiod of the assignment's periods, capped at 10^7 ticks.
TimeTick default_horizon(const CoreAssignment& assignment);

// Max observed response per task (assignment.tasks order) across the
// synchronous pattern and one forced-blocker pattern per task. For the
// response-time analysis's worked examples the maxima are exact.
std::vector<TimeTick> npfp_observed_responses(const CoreAssignment& assignment);

// NP-EDF verdict by simulation: no deadline miss under the synchronous
// pattern or any pattern where one task starts at t=0 and the others release
// at t=1. Exact against the demand-bound test when the horizon is not capped.
bool npedf_sim_schedulable(const CoreAssignment& assignment);

// Random instance inside the exhaustive-search guard (2 cores, 2..4
// partitions, 2..6 tasks, small periods), spanning easy, borderline and
// infeasible cases. Deterministic in the seed.
TaskSet random_small_instance(std::uint64_t seed);

}  // namespace csp
