#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "csp/taskmodel.hpp"

namespace csp {

enum class Policy { kNpFp, kNpEdf, kPEdf };

const char* policy_name(Policy p);

// What the per-core analyses need of a task: its identity, period (= implicit
// deadline) and the execution time effective at the granted cache allocation.
struct AnalyzedTask {
  int id;
  TimeTick period;
  TimeTick exec;
};

struct CoreAssignment {
  std::vector<AnalyzedTask> tasks;
  int mu = 1;  // partitions granted; informative for the analyses themselves

  static CoreAssignment from_tasks(std::span<const Task* const> tasks, int mu);
  // Test helper: (period, exec) pairs, ids assigned 0..n-1.
  static CoreAssignment from_pairs(
      std::initializer_list<std::pair<TimeTick, TimeTick>> pairs);
};

// Fixed priorities are rate monotonic: shorter period wins; equal periods are
// broken by larger execution time, then by smaller id. Total order, so no two
// tasks share a priority.
bool higher_priority(const AnalyzedTask& a, const AnalyzedTask& b);
std::vector<AnalyzedTask> priority_order(const CoreAssignment& core);

// Number of release points strictly inside a window that is open on the right
// in the real-valued analysis: lim d->0+ ceil((w+d)/p) = floor(w/p) + 1.
// Equals ceil((w+1)/p) on integer ticks.
TimeTick strict_ceil_div(TimeTick w, TimeTick p);

struct TaskResponse {
  int id;
  TimeTick period;
  TimeTick wcrt;    // meaningless when divergent
  bool divergent;   // busy period / start-time recurrence did not converge
  bool meets_deadline;
};

struct ResponseReport {
  std::vector<TaskResponse> tasks;  // in priority order
  bool schedulable = false;
  TimeTick response_of(int id) const;
};

// Exact worst-case response times under non-preemptive fixed-priority
// scheduling. Per task: maximum lower-priority blocking, the level-i busy
// period, then the start-time recurrence for every job instance inside it.
// A task whose higher-or-equal-priority utilization reaches 1 is reported
// divergent (and the core unschedulable).
ResponseReport npfp_response_times(const CoreAssignment& core);

// Verdict-only path; stops at the first missed deadline.
bool npfp_is_schedulable(const CoreAssignment& core);

// Would the core still be schedulable with `candidate` added at the same
// cache allocation? Full re-analysis of the grown core; no shortcut.
bool npfp_is_schedulable_with(const CoreAssignment& existing, const Task& candidate);

// Jeffay/Stanat/Martel's necessary-and-sufficient condition for sporadic
// implicit-deadline tasks under non-preemptive EDF: total utilization <= 1
// plus the per-task demand bound over the release lattice.
bool npedf_is_schedulable(const CoreAssignment& core);

// Preemptive EDF on one core: utilization <= 1, exact at the boundary.
bool pedf_is_schedulable(const CoreAssignment& core);

bool core_is_schedulable(const CoreAssignment& core, Policy policy);

// The form the allocation layers consume: test a prospective bundle of tasks
// granted mu partitions together on one core.
bool tasks_schedulable_on_core(std::span<const Task* const> tasks, int mu,
                               Policy policy);

}  // namespace csp
