#include "csp/analysis.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "csp/fraction.hpp"

namespace csp {
namespace {

constexpr TimeTick kTickMax = std::numeric_limits<TimeTick>::max() / 4;

TimeTick ceil_div(TimeTick a, TimeTick b) { return (a + b - 1) / b; }

// Least fixpoint of w = base + sum_j ceil-count(w, p_j) * e_j, where the
// count is ceil(w/p) for the busy-period recurrence and floor(w/p)+1 for the
// start-time recurrence. Returns kTickMax when the iterate escapes `bound`.
template <bool Strict>
TimeTick fixpoint(TimeTick base, std::span<const AnalyzedTask> interferers,
                  TimeTick start, TimeTick bound) {
  TimeTick w = start;
  for (;;) {
    __int128 next = base;
    for (const AnalyzedTask& t : interferers) {
      const TimeTick count =
          Strict ? strict_ceil_div(w, t.period) : ceil_div(w, t.period);
      next += static_cast<__int128>(count) * t.exec;
    }
    if (next > bound) return kTickMax;
    const TimeTick n = static_cast<TimeTick>(next);
    if (n == w) return w;
    w = n;
  }
}

// Upper bound on the level-i busy period when the interfering utilization is
// below 1: (base + sum e) / (1 - U), evaluated exactly and saturated.
TimeTick busy_bound(TimeTick base, std::span<const AnalyzedTask> interferers,
                    const Frac& util) {
  __int128 work = base;
  for (const AnalyzedTask& t : interferers) work += t.exec;
  const __int128 gap = static_cast<__int128>(util.den()) - util.num();
  __int128 b = (work * util.den() + gap - 1) / gap;
  return b > kTickMax ? kTickMax : static_cast<TimeTick>(b);
}

struct RankedCore {
  std::vector<AnalyzedTask> by_prio;
};

// Analyzes the task at priority rank `idx` (0 = highest). `decide_only`
// allows bailing out as soon as a deadline miss is certain.
TaskResponse analyze_rank(const RankedCore& core, std::size_t idx, bool decide_only) {
  const AnalyzedTask& ti = core.by_prio[idx];
  TaskResponse out{ti.id, ti.period, 0, false, false};

  // Maximum blocking: the longest lower-priority job that may already hold
  // the core when this task arrives.
  TimeTick block = 0;
  for (std::size_t j = idx + 1; j < core.by_prio.size(); ++j)
    block = std::max(block, core.by_prio[j].exec);

  const std::span<const AnalyzedTask> hep(core.by_prio.data(), idx + 1);
  const std::span<const AnalyzedTask> hp(core.by_prio.data(), idx);

  Frac u_hep;
  for (const AnalyzedTask& t : hep) u_hep += Frac(t.exec, t.period);
  if (u_hep >= Frac::one()) {
    out.divergent = true;
    return out;
  }

  const TimeTick bound = busy_bound(block, hep, u_hep);
  const TimeTick busy = fixpoint<false>(block, hep, ti.exec, bound);
  if (busy >= kTickMax) {
    out.divergent = true;
    return out;
  }

  const TimeTick instances = ceil_div(busy, ti.period);
  TimeTick worst = 0;
  for (TimeTick q = 1; q <= instances; ++q) {
    const TimeTick base = block + (q - 1) * ti.exec;
    const TimeTick start = fixpoint<true>(base, hp, base, busy);
    if (start >= kTickMax) {
      out.divergent = true;
      return out;
    }
    const TimeTick resp = start - (q - 1) * ti.period + ti.exec;
    worst = std::max(worst, resp);
    if (decide_only && worst > ti.period) break;
  }
  out.wcrt = worst;
  out.meets_deadline = worst <= ti.period;
  return out;
}

RankedCore rank(const CoreAssignment& core) {
  if (core.tasks.empty()) throw std::invalid_argument("analysis: empty core");
  return RankedCore{priority_order(core)};
}

}  // namespace

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::kNpFp: return "npfp";
    case Policy::kNpEdf: return "npedf";
    case Policy::kPEdf: return "pedf";
  }
  return "?";
}

CoreAssignment CoreAssignment::from_tasks(std::span<const Task* const> tasks, int mu) {
  CoreAssignment core;
  core.mu = mu;
  core.tasks.reserve(tasks.size());
  for (const Task* t : tasks)
    core.tasks.push_back({t->id(), t->period(), t->exec_at(mu)});
  return core;
}

CoreAssignment CoreAssignment::from_pairs(
    std::initializer_list<std::pair<TimeTick, TimeTick>> pairs) {
  CoreAssignment core;
  int id = 0;
  for (const auto& [p, e] : pairs) core.tasks.push_back({id++, p, e});
  return core;
}

bool higher_priority(const AnalyzedTask& a, const AnalyzedTask& b) {
  if (a.period != b.period) return a.period < b.period;
  if (a.exec != b.exec) return a.exec > b.exec;
  return a.id < b.id;
}

std::vector<AnalyzedTask> priority_order(const CoreAssignment& core) {
  std::vector<AnalyzedTask> order = core.tasks;
  std::sort(order.begin(), order.end(), higher_priority);
  return order;
}

TimeTick strict_ceil_div(TimeTick w, TimeTick p) {
  if (w < 0 || p < 1) throw std::invalid_argument("strict_ceil_div: bad arguments");
  return w / p + 1;
}

TimeTick ResponseReport::response_of(int id) const {
  for (const TaskResponse& t : tasks)
    if (t.id == id) return t.wcrt;
  throw std::out_of_range("response_of: unknown id");
}

ResponseReport npfp_response_times(const CoreAssignment& core) {
  const RankedCore ranked = rank(core);
  ResponseReport report;
  report.schedulable = true;
  for (std::size_t i = 0; i < ranked.by_prio.size(); ++i) {
    report.tasks.push_back(analyze_rank(ranked, i, /*decide_only=*/false));
    const TaskResponse& r = report.tasks.back();
    if (r.divergent || !r.meets_deadline) report.schedulable = false;
  }
  return report;
}

bool npfp_is_schedulable(const CoreAssignment& core) {
  const RankedCore ranked = rank(core);
  for (std::size_t i = 0; i < ranked.by_prio.size(); ++i) {
    const TaskResponse r = analyze_rank(ranked, i, /*decide_only=*/true);
    if (r.divergent || !r.meets_deadline) return false;
  }
  return true;
}

bool npfp_is_schedulable_with(const CoreAssignment& existing, const Task& candidate) {
  CoreAssignment grown = existing;
  grown.tasks.push_back(
      {candidate.id(), candidate.period(), candidate.exec_at(existing.mu)});
  return npfp_is_schedulable(grown);
}

bool npedf_is_schedulable(const CoreAssignment& core) {
  if (core.tasks.empty()) throw std::invalid_argument("analysis: empty core");

  Frac util;
  for (const AnalyzedTask& t : core.tasks) util += Frac(t.exec, t.period);
  if (util > Frac::one()) return false;

  // Demand condition (Jeffay et al. 1991): for every task i and every window
  // p_min < L < p_i, L >= e_i + sum_{j != i} floor((L-1)/p_j) e_j. Terms of
  // tasks with p_j >= L vanish, so summing over all j != i is equivalent.
  // The right-hand side only steps at L = k*p_j + 1, so those lattice points
  // (plus the window's left edge) are the only L worth checking.
  std::vector<AnalyzedTask> by_period = core.tasks;
  std::sort(by_period.begin(), by_period.end(),
            [](const AnalyzedTask& a, const AnalyzedTask& b) {
              if (a.period != b.period) return a.period < b.period;
              return a.id < b.id;
            });
  const TimeTick p_min = by_period.front().period;
  const TimeTick p_max = by_period.back().period;

  std::vector<TimeTick> lattice;
  lattice.push_back(p_min + 1);
  for (const AnalyzedTask& t : by_period)
    for (TimeTick r = t.period; r + 1 < p_max; r += t.period)
      if (r + 1 > p_min) lattice.push_back(r + 1);
  std::sort(lattice.begin(), lattice.end());
  lattice.erase(std::unique(lattice.begin(), lattice.end()), lattice.end());

  for (const AnalyzedTask& ti : by_period) {
    for (TimeTick len : lattice) {
      if (len >= ti.period) break;
      __int128 demand = ti.exec;
      for (const AnalyzedTask& tj : by_period) {
        if (tj.id == ti.id) continue;
        demand += static_cast<__int128>((len - 1) / tj.period) * tj.exec;
      }
      if (demand > len) return false;
    }
  }
  return true;
}

bool pedf_is_schedulable(const CoreAssignment& core) {
  if (core.tasks.empty()) throw std::invalid_argument("analysis: empty core");
  Frac util;
  for (const AnalyzedTask& t : core.tasks) util += Frac(t.exec, t.period);
  return util <= Frac::one();
}

bool core_is_schedulable(const CoreAssignment& core, Policy policy) {
  switch (policy) {
    case Policy::kNpFp: return npfp_is_schedulable(core);
    case Policy::kNpEdf: return npedf_is_schedulable(core);
    case Policy::kPEdf: return pedf_is_schedulable(core);
  }
  return false;
}

bool tasks_schedulable_on_core(std::span<const Task* const> tasks, int mu,
                               Policy policy) {
  if (tasks.empty()) return true;
  return core_is_schedulable(CoreAssignment::from_tasks(tasks, mu), policy);
}

}  // namespace csp
