#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csp/fraction.hpp"

namespace csp {

// All timing quantities are integer ticks. The default scale is 1 tick = 1 us
// (tick_ns = 1000), which puts millisecond periods at 10^3..10^5 ticks and
// keeps every recurrence in exact integer arithmetic.
using TimeTick = std::int64_t;

constexpr std::int64_t kDefaultTickNs = 1000;
constexpr TimeTick kTicksPerMs = 1000;

struct PlatformConfig {
  int n_cores = 1;
  int n_partitions = 1;
  int partition_kb = 64;

  void validate() const;
};

// Worst-case execution time as a function of the number of cache partitions
// granted. Index mu runs 1..n_partitions; more cache never slows a task down,
// so the vector is non-increasing. Ingested data that violates that is
// clamped upward from the large-cache end (raising the small-cache entries is
// the conservative direction for the analysis) and the clamp is recorded.
class ExecProfile {
 public:
  explicit ExecProfile(std::vector<TimeTick> eps);

  TimeTick at(int mu) const;  // mu is 1-based
  int partitions() const { return static_cast<int>(eps_.size()); }
  bool clamp_fired() const { return clamp_fired_; }
  const std::vector<TimeTick>& ticks() const { return eps_; }

  bool operator==(const ExecProfile& o) const { return eps_ == o.eps_; }

 private:
  std::vector<TimeTick> eps_;
  bool clamp_fired_ = false;
};

class Task {
 public:
  Task(int id, TimeTick period, ExecProfile profile);

  int id() const { return id_; }
  TimeTick period() const { return period_; }
  const ExecProfile& profile() const { return profile_; }
  TimeTick exec_at(int mu) const { return profile_.at(mu); }

  bool operator==(const Task& o) const {
    return id_ == o.id_ && period_ == o.period_ && profile_ == o.profile_;
  }

 private:
  int id_;
  TimeTick period_;
  ExecProfile profile_;
};

class TaskSet {
 public:
  TaskSet(std::vector<Task> tasks, PlatformConfig platform,
          std::int64_t tick_ns = kDefaultTickNs);

  const std::vector<Task>& tasks() const { return tasks_; }
  const Task& task(int id) const { return tasks_.at(static_cast<std::size_t>(id)); }
  int size() const { return static_cast<int>(tasks_.size()); }
  const PlatformConfig& platform() const { return platform_; }
  std::int64_t tick_ns() const { return tick_ns_; }

  bool operator==(const TaskSet& o) const;

 private:
  std::vector<Task> tasks_;  // ids are dense 0..n-1 and index this vector
  PlatformConfig platform_;
  std::int64_t tick_ns_;
};

// Utilization with mu partitions granted: eps[mu] / period.
Frac utilization_at(const Task& task, int mu);

// Utilization at the full cache allocation; the floor any allocation can reach.
Frac base_utilization(const Task& task, const PlatformConfig& platform);

// Cache sensitivity potential: how much utilization a task would shed going
// from mu partitions to the full cache. Non-increasing in mu, zero at mu=n_p.
Frac cache_sensitivity_potential(const Task& task, int mu);

// Sum of base utilizations; the optimizer's measure of work still unplaced.
Frac scheduling_demand(std::span<const Task* const> tasks,
                       const PlatformConfig& platform);

}  // namespace csp
