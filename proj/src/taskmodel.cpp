#include "csp/taskmodel.hpp"

#include <stdexcept>

namespace csp {

void PlatformConfig::validate() const {
  if (n_cores < 1) throw std::invalid_argument("platform: n_cores must be >= 1");
  if (n_partitions < 1)
    throw std::invalid_argument("platform: n_partitions must be >= 1");
  if (partition_kb < 1)
    throw std::invalid_argument("platform: partition_kb must be >= 1");
}

ExecProfile::ExecProfile(std::vector<TimeTick> eps) : eps_(std::move(eps)) {
  if (eps_.empty()) throw std::invalid_argument("profile: empty");
  if (eps_.back() < 1)
    throw std::invalid_argument("profile: execution at full cache must be >= 1 tick");
  for (TimeTick e : eps_)
    if (e < 1) throw std::invalid_argument("profile: non-positive execution time");
  for (std::size_t k = eps_.size() - 1; k-- > 0;) {
    if (eps_[k] < eps_[k + 1]) {
      eps_[k] = eps_[k + 1];
      clamp_fired_ = true;
    }
  }
}

TimeTick ExecProfile::at(int mu) const {
  if (mu < 1 || mu > partitions())
    throw std::out_of_range("profile: mu outside 1..n_partitions");
  return eps_[static_cast<std::size_t>(mu - 1)];
}

Task::Task(int id, TimeTick period, ExecProfile profile)
    : id_(id), period_(period), profile_(std::move(profile)) {
  if (id < 0) throw std::invalid_argument("task: negative id");
  if (period < 1) throw std::invalid_argument("task: period must be >= 1 tick");
}

TaskSet::TaskSet(std::vector<Task> tasks, PlatformConfig platform, std::int64_t tick_ns)
    : tasks_(std::move(tasks)), platform_(platform), tick_ns_(tick_ns) {
  platform_.validate();
  if (tick_ns_ < 1) throw std::invalid_argument("task set: tick_ns must be >= 1");
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].id() != static_cast<int>(i))
      throw std::invalid_argument("task set: ids must be dense 0..n-1 in order");
    if (tasks_[i].profile().partitions() != platform_.n_partitions)
      throw std::invalid_argument("task set: profile length != n_partitions");
  }
}

bool TaskSet::operator==(const TaskSet& o) const {
  return tasks_ == o.tasks_ && tick_ns_ == o.tick_ns_ &&
         platform_.n_cores == o.platform_.n_cores &&
         platform_.n_partitions == o.platform_.n_partitions;
}

Frac utilization_at(const Task& task, int mu) {
  return Frac(task.exec_at(mu), task.period());
}

Frac base_utilization(const Task& task, const PlatformConfig& platform) {
  if (task.profile().partitions() != platform.n_partitions)
    throw std::invalid_argument("base_utilization: profile length != n_partitions");
  return utilization_at(task, platform.n_partitions);
}

Frac cache_sensitivity_potential(const Task& task, int mu) {
  const int n_p = task.profile().partitions();
  return Frac(task.exec_at(mu) - task.exec_at(n_p), task.period());
}

Frac scheduling_demand(std::span<const Task* const> tasks,
                       const PlatformConfig& platform) {
  Frac sum;
  for (const Task* t : tasks) sum += base_utilization(*t, platform);
  return sum;
}

}  // namespace csp
