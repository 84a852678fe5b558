#pragma once

// Hand-sized task sets used across the test suites. Both run on a platform
// with 2 cores and a shared cache split into 4 partitions; execution times
// are plain ticks. Set A is the case where demand-first search finds an
// allocation and sensitivity-first search does not; set B is the mirror
// image (sensitivity-first succeeds, demand-first fails). The numbers are
// frozen here and every expected outcome in the suites was computed from
// them with the exhaustive oracle before being written down.

#include <vector>

#include "csp/taskmodel.hpp"

namespace csp::testing {

inline TaskSet fixture_set_a() {
  PlatformConfig pf;
  pf.n_cores = 2;
  pf.n_partitions = 4;
  pf.partition_kb = 64;
  std::vector<Task> tasks;
  tasks.emplace_back(0, 100, ExecProfile({36, 35, 34, 34}));
  tasks.emplace_back(1, 100, ExecProfile({75, 55, 45, 27}));
  tasks.emplace_back(2, 150, ExecProfile({77, 48, 35, 25}));
  tasks.emplace_back(3, 150, ExecProfile({85, 82, 81, 79}));
  return TaskSet(std::move(tasks), pf);
}

inline TaskSet fixture_set_b() {
  PlatformConfig pf;
  pf.n_cores = 2;
  pf.n_partitions = 4;
  pf.partition_kb = 64;
  std::vector<Task> tasks;
  tasks.emplace_back(0, 200, ExecProfile({35, 33, 31, 26}));
  tasks.emplace_back(1, 200, ExecProfile({177, 172, 168, 165}));
  tasks.emplace_back(2, 250, ExecProfile({324, 178, 119, 80}));
  tasks.emplace_back(3, 250, ExecProfile({65, 63, 62, 60}));
  return TaskSet(std::move(tasks), pf);
}

// A task whose execution time does not depend on the cache share: the same
// value at every partition count.
inline Task flat_task(int id, TimeTick period, TimeTick exec, int n_partitions) {
  return Task(id, period,
              ExecProfile(std::vector<TimeTick>(
                  static_cast<std::size_t>(n_partitions), exec)));
}

}  // namespace csp::testing
