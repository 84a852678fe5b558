#include "csp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "csp/kmeans.hpp"

namespace csp {
namespace {

constexpr std::uint64_t kCamSeed = 0x5ca1ab1e0ddba11ULL;

bool past(const std::optional<Deadline>& deadline) {
  return deadline && std::chrono::steady_clock::now() > *deadline;
}

std::vector<const Task*> resolve(const TaskSet& ts, const std::vector<int>& ids) {
  std::vector<const Task*> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(&ts.task(id));
  return out;
}

Solution pack_solution(std::vector<std::vector<int>> alloc, std::vector<int> part) {
  Solution sol;
  sol.task_alloc = std::move(alloc);
  sol.cache_part = std::move(part);
  for (auto& ids : sol.task_alloc) std::sort(ids.begin(), ids.end());
  for (std::size_t j = 0; j < sol.cache_part.size(); ++j)
    if (sol.task_alloc[j].empty()) sol.cache_part[j] = 0;
  sol.total_cache_used = 0;
  for (int mu : sol.cache_part) sol.total_cache_used += mu;
  return sol;
}

Solution empty_solution(const TaskSet& ts) {
  const std::size_t n = static_cast<std::size_t>(ts.platform().n_cores);
  return pack_solution(std::vector<std::vector<int>>(n), std::vector<int>(n, 0));
}

// Rate-monotonic total order; the last task in this order is the first one a
// fixed-priority core sacrifices.
bool fp_higher(const Task* a, const Task* b) {
  if (a->period() != b->period()) return a->period() < b->period();
  const TimeTick ea = a->exec_at(1), eb = b->exec_at(1);
  if (ea != eb) return ea > eb;
  return a->id() < b->id();
}

}  // namespace

BaselineResult run_ia3(const TaskSet& ts, const CoreTestFn& test,
                       std::optional<Deadline> deadline) {
  const PlatformConfig& pf = ts.platform();
  BaselineResult res;
  if (ts.size() == 0) {
    res.solution = empty_solution(ts);
    return res;
  }

  // Even static split, leftovers to the first cores.
  std::vector<int> part(static_cast<std::size_t>(pf.n_cores),
                        pf.n_partitions / pf.n_cores);
  for (int r = 0; r < pf.n_partitions % pf.n_cores; ++r) ++part[static_cast<std::size_t>(r)];

  std::vector<const Task*> order;
  for (const Task& t : ts.tasks()) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const Task* a, const Task* b) {
    const Frac ga = cache_sensitivity_potential(*a, 1);
    const Frac gb = cache_sensitivity_potential(*b, 1);
    if (ga != gb) return gb < ga;  // most cache-sensitive first
    return a->id() < b->id();
  });

  std::vector<std::vector<int>> alloc(static_cast<std::size_t>(pf.n_cores));
  std::vector<std::vector<const Task*>> placed(static_cast<std::size_t>(pf.n_cores));
  for (const Task* t : order) {
    if (past(deadline)) {
      res.timed_out = true;
      return res;
    }
    bool fits = false;
    for (std::size_t j = 0; j < placed.size() && !fits; ++j) {
      if (part[j] < 1) continue;
      placed[j].push_back(t);
      if (test(placed[j], part[j])) {
        alloc[j].push_back(t->id());
        fits = true;
      } else {
        placed[j].pop_back();
      }
    }
    if (!fits) return res;  // no solution
  }
  res.solution = pack_solution(std::move(alloc), std::move(part));
  return res;
}

BaselineResult run_pdpa(const TaskSet& ts, const CoreTestFn& test,
                        std::optional<Deadline> deadline) {
  const PlatformConfig& pf = ts.platform();
  BaselineResult res;
  if (ts.size() == 0) {
    res.solution = empty_solution(ts);
    return res;
  }

  std::vector<const Task*> all;
  for (const Task& t : ts.tasks()) all.push_back(&t);

  TimeTick p_min = all.front()->period(), p_max = p_min;
  for (const Task* t : all) {
    p_min = std::min(p_min, t->period());
    p_max = std::max(p_max, t->period());
  }
  // Minimum spacing between critical-task periods; 50 is the fraction (in
  // percent) of the per-core share of the period range.
  const double delta = (static_cast<double>(p_max - p_min) / pf.n_cores) * 0.50;

  // Candidate ranking: high base utilization first, low cache variability
  // second (flat profiles make steadier critical tasks).
  auto better_candidate = [&](const Task* a, const Task* b) {
    const Frac ua = base_utilization(*a, pf), ub = base_utilization(*b, pf);
    if (ua != ub) return ub < ua;
    const double va = static_cast<double>(a->exec_at(1)) / a->exec_at(pf.n_partitions);
    const double vb = static_cast<double>(b->exec_at(1)) / b->exec_at(pf.n_partitions);
    if (va != vb) return va < vb;
    return a->id() < b->id();
  };

  std::vector<const Task*> criticals;
  std::vector<bool> is_critical(static_cast<std::size_t>(ts.size()), false);
  {
    // The highest-period task anchors the first core.
    const Task* first = nullptr;
    for (const Task* t : all)
      if (!first || t->period() > first->period() ||
          (t->period() == first->period() && better_candidate(t, first)))
        first = t;
    criticals.push_back(first);
    is_critical[static_cast<std::size_t>(first->id())] = true;
  }
  while (static_cast<int>(criticals.size()) < pf.n_cores) {
    const Task* pick = nullptr;
    bool pick_spaced = false;
    double pick_dist = -1.0;
    for (const Task* t : all) {
      if (is_critical[static_cast<std::size_t>(t->id())]) continue;
      double dist = std::numeric_limits<double>::max();
      for (const Task* c : criticals)
        dist = std::min(dist, std::abs(static_cast<double>(t->period() - c->period())));
      const bool spaced = dist >= delta;
      bool take = false;
      if (!pick) {
        take = true;
      } else if (spaced != pick_spaced) {
        take = spaced;
      } else if (spaced) {
        take = better_candidate(t, pick);
      } else {
        // No properly spaced candidate anywhere: prefer the farthest one.
        take = dist > pick_dist || (dist == pick_dist && better_candidate(t, pick));
      }
      if (take) {
        pick = t;
        pick_spaced = spaced;
        pick_dist = dist;
      }
    }
    if (!pick) break;  // fewer tasks than cores
    criticals.push_back(pick);
    is_critical[static_cast<std::size_t>(pick->id())] = true;
  }

  const std::size_t n_cores = static_cast<std::size_t>(pf.n_cores);
  std::vector<std::vector<const Task*>> placed(n_cores);
  for (std::size_t j = 0; j < criticals.size(); ++j) placed[j].push_back(criticals[j]);

  // A task may only live on a core whose critical task has no smaller period.
  auto eligible = [&](const Task* t, std::size_t j) {
    return j < criticals.size() && criticals[j]->period() >= t->period();
  };

  // Period-driven initial mapping: longest periods placed first, each onto
  // the eligible core whose critical period is closest.
  std::vector<const Task*> rest;
  for (const Task* t : all)
    if (!is_critical[static_cast<std::size_t>(t->id())]) rest.push_back(t);
  std::sort(rest.begin(), rest.end(), [](const Task* a, const Task* b) {
    if (a->period() != b->period()) return a->period() > b->period();
    return a->id() < b->id();
  });
  for (const Task* t : rest) {
    std::size_t best = n_cores;
    for (std::size_t j = 0; j < criticals.size(); ++j) {
      if (!eligible(t, j)) continue;
      if (best == n_cores ||
          criticals[j]->period() < criticals[best]->period())
        best = j;
    }
    if (best == n_cores) return res;  // cannot happen once a critical exists
    placed[best].push_back(t);
  }

  // Remap pass: any core that fails even with the full cache sheds its
  // lowest-priority task to the next eligible core that still accepts it.
  long moves = 0;
  const long move_limit = static_cast<long>(ts.size()) * pf.n_cores;
  for (std::size_t j = 0; j < n_cores;) {
    if (past(deadline)) {
      res.timed_out = true;
      return res;
    }
    if (placed[j].empty() || test(placed[j], pf.n_partitions)) {
      ++j;
      continue;
    }
    auto victim = std::max_element(placed[j].begin(), placed[j].end(),
                                   [](const Task* a, const Task* b) {
                                     return fp_higher(a, b);  // max = lowest prio
                                   });
    const Task* t = *victim;
    placed[j].erase(victim);
    bool rehomed = false;
    for (std::size_t step = 1; step < n_cores && !rehomed; ++step) {
      const std::size_t k = (j + step) % n_cores;
      if (!eligible(t, k)) continue;
      placed[k].push_back(t);
      if (test(placed[k], pf.n_partitions))
        rehomed = true;
      else
        placed[k].pop_back();
    }
    if (!rehomed || ++moves > move_limit) return res;
  }

  // Size each core's allocation, then reject if the platform cannot fund it.
  std::vector<int> part(n_cores, 0);
  std::vector<std::vector<int>> alloc(n_cores);
  int total = 0;
  for (std::size_t j = 0; j < n_cores; ++j) {
    if (placed[j].empty()) continue;
    int mu = pf.n_partitions;
    for (int m = 1; m <= pf.n_partitions; ++m) {
      if (test(placed[j], m)) {
        mu = m;
        break;
      }
    }
    part[j] = mu;
    total += mu;
    for (const Task* t : placed[j]) alloc[j].push_back(t->id());
  }
  if (total > pf.n_partitions) return res;  // over the cache budget
  res.solution = pack_solution(std::move(alloc), std::move(part));
  return res;
}

BaselineResult run_cam(const TaskSet& ts, const CoreTestFn& test,
                       std::optional<Deadline> deadline) {
  const PlatformConfig& pf = ts.platform();
  BaselineResult res;
  if (ts.size() == 0) {
    res.solution = empty_solution(ts);
    return res;
  }

  // Slowdown shape of each task relative to its full-cache execution.
  std::vector<std::vector<double>> features;
  for (const Task& t : ts.tasks()) {
    std::vector<double> f(static_cast<std::size_t>(pf.n_partitions));
    for (int mu = 1; mu <= pf.n_partitions; ++mu)
      f[static_cast<std::size_t>(mu - 1)] =
          static_cast<double>(t.exec_at(mu)) / t.exec_at(pf.n_partitions);
    features.push_back(std::move(f));
  }
  const KMeansResult km = kmeans(features, pf.n_cores, kCamSeed);

  struct Cluster {
    std::vector<int> ids;
    double weight = 0.0;  // utilization reclaimable with more cache
  };
  std::vector<Cluster> clusters(static_cast<std::size_t>(pf.n_cores));
  for (const Task& t : ts.tasks()) {
    Cluster& c = clusters[static_cast<std::size_t>(km.labels[static_cast<std::size_t>(t.id())])];
    c.ids.push_back(t.id());
    c.weight += cache_sensitivity_potential(t, 1).to_double();
  }
  clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                [](const Cluster& c) { return c.ids.empty(); }),
                 clusters.end());
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    if (a.weight != b.weight) return a.weight > b.weight;  // hungriest first
    return a.ids.front() < b.ids.front();
  });

  // One partition per populated core, the rest by largest remainder of the
  // weight proportions (round-robin when every cluster is flat).
  const std::size_t n_cores = static_cast<std::size_t>(pf.n_cores);
  std::vector<int> part(n_cores, 0);
  const std::size_t hosts = std::min(clusters.size(),
                                     static_cast<std::size_t>(pf.n_partitions));
  int spare = pf.n_partitions;
  for (std::size_t j = 0; j < hosts; ++j) {
    part[j] = 1;
    --spare;
  }
  double weight_total = 0.0;
  for (std::size_t j = 0; j < hosts; ++j) weight_total += clusters[j].weight;
  if (spare > 0 && hosts > 0) {
    std::vector<double> share(hosts, 0.0);
    std::vector<int> extra(hosts, 0);
    int given = 0;
    if (weight_total > 0.0) {
      for (std::size_t j = 0; j < hosts; ++j) {
        share[j] = spare * (clusters[j].weight / weight_total);
        extra[j] = static_cast<int>(share[j]);
        given += extra[j];
      }
      std::vector<std::size_t> by_rem(hosts);
      for (std::size_t j = 0; j < hosts; ++j) by_rem[j] = j;
      std::sort(by_rem.begin(), by_rem.end(), [&](std::size_t a, std::size_t b) {
        const double ra = share[a] - extra[a], rb = share[b] - extra[b];
        if (ra != rb) return ra > rb;
        return a < b;
      });
      for (std::size_t r = 0; given < spare; r = (r + 1) % hosts, ++given)
        ++extra[by_rem[r]];
    } else {
      for (std::size_t r = 0; given < spare; r = (r + 1) % hosts, ++given)
        ++extra[r];
    }
    for (std::size_t j = 0; j < hosts; ++j) part[j] += extra[j];
  }

  std::vector<std::vector<const Task*>> placed(n_cores);
  std::vector<std::vector<int>> alloc(n_cores);
  std::vector<const Task*> spill;
  for (std::size_t j = 0; j < clusters.size(); ++j) {
    std::vector<const Task*> members = resolve(ts, clusters[j].ids);
    const std::size_t core = std::min(j, hosts > 0 ? hosts - 1 : 0);
    const int mu = part[core];
    std::sort(members.begin(), members.end(), [&](const Task* a, const Task* b) {
      const Frac ua = utilization_at(*a, std::max(mu, 1));
      const Frac ub = utilization_at(*b, std::max(mu, 1));
      if (ua != ub) return ub < ua;
      return a->id() < b->id();
    });
    for (const Task* t : members) {
      if (past(deadline)) {
        res.timed_out = true;
        return res;
      }
      bool kept = false;
      if (j < hosts && mu >= 1) {
        placed[core].push_back(t);
        if (test(placed[core], mu)) {
          alloc[core].push_back(t->id());
          kept = true;
        } else {
          placed[core].pop_back();
        }
      }
      if (!kept) spill.push_back(t);
    }
  }
  for (const Task* t : spill) {
    if (past(deadline)) {
      res.timed_out = true;
      return res;
    }
    bool fits = false;
    for (std::size_t j = 0; j < n_cores && !fits; ++j) {
      if (part[j] < 1) continue;
      placed[j].push_back(t);
      if (test(placed[j], part[j])) {
        alloc[j].push_back(t->id());
        fits = true;
      } else {
        placed[j].pop_back();
      }
    }
    if (!fits) return res;
  }
  res.solution = pack_solution(std::move(alloc), std::move(part));
  return res;
}

Solution minimize_cache(const TaskSet& ts, Solution sol, const CoreTestFn& test) {
  for (std::size_t j = 0; j < sol.task_alloc.size(); ++j) {
    if (sol.task_alloc[j].empty()) {
      sol.cache_part[j] = 0;
      continue;
    }
    const std::vector<const Task*> tasks = resolve(ts, sol.task_alloc[j]);
    while (sol.cache_part[j] > 1 && test(tasks, sol.cache_part[j] - 1))
      --sol.cache_part[j];
  }
  sol.total_cache_used = 0;
  for (int mu : sol.cache_part) sol.total_cache_used += mu;
  return sol;
}

}  // namespace csp
