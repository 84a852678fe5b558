#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csp/analysis.hpp"
#include "csp/rng.hpp"
#include "csp/taskmodel.hpp"

namespace csp {

// Execution slowdown as a function of the cache granted, normalized so that
// the scenario's full allocation has slowdown 1. Synthetic curves follow
// exp((n_p - mu) * alpha); measured curves are sampled over cache sizes in KB
// and interpolated linearly.
class SlowdownCurve {
 public:
  static SlowdownCurve synthetic(double alpha);
  static SlowdownCurve from_samples(std::string name,
                                    std::vector<std::pair<double, double>> samples);

  // Slowdown with mu of platform.n_partitions granted; >= 1, equal to 1 at
  // the full allocation.
  double at(int mu, const PlatformConfig& platform) const;

  bool is_synthetic() const { return synthetic_; }
  double alpha() const { return alpha_; }
  const std::string& name() const { return name_; }

 private:
  bool synthetic_ = true;
  double alpha_ = 0.0;
  std::string name_;
  std::vector<std::pair<double, double>> samples_;  // (cache_kb, slowdown)
};

double synthetic_slowdown(double alpha, int mu, int n_p);

// Slowdown exponents for the synthetic profile pools. The base pool spans
// full-allocation-relative maximum slowdowns of roughly 1x..10x on 32
// partitions (1x..3x on 16).
inline constexpr double kSyntheticAlpha[8] = {0.0,   0.023, 0.036, 0.045,
                                              0.052, 0.058, 0.067, 0.0743};

enum class PeriodSet { kWide, kShort };
enum class ProfileSet { kBenchmark, kSynthLow, kSynthSpread };

const char* period_set_name(PeriodSet s);
const char* profile_set_name(ProfileSet s);

// Periods in milliseconds; converted to ticks with kTicksPerMs.
std::vector<TimeTick> period_pool(PeriodSet s);
// Curves in the pool a scenario draws task profiles from.
std::vector<SlowdownCurve> profile_pool(ProfileSet s);

// The four measured benchmark curves shipped with the project.
const std::vector<SlowdownCurve>& benchmark_curves();

// CSV with header "cache_kb,slowdown".
SlowdownCurve load_profile_csv(const std::string& path);
// CSV with header "cache_kb,instructions,d_hits,d_misses"; converted to a
// slowdown curve through the execution-time model.
SlowdownCurve curve_from_cache_stats_csv(const std::string& path);

// Cycles for an instruction/data-cache profile: instructions * cpi +
// misses * miss_penalty + hits * hit_penalty.
double exec_time_model(std::int64_t instructions, std::int64_t d_hits,
                       std::int64_t d_misses, double cpi = 0.5,
                       double hit_penalty = 20.0, double miss_penalty = 200.0);

struct ScenarioConfig {
  PlatformConfig platform{4, 16, 64};
  PeriodSet period_set = PeriodSet::kWide;
  ProfileSet profile_set = ProfileSet::kBenchmark;
  std::vector<double> u_tar_grid;
  int sets_per_point = 20;
  std::uint64_t rng_seed = 1;
  Policy policy = Policy::kNpFp;
  int n_tasks = 40;

  std::string id() const;
  void validate() const;
};

// Utilization cap applied under short-period scenarios.
inline constexpr double kShortPeriodUtilCap = 0.2;

// n utilizations > 0 summing to u_tar, uniform over the simplex; vectors with
// any value above the cap are redrawn wholesale. Throws when the cap makes
// the target infeasible or retries run out.
std::vector<double> gen_utilizations(int n, double u_tar, std::optional<double> cap,
                                     Rng& rng);

// One task: execution at the full allocation is ceil(u_base * period) ticks,
// scaled by the curve's slowdown at each smaller allocation (rounded up).
Task build_task(int id, double u_base, TimeTick period, const SlowdownCurve& curve,
                const PlatformConfig& platform);

// Task set `rep` of grid point `u_idx`; reproducible in isolation.
TaskSet gen_task_set(const ScenarioConfig& cfg, int u_idx, int rep);

// Streams every task set of the scenario in grid order.
void for_each_task_set(const ScenarioConfig& cfg,
                       const std::function<void(int u_idx, int rep, TaskSet)>& fn);

std::vector<TaskSet> gen_scenario(const ScenarioConfig& cfg);

}  // namespace csp
