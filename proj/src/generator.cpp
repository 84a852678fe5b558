#include "csp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace csp {
namespace {

// The tightest corner of the experiment grid (40 tasks, target 4.0, cap 0.2)
// accepts roughly 1 in 1e5 raw draws, so the resampling budget leaves two
// orders of magnitude of headroom before giving up.
constexpr long kCapRetries = 10'000'000;

// Round a real tick count up, forgiving representation noise just below an
// integer (products like 0.34 * 100 land at 34 + 2^-47).
TimeTick tick_ceil(double x) {
  const double f = std::floor(x);
  if (x - f <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<TimeTick>(f);
  return static_cast<TimeTick>(f) + 1;
}

}  // namespace

SlowdownCurve SlowdownCurve::synthetic(double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("curve: negative alpha");
  SlowdownCurve c;
  c.synthetic_ = true;
  c.alpha_ = alpha;
  std::ostringstream name;
  name << "synthetic_a" << alpha;
  c.name_ = name.str();
  return c;
}

SlowdownCurve SlowdownCurve::from_samples(
    std::string name, std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("curve: need >= 2 samples");
  std::sort(samples.begin(), samples.end());
  for (const auto& [kb, slow] : samples) {
    if (kb <= 0.0 || slow <= 0.0)
      throw std::invalid_argument("curve: non-positive sample");
  }
  // More cache never slows a run down; raise earlier samples if measurement
  // noise says otherwise (conservative direction).
  for (std::size_t i = samples.size() - 1; i-- > 0;)
    samples[i].second = std::max(samples[i].second, samples[i + 1].second);
  SlowdownCurve c;
  c.synthetic_ = false;
  c.name_ = std::move(name);
  c.samples_ = std::move(samples);
  return c;
}

double SlowdownCurve::at(int mu, const PlatformConfig& platform) const {
  if (mu < 1 || mu > platform.n_partitions)
    throw std::out_of_range("curve: mu outside 1..n_partitions");
  if (synthetic_) return synthetic_slowdown(alpha_, mu, platform.n_partitions);

  auto raw = [&](double kb) {
    if (kb <= samples_.front().first) return samples_.front().second;
    if (kb >= samples_.back().first) return samples_.back().second;
    for (std::size_t i = 1; i < samples_.size(); ++i) {
      if (kb <= samples_[i].first) {
        const auto& [x0, y0] = samples_[i - 1];
        const auto& [x1, y1] = samples_[i];
        return y0 + (y1 - y0) * (kb - x0) / (x1 - x0);
      }
    }
    return samples_.back().second;
  };
  // Normalize to the scenario's full allocation so at(n_p) == 1 even when the
  // platform's total cache is smaller than the measurement range.
  const double full = raw(static_cast<double>(platform.n_partitions) *
                          platform.partition_kb);
  return raw(static_cast<double>(mu) * platform.partition_kb) / full;
}

double synthetic_slowdown(double alpha, int mu, int n_p) {
  if (mu < 1 || mu > n_p) throw std::out_of_range("synthetic_slowdown: bad mu");
  return std::exp(static_cast<double>(n_p - mu) * alpha);
}

const char* period_set_name(PeriodSet s) {
  return s == PeriodSet::kWide ? "WD" : "SH";
}

const char* profile_set_name(ProfileSet s) {
  switch (s) {
    case ProfileSet::kBenchmark: return "SD-B";
    case ProfileSet::kSynthLow: return "SD-S1";
    case ProfileSet::kSynthSpread: return "SD-S2";
  }
  return "?";
}

std::vector<TimeTick> period_pool(PeriodSet s) {
  std::vector<TimeTick> ms = s == PeriodSet::kWide
                                 ? std::vector<TimeTick>{5, 10, 20, 40, 60, 80, 100}
                                 : std::vector<TimeTick>{10, 15, 20, 25};
  for (TimeTick& p : ms) p *= kTicksPerMs;
  return ms;
}

std::vector<SlowdownCurve> profile_pool(ProfileSet s) {
  switch (s) {
    case ProfileSet::kBenchmark:
      return benchmark_curves();
    case ProfileSet::kSynthLow: {
      std::vector<SlowdownCurve> out;
      for (int i = 0; i < 6; ++i)
        out.push_back(SlowdownCurve::synthetic(kSyntheticAlpha[i]));
      return out;
    }
    case ProfileSet::kSynthSpread: {
      std::vector<SlowdownCurve> out;
      for (int i : {0, 1, 3, 5, 6, 7})
        out.push_back(SlowdownCurve::synthetic(kSyntheticAlpha[i]));
      return out;
    }
  }
  throw std::invalid_argument("profile_pool: unknown set");
}

double exec_time_model(std::int64_t instructions, std::int64_t d_hits,
                       std::int64_t d_misses, double cpi, double hit_penalty,
                       double miss_penalty) {
  if (instructions < 0 || d_hits < 0 || d_misses < 0)
    throw std::invalid_argument("exec_time_model: negative counts");
  return static_cast<double>(instructions) * cpi +
         static_cast<double>(d_misses) * miss_penalty +
         static_cast<double>(d_hits) * hit_penalty;
}

std::string ScenarioConfig::id() const {
  std::ostringstream out;
  out << (platform.n_partitions >= 32 ? "AR-II" : "AR-I") << "+"
      << period_set_name(period_set) << "+" << profile_set_name(profile_set);
  return out.str();
}

void ScenarioConfig::validate() const {
  platform.validate();
  if (u_tar_grid.empty()) throw std::invalid_argument("scenario: empty u_tar grid");
  for (double u : u_tar_grid) {
    if (u <= 0.0) throw std::invalid_argument("scenario: non-positive u_tar");
    if (u > static_cast<double>(platform.n_cores))
      throw std::invalid_argument("scenario: u_tar exceeds core count");
  }
  if (sets_per_point < 1)
    throw std::invalid_argument("scenario: sets_per_point must be >= 1");
  if (n_tasks < 1) throw std::invalid_argument("scenario: n_tasks must be >= 1");
}

std::vector<double> gen_utilizations(int n, double u_tar, std::optional<double> cap,
                                     Rng& rng) {
  if (n < 1) throw std::invalid_argument("gen_utilizations: n must be >= 1");
  if (u_tar <= 0.0) throw std::invalid_argument("gen_utilizations: u_tar <= 0");
  const double limit = cap ? *cap : 1.0;
  if (limit <= 0.0) throw std::invalid_argument("gen_utilizations: cap <= 0");
  if (u_tar > limit * n)
    throw std::invalid_argument("gen_utilizations: u_tar infeasible under cap");

  std::vector<double> u(static_cast<std::size_t>(n));
  for (long attempt = 0; attempt < kCapRetries; ++attempt) {
    // Uniform over the simplex sum(u) = u_tar (stick-breaking with the
    // order-statistic transform).
    double rest = u_tar;
    for (int i = 1; i < n; ++i) {
      const double next =
          rest * std::pow(rng.next_canonical(), 1.0 / static_cast<double>(n - i));
      u[static_cast<std::size_t>(i - 1)] = rest - next;
      rest = next;
    }
    u[static_cast<std::size_t>(n - 1)] = rest;

    bool ok = true;
    for (double v : u) {
      if (v <= 0.0 || v > limit) {
        ok = false;
        break;
      }
    }
    if (ok) return u;
  }
  throw std::runtime_error("gen_utilizations: retry budget exhausted");
}

Task build_task(int id, double u_base, TimeTick period, const SlowdownCurve& curve,
                const PlatformConfig& platform) {
  if (u_base <= 0.0) throw std::invalid_argument("build_task: u_base <= 0");
  if (period < 1) throw std::invalid_argument("build_task: period < 1 tick");
  const TimeTick base = std::max<TimeTick>(1, tick_ceil(u_base * static_cast<double>(period)));
  std::vector<TimeTick> eps(static_cast<std::size_t>(platform.n_partitions));
  for (int mu = 1; mu <= platform.n_partitions; ++mu)
    eps[static_cast<std::size_t>(mu - 1)] =
        tick_ceil(static_cast<double>(base) * curve.at(mu, platform));
  return Task(id, period, ExecProfile(std::move(eps)));
}

TaskSet gen_task_set(const ScenarioConfig& cfg, int u_idx, int rep) {
  cfg.validate();
  if (u_idx < 0 || u_idx >= static_cast<int>(cfg.u_tar_grid.size()))
    throw std::out_of_range("gen_task_set: u_idx outside the grid");
  if (rep < 0 || rep >= cfg.sets_per_point)
    throw std::out_of_range("gen_task_set: rep outside sets_per_point");

  Rng rng = make_stream(cfg.rng_seed, static_cast<std::uint64_t>(u_idx),
                        static_cast<std::uint64_t>(rep));
  const double u_tar = cfg.u_tar_grid[static_cast<std::size_t>(u_idx)];
  const std::optional<double> cap =
      cfg.period_set == PeriodSet::kShort ? std::optional<double>(kShortPeriodUtilCap)
                                          : std::nullopt;
  const std::vector<double> utils = gen_utilizations(cfg.n_tasks, u_tar, cap, rng);
  const std::vector<TimeTick> periods = period_pool(cfg.period_set);
  const std::vector<SlowdownCurve> curves = profile_pool(cfg.profile_set);

  std::vector<Task> tasks;
  tasks.reserve(static_cast<std::size_t>(cfg.n_tasks));
  for (int i = 0; i < cfg.n_tasks; ++i) {
    const TimeTick period = periods[rng.next_index(periods.size())];
    const SlowdownCurve& curve = curves[rng.next_index(curves.size())];
    tasks.push_back(build_task(i, utils[static_cast<std::size_t>(i)], period, curve,
                               cfg.platform));
  }
  return TaskSet(std::move(tasks), cfg.platform);
}

void for_each_task_set(const ScenarioConfig& cfg,
                       const std::function<void(int, int, TaskSet)>& fn) {
  cfg.validate();
  for (int u_idx = 0; u_idx < static_cast<int>(cfg.u_tar_grid.size()); ++u_idx)
    for (int rep = 0; rep < cfg.sets_per_point; ++rep)
      fn(u_idx, rep, gen_task_set(cfg, u_idx, rep));
}

std::vector<TaskSet> gen_scenario(const ScenarioConfig& cfg) {
  std::vector<TaskSet> out;
  for_each_task_set(cfg, [&](int, int, TaskSet ts) { out.push_back(std::move(ts)); });
  return out;
}

SlowdownCurve load_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("cache_kb,slowdown", 0) != 0)
    throw std::runtime_error("profile " + path + ": expected header cache_kb,slowdown");
  std::vector<std::pair<double, double>> samples;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double kb, slow;
    char comma;
    if (!(row >> kb >> comma >> slow) || comma != ',')
      throw std::runtime_error("profile " + path + ": bad row: " + line);
    samples.emplace_back(kb, slow);
  }
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
    name = name.substr(slash + 1);
  if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
    name = name.substr(0, dot);
  return SlowdownCurve::from_samples(std::move(name), std::move(samples));
}

SlowdownCurve curve_from_cache_stats_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cache stats: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("cache_kb,instructions,d_hits,d_misses", 0) != 0)
    throw std::runtime_error("cache stats " + path + ": unexpected header");
  std::vector<std::pair<double, double>> cycles;  // (cache_kb, cycles)
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double kb;
    std::int64_t instr, hits, misses;
    char c1, c2, c3;
    if (!(row >> kb >> c1 >> instr >> c2 >> hits >> c3 >> misses) || c1 != ',' ||
        c2 != ',' || c3 != ',')
      throw std::runtime_error("cache stats " + path + ": bad row: " + line);
    cycles.emplace_back(kb, exec_time_model(instr, hits, misses));
  }
  if (cycles.size() < 2)
    throw std::runtime_error("cache stats " + path + ": need >= 2 rows");
  std::sort(cycles.begin(), cycles.end());
  const double full = cycles.back().second;
  if (full <= 0.0) throw std::runtime_error("cache stats " + path + ": zero cycles");
  for (auto& [kb, cy] : cycles) cy /= full;
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
    name = name.substr(slash + 1);
  if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
    name = name.substr(0, dot);
  return SlowdownCurve::from_samples(std::move(name), std::move(cycles));
}

}  // namespace csp
