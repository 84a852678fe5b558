#include "csp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"

#include "csp/baselines.hpp"

namespace csp {
namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

bool is_proposed(Algo a) { return a == Algo::kComp || a == Algo::kCase; }

// Outcome of one task set x algorithm cell.
struct CellOutcome {
  std::optional<Solution> sol;
  std::optional<int> min_total;  // baselines: after cache minimization
  bool timed_out = false;
  bool frontier_ok = true;
  double runtime_ms = 0.0;
};

CellOutcome run_cell(const TaskSet& ts, Algo algo, Policy policy,
                     double timeout_s) {
  const auto start = Clock::now();
  const Deadline deadline =
      start + std::chrono::microseconds(
                  static_cast<std::int64_t>(timeout_s * 1e6));
  CellOutcome out;
  try {
    const CoreTestFn test = make_core_test(policy);
    switch (algo) {
      case Algo::kComp:
      case Algo::kCase: {
        const SortCriterion crit =
            algo == Algo::kComp ? SortCriterion::kComp : SortCriterion::kCase;
        OptimizeResult r = optimize(ts, crit, test, deadline);
        out.sol = std::move(r.solution);
        out.timed_out = r.stats.timed_out;
        out.frontier_ok = r.stats.frontier_bound_ok;
        if (out.sol) out.min_total = out.sol->total_cache_used;
        break;
      }
      case Algo::kIa3:
      case Algo::kPdpa:
      case Algo::kCam: {
        BaselineResult r = algo == Algo::kIa3    ? run_ia3(ts, test, deadline)
                           : algo == Algo::kPdpa ? run_pdpa(ts, test, deadline)
                                                 : run_cam(ts, test, deadline);
        out.sol = std::move(r.solution);
        out.timed_out = r.timed_out;
        if (out.sol)
          out.min_total = minimize_cache(ts, *out.sol, test).total_cache_used;
        break;
      }
    }
  } catch (const std::exception&) {
    // A failing cell counts as unschedulable; the batch keeps going.
    out.sol.reset();
    out.min_total.reset();
  }
  out.runtime_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::kComp: return "COMP";
    case Algo::kCase: return "CASE";
    case Algo::kIa3: return "IA3";
    case Algo::kPdpa: return "PDPA";
    case Algo::kCam: return "CAM";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "comp") return Algo::kComp;
  if (lower == "case") return Algo::kCase;
  if (lower == "ia3") return Algo::kIa3;
  if (lower == "pdpa") return Algo::kPdpa;
  if (lower == "cam") return Algo::kCam;
  throw std::invalid_argument("algo: expected comp|case|ia3|pdpa|cam, got " + name);
}

ExperimentOutput run_experiment_on(const std::vector<TaskSet>& sets,
                                   const std::vector<double>& u_tars,
                                   const std::string& scenario_id, Policy policy,
                                   const ExperimentOptions& opt) {
  if (sets.size() != u_tars.size())
    throw std::invalid_argument("run_experiment_on: one u_tar per task set");
  const std::size_t n_algos = opt.algorithms.size();
  const std::size_t n_cells = sets.size() * n_algos;
  std::vector<CellOutcome> outcomes(n_cells);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_cells) return;
      const std::size_t s = i / n_algos;
      const Algo algo = opt.algorithms[i % n_algos];
      outcomes[i] = run_cell(sets[s], algo, policy, opt.timeout_s);
    }
  };
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1 || n_cells <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  ExperimentOutput out;
  out.summary.scenario = scenario_id;
  out.summary.policy = policy;
  out.summary.total_sets = static_cast<int>(sets.size());
  for (Algo a : opt.algorithms) {
    out.summary.totals[algo_name(a)] = 0;
    out.summary.timeout_counts[algo_name(a)] = 0;
  }
  const bool track_both =
      std::any_of(opt.algorithms.begin(), opt.algorithms.end(), is_proposed);
  if (track_both) out.summary.totals["BOTH"] = 0;

  // Per-u_tar tallies in first-seen grid order.
  std::vector<double> u_points;
  std::vector<long> u_set_count;
  std::vector<std::map<std::string, long>> u_sched;
  auto u_slot = [&](double u) {
    for (std::size_t i = 0; i < u_points.size(); ++i)
      if (u_points[i] == u) return i;
    u_points.push_back(u);
    u_set_count.push_back(0);
    u_sched.emplace_back();
    return u_points.size() - 1;
  };

  double mu_save_sum = 0.0;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::size_t slot = u_slot(u_tars[s]);
    ++u_set_count[slot];
    std::optional<int> prop, base;
    bool either_proposed = false;
    for (std::size_t k = 0; k < n_algos; ++k) {
      const Algo algo = opt.algorithms[k];
      const CellOutcome& cell = outcomes[s * n_algos + k];

      ExperimentRecord rec;
      rec.scenario = scenario_id;
      rec.u_tar = u_tars[s];
      rec.set_index = static_cast<int>(s);
      rec.algo = algo;
      rec.policy = policy;
      rec.schedulable = cell.sol.has_value();
      rec.timed_out = cell.timed_out;
      if (cell.sol) rec.total_cache_used = cell.sol->total_cache_used;
      rec.runtime_ms = cell.runtime_ms;
      rec.n_partitions = sets[s].platform().n_partitions;
      out.records.push_back(std::move(rec));

      if (cell.sol) {
        ++out.summary.totals[algo_name(algo)];
        ++u_sched[slot][algo_name(algo)];
        auto& best = is_proposed(algo) ? prop : base;
        if (!best || *cell.min_total < *best) best = cell.min_total;
        if (is_proposed(algo)) either_proposed = true;
      }
      if (cell.timed_out) ++out.summary.timeout_counts[algo_name(algo)];
      if (is_proposed(algo) && !cell.frontier_ok) out.summary.pruning_ok = false;
    }
    if (track_both && either_proposed) {
      ++out.summary.totals["BOTH"];
      ++u_sched[slot]["BOTH"];
    }
    if (prop && base) {
      CacheSaveRecord save;
      save.set_index = static_cast<int>(s);
      save.mu_prop = *prop;
      save.mu_base = *base;
      save.mu_save = *base - *prop;
      mu_save_sum += save.mu_save;
      ++out.summary.mu_save_count;
      ++out.summary.mu_save_histogram[save.mu_save];
      out.cache_saves.push_back(save);
    }
  }
  if (out.summary.mu_save_count > 0)
    out.summary.mu_save_mean =
        mu_save_sum / static_cast<double>(out.summary.mu_save_count);

  for (std::size_t i = 0; i < u_points.size(); ++i) {
    RatioRow row;
    row.u_tar = u_points[i];
    for (const auto& [name, count] : out.summary.totals) {
      const long sched = u_sched[i].count(name) ? u_sched[i][name] : 0;
      row.pct[name] =
          100.0 * static_cast<double>(sched) / static_cast<double>(u_set_count[i]);
    }
    out.summary.ratio_rows.push_back(std::move(row));
  }
  return out;
}

ExperimentOutput run_experiment(const ScenarioConfig& cfg,
                                const ExperimentOptions& opt) {
  cfg.validate();
  std::vector<TaskSet> sets;
  std::vector<double> u_tars;
  for_each_task_set(cfg, [&](int u_idx, int, TaskSet ts) {
    sets.push_back(std::move(ts));
    u_tars.push_back(cfg.u_tar_grid[static_cast<std::size_t>(u_idx)]);
  });
  ExperimentOutput out =
      run_experiment_on(sets, u_tars, cfg.id(), cfg.policy, opt);
  if (!opt.out_dir.empty()) write_outputs(out, opt.out_dir);
  return out;
}

void write_outputs(const ExperimentOutput& out, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    const std::string path = out_dir + "/" + name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
  };
  write("records.csv", records_to_csv(out.records));
  write("cache_save.csv", cache_saves_to_csv(out.cache_saves));
  write("summary.json", summary_to_json(out.summary));
  write("runtime.csv", runtime_report_csv(runtime_report(out.records)));
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string csv =
      "scenario,u_tar,set_index,algo,policy,schedulable,timed_out,"
      "total_cache_used,runtime_ms\n";
  for (const ExperimentRecord& r : records) {
    csv += r.scenario;
    csv += ',';
    csv += fmt_fixed(r.u_tar, 4);
    csv += ',';
    csv += std::to_string(r.set_index);
    csv += ',';
    csv += algo_name(r.algo);
    csv += ',';
    csv += policy_name(r.policy);
    csv += ',';
    csv += r.schedulable ? '1' : '0';
    csv += ',';
    csv += r.timed_out ? '1' : '0';
    csv += ',';
    if (r.total_cache_used) csv += std::to_string(*r.total_cache_used);
    csv += ',';
    csv += fmt_fixed(r.runtime_ms, 3);
    csv += '\n';
  }
  return csv;
}

std::string cache_saves_to_csv(const std::vector<CacheSaveRecord>& saves) {
  std::string csv = "set_index,mu_prop,mu_base,mu_save\n";
  for (const CacheSaveRecord& r : saves) {
    csv += std::to_string(r.set_index);
    csv += ',';
    csv += std::to_string(r.mu_prop);
    csv += ',';
    csv += std::to_string(r.mu_base);
    csv += ',';
    csv += std::to_string(r.mu_save);
    csv += '\n';
  }
  return csv;
}

std::string summary_to_json(const ExperimentSummary& s) {
  Json j;
  j["scenario"] = s.scenario;
  j["policy"] = policy_name(s.policy);
  j["total_sets"] = s.total_sets;
  j["totals"] = Json::object();
  for (const auto& [name, count] : s.totals) j["totals"][name] = count;
  j["timeout_counts"] = Json::object();
  for (const auto& [name, count] : s.timeout_counts)
    j["timeout_counts"][name] = count;
  j["ratio_rows"] = Json::array();
  for (const RatioRow& row : s.ratio_rows) {
    Json rj;
    rj["u_tar"] = row.u_tar;
    rj["pct"] = Json::object();
    for (const auto& [name, pct] : row.pct) rj["pct"][name] = pct;
    j["ratio_rows"].push_back(std::move(rj));
  }
  j["mu_save"] = Json::object();
  j["mu_save"]["count"] = s.mu_save_count;
  j["mu_save"]["mean"] = s.mu_save_mean;
  j["mu_save"]["histogram"] = Json::object();
  for (const auto& [value, count] : s.mu_save_histogram)
    j["mu_save"]["histogram"][std::to_string(value)] = count;
  j["pruning_ok"] = s.pruning_ok;
  return j.dump(2) + "\n";
}

std::vector<RuntimeRow> runtime_report(const std::vector<ExperimentRecord>& records) {
  std::map<std::tuple<std::string, int, int>, RuntimeRow> grouped;
  for (const ExperimentRecord& r : records) {
    const auto key = std::make_tuple(std::string(algo_name(r.algo)),
                                     static_cast<int>(r.policy), r.n_partitions);
    RuntimeRow& row = grouped[key];
    if (row.count == 0) {
      row.algo = algo_name(r.algo);
      row.policy = r.policy;
      row.n_partitions = r.n_partitions;
    }
    ++row.count;
    row.avg_ms += r.runtime_ms;  // sum for now, divided below
    row.max_ms = std::max(row.max_ms, r.runtime_ms);
  }
  std::vector<RuntimeRow> rows;
  for (auto& [key, row] : grouped) {
    row.avg_ms /= static_cast<double>(row.count);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<Solution> solve_one(const TaskSet& ts, Algo algo, Policy policy,
                                  double timeout_s) {
  return run_cell(ts, algo, policy, timeout_s).sol;
}

std::string runtime_report_csv(const std::vector<RuntimeRow>& rows) {
  std::string csv = "algo,policy,n_partitions,count,avg_ms,max_ms\n";
  for (const RuntimeRow& r : rows) {
    csv += r.algo;
    csv += ',';
    csv += policy_name(r.policy);
    csv += ',';
    csv += std::to_string(r.n_partitions);
    csv += ',';
    csv += std::to_string(r.count);
    csv += ',';
    csv += fmt_fixed(r.avg_ms, 3);
    csv += ',';
    csv += fmt_fixed(r.max_ms, 3);
    csv += '\n';
  }
  return csv;
}

}  // namespace csp
