#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csp/generator.hpp"
#include "csp/optimizer.hpp"
#include "csp/taskmodel.hpp"

namespace csp {

// Batch experiment runner: every generated task set is solved by every
// requested algorithm, results land in plot-ready CSV/JSON files, and the
// cache-saving comparison between the proposed schemes and the baselines is
// derived per task set.

enum class Algo { kComp, kCase, kIa3, kPdpa, kCam };

inline constexpr std::array<Algo, 5> kAllAlgos = {
    Algo::kComp, Algo::kCase, Algo::kIa3, Algo::kPdpa, Algo::kCam};

const char* algo_name(Algo a);
Algo parse_algo(const std::string& name);

struct ExperimentRecord {
  std::string scenario;
  double u_tar = 0.0;
  int set_index = 0;
  Algo algo = Algo::kComp;
  Policy policy = Policy::kNpFp;
  bool schedulable = false;
  bool timed_out = false;
  std::optional<int> total_cache_used;  // present iff schedulable
  double runtime_ms = 0.0;
  int n_partitions = 0;  // carried for the runtime report, not serialized
};

struct CacheSaveRecord {
  int set_index = 0;
  int mu_prop = 0;  // cache used by the best proposed scheme
  int mu_base = 0;  // cache used by the best cache-minimized baseline
  int mu_save = 0;  // mu_base - mu_prop
};

struct RatioRow {
  double u_tar = 0.0;
  // Percentage of schedulable sets per algorithm name, plus the derived
  // "BOTH" row (a set either proposed scheme schedules).
  std::map<std::string, double> pct;
};

struct ExperimentSummary {
  std::string scenario;
  Policy policy = Policy::kNpFp;
  int total_sets = 0;
  std::map<std::string, long> totals;          // schedulable counts (+ BOTH)
  std::map<std::string, long> timeout_counts;  // cells cut off by the deadline
  std::vector<RatioRow> ratio_rows;
  long mu_save_count = 0;
  double mu_save_mean = 0.0;
  std::map<int, long> mu_save_histogram;
  bool pruning_ok = true;  // frontier bound held in every optimize run
};

struct ExperimentOutput {
  std::vector<ExperimentRecord> records;     // sorted by (set_index, algo)
  std::vector<CacheSaveRecord> cache_saves;  // sorted by set_index
  ExperimentSummary summary;
};

struct ExperimentOptions {
  std::vector<Algo> algorithms{kAllAlgos.begin(), kAllAlgos.end()};
  double timeout_s = 300.0;  // per task set x algorithm cell, cooperative
  int jobs = 1;
  std::string out_dir;  // when set, records/cache_save/summary/runtime files
};

// Solves the given task sets (u_tars aligned per set). Cells run in a worker
// pool; outputs are post-sorted so they do not depend on scheduling order.
ExperimentOutput run_experiment_on(const std::vector<TaskSet>& sets,
                                   const std::vector<double>& u_tars,
                                   const std::string& scenario_id, Policy policy,
                                   const ExperimentOptions& opt);

// Generates the scenario's task sets, runs them, and (if out_dir is set)
// writes records.csv, cache_save.csv, summary.json and runtime.csv.
ExperimentOutput run_experiment(const ScenarioConfig& cfg,
                                const ExperimentOptions& opt);

void write_outputs(const ExperimentOutput& out, const std::string& out_dir);

std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::string cache_saves_to_csv(const std::vector<CacheSaveRecord>& saves);
std::string summary_to_json(const ExperimentSummary& summary);

struct RuntimeRow {
  std::string algo;
  Policy policy = Policy::kNpFp;
  int n_partitions = 0;
  long count = 0;
  double avg_ms = 0.0;
  double max_ms = 0.0;
};

// Wall-clock statistics grouped by (algorithm, policy, partition count).
std::vector<RuntimeRow> runtime_report(const std::vector<ExperimentRecord>& records);
std::string runtime_report_csv(const std::vector<RuntimeRow>& rows);

// One algorithm on one task set; the solution as the algorithm produced it
// (no cache minimization). Absent on unschedulable, timeout or failure.
std::optional<Solution> solve_one(const TaskSet& ts, Algo algo, Policy policy,
                                  double timeout_s = 300.0);

}  // namespace csp
