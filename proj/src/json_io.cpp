#include "csp/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace csp {
namespace {

using Json = nlohmann::ordered_json;

Json platform_to_json(const PlatformConfig& pf) {
  return Json{{"n_cores", pf.n_cores},
              {"n_partitions", pf.n_partitions},
              {"partition_kb", pf.partition_kb}};
}

PlatformConfig platform_from_json(const Json& j) {
  PlatformConfig pf;
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "AR-I") {
      pf = {4, 16, 64};
    } else if (name == "AR-II") {
      pf = {4, 32, 64};
    } else {
      throw std::invalid_argument("platform: unknown reference name " + name);
    }
  } else {
    pf.n_cores = j.at("n_cores").get<int>();
    pf.n_partitions = j.at("n_partitions").get<int>();
    pf.partition_kb = j.value("partition_kb", 64);
  }
  pf.validate();
  return pf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::string task_set_to_json(const TaskSet& ts) {
  Json j;
  j["tick_ns"] = ts.tick_ns();
  j["n_cores"] = ts.platform().n_cores;
  j["n_partitions"] = ts.platform().n_partitions;
  j["partition_kb"] = ts.platform().partition_kb;
  j["tasks"] = Json::array();
  for (const Task& t : ts.tasks()) {
    Json tj;
    tj["id"] = t.id();
    tj["period"] = t.period();
    tj["eps"] = t.profile().ticks();
    j["tasks"].push_back(std::move(tj));
  }
  return j.dump(2) + "\n";
}

TaskSet task_set_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  PlatformConfig pf;
  pf.n_cores = j.at("n_cores").get<int>();
  pf.n_partitions = j.at("n_partitions").get<int>();
  pf.partition_kb = j.value("partition_kb", 64);
  pf.validate();
  std::vector<Task> tasks;
  for (const Json& tj : j.at("tasks")) {
    tasks.emplace_back(tj.at("id").get<int>(), tj.at("period").get<TimeTick>(),
                       ExecProfile(tj.at("eps").get<std::vector<TimeTick>>()));
  }
  return TaskSet(std::move(tasks), pf, j.value("tick_ns", kDefaultTickNs));
}

void save_task_set(const TaskSet& ts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << task_set_to_json(ts);
  if (!out) throw std::runtime_error("write failed: " + path);
}

TaskSet load_task_set(const std::string& path) {
  return task_set_from_json(read_file(path));
}

std::string solution_to_json(const std::optional<Solution>& sol) {
  Json j;
  j["schedulable"] = sol.has_value();
  if (sol) {
    j["task_alloc"] = sol->task_alloc;
    j["cache_part"] = sol->cache_part;
    j["total_cache_used"] = sol->total_cache_used;
  }
  return j.dump(2) + "\n";
}

ScenarioConfig scenario_from_json(const std::string& text) {
  const Json j = Json::parse(text);
  ScenarioConfig cfg;
  cfg.platform = platform_from_json(j.at("platform"));

  const std::string periods = j.at("period_set").get<std::string>();
  if (periods == "WD") {
    cfg.period_set = PeriodSet::kWide;
  } else if (periods == "SH") {
    cfg.period_set = PeriodSet::kShort;
  } else {
    throw std::invalid_argument("period_set: expected WD or SH, got " + periods);
  }

  const std::string profiles = j.at("profile_set").get<std::string>();
  if (profiles == "SD-B") {
    cfg.profile_set = ProfileSet::kBenchmark;
  } else if (profiles == "SD-S1") {
    cfg.profile_set = ProfileSet::kSynthLow;
  } else if (profiles == "SD-S2") {
    cfg.profile_set = ProfileSet::kSynthSpread;
  } else {
    throw std::invalid_argument("profile_set: expected SD-B, SD-S1 or SD-S2, got " +
                                profiles);
  }

  const Json& grid = j.at("u_tar_grid");
  if (grid.is_array()) {
    cfg.u_tar_grid = grid.get<std::vector<double>>();
  } else {
    const double from = grid.at("from").get<double>();
    const double to = grid.at("to").get<double>();
    const double step = grid.at("step").get<double>();
    if (step <= 0.0) throw std::invalid_argument("u_tar_grid: step must be > 0");
    // Count-based expansion avoids accumulating float error across the grid.
    const int points = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    for (int i = 0; i < points; ++i)
      cfg.u_tar_grid.push_back(from + step * static_cast<double>(i));
  }

  cfg.sets_per_point = j.value("sets_per_point", cfg.sets_per_point);
  cfg.rng_seed = j.value("rng_seed", cfg.rng_seed);
  if (j.contains("policy")) cfg.policy = parse_policy(j.at("policy").get<std::string>());
  cfg.n_tasks = j.value("n_tasks", cfg.n_tasks);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  return scenario_from_json(read_file(path));
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  Json j;
  j["platform"] = platform_to_json(cfg.platform);
  j["period_set"] = period_set_name(cfg.period_set);
  j["profile_set"] = profile_set_name(cfg.profile_set);
  j["u_tar_grid"] = cfg.u_tar_grid;
  j["sets_per_point"] = cfg.sets_per_point;
  j["rng_seed"] = cfg.rng_seed;
  j["policy"] = policy_name(cfg.policy);
  j["n_tasks"] = cfg.n_tasks;
  return j.dump(2) + "\n";
}

Policy parse_policy(const std::string& name) {
  if (name == "npfp") return Policy::kNpFp;
  if (name == "npedf") return Policy::kNpEdf;
  if (name == "pedf") return Policy::kPEdf;
  throw std::invalid_argument("policy: expected npfp, npedf or pedf, got " + name);
}

}  // namespace csp
