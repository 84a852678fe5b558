// Command-line front end: scenario generation, single-instance solving,
// batch experiments and the brute-force verification suite.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "csp/harness.hpp"
#include "csp/json_io.hpp"
#include "csp/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;

struct CommonFlags {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> sets_per_point;
  std::optional<std::string> policy;
  std::string out_dir;
  double timeout_s = 300.0;
  int jobs = 1;
};

csp::ScenarioConfig load_config(const CommonFlags& flags) {
  csp::ScenarioConfig cfg = csp::load_scenario(flags.scenario_path);
  if (flags.seed) cfg.rng_seed = *flags.seed;
  if (flags.sets_per_point) cfg.sets_per_point = *flags.sets_per_point;
  if (flags.policy) cfg.policy = csp::parse_policy(*flags.policy);
  cfg.validate();
  return cfg;
}

int cmd_generate(const CommonFlags& flags) {
  const csp::ScenarioConfig cfg = load_config(flags);
  std::filesystem::create_directories(flags.out_dir);
  std::ofstream manifest(flags.out_dir + "/scenario.json");
  manifest << csp::scenario_to_json(cfg);
  int written = 0;
  csp::for_each_task_set(cfg, [&](int u_idx, int rep, csp::TaskSet ts) {
    char name[64];
    std::snprintf(name, sizeof(name), "ts_u%02d_r%03d.json", u_idx, rep);
    csp::save_task_set(ts, flags.out_dir + "/" + name);
    ++written;
  });
  std::printf("generated %d task sets for %s into %s\n", written, cfg.id().c_str(),
              flags.out_dir.c_str());
  return kExitOk;
}

int cmd_solve(const std::string& task_set_path, const std::string& algo,
              const std::string& policy, double timeout_s) {
  const csp::TaskSet ts = csp::load_task_set(task_set_path);
  const std::optional<csp::Solution> sol = csp::solve_one(
      ts, csp::parse_algo(algo), csp::parse_policy(policy), timeout_s);
  std::fputs(csp::solution_to_json(sol).c_str(), stdout);
  return kExitOk;
}

int cmd_experiment(const CommonFlags& flags, const std::vector<std::string>& algos) {
  const csp::ScenarioConfig cfg = load_config(flags);
  csp::ExperimentOptions opt;
  if (!algos.empty()) {
    opt.algorithms.clear();
    for (const std::string& a : algos) opt.algorithms.push_back(csp::parse_algo(a));
  }
  opt.timeout_s = flags.timeout_s;
  opt.jobs = flags.jobs;
  opt.out_dir = flags.out_dir;
  const csp::ExperimentOutput out = csp::run_experiment(cfg, opt);
  std::fputs(csp::summary_to_json(out.summary).c_str(), stdout);
  return kExitOk;
}

int cmd_verify(int instances, std::uint64_t seed, const std::string& policy_name) {
  const csp::Policy policy = csp::parse_policy(policy_name);
  const csp::CoreTestFn test = csp::make_core_test(policy);
  int solution_violations = 0;
  int none_violations = 0;
  int feasible = 0;
  for (int i = 0; i < instances; ++i) {
    const csp::TaskSet ts = csp::random_small_instance(seed + static_cast<std::uint64_t>(i));
    const csp::OracleVerdict truth = csp::exhaustive_search(ts, test);
    if (truth.exists_schedulable) ++feasible;
    for (csp::Algo algo : csp::kAllAlgos) {
      const std::optional<csp::Solution> sol = csp::solve_one(ts, algo, policy);
      if (sol && !csp::solution_passes(ts, *sol, test)) {
        ++solution_violations;
        std::printf("FAIL instance %d: %s returned a solution that fails re-test\n",
                    i, csp::algo_name(algo));
      }
      if (sol && !truth.exists_schedulable) {
        ++none_violations;
        std::printf("FAIL instance %d: %s solved an instance brute force proves "
                    "infeasible\n",
                    i, csp::algo_name(algo));
      }
    }
  }
  std::printf("verify: %d instances (%d feasible), %d re-test violations, "
              "%d impossible-solution violations\n",
              instances, feasible, solution_violations, none_violations);
  return (solution_violations + none_violations) == 0 ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache partitioning and task allocation co-optimizer"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::vector<std::string> algos;
  std::string solve_input;
  std::string solve_algo = "comp";
  std::string solve_policy = "npfp";
  int verify_instances = 200;
  std::uint64_t verify_seed = 7;
  std::string verify_policy = "npfp";

  CLI::App* generate = app.add_subcommand("generate", "Write a scenario's task sets");
  generate->add_option("--scenario", flags.scenario_path, "Scenario JSON file")
      ->required();
  generate->add_option("--out", flags.out_dir, "Output directory")->required();
  generate->add_option("--seed", flags.seed, "Override the scenario seed");
  generate->add_option("--sets-per-point", flags.sets_per_point,
                       "Override sets per grid point");

  CLI::App* solve = app.add_subcommand("solve", "Solve one task set, print JSON");
  solve->add_option("task_set", solve_input, "Task set JSON file")->required();
  solve->add_option("--algo", solve_algo, "comp|case|ia3|pdpa|cam");
  solve->add_option("--policy", solve_policy, "npfp|npedf|pedf");
  solve->add_option("--timeout-s", flags.timeout_s, "Per-run timeout (seconds)");

  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a scenario batch, write CSVs");
  experiment->add_option("--scenario", flags.scenario_path, "Scenario JSON file")
      ->required();
  experiment->add_option("--out", flags.out_dir, "Output directory")->required();
  experiment->add_option("--algo", algos, "Restrict algorithms (repeatable)");
  experiment->add_option("--policy", flags.policy, "Override scenario policy");
  experiment->add_option("--seed", flags.seed, "Override the scenario seed");
  experiment->add_option("--sets-per-point", flags.sets_per_point,
                         "Override sets per grid point");
  experiment->add_option("--timeout-s", flags.timeout_s, "Per-cell timeout (seconds)");
  experiment->add_option("--jobs", flags.jobs, "Worker threads");

  CLI::App* verify =
      app.add_subcommand("verify", "Brute-force check on random small instances");
  verify->add_option("--instances", verify_instances, "Instance count");
  verify->add_option("--seed", verify_seed, "Base seed");
  verify->add_option("--policy", verify_policy, "npfp|npedf|pedf");

  try {
    app.parse(argc, argv);
    if (generate->parsed()) return cmd_generate(flags);
    if (solve->parsed())
      return cmd_solve(solve_input, solve_algo, solve_policy, flags.timeout_s);
    if (experiment->parsed()) return cmd_experiment(flags, algos);
    if (verify->parsed())
      return cmd_verify(verify_instances, verify_seed, verify_policy);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
  return kExitConfigError;
}
