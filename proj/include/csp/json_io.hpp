#pragma once

#include <optional>
#include <string>

#include "csp/generator.hpp"
#include "csp/optimizer.hpp"
#include "csp/taskmodel.hpp"

namespace csp {

// JSON with a fixed field order, so serialize(parse(x)) == x byte for byte
// and emitted files diff cleanly between runs.

std::string task_set_to_json(const TaskSet& ts);
TaskSet task_set_from_json(const std::string& text);
void save_task_set(const TaskSet& ts, const std::string& path);
TaskSet load_task_set(const std::string& path);

// {"schedulable": false} or the allocation plus its cache total.
std::string solution_to_json(const std::optional<Solution>& sol);

// Accepts the platform as the name of a reference configuration ("AR-I" with
// 16 partitions, "AR-II" with 32; 4 cores each) or as an explicit object, and
// the grid as an array or as {"from","to","step"}.
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

Policy parse_policy(const std::string& name);

}  // namespace csp
