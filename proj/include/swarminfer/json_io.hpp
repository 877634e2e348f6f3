#pragma once

#include <string>

#include <json.hpp>

#include "swarminfer/experiments.hpp"
#include "swarminfer/heuristic.hpp"
#include "swarminfer/latency.hpp"
#include "swarminfer/solver.hpp"

namespace swarminfer {

using json = nlohmann::ordered_json;

// Model definition interchange format:
// {name, input_bytes, layers:[{memory_bytes, multiplications, output_bytes}],
//  residual_edges:[{target, stride}]}
json model_to_json(const CnnModel& model);
CnnModel model_from_json(const json& j);

// Swarm files carry nodes with budgets/positions plus either materialized
// rate tables or a rate model to derive them from.
json swarm_to_json(const Swarm& swarm);
Swarm swarm_from_json(const json& j);

json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const json& j);

json breakdown_to_json(const LatencyBreakdown& b);
json plan_to_json(const TransmissionPlan& plan);
json feasibility_to_json(std::span<const FeasibilityViolation> violations);
json model_violations_to_json(std::span<const ModelViolation> violations);

// Includes the delta support (per-request node lists) and the derived gamma
// edge list.
json solve_result_to_json(const SolveResult& result, const Scenario& scenario);

json stream_result_to_json(const StreamResult& result, const Scenario& scenario);

json sweep_spec_to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const json& j);

json scenario_config_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_config_from_json(const json& j);

// File helpers; parse errors are reported with the file path and, where
// known, the offending field.
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);
Scenario load_scenario_file(const std::string& path);
CnnModel load_model_file(const std::string& path);
Swarm load_swarm_file(const std::string& path);
SweepSpec load_sweep_spec_file(const std::string& path);
void save_text_file(const std::string& path, const std::string& text);

}  // namespace swarminfer
