// Command-line front end: scenario generation, exact and heuristic solving,
// sweep harness, and file validation. JSON in, CSV/JSON/SVG out.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "swarminfer/json_io.hpp"
#include "swarminfer/svg.hpp"

namespace si = swarminfer;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailedRun = 2;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SWARM_INFER_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("SWARM_INFER_SEED is not an unsigned integer");
    }
  }
  return 1;
}

struct GeneratorArgs {
  int n_uavs = 5;
  int n_requests = 5;
  int depth = 5;
  std::string tmpl = "sequential";
  si::ScenarioConfig config;

  void add_scenario_shape(CLI::App& cmd) {
    cmd.add_option("--uavs", n_uavs, "Swarm size for a generated scenario");
    cmd.add_option("--requests", n_requests, "Request count for a generated scenario");
    cmd.add_option("--depth", depth, "CNN depth for a generated scenario");
    cmd.add_option("--template", tmpl, "Model template: sequential|residual");
  }

  void add_config(CLI::App& cmd) {
    cmd.add_option("--area", config.area_size, "Deployment area side, meters");
    cmd.add_option("--mem-budget", config.budgets.mem_budget, "Per-node memory budget, bytes");
    cmd.add_option("--compute-budget", config.budgets.compute_budget,
                   "Per-node compute budget, multiplications");
    cmd.add_option("--mult-per-sec", config.budgets.mult_per_sec,
                   "Node compute rate, multiplications per second");
    cmd.add_option("--input-bytes", config.input_bytes, "Source image size, bytes");
  }

  si::Scenario build(std::uint64_t seed) const {
    return si::generate_scenario(n_uavs, n_requests, si::model_template_from_string(tmpl), depth,
                                 seed, config);
  }
};

si::Scenario load_or_generate(const std::string& scenario_path, const std::string& swarm_path,
                              const GeneratorArgs& gen, std::uint64_t seed,
                              const std::string& save_path) {
  si::Scenario scenario;
  if (!scenario_path.empty()) {
    scenario = si::load_scenario_file(scenario_path);
  } else if (!swarm_path.empty()) {
    scenario = si::scenario_for_swarm(si::load_swarm_file(swarm_path), gen.n_requests,
                                      si::model_template_from_string(gen.tmpl), gen.depth, seed,
                                      gen.config);
  } else {
    scenario = gen.build(seed);
  }
  if (!save_path.empty()) si::save_json_file(save_path, si::scenario_to_json(scenario));
  return scenario;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    si::save_text_file(out_path, text);
    std::cout << "wrote " << out_path << '\n';
  }
}

int run_solve(const std::string& scenario_path, const std::string& swarm_path,
              const GeneratorArgs& gen, std::uint64_t seed, double time_limit,
              const std::string& out_path, const std::string& save_path) {
  const si::Scenario scenario = load_or_generate(scenario_path, swarm_path, gen, seed, save_path);
  const si::SolveResult result = si::solve_exact(scenario, si::SolveOptions{time_limit});
  emit(out_path, si::solve_result_to_json(result, scenario).dump(2) + "\n");
  std::cout << "status: " << si::to_string(result.status);
  if (result.has_solution()) std::cout << "  total_s: " << result.breakdown.total;
  std::cout << "  nodes_explored: " << result.nodes_explored << '\n';
  return result.has_solution() ? kExitOk : kExitFailedRun;
}

int run_heuristic(const std::string& scenario_path, const std::string& swarm_path,
                  const GeneratorArgs& gen, std::uint64_t seed, const si::HeuristicParams& params,
                  const std::string& out_path, const std::string& format,
                  const std::string& save_path) {
  const si::Scenario scenario = load_or_generate(scenario_path, swarm_path, gen, seed, save_path);
  const si::StreamResult result = si::run_stream(scenario, params);
  if (format == "json") {
    emit(out_path, si::stream_result_to_json(result, scenario).dump(2) + "\n");
  } else {
    emit(out_path, si::outcome_log_csv(scenario, result));
  }
  std::cout << "accepted: " << (scenario.n_requests() - result.rejections) << '/'
            << scenario.n_requests() << "  total_s: " << result.aggregate.total << '\n';
  const bool nothing_ran = !scenario.requests.empty() && result.accepted.empty();
  return nothing_ran ? kExitFailedRun : kExitOk;
}

int run_sweep_cmd(const std::string& spec_path, const std::string& out_path, bool plot,
                  const std::optional<std::uint64_t>& seed_flag) {
  si::SweepSpec spec = si::load_sweep_spec_file(spec_path);
  if (seed_flag) spec.seeds = {*seed_flag};
  const si::SweepTable table = si::run_sweep(spec);
  const std::string csv_path = !out_path.empty() ? out_path : spec.out_path;
  emit(csv_path, table.to_csv());
  if (plot) {
    if (csv_path.empty()) {
      std::cerr << "--plot needs an output path (--out or \"out\" in the spec)\n";
      return kExitUsage;
    }
    std::filesystem::path svg_path(csv_path);
    svg_path.replace_extension(".svg");
    si::save_text_file(svg_path.string(),
                       si::sweep_plot_svg(table, std::string(si::to_string(spec.kind)) + " sweep"));
    std::cout << "wrote " << svg_path.string() << '\n';
  }
  return kExitOk;
}

int run_threshold(int n_requests, int n_uavs, const std::string& tmpl, std::uint64_t seed,
                  int depth_cap, const GeneratorArgs& gen, const std::string& out_path,
                  const std::string& format) {
  const si::ThresholdResult result = si::find_rejection_threshold(
      n_requests, n_uavs, si::model_template_from_string(tmpl), seed, gen.config, depth_cap);
  if (result.capped) {
    std::cout << "no threshold below cap (" << depth_cap << ")\n";
  } else {
    std::cout << "threshold: " << result.threshold << '\n';
  }
  if (format == "json" || !out_path.empty()) {
    const si::json j{{"threshold", result.threshold}, {"capped", result.capped}};
    emit(out_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const int v = std::stoi(text);
    return {v, v};
  }
  return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
}

int run_shared_data(const std::string& depths, const std::string& requests, int n_seeds,
                    std::uint64_t seed, int n_uavs, const GeneratorArgs& gen,
                    const std::string& out_path) {
  const auto [d_lo, d_hi] = parse_range(depths);
  const auto [r_lo, r_hi] = parse_range(requests);
  std::vector<std::uint64_t> seeds;
  seeds.reserve(static_cast<size_t>(n_seeds));
  for (int i = 0; i < n_seeds; ++i) seeds.push_back(seed + static_cast<std::uint64_t>(i));
  const auto rows = si::compare_shared_data(d_lo, d_hi, r_lo, r_hi, seeds, n_uavs, gen.config);
  emit(out_path, si::shared_data_csv(rows));
  return kExitOk;
}

int run_validate(const std::string& model_path, const std::string& scenario_path,
                 const std::string& swarm_path, const std::string& format) {
  std::vector<std::string> problems;
  if (!model_path.empty()) {
    for (const si::ModelViolation& v : si::validate_model(si::load_model_file(model_path))) {
      problems.push_back(v.message + (v.layer >= 0 ? " (layer " + std::to_string(v.layer) + ")" : ""));
    }
  } else if (!scenario_path.empty()) {
    problems = si::validate_scenario(si::scenario_from_json(si::load_json_file(scenario_path)));
  } else if (!swarm_path.empty()) {
    (void)si::load_swarm_file(swarm_path);  // loader enforces the swarm invariants
  } else {
    std::cerr << "validate needs --model, --scenario, or --swarm\n";
    return kExitUsage;
  }
  if (format == "json") {
    si::json out = si::json::array();
    for (const std::string& p : problems) out.push_back(p);
    std::cout << out.dump(2) << '\n';
  } else if (problems.empty()) {
    std::cout << "ok\n";
  } else {
    for (const std::string& p : problems) std::cout << "violation: " << p << '\n';
  }
  return problems.empty() ? kExitOk : kExitFailedRun;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swarminfer: CNN layer placement over a UAV swarm"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed,-s", seed_flag, "Seed (falls back to SWARM_INFER_SEED, then 1)");

  std::string scenario_path, swarm_path, out_path, save_scenario, format = "csv";
  double time_limit = 60.0;
  si::HeuristicParams params;

  GeneratorArgs solve_gen;
  CLI::App* solve = app.add_subcommand("solve", "Latency-optimal joint placement (branch and bound)");
  solve->add_option("--scenario", scenario_path, "Scenario JSON (omit to generate one)");
  solve->add_option("--swarm", swarm_path, "Swarm JSON; requests/models are generated around it");
  solve->add_option("--time-limit", time_limit, "Solver time limit, seconds");
  solve->add_option("--out", out_path, "Result JSON path (default: stdout)");
  solve->add_option("--save-scenario", save_scenario, "Dump the scenario actually solved");
  solve_gen.add_scenario_shape(*solve);
  solve_gen.add_config(*solve);

  GeneratorArgs heur_gen;
  CLI::App* heur = app.add_subcommand("heuristic", "Online greedy placement of the request stream");
  heur->add_option("--scenario", scenario_path, "Scenario JSON (omit to generate one)");
  heur->add_option("--swarm", swarm_path, "Swarm JSON; requests/models are generated around it");
  heur->add_option("--alpha", params.alpha, "Weight on the latency term");
  heur->add_option("--beta", params.beta, "Weight on the residual-compute term");
  heur->add_option("--out", out_path, "Outcome log path (default: stdout)");
  heur->add_option("--format", format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  heur->add_option("--save-scenario", save_scenario, "Dump the scenario actually used");
  heur_gen.add_scenario_shape(*heur);
  heur_gen.add_config(*heur);

  std::string spec_path;
  bool plot = false;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a sweep spec and emit CSV (and SVG with --plot)");
  sweep->add_option("--spec", spec_path, "Sweep spec JSON")->required();
  sweep->add_option("--out", out_path, "CSV path (overrides the spec's \"out\")");
  sweep->add_flag("--plot", plot, "Also render an SVG line chart next to the CSV");

  int th_requests = 10, th_uavs = 10, th_cap = 512;
  std::string th_tmpl = "sequential";
  GeneratorArgs th_gen;
  CLI::App* threshold =
      app.add_subcommand("threshold", "Largest CNN depth with zero rejections for a swarm size");
  threshold->add_option("--requests", th_requests, "Request count");
  threshold->add_option("--uavs", th_uavs, "Swarm size");
  threshold->add_option("--template", th_tmpl, "Model template: sequential|residual");
  threshold->add_option("--depth-cap", th_cap, "Stop scanning at this depth");
  threshold->add_option("--out", out_path, "Result JSON path");
  threshold->add_option("--format", format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  th_gen.add_config(*threshold);

  std::string sd_depths = "3:20", sd_requests = "1:20";
  int sd_seeds = 30, sd_uavs = 10;
  GeneratorArgs sd_gen;
  CLI::App* shared =
      app.add_subcommand("shared-data", "Paired sequential/residual shared-data comparison");
  shared->add_option("--depths", sd_depths, "Depth range lo:hi");
  shared->add_option("--requests", sd_requests, "Request range lo:hi");
  shared->add_option("--seeds", sd_seeds, "Seeds per point (seed, seed+1, ...)");
  shared->add_option("--uavs", sd_uavs, "Swarm size");
  shared->add_option("--out", out_path, "CSV path (default: stdout)");
  sd_gen.add_config(*shared);

  std::string v_model, v_scenario, v_swarm;
  CLI::App* validate = app.add_subcommand("validate", "Check a model/scenario/swarm file");
  validate->add_option("--model", v_model, "Model JSON");
  validate->add_option("--scenario", v_scenario, "Scenario JSON");
  validate->add_option("--swarm", v_swarm, "Swarm JSON");
  validate->add_option("--format", format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const std::uint64_t seed = resolve_seed(seed_flag);
    std::cout << "seed: " << seed << '\n';
    if (solve->parsed()) {
      return run_solve(scenario_path, swarm_path, solve_gen, seed, time_limit, out_path, save_scenario);
    }
    if (heur->parsed()) {
      return run_heuristic(scenario_path, swarm_path, heur_gen, seed, params, out_path, format, save_scenario);
    }
    if (sweep->parsed()) {
      return run_sweep_cmd(spec_path, out_path, plot, seed_flag);
    }
    if (threshold->parsed()) {
      return run_threshold(th_requests, th_uavs, th_tmpl, seed, th_cap, th_gen, out_path, format);
    }
    if (shared->parsed()) {
      return run_shared_data(sd_depths, sd_requests, sd_seeds, seed, sd_uavs, sd_gen, out_path);
    }
    if (validate->parsed()) {
      return run_validate(v_model, v_scenario, v_swarm, format);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailedRun;
  }
  return kExitUsage;
}
