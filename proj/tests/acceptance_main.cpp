// Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
// criterion fails. Criterion 8 drives the CLI binary; its path comes from
// SWARMINFER_CLI_PATH (baked in by the build) or the SWARMINFER_CLI env var.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "support/micro.hpp"
#include "swarminfer/heuristic.hpp"
#include "swarminfer/json_io.hpp"
#include "swarminfer/solver.hpp"
#include "swarminfer/stats.hpp"

using namespace swarminfer;

namespace {

constexpr std::uint64_t kMicroSeed = 20240101;

struct Reporter {
  int failures = 0;
  int checks = 0;
  std::vector<std::string> notes;
  std::string summary;

  void expect(bool ok, const std::string& message) {
    ++checks;
    if (!ok) {
      ++failures;
      if (notes.size() < 6) notes.push_back(message);
    }
  }
};

std::vector<Scenario> micro_scenarios(int count) {
  Rng rng(kMicroSeed);
  std::vector<Scenario> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(testsupport::make_micro_scenario(rng));
  return out;
}

// --- Criterion 1: oracle equivalence on 200 micro scenarios. ---
void criterion_oracle_equivalence(Reporter& r) {
  const auto scenarios = micro_scenarios(200);
  double max_delta = 0.0;
  int solved = 0;
  int infeasible = 0;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& scenario = scenarios[i];
    const SolveResult exact = solve_exact(scenario);
    const SolveResult oracle = solve_bruteforce(scenario);
    r.expect(exact.status == oracle.status,
             "scenario " + std::to_string(i) + ": status " + to_string(exact.status) + " vs oracle " +
                 to_string(oracle.status));
    if (exact.has_solution() && oracle.has_solution()) {
      ++solved;
      const double delta = std::abs(exact.breakdown.total - oracle.breakdown.total);
      max_delta = std::max(max_delta, delta);
      r.expect(delta <= 1e-9, "scenario " + std::to_string(i) + ": totals differ by " +
                                  std::to_string(delta));
      r.expect(check_feasibility(scenario, exact.assignments).empty(),
               "scenario " + std::to_string(i) + ": exact placement infeasible");
      r.expect(check_feasibility(scenario, oracle.assignments).empty(),
               "scenario " + std::to_string(i) + ": oracle placement infeasible");
    } else {
      ++infeasible;
    }
  }
  std::ostringstream s;
  s << solved << " solved / " << infeasible << " infeasible, max |delta| = " << max_delta << " s";
  r.summary = s.str();
}

// --- Criterion 2: heuristic never beats the proven optimum. ---
void criterion_heuristic_dominance(Reporter& r) {
  const auto scenarios = micro_scenarios(200);
  int compared = 0;
  double worst_margin = 0.0;
  for (size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& scenario = scenarios[i];
    const StreamResult stream = run_stream(scenario);
    if (stream.rejections != 0) continue;
    const SolveResult exact = solve_exact(scenario);
    r.expect(exact.has_solution(),
             "scenario " + std::to_string(i) + ": heuristic placed all requests but exact reports " +
                 to_string(exact.status));
    if (!exact.has_solution()) continue;
    ++compared;
    const double margin = stream.aggregate.total - exact.breakdown.total;
    worst_margin = std::min(worst_margin, margin);
    r.expect(margin >= -1e-9, "scenario " + std::to_string(i) + ": heuristic total " +
                                  std::to_string(stream.aggregate.total) + " < optimal " +
                                  std::to_string(exact.breakdown.total));
  }
  r.expect(compared >= 50, "too few fully-accepted instances to compare: " + std::to_string(compared));
  std::ostringstream s;
  s << compared << " instances compared, worst heuristic-minus-optimal margin = " << worst_margin
    << " s";
  r.summary = s.str();
}

// --- Criterion 3: exact decomposition and rate scaling on 1000 placements. ---
void criterion_decomposition_scaling(Reporter& r) {
  Rng rng(kMicroSeed + 1);
  int placements_checked = 0;
  while (placements_checked < 1000) {
    const Scenario scenario = testsupport::make_micro_scenario(rng);
    Scenario scaled = scenario;
    for (double& rate : scaled.swarm.links.node_rates) rate *= 10.0;
    for (double& rate : scaled.swarm.links.source_rates) rate *= 10.0;
    for (int k = 0; k < 5 && placements_checked < 1000; ++k, ++placements_checked) {
      std::vector<Assignment> placed;
      for (int req = 0; req < scenario.n_requests(); ++req) {
        Placement p = Placement::unassigned(scenario.model_of(req).depth());
        for (int j = 1; j <= p.depth(); ++j) {
          p.assign(j, rng.uniform_int(0, scenario.swarm.n_nodes() - 1));
        }
        placed.push_back({req, std::move(p)});
      }
      const LatencyBreakdown b = total_latency(scenario, placed);
      r.expect(b.total == b.source_time + b.processing_total() + b.transmission_time,
               "decomposition not exact at placement " + std::to_string(placements_checked));
      const LatencyBreakdown sb = total_latency(scaled, placed);
      const double moved = b.source_time + b.transmission_time;
      const double moved_scaled = sb.source_time + sb.transmission_time;
      if (moved > 0.0) {
        r.expect(std::abs(moved_scaled - moved / 10.0) <= 1e-9 * std::abs(moved / 10.0),
                 "rate scaling off at placement " + std::to_string(placements_checked));
      }
      r.expect(sb.processing_total() == b.processing_total(),
               "processing changed under rate scaling at placement " +
                   std::to_string(placements_checked));
    }
  }
  r.summary = "1000 placements: total == t_s + sum t_p + t_tx exactly; rho x10 scales "
              "(t_s + t_tx) by 1/10";
}

// --- Criterion 4: trend reproduction via Spearman rank correlation. ---
ScenarioConfig trend_config() {
  ScenarioConfig config;
  config.width.base_channels = 40;
  config.width.spatial = 28;
  return config;
}

std::vector<std::uint64_t> seed_range(int count, std::uint64_t base) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
  return seeds;
}

double sweep_spearman(const SweepSpec& spec, Reporter& r, const char* label) {
  const SweepTable table = run_sweep(spec);
  int rejections = 0;
  for (const SweepRow& row : table.rows) {
    r.expect(row.status == "ok", std::string(label) + ": row status " + row.status);
    rejections += row.rejections;
  }
  const auto means = mean_by_swept(table, "heuristic");
  r.expect(means.size() == spec.values.size(), std::string(label) + ": incomplete mean table");
  std::vector<double> xs, ys;
  for (const auto& [x, y] : means) {
    xs.push_back(x);
    ys.push_back(y);
  }
  const double rho = spearman(xs, ys);
  if (rejections > 0) {
    r.notes.push_back(std::string(label) + ": " + std::to_string(rejections) +
                      " rejections across rows (informational)");
  }
  return rho;
}

void criterion_trends(Reporter& r) {
  const auto seeds = seed_range(30, 100);
  std::ostringstream s;

  {
    SweepSpec spec;  // Latency rises with the request count.
    spec.kind = SweepKind::Requests;
    spec.values = {10, 20, 30, 40, 50, 60, 70};
    spec.seeds = seeds;
    spec.n_uavs = 30;
    spec.depth = 10;
    spec.config = trend_config();
    const double rho = sweep_spearman(spec, r, "requests trend");
    r.expect(rho >= 0.9, "requests trend: spearman " + std::to_string(rho) + " < 0.9");
    s << "requests rho=" << rho;
  }
  {
    SweepSpec spec;  // Latency rises with CNN depth.
    spec.kind = SweepKind::Layers;
    spec.values = {4, 6, 8, 10, 12, 14};
    spec.seeds = seeds;
    spec.n_uavs = 30;
    spec.n_requests = 70;
    spec.config = trend_config();
    const double rho = sweep_spearman(spec, r, "layers trend");
    r.expect(rho >= 0.9, "layers trend: spearman " + std::to_string(rho) + " < 0.9");
    s << ", layers rho=" << rho;
  }
  {
    SweepSpec spec;  // Latency falls as the swarm grows (denser, closer nodes).
    spec.kind = SweepKind::Uavs;
    spec.values = {4, 8, 12, 16, 20, 24, 28};
    spec.seeds = seeds;
    spec.n_requests = 10;
    spec.depth = 10;
    // Image-heavy workload: the dominant transfer is source -> first node,
    // which shortens as the swarm densifies.
    spec.config = trend_config();
    spec.config.width.spatial = 14;
    spec.config.input_bytes = 600'000;
    const double rho = sweep_spearman(spec, r, "uavs trend");
    r.expect(rho <= -0.9, "uavs trend: spearman " + std::to_string(rho) + " > -0.9");
    s << ", uavs rho=" << rho;
  }
  {
    SweepSpec spec;  // The zero-rejection depth rises with the swarm size.
    spec.kind = SweepKind::RejectionThreshold;
    spec.values = {2, 4, 6, 8, 10, 12};
    spec.seeds = seeds;
    spec.n_requests = 10;
    spec.config = trend_config();
    spec.config.width.base_channels = 48;
    const SweepTable table = run_sweep(spec);
    std::vector<double> xs, ys;
    for (const auto& [x, y] : mean_by_swept(table, "heuristic")) {
      xs.push_back(x);
      ys.push_back(y);
    }
    r.expect(xs.size() == spec.values.size(), "threshold trend: incomplete mean table");
    const double rho = spearman(xs, ys);
    r.expect(rho >= 0.9, "threshold trend: spearman " + std::to_string(rho) + " < 0.9");
    s << ", threshold rho=" << rho;
  }
  r.summary = s.str();
}

// --- Criterion 5: shared-data ordering on paired sweeps. ---
// Every reported point is a mean over the seed list (as everywhere in the
// trend suite): for each (depth, requests) cell the seed-mean of the
// residual run's shared bytes must not fall below the sequential run's, and
// must exceed it strictly wherever any shortcut crossed nodes.
void criterion_shared_data(Reporter& r) {
  ScenarioConfig config;  // template defaults; 10-node swarm
  const auto seeds = seed_range(30, 500);
  const auto rows = compare_shared_data(3, 20, 1, 20, seeds, 10, config);

  struct Cell {
    double sequential = 0.0;
    double residual = 0.0;
    int n = 0;
    bool crossed = false;
  };
  std::map<std::pair<int, int>, Cell> cells;
  for (const SharedDataRow& row : rows) {
    Cell& cell = cells[{row.depth, row.requests}];
    cell.sequential += static_cast<double>(row.shared_sequential);
    cell.residual += static_cast<double>(row.shared_residual);
    cell.n += 1;
    cell.crossed = cell.crossed || row.shortcut_crossed;
  }

  int violations = 0;
  int strict_points = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& [key, cell] : cells) {
    const double mean_seq = cell.sequential / cell.n;
    const double mean_res = cell.residual / cell.n;
    const std::string where =
        "depth " + std::to_string(key.first) + ", requests " + std::to_string(key.second);
    if (mean_res < mean_seq) ++violations;
    r.expect(mean_res >= mean_seq, "mean residual < mean sequential at " + where);
    if (cell.crossed) {
      ++strict_points;
      r.expect(mean_res > mean_seq, "no strict mean gap despite crossing shortcuts at " + where);
      min_gap = std::min(min_gap, mean_res - mean_seq);
    }
  }
  std::ostringstream s;
  s << cells.size() << " (depth, requests) points x " << seeds.size() << " seeds, "
    << strict_points << " points with crossing shortcuts, " << violations
    << " ordering violations, smallest strict mean gap = " << min_gap << " bytes";
  r.summary = s.str();
}

// --- Criterion 6: alpha/beta sweep produces a complete mean-latency table. ---
void criterion_alphabeta(Reporter& r) {
  SweepSpec spec;
  spec.kind = SweepKind::AlphaBeta;
  spec.values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  spec.seeds = seed_range(30, 900);
  spec.n_uavs = 5;
  spec.n_requests = 5;
  spec.depth = 5;
  spec.config = trend_config();
  const SweepTable table = run_sweep(spec);
  for (const SweepRow& row : table.rows) {
    r.expect(row.status == "ok", "alphabeta row failed: " + row.status);
  }
  const auto means = mean_by_swept(table, "heuristic");
  r.expect(means.size() == 9, "mean-latency table incomplete: " + std::to_string(means.size()) +
                                  " of 9 rows");
  double best_alpha = 0.0;
  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto& [alpha, m] : means) {
    r.expect(std::isfinite(m), "non-finite mean latency at alpha " + std::to_string(alpha));
    if (m < best_mean) {
      best_mean = m;
      best_alpha = alpha;
    }
  }
  std::ostringstream s;
  s << "complete 9-row table; best (alpha, beta) here = (" << best_alpha << ", "
    << 1.0 - best_alpha << ") at mean " << best_mean
    << " s (scenario-dependent; reported, not asserted)";
  r.summary = s.str();
}

// --- Criterion 7: rejection threshold construction and exact rollback. ---
void criterion_rejection_semantics(Reporter& r) {
  ScenarioConfig config;
  config.width.base_channels = 8;
  config.width.spatial = 8;
  const CnnModel probe = build_model_from_template(ModelTemplate::Sequential, 4, config.width);
  MultCount three_layers = 0;
  for (int j = 1; j <= 3; ++j) three_layers += probe.layer(j).multiplications;
  config.budgets.compute_budget = three_layers;  // one node fits exactly 3 layers
  config.budgets.mem_budget = 1'000'000'000;

  const ThresholdResult found =
      find_rejection_threshold(1, 1, ModelTemplate::Sequential, 1, config, 64);
  r.expect(!found.capped && found.threshold == 3,
           "expected threshold 3, got " + std::to_string(found.threshold) +
               (found.capped ? " (capped)" : ""));

  // A depth-4 request on the same node reserves three layers and then rolls
  // them back; usage must hash identically before and after.
  const Scenario scenario = generate_scenario(1, 1, ModelTemplate::Sequential, 4, 1, config);
  SwarmState state(scenario);
  const std::uint64_t before = state.usage_hash();
  const AssignOutcome outcome = dist_inference(state, scenario, 0);
  r.expect(!outcome.accepted, "depth-4 request unexpectedly accepted");
  r.expect(outcome.rejected_at_layer == 4,
           "rejected at layer " + std::to_string(outcome.rejected_at_layer) + ", expected 4");
  r.expect(state.usage_hash() == before, "usage hash changed across a rejected request");
  r.summary = "threshold(1 node fitting exactly 3 layers) = 3; rejected request leaves a "
              "bit-identical usage hash";
}

// --- Criterion 8: CLI runs are byte-identical under a fixed seed. ---
std::string cli_path() {
  if (const char* env = std::getenv("SWARMINFER_CLI")) return env;
#ifdef SWARMINFER_CLI_PATH
  return SWARMINFER_CLI_PATH;
#else
  return "";
#endif
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void criterion_cli_determinism(Reporter& r) {
  const std::string cli = cli_path();
  r.expect(!cli.empty() && std::filesystem::exists(cli),
           "CLI binary not found (set SWARMINFER_CLI or build the swarminfer target)");
  if (cli.empty() || !std::filesystem::exists(cli)) return;

  // Each command runs twice in sibling directories with identical relative
  // output names, so stdout and produced files must match byte for byte.
  const auto base = std::filesystem::temp_directory_path() / "swarminfer_acceptance";
  const std::filesystem::path dirs[2] = {base / "a", base / "b"};
  for (const auto& d : dirs) std::filesystem::create_directories(d);
  const auto run_in = [&](const std::filesystem::path& dir, const std::string& args) {
    const std::string command =
        "cd \"" + dir.string() + "\" && \"" + cli + "\" " + args + " > run.log 2>&1";
    return std::system(command.c_str());
  };
  const auto compare = [&](const std::string& args, const std::string& produced,
                           const std::string& what) {
    r.expect(run_in(dirs[0], args) == 0, what + " run 1 failed");
    r.expect(run_in(dirs[1], args) == 0, what + " run 2 failed");
    r.expect(read_file(dirs[0] / produced) == read_file(dirs[1] / produced),
             what + ": " + produced + " differs between identical runs");
    r.expect(read_file(dirs[0] / "run.log") == read_file(dirs[1] / "run.log"),
             what + ": stdout differs between identical runs");
  };

  compare("heuristic --uavs 6 --requests 8 --depth 6 --seed 42 --out out.csv", "out.csv",
          "heuristic");
  r.expect(read_file(dirs[0] / "run.log").find("seed: 42") != std::string::npos,
           "resolved seed not echoed");
  compare("solve --uavs 3 --requests 2 --depth 4 --seed 7 --out out.json", "out.json", "solve");

  {
    SweepSpec spec;
    spec.kind = SweepKind::Requests;
    spec.values = {2, 4};
    spec.seeds = {1, 2};
    spec.n_uavs = 4;
    spec.depth = 4;
    for (const auto& d : dirs) save_json_file((d / "spec.json").string(), sweep_spec_to_json(spec));
    compare("sweep --spec spec.json --out out.csv --plot", "out.csv", "sweep");
    r.expect(read_file(dirs[0] / "out.svg") == read_file(dirs[1] / "out.svg"),
             "sweep SVG differs between identical runs");
  }
  {
    // The env fallback must resolve and echo the same seed.
    const auto log = base / "env.log";
    const std::string command = "SWARM_INFER_SEED=99 \"" + cli +
                                "\" heuristic --uavs 2 --requests 1 --depth 2 > \"" + log.string() +
                                "\" 2>&1";
    r.expect(std::system(command.c_str()) == 0, "env-seed run failed");
    r.expect(read_file(log).find("seed: 99") != std::string::npos,
             "SWARM_INFER_SEED fallback not honored");
  }
  r.summary = "heuristic/solve/sweep reruns byte-identical; seed echoed; env fallback honored";
}

struct Criterion {
  int id;
  std::string name;
  std::function<void(Reporter&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence (exact vs brute force, 200 micro scenarios)", criterion_oracle_equivalence},
      {2, "heuristic dominance (stream total >= proven optimum)", criterion_heuristic_dominance},
      {3, "objective decomposition and rate scaling (1000 placements)", criterion_decomposition_scaling},
      {4, "trend reproduction (requests/layers/uavs/threshold, 30 seeds)", criterion_trends},
      {5, "shared-data ordering (paired residual vs sequential)", criterion_shared_data},
      {6, "alpha/beta sweep table (9-point grid, 5 layers / 5 UAVs)", criterion_alphabeta},
      {7, "rejection semantics (threshold 3; bit-identical rollback)", criterion_rejection_semantics},
      {8, "CLI determinism (byte-identical reruns under one seed)", criterion_cli_determinism},
  };

  int failed_criteria = 0;
  for (const Criterion& criterion : criteria) {
    if (!only.empty() && only != std::to_string(criterion.id)) continue;
    Reporter reporter;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(reporter);
    } catch (const std::exception& e) {
      reporter.expect(false, std::string("unhandled exception: ") + e.what());
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = reporter.failures == 0;
    failed_criteria += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion.id << ". " << criterion.name << " — "
              << (reporter.summary.empty() ? "done" : reporter.summary) << " ["
              << reporter.checks << " checks, " << std::fixed << elapsed << std::defaultfloat
              << " s]\n";
    for (const std::string& note : reporter.notes) std::cout << "       " << note << '\n';
  }
  if (failed_criteria != 0) {
    std::cout << failed_criteria << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
