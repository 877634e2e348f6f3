#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swarminfer/heuristic.hpp"
#include "swarminfer/solver.hpp"

namespace swarminfer {

// Everything a generated scenario depends on besides the swept parameters.
struct ScenarioConfig {
  NodeBudgets budgets;
  double area_size = 1000.0;
  RateModel rate_model;  // Distance defaults
  WidthProfile width;
  Bytes input_bytes = kDefaultInputBytes;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Requests per source; every count lies in [0, total].
struct RequestLoad {
  std::vector<int> per_source;

  int total() const;
};

// Swarm via build_swarm, one model per request from the template, request
// origins drawn uniformly over sources with the seed. Deterministic in
// (inputs, seed).
Scenario generate_scenario(int n_uavs, int n_requests, ModelTemplate tmpl, int depth,
                           std::uint64_t seed, const ScenarioConfig& config = {});

// Same request/model generation around an existing swarm (e.g. one loaded
// from a file); origins are drawn from the seed exactly as above.
Scenario scenario_for_swarm(Swarm swarm, int n_requests, ModelTemplate tmpl, int depth,
                            std::uint64_t seed, const ScenarioConfig& config = {});

RequestLoad request_load(const Scenario& scenario);

enum class SweepKind { Requests, Layers, Uavs, AlphaBeta, RejectionThreshold, SharedData };

const char* to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& s);

struct SweepSpec {
  SweepKind kind = SweepKind::Requests;
  std::vector<double> values;         // swept values; alpha for AlphaBeta (beta = 1 - alpha)
  std::vector<std::uint64_t> seeds;   // every reported point is one row per seed
  std::vector<std::string> solvers;   // "heuristic" / "exact"; empty = default by kind

  // Fixed parameters (the swept one is ignored).
  int n_uavs = 5;
  int n_requests = 5;
  int depth = 5;
  ModelTemplate tmpl = ModelTemplate::Sequential;
  HeuristicParams params{};
  double time_limit_seconds = 60.0;
  int depth_cap = 512;
  ScenarioConfig config{};
  std::string out_path;  // optional CSV destination
};

struct SweepRow {
  std::string kind;
  double swept = 0.0;
  std::uint64_t seed = 0;
  std::string solver;
  std::string tmpl;
  std::string status;  // "ok", "infeasible", "timeout", or an error note
  double total = 0.0;
  double source = 0.0;
  double processing = 0.0;
  double transmission = 0.0;
  int rejections = 0;
  Bytes shared = 0;
  int threshold = -1;  // RejectionThreshold rows only
};

struct SweepTable {
  std::vector<SweepRow> rows;

  std::string to_csv() const;  // stable order and formatting; regenerates bit-identically
};

SweepTable run_sweep(const SweepSpec& spec);

// Mean of `total` (or `threshold` for RejectionThreshold, `shared` for
// SharedData) per swept value over seeds, filtered by solver/template;
// sorted by swept value.
std::vector<std::pair<double, double>> mean_by_swept(const SweepTable& table,
                                                     const std::string& solver = "",
                                                     const std::string& tmpl = "");

struct ThresholdResult {
  int threshold = 0;  // largest depth with zero rejections
  bool capped = false;  // scan hit depth_cap with no rejection
};

// Linear scan from the smallest valid template depth; rejection is monotone
// in depth under cumulative budgets, so the first rejecting depth ends it.
ThresholdResult find_rejection_threshold(int n_requests, int n_uavs, ModelTemplate tmpl,
                                         std::uint64_t seed, const ScenarioConfig& config = {},
                                         int depth_cap = 512, const HeuristicParams& params = {});

// Reconstruction of the minimum-swarm-size question: smallest n_uavs at the
// fixed depth for which the stream sees zero rejections, or nullopt below
// the cap. Dual of find_rejection_threshold.
std::optional<int> find_min_uavs(int n_requests, int depth, ModelTemplate tmpl,
                                 std::uint64_t seed, const ScenarioConfig& config = {},
                                 int uav_cap = 256, const HeuristicParams& params = {});

struct SharedDataRow {
  int depth = 0;
  int requests = 0;
  std::uint64_t seed = 0;
  Bytes shared_sequential = 0;
  Bytes shared_residual = 0;
  bool shortcut_crossed = false;  // residual run shipped at least one shortcut payload
};

// Pairs scenarios identical except for residual_edges (same swarm, origins,
// and layer profiles) and runs the heuristic on each. Depths below 3 admit
// no shortcut, so the residual side degenerates to the sequential model.
std::vector<SharedDataRow> compare_shared_data(int depth_lo, int depth_hi, int requests_lo,
                                               int requests_hi, std::span<const std::uint64_t> seeds,
                                               int n_uavs, const ScenarioConfig& config = {},
                                               const HeuristicParams& params = {});

std::string shared_data_csv(std::span<const SharedDataRow> rows);

}  // namespace swarminfer
