#pragma once

#include <span>
#include <string>
#include <vector>

#include "swarminfer/latency.hpp"

namespace swarminfer {

// Weights of the nrm score; alpha prices incremental latency, beta prices
// scarcity of the candidate's remaining compute. Must satisfy alpha, beta >= 0
// and alpha + beta = 1.
struct HeuristicParams {
  double alpha = 0.7;
  double beta = 0.3;
};

void validate_params(const HeuristicParams& params);  // throws on violation

// Live allocation state of the online run: cumulative reservations over all
// accepted requests, plus accept/reject logs. Single logical writer.
struct SwarmState {
  ResourceUsage usage;
  std::vector<Assignment> accepted;
  struct Rejection {
    int request_index = 0;
    int layer = 0;
    std::string reason;
  };
  std::vector<Rejection> rejected;

  explicit SwarmState(const Scenario& scenario) : usage(scenario.swarm.n_nodes()) {}

  std::uint64_t usage_hash() const { return usage.state_hash(); }
};

// condi1: node i can take layer j of the request within both budgets
// (closed inequalities).
bool condi1(const SwarmState& state, const Scenario& scenario, int node,
            const CnnModel& model, int layer_j);

// nrm scores for a candidate set that already passed condi1, one per
// candidate, aligned with `candidates`. Raw terms
//   t(j, i)  = incoming transfer into i (max over parallel paths, zero when
//              co-located; the source feeds layer 1) + c_j / e_i
//   b(i)     = 1 / remaining compute of i
// are min-max normalized to [0, 1] across the candidate set (a lone value
// maps to 0), then combined as alpha * t_hat + beta * b_hat. Lower is
// better. Throws on an empty candidate set.
std::vector<double> nrm_scores(const SwarmState& state, const Scenario& scenario,
                               const InferenceRequest& request, int layer_j,
                               const Placement& partial, std::span<const int> candidates,
                               const HeuristicParams& params);

struct AssignOutcome {
  int request_index = 0;
  bool accepted = false;
  Placement placement;                // complete when accepted
  double latency_contribution = 0.0;  // source + processing + transmission of this request
  int rejected_at_layer = 0;
  std::string rejection_reason;
};

// One DistInference step: greedily place layers 1..M in order, filtering by
// condi1 and picking the nrm argmin (ties to the lowest node id). An empty
// candidate set rejects the whole request and rolls every reservation of
// this request back, leaving usage bit-identical.
AssignOutcome dist_inference(SwarmState& state, const Scenario& scenario,
                             int request_index, const HeuristicParams& params = {});

struct StreamResult {
  std::vector<AssignOutcome> outcomes;  // in processed order
  std::vector<Assignment> accepted;
  LatencyBreakdown aggregate;           // objective over all accepted placements
  int rejections = 0;
  std::uint64_t final_usage_hash = 0;
};

// Folds dist_inference over the requests in arrival order (default: scenario
// order). Deterministic in (scenario, params, arrival_order).
StreamResult run_stream(const Scenario& scenario, const HeuristicParams& params = {},
                        std::span<const int> arrival_order = {});

// Per-request outcome log:
// request_id,accepted,latency_contribution_s,nodes_used,rejection_reason
std::string outcome_log_csv(const Scenario& scenario, const StreamResult& result);

}  // namespace swarminfer
