#include "swarminfer/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "format.hpp"

namespace swarminfer {

void validate_params(const HeuristicParams& params) {
  if (params.alpha < 0.0 || params.beta < 0.0 || std::abs(params.alpha + params.beta - 1.0) > 1e-9) {
    throw std::invalid_argument("heuristic params need alpha, beta >= 0 and alpha + beta = 1");
  }
}

bool condi1(const SwarmState& state, const Scenario& scenario, int node,
            const CnnModel& model, int layer_j) {
  const UavNode& uav = scenario.swarm.nodes[static_cast<size_t>(node)];
  const LayerProfile& layer = model.layer(layer_j);
  return state.usage.used_memory[static_cast<size_t>(node)] + layer.memory_bytes <= uav.mem_budget &&
         state.usage.used_compute[static_cast<size_t>(node)] + layer.multiplications <= uav.compute_budget;
}

namespace {

// Incoming transfer + processing for placing this layer on `node`, given the
// layers of the same request already pinned in `partial`.
double placement_time(const Scenario& scenario, const InferenceRequest& request,
                      const CnnModel& model, int layer_j, const Placement& partial, int node) {
  const Swarm& swarm = scenario.swarm;
  double incoming = 0.0;
  if (layer_j == 1) {
    incoming = static_cast<double>(request.source_bytes) / source_rate(swarm, request.source, node);
  } else {
    const int prev = partial.node(layer_j - 1);
    incoming = prev == node ? 0.0
                            : static_cast<double>(model.layer(layer_j - 1).output_bytes) /
                                  link_rate(swarm, prev, node);
    if (const ResidualEdge* edge = model.residual_into(layer_j)) {
      const int src = partial.node(edge->source());
      const double residual = src == node ? 0.0
                                          : static_cast<double>(edge->payload_bytes) /
                                                link_rate(swarm, src, node);
      incoming = std::max(incoming, residual);
    }
  }
  return incoming + static_cast<double>(model.layer(layer_j).multiplications) /
                        swarm.nodes[static_cast<size_t>(node)].mult_per_sec;
}

// Min-max to [0, 1]; a degenerate range maps every value to 0.
void normalize(std::vector<double>& xs) {
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  if (span <= 0.0) {
    std::fill(xs.begin(), xs.end(), 0.0);
    return;
  }
  for (double& x : xs) x = (x - lo) / span;
}

}  // namespace

std::vector<double> nrm_scores(const SwarmState& state, const Scenario& scenario,
                               const InferenceRequest& request, int layer_j,
                               const Placement& partial, std::span<const int> candidates,
                               const HeuristicParams& params) {
  if (candidates.empty()) throw std::invalid_argument("nrm_scores: empty candidate set");
  const CnnModel& model = scenario.model_of(request);
  std::vector<double> latency(candidates.size());
  std::vector<double> scarcity(candidates.size());
  for (size_t c = 0; c < candidates.size(); ++c) {
    const int node = candidates[c];
    latency[c] = placement_time(scenario, request, model, layer_j, partial, node);
    const MultCount remaining =
        scenario.swarm.nodes[static_cast<size_t>(node)].compute_budget -
        state.usage.used_compute[static_cast<size_t>(node)];
    scarcity[c] = 1.0 / static_cast<double>(remaining);  // remaining >= c_j >= 1 after condi1
  }
  normalize(latency);
  normalize(scarcity);
  std::vector<double> scores(candidates.size());
  for (size_t c = 0; c < candidates.size(); ++c) {
    scores[c] = params.alpha * latency[c] + params.beta * scarcity[c];
  }
  return scores;
}

AssignOutcome dist_inference(SwarmState& state, const Scenario& scenario, int request_index,
                             const HeuristicParams& params) {
  validate_params(params);
  const InferenceRequest& request = scenario.requests[static_cast<size_t>(request_index)];
  const CnnModel& model = scenario.model_of(request);
  {
    const auto violations = validate_model(model);
    if (!violations.empty()) {
      throw std::invalid_argument("dist_inference: request model fails validation: " +
                                  violations.front().message);
    }
  }

  AssignOutcome outcome;
  outcome.request_index = request_index;
  Placement placement = Placement::unassigned(model.depth());

  std::vector<int> candidates;
  candidates.reserve(static_cast<size_t>(scenario.swarm.n_nodes()));
  for (int j = 1; j <= model.depth(); ++j) {
    candidates.clear();
    for (int i = 0; i < scenario.swarm.n_nodes(); ++i) {
      if (condi1(state, scenario, i, model, j)) candidates.push_back(i);
    }
    if (candidates.empty()) {
      // Reject the whole request: a partially placed CNN cannot classify.
      for (int placed = 1; placed < j; ++placed) {
        const int node = placement.node(placed);
        state.usage.used_memory[static_cast<size_t>(node)] -= model.layer(placed).memory_bytes;
        state.usage.used_compute[static_cast<size_t>(node)] -= model.layer(placed).multiplications;
      }
      outcome.accepted = false;
      outcome.rejected_at_layer = j;
      outcome.rejection_reason = "layer " + std::to_string(j) + " fits no node within remaining budgets";
      state.rejected.push_back({request_index, j, outcome.rejection_reason});
      return outcome;
    }
    const std::vector<double> scores = nrm_scores(state, scenario, request, j, placement, candidates, params);
    size_t pick = 0;
    for (size_t c = 1; c < scores.size(); ++c) {
      if (scores[c] < scores[pick]) pick = c;  // ties keep the lowest node id
    }
    const int node = candidates[pick];
    placement.assign(j, node);
    state.usage.used_memory[static_cast<size_t>(node)] += model.layer(j).memory_bytes;
    state.usage.used_compute[static_cast<size_t>(node)] += model.layer(j).multiplications;
  }

  outcome.accepted = true;
  outcome.placement = placement;
  const Assignment assignment{request_index, std::move(placement)};
  outcome.latency_contribution = total_latency(scenario, std::span(&assignment, 1)).total;
  state.accepted.push_back(assignment);
  return outcome;
}

StreamResult run_stream(const Scenario& scenario, const HeuristicParams& params,
                        std::span<const int> arrival_order) {
  validate_params(params);
  std::vector<int> order;
  if (arrival_order.empty()) {
    order.resize(scenario.requests.size());
    std::iota(order.begin(), order.end(), 0);
  } else {
    if (arrival_order.size() != scenario.requests.size()) {
      throw std::invalid_argument("run_stream: arrival_order must cover every request exactly once");
    }
    order.assign(arrival_order.begin(), arrival_order.end());
  }

  StreamResult result;
  SwarmState state(scenario);
  for (int request_index : order) {
    result.outcomes.push_back(dist_inference(state, scenario, request_index, params));
  }
  result.accepted = state.accepted;
  result.rejections = static_cast<int>(state.rejected.size());
  result.aggregate = total_latency(scenario, result.accepted);
  result.final_usage_hash = state.usage_hash();
  return result;
}

std::string outcome_log_csv(const Scenario& scenario, const StreamResult& result) {
  std::ostringstream out;
  out << "request_id,accepted,latency_contribution_s,nodes_used,rejection_reason\n";
  for (const AssignOutcome& o : result.outcomes) {
    const InferenceRequest& request = scenario.requests[static_cast<size_t>(o.request_index)];
    out << request.id << ',' << (o.accepted ? 1 : 0) << ',';
    if (o.accepted) {
      out << format_double(o.latency_contribution) << ',';
      std::vector<int> used = o.placement.node_of_layer;
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
      for (size_t i = 0; i < used.size(); ++i) out << (i ? ";" : "") << used[i];
      out << ',';
    } else {
      out << "0,,\"" << o.rejection_reason << '"';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace swarminfer
