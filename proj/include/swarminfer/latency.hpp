#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "swarminfer/model.hpp"
#include "swarminfer/swarm.hpp"

namespace swarminfer {

inline constexpr int kUnassigned = -1;

// Layer-to-node map for one request; index j-1 holds the node of layer j.
struct Placement {
  std::vector<int> node_of_layer;

  static Placement unassigned(int depth) { return Placement{std::vector<int>(static_cast<size_t>(depth), kUnassigned)}; }

  int depth() const { return static_cast<int>(node_of_layer.size()); }
  int node(int layer_j) const { return node_of_layer[static_cast<size_t>(layer_j) - 1]; }
  void assign(int layer_j, int node) { node_of_layer[static_cast<size_t>(layer_j) - 1] = node; }
  bool complete() const;

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct InferenceRequest {
  int id = 0;
  int model_index = 0;        // into Scenario::models
  int source = 0;             // source id in the swarm
  Bytes source_bytes = 0;     // K_s for this request

  friend bool operator==(const InferenceRequest&, const InferenceRequest&) = default;
};

struct Scenario {
  Swarm swarm;
  std::vector<CnnModel> models;
  std::vector<InferenceRequest> requests;

  const CnnModel& model_of(const InferenceRequest& r) const { return models[static_cast<size_t>(r.model_index)]; }
  const CnnModel& model_of(int request_index) const { return model_of(requests[static_cast<size_t>(request_index)]); }
  int n_requests() const { return static_cast<int>(requests.size()); }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Structural problems in a scenario (bad model/source references, invalid
// models). Loaders check this; solvers assume a valid scenario.
std::vector<std::string> validate_scenario(const Scenario& scenario);

// A placed request: pairs a request index with its placement.
struct Assignment {
  int request_index = 0;
  Placement placement;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class EdgeKind { Pipeline, Residual };

// One inter-node transfer: node `from` ships the output of layer
// (target_layer - stride) to node `to`, which computes `target_layer`.
struct TransmissionEdge {
  int request = 0;  // request index within the scenario
  int from = 0;
  int to = 0;
  int target_layer = 0;
  int stride = 1;
  Bytes payload_bytes = 0;
  EdgeKind kind = EdgeKind::Pipeline;

  friend bool operator==(const TransmissionEdge&, const TransmissionEdge&) = default;
};

struct TransmissionPlan {
  std::vector<TransmissionEdge> edges;

  friend bool operator==(const TransmissionPlan&, const TransmissionPlan&) = default;
};

struct LatencyBreakdown {
  double source_time = 0.0;                      // sum of t_s over requests
  std::vector<double> processing_time_per_node;  // t_i^(p)
  double transmission_time = 0.0;                // includes residual-path maxima
  double total = 0.0;

  double processing_total() const;
};

// Cumulative per-node memory/compute consumption over a set of placements.
struct ResourceUsage {
  std::vector<Bytes> used_memory;
  std::vector<MultCount> used_compute;

  explicit ResourceUsage(int n_nodes = 0)
      : used_memory(static_cast<size_t>(n_nodes), 0), used_compute(static_cast<size_t>(n_nodes), 0) {}

  // FNV-1a over both arrays; used by tests to assert bit-identical rollback.
  std::uint64_t state_hash() const;

  friend bool operator==(const ResourceUsage&, const ResourceUsage&) = default;
};

struct FeasibilityViolation {
  enum class Kind { Memory, Compute, Assignment };
  Kind kind = Kind::Assignment;
  int node = -1;
  int request = -1;  // request id
  int layer = -1;
  std::string message;
};

// Pipeline edges for every consecutive layer pair on distinct nodes, plus
// residual edges for every model shortcut whose endpoints sit on distinct
// nodes. Co-located endpoints produce no edge. Throws on incomplete
// placements.
TransmissionPlan derive_transmissions(const Scenario& scenario, std::span<const Assignment> placed);

// K_s / rho(source, node hosting layer 1).
double source_time(const Scenario& scenario, const Assignment& placed);

// Per-node compute time: sum over assigned layers of c / e_i.
std::vector<double> processing_time(const Scenario& scenario, std::span<const Assignment> placed);

// Sum over (request, target layer) groups; a group with both a pipeline and
// a residual arrival contributes the max of the two transfer times (the two
// paths run in parallel and the slower one gates the layer).
double transmission_time(const TransmissionPlan& plan, const Swarm& swarm);

// Full objective. total is computed as source + processing + transmission in
// that order, so it decomposes exactly.
LatencyBreakdown total_latency(const Scenario& scenario, std::span<const Assignment> placed);

// Bytes crossing node boundaries: every plan edge payload plus K_s per
// placed request (source to first node is always a transfer). Independent of
// rates and compute speeds.
Bytes shared_data(const TransmissionPlan& plan, const Scenario& scenario, std::span<const Assignment> placed);

ResourceUsage accumulate_usage(const Scenario& scenario, std::span<const Assignment> placed);

// Budget checks of the cumulative usage over all placed requests, plus
// one-node-per-layer completeness. Violations are data, not faults.
std::vector<FeasibilityViolation> check_feasibility(const Scenario& scenario, std::span<const Assignment> placed);

}  // namespace swarminfer
