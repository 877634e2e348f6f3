#include "swarminfer/latency.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace swarminfer {

bool Placement::complete() const {
  return std::none_of(node_of_layer.begin(), node_of_layer.end(),
                      [](int n) { return n == kUnassigned; });
}

std::vector<std::string> validate_scenario(const Scenario& scenario) {
  std::vector<std::string> out;
  const int n_models = static_cast<int>(scenario.models.size());
  for (size_t m = 0; m < scenario.models.size(); ++m) {
    for (const ModelViolation& v : validate_model(scenario.models[m])) {
      out.push_back("model " + scenario.models[m].name + ": " + v.message);
    }
  }
  for (const InferenceRequest& r : scenario.requests) {
    if (r.model_index < 0 || r.model_index >= n_models) {
      out.push_back("request " + std::to_string(r.id) + ": unknown model index");
      continue;
    }
    if (r.source < 0 || r.source >= scenario.swarm.n_sources()) {
      out.push_back("request " + std::to_string(r.id) + ": unknown source id");
    }
    if (r.source_bytes < 0) {
      out.push_back("request " + std::to_string(r.id) + ": negative source_bytes");
    }
  }
  const LinkMatrix& links = scenario.swarm.links;
  if (links.n_nodes != scenario.swarm.n_nodes() || links.n_sources != scenario.swarm.n_sources()) {
    out.push_back("link matrix dimensions do not cover the swarm");
  }
  return out;
}

double LatencyBreakdown::processing_total() const {
  double sum = 0.0;
  for (double t : processing_time_per_node) sum += t;
  return sum;
}

std::uint64_t ResourceUsage::state_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (b * 8)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  };
  for (Bytes m : used_memory) mix(static_cast<std::uint64_t>(m));
  for (MultCount c : used_compute) mix(static_cast<std::uint64_t>(c));
  return h;
}

namespace {

const CnnModel& model_for(const Scenario& scenario, const Assignment& placed) {
  return scenario.model_of(placed.request_index);
}

void require_complete(const Scenario& scenario, const Assignment& placed) {
  const CnnModel& model = model_for(scenario, placed);
  if (placed.placement.depth() != model.depth() || !placed.placement.complete()) {
    throw std::invalid_argument("incomplete placement for request index " +
                                std::to_string(placed.request_index));
  }
}

}  // namespace

TransmissionPlan derive_transmissions(const Scenario& scenario, std::span<const Assignment> placed) {
  TransmissionPlan plan;
  for (const Assignment& a : placed) {
    require_complete(scenario, a);
    const CnnModel& model = model_for(scenario, a);
    // Edges are emitted grouped by target layer, pipeline first, so the
    // parallel-path max in transmission_time is a linear scan.
    for (int j = 2; j <= model.depth(); ++j) {
      const int prev = a.placement.node(j - 1);
      const int here = a.placement.node(j);
      if (prev != here) {
        plan.edges.push_back(TransmissionEdge{
            .request = a.request_index,
            .from = prev,
            .to = here,
            .target_layer = j,
            .stride = 1,
            .payload_bytes = model.layer(j - 1).output_bytes,
            .kind = EdgeKind::Pipeline,
        });
      }
      if (const ResidualEdge* edge = model.residual_into(j)) {
        const int src = a.placement.node(edge->source());
        if (src != here) {
          plan.edges.push_back(TransmissionEdge{
              .request = a.request_index,
              .from = src,
              .to = here,
              .target_layer = j,
              .stride = edge->stride,
              .payload_bytes = edge->payload_bytes,
              .kind = EdgeKind::Residual,
          });
        }
      }
    }
  }
  return plan;
}

double source_time(const Scenario& scenario, const Assignment& placed) {
  const InferenceRequest& request = scenario.requests[static_cast<size_t>(placed.request_index)];
  if (placed.placement.depth() < 1 || placed.placement.node(1) == kUnassigned) {
    throw std::invalid_argument("source_time: layer 1 is not placed");
  }
  const double rate = source_rate(scenario.swarm, request.source, placed.placement.node(1));
  return static_cast<double>(request.source_bytes) / rate;
}

std::vector<double> processing_time(const Scenario& scenario, std::span<const Assignment> placed) {
  std::vector<double> per_node(static_cast<size_t>(scenario.swarm.n_nodes()), 0.0);
  for (const Assignment& a : placed) {
    require_complete(scenario, a);
    const CnnModel& model = model_for(scenario, a);
    for (int j = 1; j <= model.depth(); ++j) {
      const int node = a.placement.node(j);
      per_node[static_cast<size_t>(node)] +=
          static_cast<double>(model.layer(j).multiplications) / scenario.swarm.nodes[static_cast<size_t>(node)].mult_per_sec;
    }
  }
  return per_node;
}

double transmission_time(const TransmissionPlan& plan, const Swarm& swarm) {
  double total = 0.0;
  size_t i = 0;
  const auto edge_time = [&swarm](const TransmissionEdge& e) {
    return static_cast<double>(e.payload_bytes) / link_rate(swarm, e.from, e.to);
  };
  // Edges arrive grouped by (request, target); a pipeline and a residual
  // arrival at the same target transfer in parallel, so the slower one gates.
  while (i < plan.edges.size()) {
    const TransmissionEdge& e = plan.edges[i];
    double contribution = edge_time(e);
    size_t k = i + 1;
    while (k < plan.edges.size() && plan.edges[k].request == e.request &&
           plan.edges[k].target_layer == e.target_layer) {
      contribution = std::max(contribution, edge_time(plan.edges[k]));
      ++k;
    }
    total += contribution;
    i = k;
  }
  return total;
}

LatencyBreakdown total_latency(const Scenario& scenario, std::span<const Assignment> placed) {
  LatencyBreakdown breakdown;
  for (const Assignment& a : placed) {
    require_complete(scenario, a);
    breakdown.source_time += source_time(scenario, a);
  }
  breakdown.processing_time_per_node = processing_time(scenario, placed);
  breakdown.transmission_time = transmission_time(derive_transmissions(scenario, placed), scenario.swarm);
  breakdown.total = breakdown.source_time + breakdown.processing_total() + breakdown.transmission_time;
  return breakdown;
}

Bytes shared_data(const TransmissionPlan& plan, const Scenario& scenario,
                  std::span<const Assignment> placed) {
  Bytes total = 0;
  for (const TransmissionEdge& e : plan.edges) total += e.payload_bytes;
  for (const Assignment& a : placed) {
    total += scenario.requests[static_cast<size_t>(a.request_index)].source_bytes;
  }
  return total;
}

ResourceUsage accumulate_usage(const Scenario& scenario, std::span<const Assignment> placed) {
  ResourceUsage usage(scenario.swarm.n_nodes());
  for (const Assignment& a : placed) {
    const CnnModel& model = model_for(scenario, a);
    const int depth = std::min(model.depth(), a.placement.depth());
    for (int j = 1; j <= depth; ++j) {
      const int node = a.placement.node(j);
      if (node == kUnassigned) continue;
      usage.used_memory[static_cast<size_t>(node)] += model.layer(j).memory_bytes;
      usage.used_compute[static_cast<size_t>(node)] += model.layer(j).multiplications;
    }
  }
  return usage;
}

std::vector<FeasibilityViolation> check_feasibility(const Scenario& scenario,
                                                    std::span<const Assignment> placed) {
  std::vector<FeasibilityViolation> out;
  const int n_nodes = scenario.swarm.n_nodes();
  ResourceUsage usage(n_nodes);
  for (const Assignment& a : placed) {
    const InferenceRequest& request = scenario.requests[static_cast<size_t>(a.request_index)];
    const CnnModel& model = model_for(scenario, a);
    if (a.placement.depth() != model.depth()) {
      out.push_back({FeasibilityViolation::Kind::Assignment, -1, request.id, -1,
                     "placement depth differs from the model"});
      continue;
    }
    for (int j = 1; j <= model.depth(); ++j) {
      const int node = a.placement.node(j);
      if (node == kUnassigned) {
        out.push_back({FeasibilityViolation::Kind::Assignment, -1, request.id, j,
                       "layer has no node assigned"});
        continue;
      }
      if (node < 0 || node >= n_nodes) {
        out.push_back({FeasibilityViolation::Kind::Assignment, node, request.id, j,
                       "layer assigned to an unknown node"});
        continue;
      }
      usage.used_memory[static_cast<size_t>(node)] += model.layer(j).memory_bytes;
      usage.used_compute[static_cast<size_t>(node)] += model.layer(j).multiplications;
    }
  }
  for (int i = 0; i < n_nodes; ++i) {
    const UavNode& node = scenario.swarm.nodes[static_cast<size_t>(i)];
    if (usage.used_memory[static_cast<size_t>(i)] > node.mem_budget) {
      out.push_back({FeasibilityViolation::Kind::Memory, i, -1, -1,
                     "cumulative memory " + std::to_string(usage.used_memory[static_cast<size_t>(i)]) +
                         " exceeds budget " + std::to_string(node.mem_budget)});
    }
    if (usage.used_compute[static_cast<size_t>(i)] > node.compute_budget) {
      out.push_back({FeasibilityViolation::Kind::Compute, i, -1, -1,
                     "cumulative compute " + std::to_string(usage.used_compute[static_cast<size_t>(i)]) +
                         " exceeds budget " + std::to_string(node.compute_budget)});
    }
  }
  return out;
}

}  // namespace swarminfer
