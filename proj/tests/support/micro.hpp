#pragma once

#include <algorithm>

#include "swarminfer/experiments.hpp"
#include "swarminfer/rng.hpp"

namespace swarminfer::testsupport {

// Micro instances for oracle tests: up to 4 nodes, 5 layers, 2 requests,
// mixed sequential/residual, heterogeneous node speeds, budgets jittered
// from the aggregate demand so tight and infeasible cases all occur.
inline Scenario make_micro_scenario(Rng& rng) {
  const int n_nodes = rng.uniform_int(1, 4);
  const int n_sources = rng.uniform_int(1, 2);
  const int n_requests = rng.uniform_int(1, 2);

  RateModel rates;
  if (rng.coin()) {
    rates.kind = RateModel::Kind::Uniform;
    rates.lo = 2e5;
    rates.hi = 5e6;
  }
  Swarm swarm = build_swarm(n_nodes, n_sources, NodeBudgets{}, rng.uniform(200.0, 1200.0), rates,
                            rng.next_u64());

  Scenario scenario;
  scenario.requests.reserve(static_cast<size_t>(n_requests));
  for (int r = 0; r < n_requests; ++r) {
    const bool reuse = r > 0 && rng.coin();
    if (!reuse) {
      const int depth = rng.uniform_int(1, 5);
      const ModelTemplate tmpl =
          depth >= 3 && rng.coin() ? ModelTemplate::Residual : ModelTemplate::Sequential;
      WidthProfile width;
      width.input_channels = rng.uniform_int(1, 3);
      width.base_channels = rng.uniform_int(2, 12);
      width.spatial = rng.uniform_int(4, 12);
      width.channel_double_every = rng.coin() ? 2 : 0;
      width.spatial_halve_every = rng.coin() ? 2 : 0;
      const Bytes input = rng.uniform_int(1000, 200000);
      CnnModel model = build_model_from_template(tmpl, depth, width, input,
                                                 "m" + std::to_string(scenario.models.size()));
      scenario.models.push_back(std::move(model));
    }
    const int model_index = static_cast<int>(scenario.models.size()) - 1;
    scenario.requests.push_back(InferenceRequest{
        .id = r,
        .model_index = model_index,
        .source = rng.uniform_int(0, n_sources - 1),
        .source_bytes = scenario.models[static_cast<size_t>(model_index)].input_bytes,
    });
  }

  Bytes mem_demand = 0;
  MultCount compute_demand = 0;
  Bytes max_layer_mem = 1;
  MultCount max_layer_compute = 1;
  for (const InferenceRequest& r : scenario.requests) {
    for (const LayerProfile& layer : scenario.models[static_cast<size_t>(r.model_index)].layers) {
      mem_demand += layer.memory_bytes;
      compute_demand += layer.multiplications;
      max_layer_mem = std::max(max_layer_mem, layer.memory_bytes);
      max_layer_compute = std::max(max_layer_compute, layer.multiplications);
    }
  }
  // Mostly comfortable budgets, sometimes tight, sometimes a squeeze below
  // the largest single layer (guaranteed infeasible).
  const int regime = static_cast<int>(rng.below(8));
  for (UavNode& node : swarm.nodes) {
    node.mult_per_sec = 1e6 * rng.uniform(0.5, 2.0);
    switch (regime) {
      case 0:  // memory squeeze
        node.mem_budget = std::max<Bytes>(
            1, static_cast<Bytes>(static_cast<double>(max_layer_mem) * rng.uniform(0.2, 0.9)));
        node.compute_budget = compute_demand;
        break;
      case 1:  // compute squeeze
        node.mem_budget = mem_demand;
        node.compute_budget = std::max<MultCount>(
            1, static_cast<MultCount>(static_cast<double>(max_layer_compute) * rng.uniform(0.2, 0.9)));
        break;
      case 2:
      case 3: {  // tight: the swarm barely covers the demand
        const double spread = 1.0 / n_nodes;
        node.mem_budget = std::max<Bytes>(
            max_layer_mem,
            static_cast<Bytes>(static_cast<double>(mem_demand) * rng.uniform(spread, 2.0 * spread)));
        node.compute_budget = std::max<MultCount>(
            max_layer_compute, static_cast<MultCount>(static_cast<double>(compute_demand) *
                                                      rng.uniform(spread, 2.0 * spread)));
        break;
      }
      default:  // comfortable
        node.mem_budget = std::max<Bytes>(
            max_layer_mem,
            static_cast<Bytes>(static_cast<double>(mem_demand) * rng.uniform(0.5, 1.3)));
        node.compute_budget = std::max<MultCount>(
            max_layer_compute, static_cast<MultCount>(static_cast<double>(compute_demand) *
                                                      rng.uniform(0.5, 1.3)));
        break;
    }
  }
  scenario.swarm = std::move(swarm);
  return scenario;
}

}  // namespace swarminfer::testsupport
