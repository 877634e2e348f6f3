#include "swarminfer/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "swarminfer/rng.hpp"

namespace swarminfer {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double distance_rate(const RateModel& model, double dist) {
  if (dist <= 0.0) return model.rho_max;  // co-located pair saturates the link
  return std::clamp(model.rho_ref * model.d_ref / dist, model.rho_min, model.rho_max);
}

namespace {

void check_rate_positive(double rate, const char* what) {
  if (!(rate > 0.0)) throw std::invalid_argument(std::string(what) + " rates must be > 0");
}

}  // namespace

void apply_rate_model(Swarm& swarm, const RateModel& rate_model, std::uint64_t seed) {
  const int n_nodes = swarm.n_nodes();
  const int n_sources = swarm.n_sources();
  Rng rate_rng = Rng(seed).fork(2);

  LinkMatrix& links = swarm.links;
  links.n_nodes = n_nodes;
  links.n_sources = n_sources;
  links.node_rates.assign(static_cast<size_t>(n_nodes) * n_nodes, 0.0);
  links.source_rates.assign(static_cast<size_t>(n_sources) * n_nodes, 0.0);

  switch (rate_model.kind) {
    case RateModel::Kind::Distance: {
      if (!(rate_model.rho_min > 0.0) || rate_model.rho_max < rate_model.rho_min) {
        throw std::invalid_argument("distance rate model needs 0 < rho_min <= rho_max");
      }
      for (int i = 0; i < n_nodes; ++i) {
        for (int k = i + 1; k < n_nodes; ++k) {
          const double rate =
              distance_rate(rate_model, distance(swarm.nodes[i].position, swarm.nodes[k].position));
          links.node_rates[static_cast<size_t>(i) * n_nodes + k] = rate;
          links.node_rates[static_cast<size_t>(k) * n_nodes + i] = rate;
        }
      }
      for (int s = 0; s < n_sources; ++s) {
        for (int i = 0; i < n_nodes; ++i) {
          links.source_rates[static_cast<size_t>(s) * n_nodes + i] =
              distance_rate(rate_model, distance(swarm.sources[s].position, swarm.nodes[i].position));
        }
      }
      break;
    }
    case RateModel::Kind::Uniform: {
      if (!(rate_model.lo > 0.0) || rate_model.hi < rate_model.lo) {
        throw std::invalid_argument("uniform rate model needs 0 < lo <= hi");
      }
      for (int i = 0; i < n_nodes; ++i) {
        for (int k = 0; k < n_nodes; ++k) {
          if (i == k) continue;
          links.node_rates[static_cast<size_t>(i) * n_nodes + k] =
              rate_rng.uniform(rate_model.lo, rate_model.hi);
        }
      }
      for (double& rate : links.source_rates) rate = rate_rng.uniform(rate_model.lo, rate_model.hi);
      break;
    }
    case RateModel::Kind::Explicit: {
      if (rate_model.node_rates.size() != links.node_rates.size() ||
          rate_model.source_rates.size() != links.source_rates.size()) {
        throw std::invalid_argument("explicit rate model tables do not match swarm dimensions");
      }
      links.node_rates = rate_model.node_rates;
      links.source_rates = rate_model.source_rates;
      for (int i = 0; i < n_nodes; ++i) {
        for (int k = 0; k < n_nodes; ++k) {
          if (i != k) check_rate_positive(links.node_rate(i, k), "node");
        }
      }
      for (double rate : links.source_rates) check_rate_positive(rate, "source");
      break;
    }
  }
}

Swarm build_swarm(int n_nodes, int n_sources, const NodeBudgets& budgets, double area_size,
                  const RateModel& rate_model, std::uint64_t seed) {
  if (n_nodes < 1) throw std::invalid_argument("build_swarm: need at least one node");
  if (n_sources < 1) throw std::invalid_argument("build_swarm: need at least one source");
  if (!(area_size > 0.0)) throw std::invalid_argument("build_swarm: area_size must be positive");
  if (budgets.mem_budget <= 0 || budgets.compute_budget <= 0 || !(budgets.mult_per_sec > 0.0)) {
    throw std::invalid_argument("build_swarm: node budgets must be positive");
  }

  Rng pos_rng = Rng(seed).fork(1);

  Swarm swarm;
  swarm.nodes.reserve(static_cast<size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    swarm.nodes.push_back(UavNode{
        .id = i,
        .mem_budget = budgets.mem_budget,
        .compute_budget = budgets.compute_budget,
        .mult_per_sec = budgets.mult_per_sec,
        .position = {pos_rng.uniform(0.0, area_size), pos_rng.uniform(0.0, area_size)},
    });
  }
  swarm.sources.reserve(static_cast<size_t>(n_sources));
  for (int s = 0; s < n_sources; ++s) {
    swarm.sources.push_back(SourceNode{
        .id = s,
        .position = {pos_rng.uniform(0.0, area_size), pos_rng.uniform(0.0, area_size)},
    });
  }
  apply_rate_model(swarm, rate_model, seed);
  return swarm;
}

double link_rate(const Swarm& swarm, int from, int to) {
  if (from < 0 || from >= swarm.n_nodes() || to < 0 || to >= swarm.n_nodes()) {
    throw std::out_of_range("link_rate: unknown node id");
  }
  if (from == to) {
    throw std::invalid_argument("link_rate: intra-node transfer has no rate; co-located layers cost zero time");
  }
  return swarm.links.node_rate(from, to);
}

double source_rate(const Swarm& swarm, int source, int node) {
  if (source < 0 || source >= swarm.n_sources()) throw std::out_of_range("source_rate: unknown source id");
  if (node < 0 || node >= swarm.n_nodes()) throw std::out_of_range("source_rate: unknown node id");
  return swarm.links.source_rate(source, node);
}

}  // namespace swarminfer
