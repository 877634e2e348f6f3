#pragma once

#include <cstdint>
#include <vector>

#include "swarminfer/model.hpp"

namespace swarminfer {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(const Vec2& a, const Vec2& b);

// One compute node of the swarm.
struct UavNode {
  int id = 0;
  Bytes mem_budget = 0;          // m_bar, bytes
  MultCount compute_budget = 0;  // c_bar, multiplications
  double mult_per_sec = 0.0;     // e, multiplications per second
  Vec2 position;

  friend bool operator==(const UavNode&, const UavNode&) = default;
};

// Image capture unit; requests originate here.
struct SourceNode {
  int id = 0;
  Vec2 position;

  friend bool operator==(const SourceNode&, const SourceNode&) = default;
};

// Dense rate tables, bytes/second. Diagonal of node_rates is unused:
// co-located layers hand off in zero time and callers never look it up.
struct LinkMatrix {
  int n_nodes = 0;
  int n_sources = 0;
  std::vector<double> node_rates;    // row-major [from * n_nodes + to]
  std::vector<double> source_rates;  // [source * n_nodes + node]

  double node_rate(int from, int to) const { return node_rates[static_cast<size_t>(from) * n_nodes + to]; }
  double source_rate(int source, int node) const { return source_rates[static_cast<size_t>(source) * n_nodes + node]; }

  friend bool operator==(const LinkMatrix&, const LinkMatrix&) = default;
};

struct Swarm {
  std::vector<UavNode> nodes;
  std::vector<SourceNode> sources;
  LinkMatrix links;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_sources() const { return static_cast<int>(sources.size()); }

  friend bool operator==(const Swarm&, const Swarm&) = default;
};

// Default budgets model a Raspberry Pi 3B+-class node: 560e6 multiplications
// per second, 250 MB of usable memory, 1e9 multiplications tolerated per
// scenario epoch.
struct NodeBudgets {
  Bytes mem_budget = 250'000'000;
  MultCount compute_budget = 1'000'000'000;
  double mult_per_sec = 560e6;

  friend bool operator==(const NodeBudgets&, const NodeBudgets&) = default;
};

// Link rate generation. `Distance` (the default) derives a symmetric rate
// from pair distance: clamp(rho_ref * d_ref / d, rho_min, rho_max).
// `Uniform` draws i.i.d. per ordered pair. `Explicit` takes caller tables.
struct RateModel {
  enum class Kind { Distance, Uniform, Explicit };

  Kind kind = Kind::Distance;

  // Distance parameters.
  double rho_ref = 2e6;
  double d_ref = 100.0;
  double rho_min = 1e5;
  double rho_max = 2e7;

  // Uniform parameters.
  double lo = 1e5;
  double hi = 2e7;

  // Explicit tables (same layout as LinkMatrix).
  std::vector<double> node_rates;
  std::vector<double> source_rates;

  friend bool operator==(const RateModel&, const RateModel&) = default;
};

// Rate for a pair at distance `dist` under the Distance model.
double distance_rate(const RateModel& model, double dist);

// Node and source positions drawn uniformly in [0, area_size]^2 from `seed`;
// rates materialized from the model and frozen. Identical inputs and seed
// yield identical swarms.
Swarm build_swarm(int n_nodes, int n_sources, const NodeBudgets& budgets,
                  double area_size, const RateModel& rate_model, std::uint64_t seed);

// (Re)materializes the link tables for existing node/source positions. The
// seed only matters for the Uniform kind; build_swarm with the same seed
// produces the same tables.
void apply_rate_model(Swarm& swarm, const RateModel& rate_model, std::uint64_t seed);

// Stored-rate lookups. Unknown ids and from == to are errors; callers
// special-case co-located layers to zero transfer time.
double link_rate(const Swarm& swarm, int from, int to);
double source_rate(const Swarm& swarm, int source, int node);

}  // namespace swarminfer
