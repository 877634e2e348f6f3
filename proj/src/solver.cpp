#include "swarminfer/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace swarminfer {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Incumbent: return "incumbent";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::TimedOut: return "timeout";
  }
  return "unknown";
}

namespace {

struct FlatPosition {
  int request_index;
  int layer;  // 1-based
  MultCount multiplications;
  Bytes memory_bytes;
};

std::vector<FlatPosition> flatten(const Scenario& scenario) {
  std::vector<FlatPosition> positions;
  for (int r = 0; r < scenario.n_requests(); ++r) {
    const CnnModel& model = scenario.model_of(r);
    for (int j = 1; j <= model.depth(); ++j) {
      positions.push_back({r, j, model.layer(j).multiplications, model.layer(j).memory_bytes});
    }
  }
  return positions;
}

// Latency added by putting this layer on `node`, given the earlier layers of
// the same request: source transfer for layer 1, otherwise the incoming
// pipeline/residual transfer (parallel paths gate on the slower one), plus
// the processing term. Matches the decomposition of total_latency, so the
// sum over all positions of a complete assignment equals the objective.
double incremental_cost(const Scenario& scenario, const std::vector<Placement>& placements,
                        const FlatPosition& pos, int node) {
  const InferenceRequest& request = scenario.requests[static_cast<size_t>(pos.request_index)];
  const CnnModel& model = scenario.model_of(request);
  const Swarm& swarm = scenario.swarm;
  double cost = static_cast<double>(pos.multiplications) /
                swarm.nodes[static_cast<size_t>(node)].mult_per_sec;
  const Placement& placement = placements[static_cast<size_t>(pos.request_index)];
  if (pos.layer == 1) {
    cost += static_cast<double>(request.source_bytes) / source_rate(swarm, request.source, node);
  } else {
    const int prev = placement.node(pos.layer - 1);
    double incoming = prev == node ? 0.0
                                   : static_cast<double>(model.layer(pos.layer - 1).output_bytes) /
                                         link_rate(swarm, prev, node);
    if (const ResidualEdge* edge = model.residual_into(pos.layer)) {
      const int src = placement.node(edge->source());
      const double residual = src == node ? 0.0
                                          : static_cast<double>(edge->payload_bytes) /
                                                link_rate(swarm, src, node);
      incoming = std::max(incoming, residual);
    }
    cost += incoming;
  }
  return cost;
}

struct SearchContext {
  const Scenario& scenario;
  std::vector<FlatPosition> positions;
  std::vector<double> remaining_bound;  // bound on everything from position p onward
  std::vector<Placement> placements;    // current partial assignment
  ResourceUsage usage;
  std::vector<std::vector<std::pair<double, int>>> candidate_scratch;

  bool have_incumbent = false;
  double best_total = 0.0;
  std::vector<Placement> best_placements;

  std::int64_t explored = 0;
  bool stopped = false;
  std::chrono::steady_clock::time_point deadline;

  explicit SearchContext(const Scenario& s) : scenario(s), usage(s.swarm.n_nodes()) {}

  bool out_of_time() {
    if ((explored & 1023) == 0 && std::chrono::steady_clock::now() >= deadline) stopped = true;
    return stopped;
  }

  bool current_lex_smaller() const {
    for (size_t r = 0; r < placements.size(); ++r) {
      const auto& cur = placements[r].node_of_layer;
      const auto& best = best_placements[r].node_of_layer;
      for (size_t j = 0; j < cur.size(); ++j) {
        if (cur[j] != best[j]) return cur[j] < best[j];
      }
    }
    return false;
  }

  void dfs(size_t p, double accumulated) {
    if (out_of_time()) return;
    if (p == positions.size()) {
      if (!have_incumbent || accumulated < best_total ||
          (accumulated == best_total && current_lex_smaller())) {
        have_incumbent = true;
        best_total = accumulated;
        best_placements = placements;
      }
      return;
    }
    const FlatPosition& pos = positions[p];
    auto& candidates = candidate_scratch[p];
    candidates.clear();
    for (int i = 0; i < scenario.swarm.n_nodes(); ++i) {
      const UavNode& node = scenario.swarm.nodes[static_cast<size_t>(i)];
      if (usage.used_memory[static_cast<size_t>(i)] + pos.memory_bytes > node.mem_budget) continue;
      if (usage.used_compute[static_cast<size_t>(i)] + pos.multiplications > node.compute_budget) continue;
      candidates.emplace_back(incremental_cost(scenario, placements, pos, i), i);
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [cost, i] : candidates) {
      // Candidates are cost-ordered, so the first pruned bound prunes the rest.
      if (have_incumbent && accumulated + cost + remaining_bound[p + 1] >= best_total) break;
      ++explored;
      placements[static_cast<size_t>(pos.request_index)].assign(pos.layer, i);
      usage.used_memory[static_cast<size_t>(i)] += pos.memory_bytes;
      usage.used_compute[static_cast<size_t>(i)] += pos.multiplications;
      dfs(p + 1, accumulated + cost);
      usage.used_memory[static_cast<size_t>(i)] -= pos.memory_bytes;
      usage.used_compute[static_cast<size_t>(i)] -= pos.multiplications;
      placements[static_cast<size_t>(pos.request_index)].assign(pos.layer, kUnassigned);
      if (stopped) return;
    }
  }
};

SolveResult finish(const Scenario& scenario, bool have_incumbent, bool stopped,
                   std::vector<Placement> best, std::int64_t explored) {
  SolveResult result;
  result.nodes_explored = explored;
  if (have_incumbent) {
    result.status = stopped ? SolveStatus::Incumbent : SolveStatus::Optimal;
    result.assignments.reserve(best.size());
    for (size_t r = 0; r < best.size(); ++r) {
      result.assignments.push_back(Assignment{static_cast<int>(r), std::move(best[r])});
    }
    result.breakdown = total_latency(scenario, result.assignments);
  } else {
    result.status = stopped ? SolveStatus::TimedOut : SolveStatus::Infeasible;
  }
  return result;
}

}  // namespace

double root_lower_bound(const Scenario& scenario) {
  double e_max = 0.0;
  for (const UavNode& node : scenario.swarm.nodes) e_max = std::max(e_max, node.mult_per_sec);
  double bound = 0.0;
  for (int r = 0; r < scenario.n_requests(); ++r) {
    const CnnModel& model = scenario.model_of(r);
    for (int j = 1; j <= model.depth(); ++j) {
      bound += static_cast<double>(model.layer(j).multiplications) / e_max;
    }
  }
  return bound;
}

SolveResult solve_exact(const Scenario& scenario, const SolveOptions& options) {
  SearchContext ctx(scenario);
  ctx.positions = flatten(scenario);
  ctx.placements.reserve(scenario.requests.size());
  for (int r = 0; r < scenario.n_requests(); ++r) {
    ctx.placements.push_back(Placement::unassigned(scenario.model_of(r).depth()));
  }
  ctx.candidate_scratch.resize(ctx.positions.size());

  double e_max = 0.0;
  for (const UavNode& node : scenario.swarm.nodes) e_max = std::max(e_max, node.mult_per_sec);
  ctx.remaining_bound.assign(ctx.positions.size() + 1, 0.0);
  for (size_t p = ctx.positions.size(); p-- > 0;) {
    ctx.remaining_bound[p] =
        ctx.remaining_bound[p + 1] + static_cast<double>(ctx.positions[p].multiplications) / e_max;
  }

  ctx.deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(std::max(options.time_limit_seconds, 0.0)));
  if (options.time_limit_seconds <= 0.0) ctx.stopped = true;
  ctx.dfs(0, 0.0);
  return finish(scenario, ctx.have_incumbent, ctx.stopped, std::move(ctx.best_placements),
                ctx.explored);
}

std::int64_t enumeration_space(const Scenario& scenario, std::int64_t overflow_cap) {
  const std::int64_t n = scenario.swarm.n_nodes();
  std::int64_t space = 1;
  for (int r = 0; r < scenario.n_requests(); ++r) {
    for (int j = 0; j < scenario.model_of(r).depth(); ++j) {
      if (space > overflow_cap / n) return overflow_cap;
      space *= n;
    }
  }
  return space;
}

SolveResult solve_bruteforce(const Scenario& scenario, std::int64_t enumeration_guard) {
  const std::int64_t space = enumeration_space(scenario);
  if (space > enumeration_guard) {
    throw std::runtime_error("instance too large for oracle: " + std::to_string(space) +
                             " assignments exceed the guard of " + std::to_string(enumeration_guard));
  }
  const std::vector<FlatPosition> positions = flatten(scenario);
  const int n_nodes = scenario.swarm.n_nodes();

  std::vector<Assignment> scratch;
  scratch.reserve(scenario.requests.size());
  for (int r = 0; r < scenario.n_requests(); ++r) {
    scratch.push_back(Assignment{r, Placement::unassigned(scenario.model_of(r).depth())});
  }

  bool have_best = false;
  double best_total = 0.0;
  std::vector<Assignment> best;
  std::int64_t enumerated = 0;

  // Odometer over flattened positions, last position fastest: assignments
  // appear in lexicographic (request, layer, node) order, so keeping only
  // strict improvements retains the lexicographically smallest optimum.
  std::vector<int> choice(positions.size(), 0);
  for (auto& a : scratch) {
    for (int j = 1; j <= a.placement.depth(); ++j) a.placement.assign(j, 0);
  }
  while (true) {
    ++enumerated;
    if (check_feasibility(scenario, scratch).empty()) {
      const double total = total_latency(scenario, scratch).total;
      if (!have_best || total < best_total) {
        have_best = true;
        best_total = total;
        best = scratch;
      }
    }
    size_t p = positions.size();
    while (p > 0) {
      --p;
      if (++choice[p] < n_nodes) {
        scratch[static_cast<size_t>(positions[p].request_index)].placement.assign(positions[p].layer, choice[p]);
        break;
      }
      choice[p] = 0;
      scratch[static_cast<size_t>(positions[p].request_index)].placement.assign(positions[p].layer, 0);
      if (p == 0) goto done;
    }
    if (positions.empty()) break;
  }
done:
  SolveResult result;
  result.nodes_explored = enumerated;
  if (have_best) {
    result.status = SolveStatus::Optimal;
    result.assignments = std::move(best);
    result.breakdown = total_latency(scenario, result.assignments);
  } else {
    result.status = SolveStatus::Infeasible;
  }
  return result;
}

}  // namespace swarminfer
