#pragma once

#include <cstdint>

#include "swarminfer/latency.hpp"

namespace swarminfer {

enum class SolveStatus {
  Optimal,     // search completed; best found is proven optimal
  Incumbent,   // time limit hit with a feasible incumbent
  Infeasible,  // search completed without any feasible placement
  TimedOut,    // time limit hit before any feasible placement was found
};

const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<Assignment> assignments;  // one per request when a solution exists
  LatencyBreakdown breakdown;
  std::int64_t nodes_explored = 0;

  bool has_solution() const { return status == SolveStatus::Optimal || status == SolveStatus::Incumbent; }
  bool proven_optimal() const { return status == SolveStatus::Optimal; }
};

struct SolveOptions {
  double time_limit_seconds = 60.0;
};

// Depth-first branch and bound over per-(request, layer) node choices in
// arrival/layer order. Bound for a partial solution: accumulated latency
// plus, for each unassigned layer, its cheapest possible processing time
// (transmission bounded below by zero). Budget violations prune
// incrementally. Deterministic: candidates are ordered by (incremental
// latency, node id), and equal-total solutions keep the lexicographically
// smaller assignment.
SolveResult solve_exact(const Scenario& scenario, const SolveOptions& options = {});

// Oracle: enumerates every joint assignment in lexicographic
// (request, layer, node) order, filters by check_feasibility, minimizes
// total_latency. Guarded: throws if the space exceeds `enumeration_guard`.
SolveResult solve_bruteforce(const Scenario& scenario, std::int64_t enumeration_guard = 10'000'000);

// Search-space size (product over requests of N^depth), saturating at
// overflow_cap; used by the brute-force guard and tests.
std::int64_t enumeration_space(const Scenario& scenario, std::int64_t overflow_cap = 1'000'000'000'000'000);

// The root relaxation value: sum over all layers of min over nodes of c/e.
// Never exceeds the optimal total.
double root_lower_bound(const Scenario& scenario);

}  // namespace swarminfer
