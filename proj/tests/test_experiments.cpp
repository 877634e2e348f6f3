#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swarminfer/experiments.hpp"
#include "swarminfer/stats.hpp"

using namespace swarminfer;

namespace {

// Small layers and a small swarm so unit-test sweeps stay fast.
ScenarioConfig tiny_config() {
  ScenarioConfig config;
  config.width.base_channels = 4;
  config.width.spatial = 8;
  config.input_bytes = 50'000;
  return config;
}

}  // namespace

TEST_CASE("generate_scenario is deterministic and shaped as requested") {
  const ScenarioConfig config = tiny_config();
  const Scenario a = generate_scenario(5, 7, ModelTemplate::Sequential, 4, 11, config);
  const Scenario b = generate_scenario(5, 7, ModelTemplate::Sequential, 4, 11, config);
  CHECK(a == b);
  CHECK(a.swarm.n_nodes() == 5);
  CHECK(a.swarm.n_sources() == 5);
  CHECK(a.n_requests() == 7);
  CHECK(a.models.size() == 1);
  CHECK(a.models[0].depth() == 4);
  CHECK(validate_scenario(a).empty());

  const Scenario c = generate_scenario(5, 7, ModelTemplate::Sequential, 4, 12, config);
  CHECK(a != c);

  const RequestLoad load = request_load(a);
  CHECK(load.total() == 7);
  CHECK(*std::max_element(load.per_source.begin(), load.per_source.end()) <= 7);
}

TEST_CASE("scenario_for_swarm matches the all-in-one generator") {
  const ScenarioConfig config = tiny_config();
  const Swarm swarm = build_swarm(4, 4, config.budgets, config.area_size, config.rate_model, 21);
  const Scenario via_swarm =
      scenario_for_swarm(swarm, 5, ModelTemplate::Residual, 4, 21, config);
  const Scenario direct = generate_scenario(4, 5, ModelTemplate::Residual, 4, 21, config);
  CHECK(via_swarm == direct);
}

TEST_CASE("request origins extend as a prefix when only the count grows") {
  const ScenarioConfig config = tiny_config();
  const Scenario small = generate_scenario(4, 3, ModelTemplate::Sequential, 3, 5, config);
  const Scenario big = generate_scenario(4, 6, ModelTemplate::Sequential, 3, 5, config);
  CHECK(small.swarm == big.swarm);
  for (int r = 0; r < 3; ++r) {
    CHECK(small.requests[static_cast<size_t>(r)].source == big.requests[static_cast<size_t>(r)].source);
  }
}

TEST_CASE("spearman matches hand-computed values") {
  const std::vector<double> x = {1, 2, 3};
  const std::vector<double> up = {10, 20, 30};
  const std::vector<double> down = {30, 20, 10};
  CHECK(spearman(x, up) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spearman(x, down) == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> x4 = {1, 2, 3, 4};
  const std::vector<double> tied = {10, 10, 20, 30};
  CHECK(spearman(x4, tied) == doctest::Approx(4.5 / std::sqrt(22.5)).epsilon(1e-12));

  const std::vector<double> flat = {5, 5, 5};
  CHECK(std::isnan(spearman(x, flat)));
}

TEST_CASE("mean and sample_stddev basics") {
  const std::vector<double> xs = {2.0, 4.0, 6.0};
  CHECK(mean(xs) == doctest::Approx(4.0));
  CHECK(sample_stddev(xs) == doctest::Approx(2.0));
  CHECK(sample_stddev(std::vector<double>{1.0}) == 0.0);
}

TEST_CASE("exact requests sweep is monotone per seed") {
  SweepSpec spec;
  spec.kind = SweepKind::Requests;
  spec.values = {1, 2, 3, 4};
  spec.seeds = {1, 2, 3};
  spec.solvers = {"exact"};
  spec.n_uavs = 2;
  spec.depth = 3;
  spec.config = tiny_config();
  const SweepTable table = run_sweep(spec);
  REQUIRE(table.rows.size() == 12);
  for (std::uint64_t seed : spec.seeds) {
    double prev = 0.0;
    for (double value : spec.values) {
      const auto it = std::find_if(table.rows.begin(), table.rows.end(), [&](const SweepRow& r) {
        return r.seed == seed && r.swept == value;
      });
      REQUIRE(it != table.rows.end());
      REQUIRE(it->status == "optimal");
      CHECK(it->total >= prev - 1e-12);
      prev = it->total;
    }
  }
}

TEST_CASE("exact rows never exceed heuristic rows point-for-point") {
  SweepSpec spec;
  spec.kind = SweepKind::Requests;
  spec.values = {1, 2, 3};
  spec.seeds = {7, 8};
  spec.solvers = {"exact", "heuristic"};
  spec.n_uavs = 3;
  spec.depth = 3;
  spec.config = tiny_config();
  const SweepTable table = run_sweep(spec);
  for (double value : spec.values) {
    for (std::uint64_t seed : spec.seeds) {
      double exact = -1.0, heuristic = -1.0;
      for (const SweepRow& row : table.rows) {
        if (row.swept != value || row.seed != seed) continue;
        if (row.solver == "exact" && row.status == "optimal") exact = row.total;
        if (row.solver == "heuristic" && row.status == "ok" && row.rejections == 0)
          heuristic = row.total;
      }
      REQUIRE(exact >= 0.0);
      REQUIRE(heuristic >= 0.0);
      CHECK(exact <= heuristic + 1e-9);
    }
  }
}

TEST_CASE("sweep rows regenerate bit-identically") {
  SweepSpec spec;
  spec.kind = SweepKind::Uavs;
  spec.values = {2, 3};
  spec.seeds = {4, 5};
  spec.n_requests = 3;
  spec.depth = 4;
  spec.config = tiny_config();
  const std::string a = run_sweep(spec).to_csv();
  const std::string b = run_sweep(spec).to_csv();
  CHECK(a == b);
  CHECK(a.find("kind,swept,seed,solver,template,status") == 0);
}

TEST_CASE("alphabeta sweep produces one complete row per pair") {
  SweepSpec spec;
  spec.kind = SweepKind::AlphaBeta;
  spec.values = {0.3, 0.5, 0.7, 0.9};
  spec.seeds = {1, 2};
  spec.config = tiny_config();
  const SweepTable table = run_sweep(spec);
  REQUIRE(table.rows.size() == 8);
  for (const SweepRow& row : table.rows) CHECK(row.status == "ok");
  const auto means = mean_by_swept(table, "heuristic");
  CHECK(means.size() == 4);
}

TEST_CASE("per-point failures land in the status column without aborting the sweep") {
  SweepSpec spec;
  spec.kind = SweepKind::Layers;
  spec.values = {2, 3};  // depth 2 is invalid for the residual template
  spec.seeds = {1};
  spec.tmpl = ModelTemplate::Residual;
  spec.config = tiny_config();
  const SweepTable table = run_sweep(spec);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].status.find("error:") == 0);
  CHECK(table.rows[1].status == "ok");
}

TEST_CASE("find_rejection_threshold hits the constructed budget exactly") {
  // One node whose compute budget fits exactly the first three layers.
  ScenarioConfig config = tiny_config();
  const CnnModel probe = build_model_from_template(ModelTemplate::Sequential, 4, config.width);
  MultCount three_layers = 0;
  for (int j = 1; j <= 3; ++j) three_layers += probe.layer(j).multiplications;
  config.budgets.compute_budget = three_layers;
  config.budgets.mem_budget = 1'000'000'000;

  const ThresholdResult found =
      find_rejection_threshold(1, 1, ModelTemplate::Sequential, 3, config, 32);
  CHECK(!found.capped);
  CHECK(found.threshold == 3);
}

TEST_CASE("find_rejection_threshold scans residual templates from depth 3") {
  ScenarioConfig config = tiny_config();
  const CnnModel probe = build_model_from_template(ModelTemplate::Residual, 4, config.width);
  MultCount three_layers = 0;
  for (int j = 1; j <= 3; ++j) three_layers += probe.layer(j).multiplications;
  config.budgets.compute_budget = three_layers;
  config.budgets.mem_budget = 1'000'000'000;
  const ThresholdResult found =
      find_rejection_threshold(1, 1, ModelTemplate::Residual, 3, config, 32);
  CHECK(!found.capped);
  CHECK(found.threshold == 3);
}

TEST_CASE("find_rejection_threshold reports the cap when nothing rejects") {
  ScenarioConfig config = tiny_config();
  config.budgets.compute_budget = 1'000'000'000'000;
  config.budgets.mem_budget = 1'000'000'000'000;
  const ThresholdResult found =
      find_rejection_threshold(1, 2, ModelTemplate::Sequential, 3, config, 16);
  CHECK(found.capped);
  CHECK(found.threshold == 16);
}

TEST_CASE("rejection threshold never drops when the swarm grows") {
  ScenarioConfig config = tiny_config();
  config.budgets.compute_budget = 40'000'000;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    int prev = 0;
    for (int n_uavs : {1, 2, 4, 8}) {
      const ThresholdResult found =
          find_rejection_threshold(3, n_uavs, ModelTemplate::Sequential, seed, config, 128);
      CHECK(found.threshold >= prev);
      prev = found.threshold;
    }
  }
}

TEST_CASE("find_min_uavs is the dual scan") {
  ScenarioConfig config = tiny_config();
  config.budgets.compute_budget = 40'000'000;
  const auto min_uavs = find_min_uavs(4, 8, ModelTemplate::Sequential, 2, config, 64);
  REQUIRE(min_uavs.has_value());
  const Scenario at = generate_scenario(*min_uavs, 4, ModelTemplate::Sequential, 8, 2, config);
  CHECK(run_stream(at).rejections == 0);
  if (*min_uavs > 1) {
    const Scenario below = generate_scenario(*min_uavs - 1, 4, ModelTemplate::Sequential, 8, 2, config);
    CHECK(run_stream(below).rejections > 0);
  }
}

TEST_CASE("paired shared-data rows keep the residual side at or above sequential") {
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  const auto rows = compare_shared_data(1, 6, 0, 3, seeds, 4, tiny_config());
  REQUIRE(rows.size() == 6 * 4 * 3);
  for (const SharedDataRow& row : rows) {
    CHECK(row.shared_residual >= row.shared_sequential);
    if (row.depth < 3) CHECK(row.shared_residual == row.shared_sequential);
    if (row.requests == 0) {
      CHECK(row.shared_sequential == 0);
      CHECK(row.shared_residual == 0);
    }
    if (row.shortcut_crossed) CHECK(row.shared_residual > row.shared_sequential);
  }
  const std::string csv = shared_data_csv(rows);
  CHECK(csv.find("depth,requests,seed") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size()) + 1);
}
