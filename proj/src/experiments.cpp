#include "swarminfer/experiments.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "format.hpp"
#include "swarminfer/rng.hpp"
#include "swarminfer/stats.hpp"

namespace swarminfer {

int RequestLoad::total() const {
  int sum = 0;
  for (int r : per_source) sum += r;
  return sum;
}

Scenario generate_scenario(int n_uavs, int n_requests, ModelTemplate tmpl, int depth,
                           std::uint64_t seed, const ScenarioConfig& config) {
  if (n_uavs < 1) throw std::invalid_argument("generate_scenario: need at least one UAV");
  // One capture unit per UAV, positioned independently.
  return scenario_for_swarm(
      build_swarm(n_uavs, n_uavs, config.budgets, config.area_size, config.rate_model, seed),
      n_requests, tmpl, depth, seed, config);
}

Scenario scenario_for_swarm(Swarm swarm, int n_requests, ModelTemplate tmpl, int depth,
                            std::uint64_t seed, const ScenarioConfig& config) {
  if (n_requests < 0) throw std::invalid_argument("scenario_for_swarm: negative request count");

  Scenario scenario;
  scenario.swarm = std::move(swarm);
  scenario.models.push_back(
      build_model_from_template(tmpl, depth, config.width, config.input_bytes));

  const int n_sources = scenario.swarm.n_sources();
  Rng origin_rng = Rng(seed).fork(3);  // distinct from build_swarm's substreams
  scenario.requests.reserve(static_cast<size_t>(n_requests));
  for (int r = 0; r < n_requests; ++r) {
    scenario.requests.push_back(InferenceRequest{
        .id = r,
        .model_index = 0,
        .source = static_cast<int>(origin_rng.below(static_cast<std::uint64_t>(n_sources))),
        .source_bytes = scenario.models[0].input_bytes,
    });
  }
  return scenario;
}

RequestLoad request_load(const Scenario& scenario) {
  RequestLoad load;
  load.per_source.assign(static_cast<size_t>(scenario.swarm.n_sources()), 0);
  for (const InferenceRequest& r : scenario.requests) {
    load.per_source[static_cast<size_t>(r.source)] += 1;
  }
  return load;
}

const char* to_string(SweepKind k) {
  switch (k) {
    case SweepKind::Requests: return "requests";
    case SweepKind::Layers: return "layers";
    case SweepKind::Uavs: return "uavs";
    case SweepKind::AlphaBeta: return "alphabeta";
    case SweepKind::RejectionThreshold: return "rejection_threshold";
    case SweepKind::SharedData: return "shared_data";
  }
  return "unknown";
}

SweepKind sweep_kind_from_string(const std::string& s) {
  if (s == "requests") return SweepKind::Requests;
  if (s == "layers") return SweepKind::Layers;
  if (s == "uavs") return SweepKind::Uavs;
  if (s == "alphabeta") return SweepKind::AlphaBeta;
  if (s == "rejection_threshold") return SweepKind::RejectionThreshold;
  if (s == "shared_data") return SweepKind::SharedData;
  throw std::invalid_argument("unknown sweep kind '" + s + "'");
}

namespace {

SweepRow base_row(const SweepSpec& spec, double swept, std::uint64_t seed,
                  const std::string& solver, ModelTemplate tmpl) {
  SweepRow row;
  row.kind = to_string(spec.kind);
  row.swept = swept;
  row.seed = seed;
  row.solver = solver;
  row.tmpl = to_string(tmpl);
  return row;
}

void fill_breakdown(SweepRow& row, const LatencyBreakdown& b) {
  row.total = b.total;
  row.source = b.source_time;
  row.processing = b.processing_total();
  row.transmission = b.transmission_time;
}

SweepRow run_heuristic_point(const SweepSpec& spec, const Scenario& scenario, double swept,
                             std::uint64_t seed, ModelTemplate tmpl, const HeuristicParams& params) {
  SweepRow row = base_row(spec, swept, seed, "heuristic", tmpl);
  const StreamResult stream = run_stream(scenario, params);
  row.status = "ok";
  fill_breakdown(row, stream.aggregate);
  row.rejections = stream.rejections;
  row.shared = shared_data(derive_transmissions(scenario, stream.accepted), scenario, stream.accepted);
  return row;
}

SweepRow run_exact_point(const SweepSpec& spec, const Scenario& scenario, double swept,
                         std::uint64_t seed, ModelTemplate tmpl) {
  SweepRow row = base_row(spec, swept, seed, "exact", tmpl);
  const SolveResult result = solve_exact(scenario, SolveOptions{spec.time_limit_seconds});
  row.status = to_string(result.status);
  if (result.has_solution()) {
    fill_breakdown(row, result.breakdown);
    row.shared =
        shared_data(derive_transmissions(scenario, result.assignments), scenario, result.assignments);
  }
  return row;
}

std::vector<std::string> default_solvers(SweepKind kind) {
  switch (kind) {
    case SweepKind::Requests:
    case SweepKind::Layers:
    case SweepKind::Uavs:
    case SweepKind::AlphaBeta:
      return {"heuristic"};
    case SweepKind::RejectionThreshold:
    case SweepKind::SharedData:
      return {"heuristic"};
  }
  return {"heuristic"};
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("run_sweep: swept range is empty");
  if (spec.seeds.empty()) throw std::invalid_argument("run_sweep: seed list is empty");
  const std::vector<std::string> solvers =
      spec.solvers.empty() ? default_solvers(spec.kind) : spec.solvers;

  SweepTable table;
  for (double value : spec.values) {
    for (std::uint64_t seed : spec.seeds) {
      switch (spec.kind) {
        case SweepKind::Requests:
        case SweepKind::Layers:
        case SweepKind::Uavs:
        case SweepKind::AlphaBeta: {
          int n_uavs = spec.n_uavs;
          int n_requests = spec.n_requests;
          int depth = spec.depth;
          HeuristicParams params = spec.params;
          if (spec.kind == SweepKind::Requests) n_requests = static_cast<int>(value);
          if (spec.kind == SweepKind::Layers) depth = static_cast<int>(value);
          if (spec.kind == SweepKind::Uavs) n_uavs = static_cast<int>(value);
          if (spec.kind == SweepKind::AlphaBeta) params = HeuristicParams{value, 1.0 - value};
          for (const std::string& solver : solvers) {
            SweepRow row = base_row(spec, value, seed, solver, spec.tmpl);
            try {
              const Scenario scenario =
                  generate_scenario(n_uavs, n_requests, spec.tmpl, depth, seed, spec.config);
              row = solver == "exact"
                        ? run_exact_point(spec, scenario, value, seed, spec.tmpl)
                        : run_heuristic_point(spec, scenario, value, seed, spec.tmpl, params);
            } catch (const std::exception& e) {
              row.status = std::string("error: ") + e.what();
            }
            table.rows.push_back(std::move(row));
          }
          break;
        }
        case SweepKind::RejectionThreshold: {
          SweepRow row = base_row(spec, value, seed, "heuristic", spec.tmpl);
          try {
            const int n_uavs = static_cast<int>(value);
            const ThresholdResult found =
                find_rejection_threshold(spec.n_requests, n_uavs, spec.tmpl, seed, spec.config,
                                         spec.depth_cap, spec.params);
            row.threshold = found.threshold;
            row.status = found.capped ? "capped" : "ok";
            if (!found.capped && found.threshold >= 1 &&
                (spec.tmpl != ModelTemplate::Residual || found.threshold >= 3)) {
              const Scenario scenario = generate_scenario(n_uavs, spec.n_requests, spec.tmpl,
                                                          found.threshold, seed, spec.config);
              const StreamResult stream = run_stream(scenario, spec.params);
              fill_breakdown(row, stream.aggregate);
              row.rejections = stream.rejections;
              row.shared = shared_data(derive_transmissions(scenario, stream.accepted), scenario,
                                       stream.accepted);
            }
          } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
          }
          table.rows.push_back(std::move(row));
          break;
        }
        case SweepKind::SharedData: {
          for (ModelTemplate tmpl : {ModelTemplate::Sequential, ModelTemplate::Residual}) {
            const int depth = static_cast<int>(value);
            // Below the first possible shortcut the pair degenerates to two
            // sequential runs; keep both rows so the pairing stays visible.
            const ModelTemplate effective =
                (tmpl == ModelTemplate::Residual && depth < 3) ? ModelTemplate::Sequential : tmpl;
            SweepRow row = base_row(spec, value, seed, "heuristic", tmpl);
            try {
              const Scenario scenario =
                  generate_scenario(spec.n_uavs, spec.n_requests, effective, depth, seed, spec.config);
              row = run_heuristic_point(spec, scenario, value, seed, tmpl, spec.params);
              row.tmpl = to_string(tmpl);
            } catch (const std::exception& e) {
              row.status = std::string("error: ") + e.what();
            }
            table.rows.push_back(std::move(row));
          }
          break;
        }
      }
    }
  }
  return table;
}

std::string SweepTable::to_csv() const {
  std::ostringstream out;
  out << "kind,swept,seed,solver,template,status,total_s,source_s,processing_s,"
         "transmission_s,rejections,shared_data_bytes,threshold\n";
  for (const SweepRow& row : rows) {
    out << row.kind << ',' << format_double(row.swept) << ',' << row.seed << ',' << row.solver
        << ',' << row.tmpl << ',' << row.status << ',' << format_double(row.total) << ','
        << format_double(row.source) << ',' << format_double(row.processing) << ','
        << format_double(row.transmission) << ',' << row.rejections << ',' << row.shared << ',';
    if (row.threshold >= 0) out << row.threshold;
    out << '\n';
  }
  return out.str();
}

std::vector<std::pair<double, double>> mean_by_swept(const SweepTable& table,
                                                     const std::string& solver,
                                                     const std::string& tmpl) {
  std::map<double, std::vector<double>> buckets;
  for (const SweepRow& row : table.rows) {
    if (!solver.empty() && row.solver != solver) continue;
    if (!tmpl.empty() && row.tmpl != tmpl) continue;
    if (row.status != "ok" && row.status != "optimal") continue;
    double metric = row.total;
    if (row.kind == "rejection_threshold") metric = static_cast<double>(row.threshold);
    if (row.kind == "shared_data") metric = static_cast<double>(row.shared);
    buckets[row.swept].push_back(metric);
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(buckets.size());
  for (const auto& [swept, values] : buckets) {
    out.emplace_back(swept, mean(values));
  }
  return out;
}

ThresholdResult find_rejection_threshold(int n_requests, int n_uavs, ModelTemplate tmpl,
                                         std::uint64_t seed, const ScenarioConfig& config,
                                         int depth_cap, const HeuristicParams& params) {
  if (n_requests < 1 || n_uavs < 1) {
    throw std::invalid_argument("find_rejection_threshold: counts must be positive");
  }
  const int first_depth = tmpl == ModelTemplate::Residual ? 3 : 1;
  // Deeper models only add cumulative load, so the first rejecting depth
  // bounds every deeper one.
  for (int depth = first_depth; depth <= depth_cap; ++depth) {
    const Scenario scenario = generate_scenario(n_uavs, n_requests, tmpl, depth, seed, config);
    if (run_stream(scenario, params).rejections > 0) {
      return ThresholdResult{depth - 1, false};
    }
  }
  return ThresholdResult{depth_cap, true};
}

std::optional<int> find_min_uavs(int n_requests, int depth, ModelTemplate tmpl, std::uint64_t seed,
                                 const ScenarioConfig& config, int uav_cap,
                                 const HeuristicParams& params) {
  if (n_requests < 1 || depth < 1) {
    throw std::invalid_argument("find_min_uavs: counts must be positive");
  }
  for (int n = 1; n <= uav_cap; ++n) {
    const Scenario scenario = generate_scenario(n, n_requests, tmpl, depth, seed, config);
    if (run_stream(scenario, params).rejections == 0) return n;
  }
  return std::nullopt;
}

std::vector<SharedDataRow> compare_shared_data(int depth_lo, int depth_hi, int requests_lo,
                                               int requests_hi, std::span<const std::uint64_t> seeds,
                                               int n_uavs, const ScenarioConfig& config,
                                               const HeuristicParams& params) {
  if (depth_lo > depth_hi || requests_lo > requests_hi) {
    throw std::invalid_argument("compare_shared_data: empty range");
  }
  std::vector<SharedDataRow> rows;
  for (int depth = depth_lo; depth <= depth_hi; ++depth) {
    for (int requests = requests_lo; requests <= requests_hi; ++requests) {
      for (std::uint64_t seed : seeds) {
        const ModelTemplate residual_tmpl =
            depth >= 3 ? ModelTemplate::Residual : ModelTemplate::Sequential;
        const Scenario seq =
            generate_scenario(n_uavs, requests, ModelTemplate::Sequential, depth, seed, config);
        const Scenario res = generate_scenario(n_uavs, requests, residual_tmpl, depth, seed, config);
        const StreamResult seq_stream = run_stream(seq, params);
        const StreamResult res_stream = run_stream(res, params);
        const TransmissionPlan res_plan = derive_transmissions(res, res_stream.accepted);
        SharedDataRow row;
        row.depth = depth;
        row.requests = requests;
        row.seed = seed;
        row.shared_sequential =
            shared_data(derive_transmissions(seq, seq_stream.accepted), seq, seq_stream.accepted);
        row.shared_residual = shared_data(res_plan, res, res_stream.accepted);
        row.shortcut_crossed = std::any_of(res_plan.edges.begin(), res_plan.edges.end(),
                                           [](const TransmissionEdge& e) { return e.kind == EdgeKind::Residual; });
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string shared_data_csv(std::span<const SharedDataRow> rows) {
  std::ostringstream out;
  out << "depth,requests,seed,shared_sequential_bytes,shared_residual_bytes,shortcut_crossed\n";
  for (const SharedDataRow& row : rows) {
    out << row.depth << ',' << row.requests << ',' << row.seed << ',' << row.shared_sequential
        << ',' << row.shared_residual << ',' << (row.shortcut_crossed ? 1 : 0) << '\n';
  }
  return out.str();
}

}  // namespace swarminfer
