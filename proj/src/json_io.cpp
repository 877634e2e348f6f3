#include "swarminfer/json_io.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace swarminfer {

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw std::runtime_error(context + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end()) fail(context, std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : it->get<T>();
}

json vec2_to_json(const Vec2& v) { return json::array({v.x, v.y}); }

Vec2 vec2_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2) fail(context, "position must be [x, y]");
  return Vec2{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

json model_to_json(const CnnModel& model) {
  json layers = json::array();
  for (const LayerProfile& layer : model.layers) {
    layers.push_back({{"memory_bytes", layer.memory_bytes},
                      {"multiplications", layer.multiplications},
                      {"output_bytes", layer.output_bytes}});
  }
  json edges = json::array();
  for (const ResidualEdge& edge : model.residual_edges) {
    edges.push_back({{"target", edge.target}, {"stride", edge.stride}});
  }
  return json{{"name", model.name},
              {"input_bytes", model.input_bytes},
              {"layers", std::move(layers)},
              {"residual_edges", std::move(edges)}};
}

CnnModel model_from_json(const json& j) {
  const std::string context = "model";
  CnnModel model;
  model.name = get_or<std::string>(j, "name", "");
  model.input_bytes = require(j, "input_bytes", context).get<Bytes>();
  int index = 1;
  for (const json& lj : require(j, "layers", context)) {
    model.layers.push_back(LayerProfile{
        .index = index++,
        .memory_bytes = require(lj, "memory_bytes", context + " layer").get<Bytes>(),
        .multiplications = require(lj, "multiplications", context + " layer").get<MultCount>(),
        .output_bytes = require(lj, "output_bytes", context + " layer").get<Bytes>(),
    });
  }
  for (const json& ej : get_or<json>(j, "residual_edges", json::array())) {
    ResidualEdge edge;
    edge.target = require(ej, "target", context + " residual_edge").get<int>();
    edge.stride = require(ej, "stride", context + " residual_edge").get<int>();
    // Payload is derived: the output of the source layer.
    if (edge.target >= 1 && edge.target <= model.depth() && edge.stride >= 1 &&
        edge.stride < edge.target) {
      edge.payload_bytes = model.layer(edge.source()).output_bytes;
    }
    model.residual_edges.push_back(edge);
  }
  return model;
}

json swarm_to_json(const Swarm& swarm) {
  json nodes = json::array();
  for (const UavNode& n : swarm.nodes) {
    nodes.push_back({{"id", n.id},
                     {"mem_budget", n.mem_budget},
                     {"compute_budget", n.compute_budget},
                     {"mult_per_sec", n.mult_per_sec},
                     {"position", vec2_to_json(n.position)}});
  }
  json sources = json::array();
  for (const SourceNode& s : swarm.sources) {
    sources.push_back({{"id", s.id}, {"position", vec2_to_json(s.position)}});
  }
  json node_rates = json::array();
  for (int i = 0; i < swarm.n_nodes(); ++i) {
    json row = json::array();
    for (int k = 0; k < swarm.n_nodes(); ++k) row.push_back(swarm.links.node_rate(i, k));
    node_rates.push_back(std::move(row));
  }
  json source_rates = json::array();
  for (int s = 0; s < swarm.n_sources(); ++s) {
    json row = json::array();
    for (int i = 0; i < swarm.n_nodes(); ++i) row.push_back(swarm.links.source_rate(s, i));
    source_rates.push_back(std::move(row));
  }
  return json{{"nodes", std::move(nodes)},
              {"sources", std::move(sources)},
              {"rates",
               {{"kind", "explicit"},
                {"node_rates", std::move(node_rates)},
                {"source_rates", std::move(source_rates)}}}};
}

Swarm swarm_from_json(const json& j) {
  const std::string context = "swarm";
  Swarm swarm;
  int next_id = 0;
  for (const json& nj : require(j, "nodes", context)) {
    UavNode node;
    node.id = get_or<int>(nj, "id", next_id);
    node.mem_budget = require(nj, "mem_budget", context + " node").get<Bytes>();
    node.compute_budget = require(nj, "compute_budget", context + " node").get<MultCount>();
    node.mult_per_sec = require(nj, "mult_per_sec", context + " node").get<double>();
    node.position = vec2_from_json(get_or<json>(nj, "position", json::array({0.0, 0.0})), context);
    if (node.id != next_id) fail(context, "node ids must be 0..n-1 in order");
    ++next_id;
    swarm.nodes.push_back(node);
  }
  if (swarm.nodes.empty()) fail(context, "at least one node required");
  next_id = 0;
  for (const json& sj : get_or<json>(j, "sources", json::array())) {
    SourceNode source;
    source.id = get_or<int>(sj, "id", next_id);
    source.position = vec2_from_json(get_or<json>(sj, "position", json::array({0.0, 0.0})), context);
    if (source.id != next_id) fail(context, "source ids must be 0..n-1 in order");
    ++next_id;
    swarm.sources.push_back(source);
  }
  if (swarm.sources.empty()) fail(context, "at least one source required");

  const json& rates = require(j, "rates", context);
  const std::string kind = require(rates, "kind", context + " rates").get<std::string>();
  RateModel model;
  if (kind == "explicit") {
    model.kind = RateModel::Kind::Explicit;
    for (const json& row : require(rates, "node_rates", context)) {
      for (const json& v : row) model.node_rates.push_back(v.get<double>());
    }
    for (const json& row : require(rates, "source_rates", context)) {
      for (const json& v : row) model.source_rates.push_back(v.get<double>());
    }
    apply_rate_model(swarm, model, 0);
  } else if (kind == "distance") {
    model.kind = RateModel::Kind::Distance;
    model.rho_ref = get_or<double>(rates, "rho_ref", model.rho_ref);
    model.d_ref = get_or<double>(rates, "d_ref", model.d_ref);
    model.rho_min = get_or<double>(rates, "rho_min", model.rho_min);
    model.rho_max = get_or<double>(rates, "rho_max", model.rho_max);
    apply_rate_model(swarm, model, 0);
  } else if (kind == "uniform") {
    model.kind = RateModel::Kind::Uniform;
    model.lo = get_or<double>(rates, "lo", model.lo);
    model.hi = get_or<double>(rates, "hi", model.hi);
    apply_rate_model(swarm, model, require(rates, "seed", context + " uniform rates").get<std::uint64_t>());
  } else {
    fail(context, "unknown rate kind '" + kind + "'");
  }
  return swarm;
}

json scenario_to_json(const Scenario& scenario) {
  json models = json::array();
  for (const CnnModel& m : scenario.models) models.push_back(model_to_json(m));
  json requests = json::array();
  for (const InferenceRequest& r : scenario.requests) {
    requests.push_back({{"id", r.id},
                        {"model", r.model_index},
                        {"source", r.source},
                        {"source_bytes", r.source_bytes}});
  }
  return json{{"swarm", swarm_to_json(scenario.swarm)},
              {"models", std::move(models)},
              {"requests", std::move(requests)}};
}

Scenario scenario_from_json(const json& j) {
  const std::string context = "scenario";
  Scenario scenario;
  scenario.swarm = swarm_from_json(require(j, "swarm", context));
  std::unordered_map<std::string, int> by_name;
  for (const json& mj : require(j, "models", context)) {
    CnnModel model = model_from_json(mj);
    if (!model.name.empty()) {
      if (!by_name.emplace(model.name, static_cast<int>(scenario.models.size())).second) {
        fail(context, "duplicate model name '" + model.name + "'");
      }
    }
    scenario.models.push_back(std::move(model));
  }
  if (scenario.models.empty()) fail(context, "at least one model required");
  int next_id = 0;
  for (const json& rj : require(j, "requests", context)) {
    InferenceRequest request;
    request.id = get_or<int>(rj, "id", next_id++);
    const json& ref = require(rj, "model", context + " request");
    if (ref.is_string()) {
      const auto it = by_name.find(ref.get<std::string>());
      if (it == by_name.end()) fail(context, "request references unknown model '" + ref.get<std::string>() + "'");
      request.model_index = it->second;
    } else {
      request.model_index = ref.get<int>();
      if (request.model_index < 0 || request.model_index >= static_cast<int>(scenario.models.size())) {
        fail(context, "request model index out of range");
      }
    }
    request.source = get_or<int>(rj, "source", 0);
    request.source_bytes =
        get_or<Bytes>(rj, "source_bytes", scenario.models[static_cast<size_t>(request.model_index)].input_bytes);
    scenario.requests.push_back(request);
  }
  return scenario;
}

json breakdown_to_json(const LatencyBreakdown& b) {
  return json{{"total_s", b.total},
              {"source_s", b.source_time},
              {"processing_s", b.processing_total()},
              {"processing_per_node_s", b.processing_time_per_node},
              {"transmission_s", b.transmission_time}};
}

json plan_to_json(const TransmissionPlan& plan) {
  json edges = json::array();
  for (const TransmissionEdge& e : plan.edges) {
    edges.push_back({{"request", e.request},
                     {"from", e.from},
                     {"to", e.to},
                     {"target_layer", e.target_layer},
                     {"stride", e.stride},
                     {"payload_bytes", e.payload_bytes},
                     {"kind", e.kind == EdgeKind::Pipeline ? "pipeline" : "residual"}});
  }
  return edges;
}

json feasibility_to_json(std::span<const FeasibilityViolation> violations) {
  json out = json::array();
  for (const FeasibilityViolation& v : violations) {
    const char* kind = v.kind == FeasibilityViolation::Kind::Memory     ? "memory"
                       : v.kind == FeasibilityViolation::Kind::Compute ? "compute"
                                                                       : "assignment";
    out.push_back({{"kind", kind},
                   {"node", v.node},
                   {"request", v.request},
                   {"layer", v.layer},
                   {"message", v.message}});
  }
  return out;
}

json model_violations_to_json(std::span<const ModelViolation> violations) {
  json out = json::array();
  for (const ModelViolation& v : violations) {
    out.push_back({{"layer", v.layer}, {"message", v.message}});
  }
  return out;
}

json solve_result_to_json(const SolveResult& result, const Scenario& scenario) {
  json placements = json::array();
  if (result.has_solution()) {
    for (const Assignment& a : result.assignments) {
      placements.push_back({{"request_id", scenario.requests[static_cast<size_t>(a.request_index)].id},
                            {"nodes", a.placement.node_of_layer}});
    }
  }
  json out{{"status", to_string(result.status)},
           {"proven_optimal", result.proven_optimal()},
           {"nodes_explored", result.nodes_explored},
           {"placements", std::move(placements)}};
  if (result.has_solution()) {
    out["breakdown"] = breakdown_to_json(result.breakdown);
    out["transmissions"] = plan_to_json(derive_transmissions(scenario, result.assignments));
    out["shared_data_bytes"] = shared_data(derive_transmissions(scenario, result.assignments),
                                           scenario, result.assignments);
  }
  return out;
}

json stream_result_to_json(const StreamResult& result, const Scenario& scenario) {
  json outcomes = json::array();
  for (const AssignOutcome& o : result.outcomes) {
    json oj{{"request_id", scenario.requests[static_cast<size_t>(o.request_index)].id},
            {"accepted", o.accepted}};
    if (o.accepted) {
      oj["nodes"] = o.placement.node_of_layer;
      oj["latency_contribution_s"] = o.latency_contribution;
    } else {
      oj["rejected_at_layer"] = o.rejected_at_layer;
      oj["rejection_reason"] = o.rejection_reason;
    }
    outcomes.push_back(std::move(oj));
  }
  return json{{"rejections", result.rejections},
              {"aggregate", breakdown_to_json(result.aggregate)},
              {"shared_data_bytes",
               shared_data(derive_transmissions(scenario, result.accepted), scenario, result.accepted)},
              {"outcomes", std::move(outcomes)}};
}

json scenario_config_to_json(const ScenarioConfig& config) {
  json rates{{"kind", config.rate_model.kind == RateModel::Kind::Distance    ? "distance"
              : config.rate_model.kind == RateModel::Kind::Uniform ? "uniform"
                                                                            : "explicit"}};
  if (config.rate_model.kind == RateModel::Kind::Distance) {
    rates["rho_ref"] = config.rate_model.rho_ref;
    rates["d_ref"] = config.rate_model.d_ref;
    rates["rho_min"] = config.rate_model.rho_min;
    rates["rho_max"] = config.rate_model.rho_max;
  } else if (config.rate_model.kind == RateModel::Kind::Uniform) {
    rates["lo"] = config.rate_model.lo;
    rates["hi"] = config.rate_model.hi;
  }
  return json{{"mem_budget", config.budgets.mem_budget},
              {"compute_budget", config.budgets.compute_budget},
              {"mult_per_sec", config.budgets.mult_per_sec},
              {"area_size", config.area_size},
              {"input_bytes", config.input_bytes},
              {"rate_model", std::move(rates)},
              {"width",
               {{"input_channels", config.width.input_channels},
                {"base_channels", config.width.base_channels},
                {"channel_double_every", config.width.channel_double_every},
                {"max_channel_factor", config.width.max_channel_factor},
                {"spatial", config.width.spatial},
                {"spatial_halve_every", config.width.spatial_halve_every},
                {"min_spatial", config.width.min_spatial},
                {"kernel", config.width.kernel},
                {"dtype_bytes", config.width.dtype_bytes}}}};
}

ScenarioConfig scenario_config_from_json(const json& j) {
  ScenarioConfig config;
  config.budgets.mem_budget = get_or<Bytes>(j, "mem_budget", config.budgets.mem_budget);
  config.budgets.compute_budget = get_or<MultCount>(j, "compute_budget", config.budgets.compute_budget);
  config.budgets.mult_per_sec = get_or<double>(j, "mult_per_sec", config.budgets.mult_per_sec);
  config.area_size = get_or<double>(j, "area_size", config.area_size);
  config.input_bytes = get_or<Bytes>(j, "input_bytes", config.input_bytes);
  if (const auto it = j.find("rate_model"); it != j.end()) {
    const std::string kind = get_or<std::string>(*it, "kind", "distance");
    if (kind == "distance") {
      config.rate_model.kind = RateModel::Kind::Distance;
      config.rate_model.rho_ref = get_or<double>(*it, "rho_ref", config.rate_model.rho_ref);
      config.rate_model.d_ref = get_or<double>(*it, "d_ref", config.rate_model.d_ref);
      config.rate_model.rho_min = get_or<double>(*it, "rho_min", config.rate_model.rho_min);
      config.rate_model.rho_max = get_or<double>(*it, "rho_max", config.rate_model.rho_max);
    } else if (kind == "uniform") {
      config.rate_model.kind = RateModel::Kind::Uniform;
      config.rate_model.lo = get_or<double>(*it, "lo", config.rate_model.lo);
      config.rate_model.hi = get_or<double>(*it, "hi", config.rate_model.hi);
    } else {
      fail("config rate_model", "unsupported kind '" + kind + "' (generator configs take distance|uniform)");
    }
  }
  if (const auto it = j.find("width"); it != j.end()) {
    WidthProfile& w = config.width;
    w.input_channels = get_or<int>(*it, "input_channels", w.input_channels);
    w.base_channels = get_or<int>(*it, "base_channels", w.base_channels);
    w.channel_double_every = get_or<int>(*it, "channel_double_every", w.channel_double_every);
    w.max_channel_factor = get_or<int>(*it, "max_channel_factor", w.max_channel_factor);
    w.spatial = get_or<int>(*it, "spatial", w.spatial);
    w.spatial_halve_every = get_or<int>(*it, "spatial_halve_every", w.spatial_halve_every);
    w.min_spatial = get_or<int>(*it, "min_spatial", w.min_spatial);
    w.kernel = get_or<int>(*it, "kernel", w.kernel);
    w.dtype_bytes = get_or<int>(*it, "dtype_bytes", w.dtype_bytes);
  }
  return config;
}

json sweep_spec_to_json(const SweepSpec& spec) {
  return json{{"kind", to_string(spec.kind)},
              {"values", spec.values},
              {"seeds", spec.seeds},
              {"solvers", spec.solvers},
              {"n_uavs", spec.n_uavs},
              {"n_requests", spec.n_requests},
              {"depth", spec.depth},
              {"template", to_string(spec.tmpl)},
              {"alpha", spec.params.alpha},
              {"beta", spec.params.beta},
              {"time_limit_s", spec.time_limit_seconds},
              {"depth_cap", spec.depth_cap},
              {"config", scenario_config_to_json(spec.config)},
              {"out", spec.out_path}};
}

SweepSpec sweep_spec_from_json(const json& j) {
  const std::string context = "sweep spec";
  SweepSpec spec;
  spec.kind = sweep_kind_from_string(require(j, "kind", context).get<std::string>());
  for (const json& v : require(j, "values", context)) spec.values.push_back(v.get<double>());
  if (const auto it = j.find("seeds"); it != j.end() && it->is_object()) {
    const auto count = require(*it, "count", context + " seeds").get<int>();
    const auto base = get_or<std::uint64_t>(*it, "base", 1);
    for (int i = 0; i < count; ++i) spec.seeds.push_back(base + static_cast<std::uint64_t>(i));
  } else {
    for (const json& v : require(j, "seeds", context)) spec.seeds.push_back(v.get<std::uint64_t>());
  }
  spec.solvers = get_or<std::vector<std::string>>(j, "solvers", {});
  spec.n_uavs = get_or<int>(j, "n_uavs", spec.n_uavs);
  spec.n_requests = get_or<int>(j, "n_requests", spec.n_requests);
  spec.depth = get_or<int>(j, "depth", spec.depth);
  spec.tmpl = model_template_from_string(get_or<std::string>(j, "template", "sequential"));
  spec.params.alpha = get_or<double>(j, "alpha", spec.params.alpha);
  spec.params.beta = get_or<double>(j, "beta", spec.params.beta);
  spec.time_limit_seconds = get_or<double>(j, "time_limit_s", spec.time_limit_seconds);
  spec.depth_cap = get_or<int>(j, "depth_cap", spec.depth_cap);
  if (const auto it = j.find("config"); it != j.end()) {
    spec.config = scenario_config_from_json(*it);
  }
  spec.out_path = get_or<std::string>(j, "out", "");
  return spec;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

namespace {

template <typename Fn>
auto with_context(const std::string& path, Fn fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw std::runtime_error("'" + path + "': " + e.what());
  } catch (const std::runtime_error& e) {
    // load_json_file errors already name the file.
    if (std::string(e.what()).find(path) != std::string::npos) throw;
    throw std::runtime_error("'" + path + "': " + e.what());
  }
}

}  // namespace

Scenario load_scenario_file(const std::string& path) {
  return with_context(path, [&] {
    Scenario scenario = scenario_from_json(load_json_file(path));
    const auto problems = validate_scenario(scenario);
    if (!problems.empty()) fail("scenario", problems.front());
    return scenario;
  });
}

CnnModel load_model_file(const std::string& path) {
  return with_context(path, [&] { return model_from_json(load_json_file(path)); });
}

Swarm load_swarm_file(const std::string& path) {
  return with_context(path, [&] { return swarm_from_json(load_json_file(path)); });
}

SweepSpec load_sweep_spec_file(const std::string& path) {
  return with_context(path, [&] { return sweep_spec_from_json(load_json_file(path)); });
}

void save_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace swarminfer
