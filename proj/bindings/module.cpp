// Python bindings for the core operations: model/swarm construction,
// latency evaluation, both solvers, the DistInference stream, and the sweep
// harness. JSON-shaped data crosses the boundary as dicts via dumps/loads.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "swarminfer/json_io.hpp"
#include "swarminfer/svg.hpp"

namespace py = pybind11;
using namespace swarminfer;

namespace {

py::object json_to_py(const json& j) {
  const py::module_ pyjson = py::module_::import("json");
  return pyjson.attr("loads")(j.dump());
}

json py_to_json(const py::object& obj) {
  const py::module_ pyjson = py::module_::import("json");
  return json::parse(pyjson.attr("dumps")(obj).cast<std::string>());
}

std::vector<Assignment> to_assignments(const std::vector<std::vector<int>>& placements) {
  std::vector<Assignment> out;
  out.reserve(placements.size());
  for (size_t r = 0; r < placements.size(); ++r) {
    out.push_back(Assignment{static_cast<int>(r), Placement{placements[r]}});
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CNN layer placement over a UAV swarm: cost model, exact solver, "
            "DistInference heuristic, and experiment sweeps";

  py::class_<LayerDims>(m, "LayerDims")
      .def(py::init([](int kernel_h, int kernel_w, int in_channels, int out_channels, int out_h,
                       int out_w, int dtype_bytes) {
             return LayerDims{kernel_h, kernel_w, in_channels, out_channels, out_h, out_w,
                              dtype_bytes};
           }),
           py::arg("kernel_h") = 1, py::arg("kernel_w") = 1, py::arg("in_channels") = 1,
           py::arg("out_channels") = 1, py::arg("out_h") = 1, py::arg("out_w") = 1,
           py::arg("dtype_bytes") = 4)
      .def_readwrite("kernel_h", &LayerDims::kernel_h)
      .def_readwrite("kernel_w", &LayerDims::kernel_w)
      .def_readwrite("in_channels", &LayerDims::in_channels)
      .def_readwrite("out_channels", &LayerDims::out_channels)
      .def_readwrite("out_h", &LayerDims::out_h)
      .def_readwrite("out_w", &LayerDims::out_w)
      .def_readwrite("dtype_bytes", &LayerDims::dtype_bytes);

  m.def("layer_memory_bytes", &layer_memory_bytes, py::arg("dims"));
  m.def("layer_multiplications", &layer_multiplications, py::arg("dims"));
  m.def("layer_output_bytes", &layer_output_bytes, py::arg("dims"));

  py::class_<WidthProfile>(m, "WidthProfile")
      .def(py::init<>())
      .def_readwrite("input_channels", &WidthProfile::input_channels)
      .def_readwrite("base_channels", &WidthProfile::base_channels)
      .def_readwrite("channel_double_every", &WidthProfile::channel_double_every)
      .def_readwrite("max_channel_factor", &WidthProfile::max_channel_factor)
      .def_readwrite("spatial", &WidthProfile::spatial)
      .def_readwrite("spatial_halve_every", &WidthProfile::spatial_halve_every)
      .def_readwrite("min_spatial", &WidthProfile::min_spatial)
      .def_readwrite("kernel", &WidthProfile::kernel)
      .def_readwrite("dtype_bytes", &WidthProfile::dtype_bytes);

  py::class_<CnnModel>(m, "CnnModel")
      .def_readonly("name", &CnnModel::name)
      .def_readonly("input_bytes", &CnnModel::input_bytes)
      .def_property_readonly("depth", &CnnModel::depth)
      .def("to_dict", [](const CnnModel& model) { return json_to_py(model_to_json(model)); })
      .def("__eq__", [](const CnnModel& a, const CnnModel& b) { return a == b; })
      .def("__repr__", [](const CnnModel& model) {
        return "<CnnModel '" + model.name + "' depth=" + std::to_string(model.depth()) +
               " shortcuts=" + std::to_string(model.residual_edges.size()) + ">";
      });

  m.def(
      "build_model_from_template",
      [](const std::string& tmpl, int depth, const WidthProfile& width, Bytes input_bytes,
         const std::string& name) {
        return build_model_from_template(model_template_from_string(tmpl), depth, width,
                                         input_bytes, name);
      },
      py::arg("template_name"), py::arg("depth"), py::arg("width") = WidthProfile{},
      py::arg("input_bytes") = kDefaultInputBytes, py::arg("name") = "");
  m.def("model_from_dict", [](const py::object& obj) { return model_from_json(py_to_json(obj)); });
  m.def("validate_model", [](const CnnModel& model) {
    std::vector<std::string> out;
    for (const ModelViolation& v : validate_model(model)) out.push_back(v.message);
    return out;
  });

  py::class_<Swarm>(m, "Swarm")
      .def_property_readonly("n_nodes", &Swarm::n_nodes)
      .def_property_readonly("n_sources", &Swarm::n_sources)
      .def("to_dict", [](const Swarm& swarm) { return json_to_py(swarm_to_json(swarm)); })
      .def("__eq__", [](const Swarm& a, const Swarm& b) { return a == b; });

  m.def(
      "build_swarm",
      [](int n_nodes, int n_sources, std::uint64_t seed, double area_size, Bytes mem_budget,
         MultCount compute_budget, double mult_per_sec) {
        return build_swarm(n_nodes, n_sources,
                           NodeBudgets{mem_budget, compute_budget, mult_per_sec}, area_size,
                           RateModel{}, seed);
      },
      py::arg("n_nodes"), py::arg("n_sources"), py::arg("seed"), py::arg("area_size") = 1000.0,
      py::arg("mem_budget") = NodeBudgets{}.mem_budget,
      py::arg("compute_budget") = NodeBudgets{}.compute_budget,
      py::arg("mult_per_sec") = NodeBudgets{}.mult_per_sec);
  m.def("link_rate", &link_rate, py::arg("swarm"), py::arg("from_node"), py::arg("to_node"));
  m.def("source_rate", &source_rate, py::arg("swarm"), py::arg("source"), py::arg("node"));

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("n_requests", &Scenario::n_requests)
      .def_property_readonly("n_nodes", [](const Scenario& s) { return s.swarm.n_nodes(); })
      .def("to_dict", [](const Scenario& s) { return json_to_py(scenario_to_json(s)); })
      .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; });

  m.def("scenario_from_dict",
        [](const py::object& obj) { return scenario_from_json(py_to_json(obj)); });
  m.def("load_scenario", &load_scenario_file, py::arg("path"));
  m.def(
      "save_scenario",
      [](const Scenario& scenario, const std::string& path) {
        save_json_file(path, scenario_to_json(scenario));
      },
      py::arg("scenario"), py::arg("path"));
  m.def("validate_scenario", &validate_scenario, py::arg("scenario"));

  m.def(
      "generate_scenario",
      [](int n_uavs, int n_requests, const std::string& tmpl, int depth, std::uint64_t seed,
         const py::object& config) {
        ScenarioConfig cfg;
        if (!config.is_none()) cfg = scenario_config_from_json(py_to_json(config));
        return generate_scenario(n_uavs, n_requests, model_template_from_string(tmpl), depth, seed,
                                 cfg);
      },
      py::arg("n_uavs"), py::arg("n_requests"), py::arg("template_name"), py::arg("depth"),
      py::arg("seed"), py::arg("config") = py::none());

  m.def(
      "total_latency",
      [](const Scenario& scenario, const std::vector<std::vector<int>>& placements) {
        const auto placed = to_assignments(placements);
        const LatencyBreakdown b = total_latency(scenario, placed);
        return py::dict(py::arg("total_s") = b.total, py::arg("source_s") = b.source_time,
                        py::arg("processing_s") = b.processing_total(),
                        py::arg("processing_per_node_s") = b.processing_time_per_node,
                        py::arg("transmission_s") = b.transmission_time);
      },
      py::arg("scenario"), py::arg("placements"),
      "Objective value of one complete placement per request (lists of node ids per layer)");
  m.def(
      "shared_data",
      [](const Scenario& scenario, const std::vector<std::vector<int>>& placements) {
        const auto placed = to_assignments(placements);
        return shared_data(derive_transmissions(scenario, placed), scenario, placed);
      },
      py::arg("scenario"), py::arg("placements"));
  m.def(
      "check_feasibility",
      [](const Scenario& scenario, const std::vector<std::vector<int>>& placements) {
        return json_to_py(feasibility_to_json(check_feasibility(scenario, to_assignments(placements))));
      },
      py::arg("scenario"), py::arg("placements"));

  m.def(
      "solve_exact",
      [](const Scenario& scenario, double time_limit_s) {
        return json_to_py(
            solve_result_to_json(solve_exact(scenario, SolveOptions{time_limit_s}), scenario));
      },
      py::arg("scenario"), py::arg("time_limit_s") = 60.0);
  m.def(
      "solve_bruteforce",
      [](const Scenario& scenario, std::int64_t guard) {
        return json_to_py(solve_result_to_json(solve_bruteforce(scenario, guard), scenario));
      },
      py::arg("scenario"), py::arg("enumeration_guard") = 10'000'000);

  m.def(
      "run_stream",
      [](const Scenario& scenario, double alpha, double beta) {
        return json_to_py(
            stream_result_to_json(run_stream(scenario, HeuristicParams{alpha, beta}), scenario));
      },
      py::arg("scenario"), py::arg("alpha") = 0.7, py::arg("beta") = 0.3);

  m.def(
      "run_sweep",
      [](const py::object& spec) {
        const SweepTable table = run_sweep(sweep_spec_from_json(py_to_json(spec)));
        return table.to_csv();
      },
      py::arg("spec"), "Run a sweep spec (dict) and return the CSV text");
  m.def(
      "find_rejection_threshold",
      [](int n_requests, int n_uavs, const std::string& tmpl, std::uint64_t seed,
         const py::object& config, int depth_cap) {
        ScenarioConfig cfg;
        if (!config.is_none()) cfg = scenario_config_from_json(py_to_json(config));
        const ThresholdResult result = find_rejection_threshold(
            n_requests, n_uavs, model_template_from_string(tmpl), seed, cfg, depth_cap);
        return py::dict(py::arg("threshold") = result.threshold, py::arg("capped") = result.capped);
      },
      py::arg("n_requests"), py::arg("n_uavs"), py::arg("template_name"), py::arg("seed"),
      py::arg("config") = py::none(), py::arg("depth_cap") = 512);
  m.def(
      "compare_shared_data",
      [](int depth_lo, int depth_hi, int requests_lo, int requests_hi,
         const std::vector<std::uint64_t>& seeds, int n_uavs, const py::object& config) {
        ScenarioConfig cfg;
        if (!config.is_none()) cfg = scenario_config_from_json(py_to_json(config));
        py::list out;
        for (const SharedDataRow& row :
             compare_shared_data(depth_lo, depth_hi, requests_lo, requests_hi, seeds, n_uavs, cfg)) {
          out.append(py::dict(
              py::arg("depth") = row.depth, py::arg("requests") = row.requests,
              py::arg("seed") = row.seed, py::arg("shared_sequential") = row.shared_sequential,
              py::arg("shared_residual") = row.shared_residual,
              py::arg("shortcut_crossed") = row.shortcut_crossed));
        }
        return out;
      },
      py::arg("depth_lo"), py::arg("depth_hi"), py::arg("requests_lo"), py::arg("requests_hi"),
      py::arg("seeds"), py::arg("n_uavs"), py::arg("config") = py::none());

#ifdef SWARMINFER_VERSION
  m.attr("__version__") = SWARMINFER_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
