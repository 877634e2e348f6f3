"""CNN layer placement over a UAV swarm.

The heavy lifting lives in the compiled extension; this package re-exports
the core operations: model/swarm/scenario construction, the exact
branch-and-bound solver with its brute-force oracle, the DistInference
greedy stream, latency evaluation, and the sweep harness.
"""

from swarminfer._core import (  # noqa: F401
    CnnModel,
    LayerDims,
    Scenario,
    Swarm,
    WidthProfile,
    __version__,
    build_model_from_template,
    build_swarm,
    check_feasibility,
    compare_shared_data,
    find_rejection_threshold,
    generate_scenario,
    layer_memory_bytes,
    layer_multiplications,
    layer_output_bytes,
    link_rate,
    load_scenario,
    model_from_dict,
    run_stream,
    run_sweep,
    save_scenario,
    scenario_from_dict,
    shared_data,
    solve_bruteforce,
    solve_exact,
    source_rate,
    total_latency,
    validate_model,
    validate_scenario,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
