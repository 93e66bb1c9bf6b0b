"""Parasitic-force simulation and pulley placement optimisation for passive
elastic-tendon treadmill add-ons."""

__version__ = "0.1.0"

from .forces import (  # noqa: E402
    ForceSummary,
    ForceTimeSeries,
    TendonSystem,
    calibrate_slack,
    parasitic_cost,
    simulate_forces,
    summarize_forces,
)
from .gait import (  # noqa: E402
    GaitEvents,
    GaitTrajectory,
    StepMetrics,
    detect_events,
    load_trajectory,
    resample,
    save_trajectory,
    step_metrics,
    synthesize_gait,
)
from .geometry import (  # noqa: E402
    PARAM_NAMES,
    ElasticTendon,
    PulleyLayout,
    RoutingMode,
    TendonRouting,
    build_layout,
    leg_force,
    mirror_layout,
    path_length,
    tendon_tension,
)
from .optimizer import (  # noqa: E402
    GaParams,
    OptimizationResult,
    ParameterBounds,
    cost,
    flatness_probe,
    grid_search,
    optimize_layout,
)
