"""Visibility, colored-visibility and Voronoi-visibility maps of 1.5D terrains.

The functional core lives in the submodules (geometry, viewshed, vorvis,
oracle, generators); the estimator classes wrap it in a scikit-learn style
fit/predict interface.
"""

from .errors import (
    ConstructionFailedError,
    InconsistentEventListError,
    InvalidKError,
    InvalidViewpointError,
    NonMonotoneError,
    NoViewpointsError,
    OutOfRangeError,
    ParseError,
    TerravisError,
    TooShortError,
)
from .estimators import (
    ColoredVisibilityEstimator,
    VisibilityEstimator,
    VoronoiVisibilityEstimator,
)
from .generators import InstanceSpec, gen_fig4b, gen_random_terrain
from .geometry import (
    GeneralPositionReport,
    Terrain,
    TerrainPoint,
    ViewpointSet,
    check_general_position,
    make_viewpoints,
    metric_distance,
    point_at_x,
    ray_first_hit,
    sees,
    sees_in_mode,
    validate_terrain,
)
from .intervals import ColoredMap, IntervalMap, KOrderMap, SweepStats, VoronoiMap
from .oracle import (
    ComplexityCounts,
    check_theorem_bound,
    compare_map_to_oracle,
    count_complexities,
    oracle_map,
    verify_against_oracle,
)
from .tolerance import get_epsilon, set_epsilon
from .viewshed import compute_colvis, compute_vis, viewshed
from .vorvis import (
    Event,
    EventList,
    build_event_list,
    candidate_type3_events,
    compute_kvorvis,
    compute_rstar,
    compute_rstar_info,
    compute_vorvis,
    op_counters,
    sweep_vorvis,
)

__version__ = "0.1.0"

__all__ = [
    "ColoredMap",
    "ColoredVisibilityEstimator",
    "ComplexityCounts",
    "ConstructionFailedError",
    "Event",
    "EventList",
    "GeneralPositionReport",
    "InconsistentEventListError",
    "InstanceSpec",
    "IntervalMap",
    "InvalidKError",
    "InvalidViewpointError",
    "KOrderMap",
    "NoViewpointsError",
    "NonMonotoneError",
    "OutOfRangeError",
    "ParseError",
    "SweepStats",
    "Terrain",
    "TerrainPoint",
    "TerravisError",
    "TooShortError",
    "ViewpointSet",
    "VisibilityEstimator",
    "VoronoiMap",
    "VoronoiVisibilityEstimator",
    "build_event_list",
    "candidate_type3_events",
    "check_general_position",
    "check_theorem_bound",
    "compare_map_to_oracle",
    "compute_colvis",
    "compute_kvorvis",
    "compute_rstar",
    "compute_rstar_info",
    "compute_vis",
    "compute_vorvis",
    "count_complexities",
    "gen_fig4b",
    "gen_random_terrain",
    "get_epsilon",
    "make_viewpoints",
    "metric_distance",
    "op_counters",
    "oracle_map",
    "point_at_x",
    "ray_first_hit",
    "sees",
    "sees_in_mode",
    "set_epsilon",
    "sweep_vorvis",
    "validate_terrain",
    "verify_against_oracle",
    "viewshed",
]
