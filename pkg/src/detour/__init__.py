"""Disruption-aware transit routing, an LLM route-planning pipeline, and route metrics."""

from .disruption import DangerZone, DisruptionSpec, EffectiveConstraints, compile_constraints
from .metrics import (
    MetricsReport,
    check_avoidance,
    check_connectivity,
    count_transfers,
    evaluate,
    normalized_time,
    route_travel_time,
)
from .network import (
    BikeStation,
    Line,
    Station,
    TransitNetwork,
    line_segment,
    load_network,
    resolve_station,
    stations_in_zone,
    walk_time,
)
from .gtfs import import_gtfs
from .router import Objective, PlanResult, brute_force_plan, plan
from .routes import FormatViolation, Leg, Route, parse_route, serialize_route, validate_chaining

__version__ = "0.1.0"

__all__ = [
    "BikeStation",
    "DangerZone",
    "DisruptionSpec",
    "EffectiveConstraints",
    "FormatViolation",
    "Leg",
    "Line",
    "MetricsReport",
    "Objective",
    "PlanResult",
    "Route",
    "Station",
    "TransitNetwork",
    "brute_force_plan",
    "check_avoidance",
    "check_connectivity",
    "compile_constraints",
    "count_transfers",
    "evaluate",
    "import_gtfs",
    "line_segment",
    "load_network",
    "normalized_time",
    "parse_route",
    "plan",
    "resolve_station",
    "route_travel_time",
    "serialize_route",
    "stations_in_zone",
    "validate_chaining",
    "walk_time",
]
