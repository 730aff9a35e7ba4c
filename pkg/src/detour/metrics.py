"""Route quality metrics: connectivity, avoidance, travel time, transfers.

All checks take the route as the summary stage produced it (station names,
line labels) and resolve names against the network themselves. Anything that
fails to resolve is scored as a failure of that leg, never raised.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from datetime import datetime
from typing import Optional

from .disruption import EffectiveConstraints
from .errors import Ambiguous, NotFound, UnknownStation
from .geo import haversine_m
from .network import TransitNetwork, line_segment, normalize_name, resolve_station, walk_time
from .routes import RIDE_MODES, FormatViolation, Leg, ParseResult, Route, validate_chaining
from .traveltime import DEFAULT_DEPART, NetworkTravelTimes, TravelTimeProvider, connecting_line


@dataclass
class MetricsReport:
    connected: bool
    per_leg_connectivity: list[bool]
    avoided: bool
    offenders: list[str]
    travel_time_s: Optional[float]
    normalized_time: float
    transfers: int
    format_violation: bool
    valid: bool
    violation_reason: Optional[str] = None
    chaining_gaps: list[tuple[int, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["chaining_gaps"] = [list(g) for g in self.chaining_gaps]
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricsReport":
        doc = dict(doc)
        doc["chaining_gaps"] = [tuple(g) for g in doc.get("chaining_gaps", [])]
        return cls(**doc)


def _strict(network: TransitNetwork, name: str) -> str | None:
    try:
        return resolve_station(network, name)
    except (NotFound, Ambiguous):
        return None


def _loose(network: TransitNetwork, name: str) -> str | None:
    try:
        return resolve_station(network, name)
    except Ambiguous as exc:
        return exc.candidates[0]
    except NotFound:
        return None


def _ride_segment(network: TransitNetwork, leg: Leg, a: str, b: str) -> list[str] | None:
    line = connecting_line(network, leg.mode, leg.line or "", a, b)
    return None if line is None else line_segment(network, line.id, a, b)


def _bike_ok(network: TransitNetwork, a: str, b: str) -> bool:
    reach = network.walk_link_threshold_m
    sa, sb = network.station(a), network.station(b)
    pickup = any(
        d.bikes_available > 0 and haversine_m(sa.lat, sa.lon, d.lat, d.lon) <= reach
        for d in network.bike_stations
    )
    dropoff = any(haversine_m(sb.lat, sb.lon, d.lat, d.lon) <= reach for d in network.bike_stations)
    return pickup and dropoff


def _leg_connected(network: TransitNetwork, leg: Leg) -> bool:
    a, b = _strict(network, leg.from_name), _strict(network, leg.to_name)
    if a is None or b is None:
        return False
    if leg.mode == "walk":
        return True
    if leg.mode == "bike":
        return _bike_ok(network, a, b)
    if leg.mode in RIDE_MODES and leg.line:
        return _ride_segment(network, leg, a, b) is not None
    return False


def check_connectivity(network: TransitNetwork, route: Route) -> tuple[bool, list[bool]]:
    per_leg = [_leg_connected(network, leg) for leg in route.legs]
    return all(per_leg), per_leg


def check_avoidance(
    network: TransitNetwork, constraints: EffectiveConstraints, route: Route
) -> tuple[bool, list[str]]:
    """Fail if the route rides a disabled line or touches a forbidden station.

    Ride legs that connect are expanded to every stop passed; other legs only
    contribute their endpoints.
    """
    offenders: list[str] = []

    def hit(item: str) -> None:
        if item not in offenders:
            offenders.append(item)

    for leg in route.legs:
        if leg.mode in RIDE_MODES and leg.line:
            for line in network.lines_with_label(leg.line, leg.mode):
                if line.id in constraints.disabled_lines:
                    hit(line.id)
        a, b = _strict(network, leg.from_name), _strict(network, leg.to_name)
        touched: list[str] = [s for s in (a, b) if s is not None]
        if a is not None and b is not None and leg.mode in RIDE_MODES and leg.line:
            segment = _ride_segment(network, leg, a, b)
            if segment is not None:
                touched = segment
        for sid in touched:
            if sid in constraints.forbidden_stations:
                hit(sid)
    return not offenders, offenders


def _leg_endpoints(network: TransitNetwork, route: Route) -> list[tuple[str, str]]:
    ends = [(_loose(network, l.from_name), _loose(network, l.to_name)) for l in route.legs]
    out = []
    for i, (a, b) in enumerate(ends):
        if a is None and b is None:
            raise UnknownStation(f"leg {i}: neither {route.legs[i].from_name!r} nor "
                                 f"{route.legs[i].to_name!r} is a known station")
        if a is None and i > 0:
            a = ends[i - 1][1]
        if b is None and i + 1 < len(ends):
            b = ends[i + 1][0]
        if a is None or b is None:
            raise UnknownStation(f"leg {i}: cannot place {route.legs[i].from_name!r} -> "
                                 f"{route.legs[i].to_name!r}")
        out.append((a, b))
    return out


def route_travel_time(
    network: TransitNetwork,
    route: Route,
    provider: TravelTimeProvider | None = None,
    depart: datetime = DEFAULT_DEPART,
) -> float:
    """Sum of per-leg estimates; unavailable or disconnected legs cost a straight walk."""
    provider = provider or NetworkTravelTimes(network)
    total = 0.0
    for leg, (a, b) in zip(route.legs, _leg_endpoints(network, route)):
        seconds = None
        if leg.mode != "walk" and _leg_connected(network, leg):
            seconds = provider.estimate(leg.mode, leg.line, a, b, depart)
        if seconds is None:
            seconds = walk_time(network, a, b)
        total += seconds
    return total


def normalized_time(
    network: TransitNetwork, origin: str, dest: str, travel_time_s: float | None, valid: bool = True
) -> float:
    """Travel time over the straight walking time from origin to destination, capped at 1."""
    baseline = walk_time(network, origin, dest)
    if not valid or travel_time_s is None:
        return 1.0
    if baseline == 0:
        return 0.0 if travel_time_s == 0 else 1.0
    return min(1.0, travel_time_s / baseline)


def count_transfers(route: Route) -> int:
    return sum(1 for a, b in zip(route.legs, route.legs[1:]) if a.carrier != b.carrier)


def _names_station(network: TransitNetwork, name: str, station_id: str) -> bool:
    sid = _strict(network, name)
    if sid is not None:
        return sid == station_id
    return normalize_name(name) == normalize_name(network.station(station_id).canonical_name)


def evaluate(
    network: TransitNetwork,
    constraints: EffectiveConstraints,
    origin: str,
    dest: str,
    result: ParseResult,
    provider: TravelTimeProvider | None = None,
    depart: datetime = DEFAULT_DEPART,
) -> MetricsReport:
    """Score one summary-stage result for a trip from ``origin`` to ``dest`` (station ids)."""
    network.station(origin)
    network.station(dest)

    if isinstance(result, FormatViolation):
        return MetricsReport(
            connected=False, per_leg_connectivity=[], avoided=False, offenders=[],
            travel_time_s=None, normalized_time=1.0, transfers=0, format_violation=True,
            valid=False, violation_reason=result.reason.value,
        )

    route = result
    connected, per_leg = check_connectivity(network, route)
    avoided, offenders = check_avoidance(network, constraints, route)
    gaps = validate_chaining(route)
    try:
        travel = route_travel_time(network, route, provider, depart)
    except UnknownStation:
        travel = None

    if not route.legs:
        valid = origin == dest
    else:
        valid = (
            not gaps
            and travel is not None
            and _names_station(network, route.legs[0].from_name, origin)
            and _names_station(network, route.legs[-1].to_name, dest)
        )
    return MetricsReport(
        connected=connected,
        per_leg_connectivity=per_leg,
        avoided=avoided,
        offenders=offenders,
        travel_time_s=travel,
        normalized_time=normalized_time(network, origin, dest, travel, valid),
        transfers=count_transfers(route),
        format_violation=False,
        valid=valid,
        chaining_gaps=gaps,
    )
