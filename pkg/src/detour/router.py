"""Deterministic constrained journey planner.

The search runs over (station, carrier) states, where the carrier is the line
being ridden, walking, or the not-yet-departed start state. Forbidden stations
are removed from the graph outright, so a route can never pass through one
even without alighting. Bike lines are not ridden by the planner.

Optimal routes are ranked by a total order:

* min-time: time cost (ride + walk + penalty per transfer), transfers,
  leg labels, visited station ids, hop carrier ids;
* min-stops: stations visited first, then the same chain.

The trailing keys only exist to make ties reproducible.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass

from .disruption import NO_CONSTRAINTS, EffectiveConstraints
from .errors import ForbiddenEndpoint, NoRoute, TooLarge, UnknownStation
from .geo import haversine_m
from .network import TransitNetwork, walk_links
from .routes import Leg, Route

TRANSFER_PENALTY_S = 300.0

WALK = "~walk"
START = "~start"

_LINE_LEG_MODE = {"subway": "subway", "bus": "bus", "walk-network": "walk"}


class Objective(str, enum.Enum):
    MIN_TIME = "min-time"
    MIN_STOPS = "min-stops"


@dataclass(frozen=True)
class PlanResult:
    route: Route
    total_cost_s: float
    transfers: int
    stations_visited: int
    path: tuple[str, ...] = ()


@dataclass(frozen=True)
class _Hop:
    start: str
    end: str
    carrier: str
    mode: str
    label: str
    cost: float


def _check_endpoints(network: TransitNetwork, constraints: EffectiveConstraints, origin: str, dest: str) -> None:
    for sid in (origin, dest):
        if not network.has_station(sid):
            raise UnknownStation(f"unknown station id {sid!r}")
        if sid in constraints.forbidden_stations:
            raise ForbiddenEndpoint(f"station {sid!r} is forbidden")


def _legs(network: TransitNetwork, hops: list[_Hop]) -> Route:
    legs: list[Leg] = []
    run: list[_Hop] = []
    for hop in hops + [None]:  # type: ignore[list-item]
        if run and (hop is None or hop.carrier != run[-1].carrier):
            first, last = run[0], run[-1]
            legs.append(Leg(
                mode=first.mode,
                line=first.label if first.mode != "walk" else None,
                from_name=network.station(first.start).canonical_name,
                to_name=network.station(last.end).canonical_name,
            ))
            run = []
        if hop is not None:
            run.append(hop)
    return Route(tuple(legs))


def _trivial(origin: str) -> PlanResult:
    return PlanResult(Route(()), 0.0, 0, 1, (origin,))


def _ride_lines(network: TransitNetwork, constraints: EffectiveConstraints):
    for line in network.lines:
        if line.id in constraints.disabled_lines or line.mode not in _LINE_LEG_MODE:
            continue
        mode = _LINE_LEG_MODE[line.mode]
        carrier = WALK if mode == "walk" else line.id
        label = "" if mode == "walk" else line.display_label
        yield line, mode, carrier, label


def _adjacency(network: TransitNetwork, constraints: EffectiveConstraints) -> dict[str, list[_Hop]]:
    banned = constraints.forbidden_stations
    adj: dict[str, list[_Hop]] = {s.id: [] for s in network.stations if s.id not in banned}
    for line, mode, carrier, label in _ride_lines(network, constraints):
        for a, b, t in zip(line.stops, line.stops[1:], line.hop_times):
            if a in banned or b in banned:
                continue
            adj[a].append(_Hop(a, b, carrier, mode, label, t))
            if line.bidirectional:
                adj[b].append(_Hop(b, a, carrier, mode, label, t))
    for a, b, d in walk_links(network):
        if a in banned or b in banned:
            continue
        t = d / network.walking_speed_mps
        adj[a].append(_Hop(a, b, WALK, "walk", "", t))
        adj[b].append(_Hop(b, a, WALK, "walk", "", t))
    return adj


def plan(
    network: TransitNetwork,
    constraints: EffectiveConstraints = NO_CONSTRAINTS,
    origin: str = "",
    dest: str = "",
    objective: Objective = Objective.MIN_TIME,
    *,
    transfer_penalty_s: float = TRANSFER_PENALTY_S,
) -> PlanResult:
    """Best route from ``origin`` to ``dest`` (station ids) under ``constraints``."""
    objective = Objective(objective)
    _check_endpoints(network, constraints, origin, dest)
    if origin == dest:
        return _trivial(origin)

    adj = _adjacency(network, constraints)
    min_stops = objective is Objective.MIN_STOPS

    def key(cost, transfers, labels, stations, carriers):
        head = (cost, transfers, labels, stations, carriers)
        return (len(stations),) + head if min_stops else head

    # entry: key, state, cost, transfers, labels, stations, carriers, hops
    heap = [(key(0.0, 0, (), (origin,), ()), (origin, START), 0.0, 0, (), (origin,), (), ())]
    settled: set[tuple[str, str]] = set()
    best: dict[tuple[str, str], tuple] = {}
    while heap:
        k, state, cost, transfers, labels, stations, carriers, hops = heapq.heappop(heap)
        if state in settled:
            continue
        settled.add(state)
        here, carrier = state
        if here == dest:
            route = _legs(network, list(hops))
            return PlanResult(route, cost, transfers, len(stations), stations)
        on_path = set(stations)
        for hop in adj[here]:
            if hop.end in on_path:
                continue
            nxt = (hop.end, hop.carrier)
            if nxt in settled:
                continue
            change = carrier != START and hop.carrier != carrier
            c = cost
            if change:
                c = c + transfer_penalty_s
            c = c + hop.cost
            new_labels = labels + (hop.label,) if (carrier == START or change) else labels
            args = (c, transfers + change, new_labels, stations + (hop.end,), carriers + (hop.carrier,))
            nk = key(*args)
            if nxt in best and best[nxt] <= nk:
                continue
            best[nxt] = nk
            heapq.heappush(heap, (nk, nxt, *args, hops + (hop,)))
    raise NoRoute(f"no route from {origin!r} to {dest!r} under the given constraints")


# -- exhaustive reference -----------------------------------------------------

def _hop_options(network: TransitNetwork, constraints: EffectiveConstraints, u: str, v: str) -> list[_Hop]:
    """Every way to move directly from ``u`` to ``v``, read straight off the network."""
    out = []
    for line, mode, carrier, label in _ride_lines(network, constraints):
        for k in range(len(line.stops) - 1):
            a, b = line.stops[k], line.stops[k + 1]
            if (a, b) == (u, v) or (line.bidirectional and (a, b) == (v, u)):
                out.append(_Hop(u, v, carrier, mode, label, line.hop_times[k]))
    x, y = (u, v) if u < v else (v, u)
    sx, sy = network.station(x), network.station(y)
    d = haversine_m(sx.lat, sx.lon, sy.lat, sy.lon)
    if d <= network.walk_link_threshold_m:
        out.append(_Hop(u, v, WALK, "walk", "", d / network.walking_speed_mps))
    return out


def _score(hops: list[_Hop], origin: str, objective: Objective, penalty: float) -> tuple:
    cost = 0.0
    transfers = 0
    labels: list[str] = []
    previous = START
    for hop in hops:
        if previous == START:
            labels.append(hop.label)
        elif hop.carrier != previous:
            transfers += 1
            cost = cost + penalty
            labels.append(hop.label)
        cost = cost + hop.cost
        previous = hop.carrier
    stations = (origin,) + tuple(h.end for h in hops)
    tail = (cost, transfers, tuple(labels), stations, tuple(h.carrier for h in hops))
    if objective is Objective.MIN_STOPS:
        return (len(stations),) + tail
    return tail


def brute_force_plan(
    network: TransitNetwork,
    constraints: EffectiveConstraints = NO_CONSTRAINTS,
    origin: str = "",
    dest: str = "",
    objective: Objective = Objective.MIN_TIME,
    max_stations: int = 8,
    *,
    transfer_penalty_s: float = TRANSFER_PENALTY_S,
) -> PlanResult:
    """Enumerate every simple path and keep the best; a test oracle for :func:`plan`."""
    objective = Objective(objective)
    if len(network.stations) > max_stations:
        raise TooLarge(f"{len(network.stations)} stations exceeds the limit of {max_stations}")
    _check_endpoints(network, constraints, origin, dest)
    if origin == dest:
        return _trivial(origin)

    allowed = [s.id for s in network.stations if s.id not in constraints.forbidden_stations]
    options = {(u, v): _hop_options(network, constraints, u, v) for u in allowed for v in allowed if u != v}

    best_key = None
    best_hops: list[_Hop] = []

    def extend(here: str, visited: set[str], hops: list[_Hop]) -> None:
        nonlocal best_key, best_hops
        if here == dest:
            k = _score(hops, origin, objective, transfer_penalty_s)
            if best_key is None or k < best_key:
                best_key, best_hops = k, list(hops)
            return
        for nxt in allowed:
            if nxt in visited:
                continue
            for hop in options[(here, nxt)]:
                visited.add(nxt)
                hops.append(hop)
                extend(nxt, visited, hops)
                hops.pop()
                visited.discard(nxt)

    extend(origin, {origin}, [])
    if best_key is None:
        raise NoRoute(f"no route from {origin!r} to {dest!r} under the given constraints")
    body = best_key[1:] if objective is Objective.MIN_STOPS else best_key
    cost, transfers, _, stations, _ = body
    return PlanResult(_legs(network, best_hops), cost, transfers, len(stations), stations)
