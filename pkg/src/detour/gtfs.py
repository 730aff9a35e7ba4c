"""Import a GTFS static feed into a :class:`TransitNetwork`.

Only the stop/route topology is kept: one line per route, shaped after the
route's longest trip, with hop times taken as the median over all trips that
follow the same stop pattern. Calendars, frequencies and fares are ignored.
"""

from __future__ import annotations

import csv
import statistics
from collections import defaultdict
from pathlib import Path

from .errors import EmptyFeed, MalformedRow, MissingTable
from .geo import haversine_m
from .network import Line, Station, TransitNetwork, normalize_name

_BUS_ROUTE_TYPES = {3, 11}
MIN_HOP_S = 1.0


def _read_table(feed: Path, name: str, required: tuple[str, ...]) -> list[dict[str, str]]:
    path = feed / name
    if not path.is_file():
        raise MissingTable(f"{name} not found in {feed}")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        missing = [c for c in required if c not in header]
        if missing:
            raise MalformedRow(name, 0, f"missing columns {missing}")
        reader.fieldnames = header
        return [{k: (v or "").strip() for k, v in row.items() if k is not None} for row in reader]


def _parse_time(text: str) -> int | None:
    # GTFS times may exceed 24:00:00 for trips running past midnight
    if not text:
        return None
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"bad time {text!r}")
    h, m, s = (int(p) for p in parts)
    return h * 3600 + m * 60 + s


def _line_mode(route_type: str) -> str:
    try:
        code = int(route_type)
    except ValueError:
        return "subway"
    if code in _BUS_ROUTE_TYPES or 700 <= code <= 799:
        return "bus"
    return "subway"


def _interpolate(
    arrs: list[float | None], deps: list[float | None], coords: list[tuple[float, float]]
) -> tuple[list[float], list[float]] | None:
    """Place untimed stops by distance share between the previous departure and the next arrival.

    Interpolated stops get no dwell. Returns None when the trip does not start
    and end on a timed stop.
    """
    known = [i for i, t in enumerate(arrs) if t is not None]
    if len(known) < 2 or known[0] != 0 or known[-1] != len(arrs) - 1:
        return None
    arr_out: list[float] = list(arrs)  # type: ignore[arg-type]
    dep_out: list[float] = list(deps)  # type: ignore[arg-type]
    for a, b in zip(known, known[1:]):
        if b - a < 2:
            continue
        legs = [haversine_m(*coords[k], *coords[k + 1]) for k in range(a, b)]
        total = sum(legs)
        start, end = dep_out[a], arr_out[b]
        acc = 0.0
        for k in range(a + 1, b):
            acc += legs[k - a - 1]
            share = acc / total if total > 0 else (k - a) / (b - a)
            arr_out[k] = dep_out[k] = start + share * (end - start)
    return arr_out, dep_out


def import_gtfs(feed_directory: str | Path) -> TransitNetwork:
    feed = Path(feed_directory)
    stops = _read_table(feed, "stops.txt", ("stop_id", "stop_name", "stop_lat", "stop_lon"))
    routes = _read_table(feed, "routes.txt", ("route_id", "route_type"))
    trips = _read_table(feed, "trips.txt", ("route_id", "trip_id"))
    stop_times = _read_table(
        feed, "stop_times.txt", ("trip_id", "arrival_time", "departure_time", "stop_id", "stop_sequence")
    )
    if not stops or not stop_times:
        raise EmptyFeed(f"{feed}: no stops or no stop_times")

    # stations: top-level stops; children fold into their parent
    raw: dict[str, dict[str, str]] = {}
    for i, row in enumerate(stops, start=1):
        if not row["stop_id"]:
            raise MalformedRow("stops.txt", i, "empty stop_id")
        if row["stop_id"] in raw:
            raise MalformedRow("stops.txt", i, f"duplicate stop_id {row['stop_id']!r}")
        raw[row["stop_id"]] = row
    parent_of: dict[str, str] = {}
    for i, row in enumerate(stops, start=1):
        parent = row.get("parent_station", "")
        if parent:
            if parent not in raw:
                raise MalformedRow("stops.txt", i, f"unknown parent_station {parent!r}")
            parent_of[row["stop_id"]] = parent

    def root(stop_id: str) -> str:
        seen = set()
        while stop_id in parent_of and stop_id not in seen:
            seen.add(stop_id)
            stop_id = parent_of[stop_id]
        return stop_id

    children: dict[str, list[str]] = defaultdict(list)
    for child in parent_of:
        children[root(child)].append(child)

    coords: dict[str, tuple[float, float]] = {}
    names: dict[str, str] = {}
    order = []
    for i, row in enumerate(stops, start=1):
        sid = row["stop_id"]
        if sid in parent_of:
            continue
        try:
            coords[sid] = (float(row["stop_lat"]), float(row["stop_lon"]))
        except ValueError:
            raise MalformedRow("stops.txt", i, "stop_lat/stop_lon not numeric") from None
        names[sid] = row["stop_name"] or sid
        order.append(sid)

    # GTFS reuses names ("86 St") for distinct places; keep every such stop
    # reachable by its bare name only through an ambiguous alias
    by_key: dict[str, list[str]] = defaultdict(list)
    for sid in order:
        by_key[normalize_name(names[sid])].append(sid)
    stations = []
    for sid in order:
        aliases = sorted(set(children.get(sid, ())))
        name = names[sid]
        if len(by_key[normalize_name(name)]) > 1:
            aliases = [name, *aliases]
            name = f"{name} [{sid}]"
        stations.append(Station(
            id=sid, canonical_name=name, lat=coords[sid][0], lon=coords[sid][1], aliases=tuple(aliases)
        ))

    # trips -> mapped stop sequences with stop-level times
    route_of_trip: dict[str, str] = {}
    route_rows = {r["route_id"]: r for r in routes}
    for i, row in enumerate(trips, start=1):
        if row["route_id"] not in route_rows:
            raise MalformedRow("trips.txt", i, f"unknown route_id {row['route_id']!r}")
        route_of_trip[row["trip_id"]] = row["route_id"]

    calls: dict[str, list[tuple[int, str, int | None, int | None]]] = defaultdict(list)
    for i, row in enumerate(stop_times, start=1):
        if row["trip_id"] not in route_of_trip:
            raise MalformedRow("stop_times.txt", i, f"unknown trip_id {row['trip_id']!r}")
        if row["stop_id"] not in raw:
            raise MalformedRow("stop_times.txt", i, f"unknown stop_id {row['stop_id']!r}")
        try:
            seq = int(row["stop_sequence"])
            arr = _parse_time(row["arrival_time"])
            dep = _parse_time(row["departure_time"])
        except ValueError as exc:
            raise MalformedRow("stop_times.txt", i, str(exc)) from None
        if arr is None:
            arr = dep
        if dep is None:
            dep = arr
        calls[row["trip_id"]].append((seq, root(row["stop_id"]), arr, dep))

    patterns: dict[str, list[tuple[str, tuple[str, ...], list[float] | None]]] = defaultdict(list)
    for trip_id in sorted(calls):
        seq_calls = sorted(calls[trip_id])
        stop_ids: list[str] = []
        arrs: list[float | None] = []
        deps: list[float | None] = []
        for _, sid, arr, dep in seq_calls:
            if stop_ids and stop_ids[-1] == sid:
                # two platforms of one station: keep the later departure
                deps[-1] = dep if dep is not None else deps[-1]
                continue
            stop_ids.append(sid)
            arrs.append(arr)
            deps.append(dep)
        if len(stop_ids) < 2:
            continue
        pts = [coords[s] for s in stop_ids]
        filled = _interpolate(arrs, deps, pts)
        hops = None
        if filled is not None:
            arrs_f, deps_f = filled
            hops = [arrs_f[k + 1] - deps_f[k] for k in range(len(stop_ids) - 1)]
        patterns[route_of_trip[trip_id]].append((trip_id, tuple(stop_ids), hops))

    lines = []
    for route in routes:
        rid = route["route_id"]
        runs = patterns.get(rid)
        if not runs:
            continue
        _, rep, _ = min(runs, key=lambda r: (-len(r[1]), r[0]))
        samples = [h for _, seq, h in runs if seq == rep and h is not None]
        if samples:
            hop_times = tuple(max(MIN_HOP_S, float(statistics.median(col))) for col in zip(*samples))
        else:
            raise MalformedRow("stop_times.txt", 0, f"route {rid!r}: representative trip has no usable times")
        position = {s: k for k, s in enumerate(rep)}
        bidirectional = False
        for _, seq, _ in runs:
            idx = [position[s] for s in seq if s in position]
            if len(idx) >= 2 and all(b < a for a, b in zip(idx, idx[1:])):
                bidirectional = True
                break
        label = route.get("route_short_name") or route.get("route_long_name") or rid
        lines.append(Line(
            id=rid,
            display_label=label,
            mode=_line_mode(route["route_type"]),
            stops=rep,
            hop_times=hop_times,
            bidirectional=bidirectional,
        ))

    if not lines:
        raise EmptyFeed(f"{feed}: no route has a trip with two or more stops")
    return TransitNetwork(stations=tuple(stations), lines=tuple(lines))
