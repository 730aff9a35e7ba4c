"""Machine-readable transit network: stations, lines, bike docks.

A network is built once (from a JSON document or a GTFS feed) and is
immutable afterwards; all query functions are pure.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Union

from .errors import (
    Ambiguous,
    DanglingReference,
    DirectionUnavailable,
    DuplicateId,
    NotFound,
    NotOnLine,
    SchemaError,
    UnknownLine,
    UnknownStation,
)
from .geo import BoundingBox, haversine_m

LINE_MODES = ("subway", "bus", "bike", "walk-network")

DEFAULT_WALK_LINK_THRESHOLD_M = 1000.0
DEFAULT_WALKING_SPEED_MPS = 1.25

_DASHES = re.compile(r"[-‐‑‒–—−]")
_SPACES = re.compile(r"\s+")


def normalize_name(name: str) -> str:
    """Canonical comparison key for station names.

    NFC, case-folded, hyphens treated as spaces, whitespace collapsed.
    """
    text = unicodedata.normalize("NFC", name).casefold()
    text = _DASHES.sub(" ", text)
    return _SPACES.sub(" ", text).strip()


@dataclass(frozen=True)
class Station:
    id: str
    canonical_name: str
    lat: float
    lon: float
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class Line:
    id: str
    display_label: str
    mode: str
    stops: tuple[str, ...]
    hop_times: tuple[float, ...]
    bidirectional: bool = True


@dataclass(frozen=True)
class BikeStation:
    id: str
    lat: float
    lon: float
    bikes_available: int


@dataclass(frozen=True)
class TransitNetwork:
    stations: tuple[Station, ...]
    lines: tuple[Line, ...] = ()
    bike_stations: tuple[BikeStation, ...] = ()
    walk_link_threshold_m: float = DEFAULT_WALK_LINK_THRESHOLD_M
    walking_speed_mps: float = DEFAULT_WALKING_SPEED_MPS

    _by_id: dict = field(init=False, repr=False, compare=False)
    _lines_by_id: dict = field(init=False, repr=False, compare=False)
    _names: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id: dict[str, Station] = {}
        names: dict[str, set[str]] = {}
        canonical: dict[str, str] = {}
        for st in self.stations:
            if st.id in by_id:
                raise DuplicateId(f"duplicate station id {st.id!r}")
            if not -90.0 <= st.lat <= 90.0 or not -180.0 <= st.lon <= 180.0:
                raise SchemaError(f"station {st.id!r}: coordinates out of range")
            key = normalize_name(st.canonical_name)
            if not key:
                raise SchemaError(f"station {st.id!r}: empty name")
            if key in canonical:
                raise DuplicateId(
                    f"stations {canonical[key]!r} and {st.id!r} share the name {st.canonical_name!r}"
                )
            canonical[key] = st.id
            by_id[st.id] = st
            for text in (st.canonical_name, *st.aliases):
                k = normalize_name(text)
                if k:
                    names.setdefault(k, set()).add(st.id)

        lines_by_id: dict[str, Line] = {}
        for ln in self.lines:
            if ln.id in lines_by_id:
                raise DuplicateId(f"duplicate line id {ln.id!r}")
            _check_line(ln, by_id)
            lines_by_id[ln.id] = ln

        seen_docks: set[str] = set()
        for bs in self.bike_stations:
            if bs.id in seen_docks:
                raise DuplicateId(f"duplicate bike station id {bs.id!r}")
            if bs.bikes_available < 0:
                raise SchemaError(f"bike station {bs.id!r}: negative bike count")
            seen_docks.add(bs.id)

        if self.walk_link_threshold_m <= 0 or self.walking_speed_mps <= 0:
            raise SchemaError("walk_link_threshold_m and walking_speed_mps must be > 0")

        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_lines_by_id", lines_by_id)
        object.__setattr__(self, "_names", names)

    def station(self, station_id: str) -> Station:
        try:
            return self._by_id[station_id]
        except KeyError:
            raise UnknownStation(f"unknown station id {station_id!r}") from None

    def line(self, line_id: str) -> Line:
        try:
            return self._lines_by_id[line_id]
        except KeyError:
            raise UnknownLine(f"unknown line id {line_id!r}") from None

    def has_station(self, station_id: str) -> bool:
        return station_id in self._by_id

    def station_ids(self) -> list[str]:
        return [s.id for s in self.stations]

    def lines_with_label(self, label: str, mode: str | None = None) -> list[Line]:
        key = label.strip().casefold()
        return [
            ln for ln in self.lines
            if ln.display_label.strip().casefold() == key and (mode is None or ln.mode == mode)
        ]


def _check_line(ln: Line, stations: dict[str, Station]) -> None:
    if ln.mode not in LINE_MODES:
        raise SchemaError(f"line {ln.id!r}: mode must be one of {LINE_MODES}, got {ln.mode!r}")
    if len(ln.stops) < 2:
        raise SchemaError(f"line {ln.id!r}: needs at least two stops")
    for a, b in zip(ln.stops, ln.stops[1:]):
        if a == b:
            raise SchemaError(f"line {ln.id!r}: stop {a!r} repeated back to back")
    for sid in ln.stops:
        if sid not in stations:
            raise DanglingReference(f"line {ln.id!r} references missing station {sid!r}")
    if len(ln.hop_times) != len(ln.stops) - 1:
        raise SchemaError(
            f"line {ln.id!r}: {len(ln.stops)} stops need {len(ln.stops) - 1} hop times, "
            f"got {len(ln.hop_times)}"
        )
    if any(not t > 0 for t in ln.hop_times):
        raise SchemaError(f"line {ln.id!r}: hop times must be > 0")


# -- document I/O ---------------------------------------------------------------

_TOP_KEYS = {"stations", "lines", "bike_stations", "walk_link_threshold_m", "walking_speed_mps"}
_STATION_KEYS = {"id", "name", "aliases", "lat", "lon"}
_LINE_KEYS = {"id", "label", "mode", "stops", "hop_times_s", "bidirectional"}
_BIKE_KEYS = {"id", "lat", "lon", "bikes"}


def _require(obj: Any, where: str, required: set[str], allowed: set[str]) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")


def _text(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{where}: expected a string")
    return value


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number")
    return float(value)


def _list(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected an array")
    return value


def network_from_dict(doc: Any) -> TransitNetwork:
    _require(doc, "network", {"stations", "lines"}, _TOP_KEYS)

    stations = []
    for i, raw in enumerate(_list(doc["stations"], "stations")):
        where = f"stations[{i}]"
        _require(raw, where, {"id", "name", "lat", "lon"}, _STATION_KEYS)
        aliases = tuple(
            _text(a, f"{where}.aliases") for a in _list(raw.get("aliases", []), f"{where}.aliases")
        )
        stations.append(Station(
            id=_text(raw["id"], f"{where}.id"),
            canonical_name=_text(raw["name"], f"{where}.name"),
            lat=_number(raw["lat"], f"{where}.lat"),
            lon=_number(raw["lon"], f"{where}.lon"),
            aliases=aliases,
        ))

    lines = []
    for i, raw in enumerate(_list(doc["lines"], "lines")):
        where = f"lines[{i}]"
        _require(raw, where, {"id", "label", "mode", "stops", "hop_times_s"}, _LINE_KEYS)
        bidir = raw.get("bidirectional", True)
        if not isinstance(bidir, bool):
            raise SchemaError(f"{where}.bidirectional: expected a boolean")
        lines.append(Line(
            id=_text(raw["id"], f"{where}.id"),
            display_label=_text(raw["label"], f"{where}.label"),
            mode=_text(raw["mode"], f"{where}.mode"),
            stops=tuple(_text(s, f"{where}.stops") for s in _list(raw["stops"], f"{where}.stops")),
            hop_times=tuple(
                _number(t, f"{where}.hop_times_s") for t in _list(raw["hop_times_s"], f"{where}.hop_times_s")
            ),
            bidirectional=bidir,
        ))

    docks = []
    for i, raw in enumerate(_list(doc.get("bike_stations", []), "bike_stations")):
        where = f"bike_stations[{i}]"
        _require(raw, where, _BIKE_KEYS, _BIKE_KEYS)
        bikes = raw["bikes"]
        if isinstance(bikes, bool) or not isinstance(bikes, int):
            raise SchemaError(f"{where}.bikes: expected an integer")
        docks.append(BikeStation(
            id=_text(raw["id"], f"{where}.id"),
            lat=_number(raw["lat"], f"{where}.lat"),
            lon=_number(raw["lon"], f"{where}.lon"),
            bikes_available=bikes,
        ))

    return TransitNetwork(
        stations=tuple(stations),
        lines=tuple(lines),
        bike_stations=tuple(docks),
        walk_link_threshold_m=_number(
            doc.get("walk_link_threshold_m", DEFAULT_WALK_LINK_THRESHOLD_M), "walk_link_threshold_m"
        ),
        walking_speed_mps=_number(
            doc.get("walking_speed_mps", DEFAULT_WALKING_SPEED_MPS), "walking_speed_mps"
        ),
    )


def load_network(document: Union[str, bytes, Path]) -> TransitNetwork:
    """Parse and validate a network document.

    ``document`` is the JSON text itself, or a :class:`~pathlib.Path` to it.
    """
    if isinstance(document, Path):
        document = document.read_bytes()
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"network document is not valid JSON: {exc}") from None
    return network_from_dict(doc)


def network_to_dict(network: TransitNetwork) -> dict:
    return {
        "stations": [
            {"id": s.id, "name": s.canonical_name, "aliases": list(s.aliases), "lat": s.lat, "lon": s.lon}
            for s in network.stations
        ],
        "lines": [
            {
                "id": ln.id,
                "label": ln.display_label,
                "mode": ln.mode,
                "stops": list(ln.stops),
                "hop_times_s": list(ln.hop_times),
                "bidirectional": ln.bidirectional,
            }
            for ln in network.lines
        ],
        "bike_stations": [
            {"id": b.id, "lat": b.lat, "lon": b.lon, "bikes": b.bikes_available}
            for b in network.bike_stations
        ],
        "walk_link_threshold_m": network.walk_link_threshold_m,
        "walking_speed_mps": network.walking_speed_mps,
    }


def dump_network(network: TransitNetwork) -> str:
    return json.dumps(network_to_dict(network), indent=2, ensure_ascii=False) + "\n"


# -- queries --------------------------------------------------------------------

def resolve_station(network: TransitNetwork, name: str) -> str:
    """Return the id of the one station whose name or alias matches ``name``."""
    hits = network._names.get(normalize_name(name), set())
    if not hits:
        raise NotFound(f"no station named {name!r}")
    if len(hits) > 1:
        raise Ambiguous(name, sorted(hits))
    return next(iter(hits))


def distance_m(network: TransitNetwork, a: str, b: str) -> float:
    # fixed argument order keeps the result bitwise symmetric
    if b < a:
        a, b = b, a
    sa, sb = network.station(a), network.station(b)
    return haversine_m(sa.lat, sa.lon, sb.lat, sb.lon)


def walk_time(network: TransitNetwork, a: str, b: str) -> float:
    """Straight-line walking time in seconds between two stations."""
    return distance_m(network, a, b) / network.walking_speed_mps


def stations_in_zone(network: TransitNetwork, zone: BoundingBox | tuple) -> set[str]:
    if not isinstance(zone, BoundingBox):
        zone = BoundingBox(*zone)
    return {s.id for s in network.stations if zone.contains(s.lat, s.lon)}


def _segment_indices(line: Line, start: str, end: str) -> tuple[int, int]:
    starts = [i for i, s in enumerate(line.stops) if s == start]
    ends = [i for i, s in enumerate(line.stops) if s == end]
    if not starts or not ends:
        missing = start if not starts else end
        raise NotOnLine(f"station {missing!r} is not on line {line.id!r}")
    forward = [(j - i, i, j) for i in starts for j in ends if j >= i]
    if forward:
        _, i, j = min(forward)
        return i, j
    if not line.bidirectional:
        raise DirectionUnavailable(f"line {line.id!r} runs one way only")
    _, i, j = min((i - j, i, j) for i in starts for j in ends)
    return i, j


def line_segment(network: TransitNetwork, line_id: str, start: str, end: str) -> list[str]:
    """Stops ridden on ``line_id`` from ``start`` to ``end``, both inclusive.

    When a stop appears more than once on the line the shortest contiguous
    stretch wins, forward direction first.
    """
    line = network.line(line_id)
    i, j = _segment_indices(line, start, end)
    if i <= j:
        return list(line.stops[i:j + 1])
    return list(reversed(line.stops[j:i + 1]))


def segment_time(network: TransitNetwork, line_id: str, start: str, end: str) -> float:
    """Scheduled ride time along the same stretch :func:`line_segment` returns."""
    line = network.line(line_id)
    i, j = _segment_indices(line, start, end)
    lo, hi = min(i, j), max(i, j)
    total = 0.0
    for t in line.hop_times[lo:hi]:
        total += t
    return total


def walk_links(network: TransitNetwork) -> Iterable[tuple[str, str, float]]:
    """Unordered station pairs within walking threshold, with their distance."""
    stations = network.stations
    for i, a in enumerate(stations):
        for b in stations[i + 1:]:
            d = distance_m(network, a.id, b.id)
            if d <= network.walk_link_threshold_m:
                yield a.id, b.id, d
