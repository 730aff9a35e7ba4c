"""User-declared disruptions and their compiled, id-level form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .errors import NotFound, SchemaError, UnknownLine, UnknownStation
from .geo import BoundingBox
from .network import TransitNetwork, resolve_station, stations_in_zone

DangerZone = BoundingBox


@dataclass(frozen=True)
class DisruptionSpec:
    disabled_lines: frozenset[str] = frozenset()
    avoided_stations: frozenset[str] = frozenset()
    danger_zones: tuple[DangerZone, ...] = ()

    @classmethod
    def from_dict(cls, doc: Any) -> "DisruptionSpec":
        if doc is None:
            return cls()
        if not isinstance(doc, dict):
            raise SchemaError("disruption: expected an object")
        unknown = set(doc) - {"disabled_lines", "avoided_stations", "danger_zones"}
        if unknown:
            raise SchemaError(f"disruption: unknown keys {sorted(unknown)}")
        zones = []
        for i, z in enumerate(doc.get("danger_zones", [])):
            if not isinstance(z, dict) or set(z) != {"min_lat", "min_lon", "max_lat", "max_lon"}:
                raise SchemaError(f"disruption.danger_zones[{i}]: need min_lat, min_lon, max_lat, max_lon")
            zones.append(DangerZone(**{k: float(v) for k, v in z.items()}))
        for key in ("disabled_lines", "avoided_stations"):
            value = doc.get(key, [])
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise SchemaError(f"disruption.{key}: expected an array of strings")
        return cls(
            disabled_lines=frozenset(doc.get("disabled_lines", [])),
            avoided_stations=frozenset(doc.get("avoided_stations", [])),
            danger_zones=tuple(zones),
        )

    def to_dict(self) -> dict:
        return {
            "disabled_lines": sorted(self.disabled_lines),
            "avoided_stations": sorted(self.avoided_stations),
            "danger_zones": [
                {"min_lat": z.min_lat, "min_lon": z.min_lon, "max_lat": z.max_lat, "max_lon": z.max_lon}
                for z in self.danger_zones
            ],
        }


@dataclass(frozen=True)
class EffectiveConstraints:
    forbidden_stations: frozenset[str] = field(default_factory=frozenset)
    disabled_lines: frozenset[str] = field(default_factory=frozenset)


NO_CONSTRAINTS = EffectiveConstraints()


def _resolve_lines(network: TransitNetwork, label: str) -> set[str]:
    ids = {ln.id for ln in network.lines_with_label(label)}
    if not ids:
        ids = {ln.id for ln in network.lines if ln.id == label}
    if not ids:
        raise UnknownLine(f"no line labelled {label!r}")
    return ids


def compile_constraints(network: TransitNetwork, spec: DisruptionSpec) -> EffectiveConstraints:
    """Turn names and zones into station and line ids over ``network``.

    A label matches every line carrying it (a label may be shared by modes).
    Ambiguous station names propagate as :class:`~detour.errors.Ambiguous`.
    """
    forbidden: set[str] = set()
    for name in sorted(spec.avoided_stations):
        try:
            forbidden.add(resolve_station(network, name))
        except NotFound:
            raise UnknownStation(f"avoided station {name!r} is not in the network") from None
    for zone in spec.danger_zones:
        forbidden |= stations_in_zone(network, zone)
    disabled: set[str] = set()
    for label in sorted(spec.disabled_lines):
        disabled |= _resolve_lines(network, label)
    return EffectiveConstraints(frozenset(forbidden), frozenset(disabled))
