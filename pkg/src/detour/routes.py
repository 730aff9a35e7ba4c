"""The standardized route wire format.

A route is exactly one JSON object, nothing else around it::

    {"legs":[{"mode":"subway","line":"G","from":"A","to":"D"}]}

Parsing never raises: text that does not follow the grammar comes back as a
:class:`FormatViolation`, because violations are counted, not crashed on.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Any, Union

from .errors import InvariantViolation
from .network import normalize_name

MODE_TERMS = ("subway", "train", "bus", "walk", "bike")
RIDE_MODES = ("subway", "bus")
_SYNONYMS = {"train": "subway"}

ROUTE_GRAMMAR = (
    '{"legs":[{"mode":"<subway|train|bus|walk|bike>","line":"<line label, or null for walk/bike>",'
    '"from":"<station name>","to":"<station name>"}, ...]}'
)


@dataclass(frozen=True)
class Leg:
    mode: str
    line: str | None
    from_name: str
    to_name: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", _SYNONYMS.get(self.mode, self.mode))

    def problems(self) -> list[str]:
        out = []
        if self.mode not in MODE_TERMS:
            out.append(f"unknown mode {self.mode!r}")
        if self.mode in RIDE_MODES and not (self.line and self.line.strip()):
            out.append(f"{self.mode} leg needs a line label")
        if not self.from_name.strip() or not self.to_name.strip():
            out.append("empty station name")
        return out

    @property
    def carrier(self) -> tuple[str, str | None]:
        return (self.mode, self.line)


@dataclass(frozen=True)
class Route:
    legs: tuple[Leg, ...] = ()

    def __len__(self) -> int:
        return len(self.legs)

    def reversed(self) -> "Route":
        return Route(tuple(Leg(l.mode, l.line, l.to_name, l.from_name) for l in reversed(self.legs)))


class ViolationReason(str, enum.Enum):
    EXTRA_PROSE = "ExtraProse"
    NOT_AN_OBJECT = "NotAnObject"
    BAD_MODE_TERM = "BadModeTerm"
    MISSING_FIELD = "MissingField"
    EMPTY_NAME = "EmptyName"


@dataclass(frozen=True)
class FormatViolation:
    reason: ViolationReason
    offending_text: str


ParseResult = Union[Route, FormatViolation]


def _excerpt(text: str, limit: int = 120) -> str:
    text = text.strip()
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _embedded_object(text: str) -> bool:
    decoder = json.JSONDecoder()
    start = text.find("{")
    while start != -1:
        try:
            obj, _ = decoder.raw_decode(text, start)
        except json.JSONDecodeError:
            pass
        else:
            if isinstance(obj, dict):
                return True
        start = text.find("{", start + 1)
    return False


def parse_route(text: str) -> ParseResult:
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, TypeError, ValueError):
        if isinstance(text, str) and _embedded_object(text):
            return FormatViolation(ViolationReason.EXTRA_PROSE, _excerpt(text))
        return FormatViolation(ViolationReason.NOT_AN_OBJECT, _excerpt(str(text)))

    if not isinstance(doc, dict):
        return FormatViolation(ViolationReason.NOT_AN_OBJECT, _excerpt(text))
    if "legs" not in doc:
        return FormatViolation(ViolationReason.MISSING_FIELD, "legs")
    legs = doc["legs"]
    if not isinstance(legs, list) or not all(isinstance(l, dict) for l in legs):
        return FormatViolation(ViolationReason.NOT_AN_OBJECT, _excerpt(json.dumps(legs)))

    for raw in legs:
        mode = raw.get("mode")
        if mode is not None and (not isinstance(mode, str) or mode.strip().lower() not in MODE_TERMS):
            return FormatViolation(ViolationReason.BAD_MODE_TERM, str(mode))

    parsed = []
    for i, raw in enumerate(legs):
        for key in ("mode", "from", "to"):
            if raw.get(key) is None:
                return FormatViolation(ViolationReason.MISSING_FIELD, f"legs[{i}].{key}")
        mode = _SYNONYMS.get(raw["mode"].strip().lower(), raw["mode"].strip().lower())
        line = raw.get("line")
        if isinstance(line, (int, float)) and not isinstance(line, bool):
            line = str(line)
        if line is not None and not isinstance(line, str):
            return FormatViolation(ViolationReason.MISSING_FIELD, f"legs[{i}].line")
        if mode in RIDE_MODES and not (line and line.strip()):
            return FormatViolation(ViolationReason.MISSING_FIELD, f"legs[{i}].line")
        if not isinstance(raw["from"], str) or not isinstance(raw["to"], str):
            return FormatViolation(ViolationReason.MISSING_FIELD, f"legs[{i}].from/to")
        parsed.append((mode, line, raw["from"], raw["to"]))

    for i, (_, _, frm, to) in enumerate(parsed):
        if not frm.strip() or not to.strip():
            return FormatViolation(ViolationReason.EMPTY_NAME, f"legs[{i}]")

    return Route(tuple(Leg(m, l, f, t) for m, l, f, t in parsed))


def route_to_dict(route: Route) -> dict:
    legs = []
    for leg in route.legs:
        item: dict[str, Any] = {"mode": leg.mode}
        if leg.line is not None:
            item["line"] = leg.line
        item["from"] = leg.from_name
        item["to"] = leg.to_name
        legs.append(item)
    return {"legs": legs}


def serialize_route(route: Route) -> str:
    """Canonical single-line encoding; ``parse_route`` inverts it exactly."""
    for i, leg in enumerate(route.legs):
        bad = leg.problems()
        if bad:
            raise InvariantViolation(f"leg {i}: {'; '.join(bad)}")
    return json.dumps(route_to_dict(route), ensure_ascii=False, separators=(",", ":"))


def validate_chaining(route: Route) -> list[tuple[int, int]]:
    return [
        (i, i + 1)
        for i, (a, b) in enumerate(zip(route.legs, route.legs[1:]))
        if normalize_name(a.to_name) != normalize_name(b.from_name)
    ]
