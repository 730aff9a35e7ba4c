"""Aggregate cell results and render comparison tables.

Aggregates keep full precision; rounding to two decimals happens only when a
table is rendered.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from statistics import fmean
from typing import Iterable, Optional, Sequence

from .errors import EmptyGroup, MissingColumn, SchemaError
from .scenarios import CellResult

MISSING = "—"
DEFAULT_MODEL_COLUMNS = ("GPT", "Gemini", "Claude")
LAYOUTS = ("models", "map-ablation", "summary-ablation")

Group = tuple[str, str, str]  # (provider, pipeline, maps)


@dataclass(frozen=True)
class GroupStats:
    cells: int
    connectivity: float
    avoidance: float
    normalized_time: float
    transfers: Optional[float]
    violation_rate: float
    valid_count: int
    errors: int = 0


@dataclass(frozen=True)
class AggregateReport:
    groups: dict[Group, GroupStats]

    def get(self, provider: str, pipeline: str = "two-stage", maps: str = "with-maps") -> GroupStats | None:
        wanted = (provider.lower(), pipeline, maps)
        for (p, pl, m), stats in self.groups.items():
            if (p.lower(), pl, m) == wanted:
                return stats
        return None


def aggregate(cells: Iterable[CellResult]) -> AggregateReport:
    """Per (provider, pipeline, maps) means; cells that errored are counted, not scored."""
    scored: dict[Group, list] = {}
    errored: dict[Group, int] = {}
    for cell in cells:
        scored.setdefault(cell.group, [])
        if cell.report is None:
            errored[cell.group] = errored.get(cell.group, 0) + 1
        else:
            scored[cell.group].append(cell.report)
    if not scored:
        raise EmptyGroup("no results to aggregate")

    groups = {}
    for group in sorted(scored):
        reports = scored[group]
        if not reports:
            raise EmptyGroup(f"group {group} has no scored cells ({errored.get(group, 0)} errors)")
        valid = [r for r in reports if r.valid]
        groups[group] = GroupStats(
            cells=len(reports),
            connectivity=fmean(float(r.connected) for r in reports),
            avoidance=fmean(float(r.avoided) for r in reports),
            normalized_time=fmean(r.normalized_time for r in reports),
            transfers=fmean(r.transfers for r in valid) if valid else None,
            violation_rate=fmean(float(r.format_violation) for r in reports),
            valid_count=len(valid),
            errors=errored.get(group, 0),
        )
    return AggregateReport(groups)


_ROWS = (
    ("Connectivity ↑", "connectivity"),
    ("Avoidance ↑", "avoidance"),
    ("Approx. Time ↓", "normalized_time"),
    ("# Transfers ↓", "transfers"),
)
_VIOLATIONS = ("Violations of format ↓", "violation_rate")


def _columns(layout: str, providers: Sequence[str], subject: str) -> list[tuple[str, Group]]:
    if layout == "models":
        return [(p, (p, "two-stage", "with-maps")) for p in providers]
    if layout == "map-ablation":
        return [
            (f"{subject} w/ Map", (subject, "two-stage", "with-maps")),
            (f"{subject} w/o Map", (subject, "two-stage", "without-maps")),
        ]
    if layout == "summary-ablation":
        return [
            ("Separate summary: Yes", (subject, "two-stage", "with-maps")),
            ("Separate summary: No", (subject, "single-stage", "with-maps")),
        ]
    raise SchemaError(f"unknown layout {layout!r}; expected one of {LAYOUTS}")


def fmt(value: Optional[float]) -> str:
    return MISSING if value is None else f"{value:.2f}"


def table_rows(
    agg: AggregateReport,
    layout: str,
    providers: Sequence[str] = DEFAULT_MODEL_COLUMNS,
    subject: str = "GPT",
) -> tuple[list[str], list[list[str]]]:
    columns = _columns(layout, providers, subject)
    stats = []
    for title, (p, pl, m) in columns:
        found = agg.get(p, pl, m)
        if found is None:
            raise MissingColumn(f"{layout} layout needs results for {p} / {pl} / {m} (column {title!r})")
        stats.append(found)
    rows = list(_ROWS) + ([_VIOLATIONS] if layout == "summary-ablation" else [])
    header = ["Metric"] + [title for title, _ in columns]
    body = [[name] + [fmt(getattr(s, attr)) for s in stats] for name, attr in rows]
    return header, body


def render_table(
    agg: AggregateReport,
    layout: str,
    providers: Sequence[str] = DEFAULT_MODEL_COLUMNS,
    subject: str = "GPT",
) -> str:
    header, body = table_rows(agg, layout, providers, subject)
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]

    def line(cells: list[str]) -> str:
        first = cells[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
        return " | ".join([first, *rest])

    rule = "-+-".join("-" * w for w in widths)
    return "\n".join([line(header), rule, *(line(r) for r in body)]) + "\n"


def render_csv(
    agg: AggregateReport,
    layout: str,
    providers: Sequence[str] = DEFAULT_MODEL_COLUMNS,
    subject: str = "GPT",
) -> str:
    header, body = table_rows(agg, layout, providers, subject)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", *header[1:]])
    writer.writerows(body)
    return buf.getvalue()
