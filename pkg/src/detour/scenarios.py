"""Scenario files and the evaluation matrix runner.

A scenario file pairs the natural-language request sent to the models with a
machine-readable disruption used for scoring. Keeping the two consistent is
the scenario author's job; each bundled file says how it encoded the prose in
its ``notes``.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Sequence

from .disruption import DisruptionSpec, compile_constraints
from .errors import DetourError, MissingAttachment, MissingNetwork, SchemaError
from .llm.cassette import CassetteStore
from .llm.pipeline import IoMode, run_pipeline
from .llm.prompts import ImageRef, MapMode, PipelineMode
from .llm.providers import ProviderConfig, Transport
from .metrics import MetricsReport, evaluate
from .network import TransitNetwork, load_network, normalize_name, resolve_station
from .router import Objective
from .traveltime import DEFAULT_DEPART, NetworkTravelTimes, TravelTimeProvider

_REQUIRED = {"id", "query", "network", "origin", "destination"}
_ALLOWED = _REQUIRED | {
    "title", "take_home", "disruption", "objective", "maps", "attachments",
    "instructions", "notes", "degenerate",
}


def bundled_data_dir() -> Path:
    return Path(str(resources.files("detour") / "data"))


@dataclass(frozen=True)
class Scenario:
    id: str
    network_ref: Path
    origin_name: str
    dest_name: str
    query_text: str
    disruption: DisruptionSpec = field(default_factory=DisruptionSpec)
    objective: Objective = Objective.MIN_TIME
    maps: tuple[ImageRef, ...] = ()
    attachments: tuple[ImageRef, ...] = ()
    instructions: tuple[str, ...] = ()
    title: str = ""
    take_home: str = ""
    notes: str = ""
    source: Optional[Path] = None

    def network(self) -> TransitNetwork:
        return _load_network_cached(str(self.network_ref.resolve()))


@lru_cache(maxsize=None)
def _load_network_cached(path: str) -> TransitNetwork:
    return load_network(Path(path))


def _images(doc: dict, key: str, base: Path, where: str) -> tuple[ImageRef, ...]:
    refs = []
    for i, item in enumerate(doc.get(key, [])):
        if not isinstance(item, dict) or set(item) - {"path", "caption"} or "path" not in item:
            raise SchemaError(f"{where}.{key}[{i}]: expected {{path, caption}}")
        path = (base / item["path"]).resolve()
        if not path.is_file():
            raise MissingAttachment(f"{where}.{key}[{i}]: {path} does not exist")
        refs.append(ImageRef(path, item.get("caption", "")))
    return tuple(refs)


def scenario_from_dict(doc: dict, base: Path, where: str = "scenario") -> Scenario:
    if not isinstance(doc, dict):
        raise SchemaError(f"{where}: expected an object")
    missing = _REQUIRED - set(doc)
    if missing:
        raise SchemaError(f"{where}: missing keys {sorted(missing)}")
    unknown = set(doc) - _ALLOWED
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")
    for key in ("id", "query", "network", "origin", "destination"):
        if not isinstance(doc[key], str) or not doc[key].strip():
            raise SchemaError(f"{where}.{key}: expected a non-empty string")
    if normalize_name(doc["origin"]) == normalize_name(doc["destination"]) and not doc.get("degenerate"):
        raise SchemaError(f"{where}: origin equals destination (set \"degenerate\": true if intended)")

    network_ref = (base / doc["network"]).resolve()
    if not network_ref.is_file():
        raise MissingNetwork(f"{where}: network {network_ref} does not exist")
    try:
        objective = Objective(doc.get("objective", "min-time"))
    except ValueError:
        raise SchemaError(f"{where}.objective: expected min-time or min-stops") from None
    instructions = doc.get("instructions", [])
    if not isinstance(instructions, list) or not all(isinstance(s, str) for s in instructions):
        raise SchemaError(f"{where}.instructions: expected an array of strings")

    scenario = Scenario(
        id=doc["id"],
        network_ref=network_ref,
        origin_name=doc["origin"],
        dest_name=doc["destination"],
        query_text=doc["query"],
        disruption=DisruptionSpec.from_dict(doc.get("disruption")),
        objective=objective,
        maps=_images(doc, "maps", base, where),
        attachments=_images(doc, "attachments", base, where),
        instructions=tuple(instructions),
        title=doc.get("title", ""),
        take_home=doc.get("take_home", ""),
        notes=doc.get("notes", ""),
    )
    scenario.network()  # fail early on a broken network document
    return scenario


def load_scenario_file(path: Path) -> list[Scenario]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    items = doc if isinstance(doc, list) else [doc]
    out = []
    for i, item in enumerate(items):
        sc = scenario_from_dict(item, path.parent, f"{path.name}[{i}]" if isinstance(doc, list) else path.name)
        out.append(replace(sc, source=path))
    return out


def load_scenarios(path: str | Path | None = None) -> list[Scenario]:
    """Load one scenario file or every ``*.json`` in a directory (bundled set by default)."""
    path = Path(path) if path is not None else bundled_data_dir() / "scenarios"
    if path.is_dir():
        files = sorted(path.glob("*.json"))
    elif path.is_file():
        files = [path]
    else:
        raise SchemaError(f"{path}: no such scenario file or directory")
    scenarios = [sc for f in files for sc in load_scenario_file(f)]
    ids = [sc.id for sc in scenarios]
    if len(set(ids)) != len(ids):
        raise SchemaError(f"duplicate scenario ids in {path}")
    return scenarios


# -- evaluation matrix ---------------------------------------------------------

@dataclass
class CellResult:
    scenario: str
    provider: str
    pipeline: str
    maps: str
    report: Optional[MetricsReport] = None
    error: Optional[str] = None
    plan_text: Optional[str] = None
    summary_text: Optional[str] = None

    @property
    def group(self) -> tuple[str, str, str]:
        return (self.provider, self.pipeline, self.maps)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "provider": self.provider,
            "pipeline": self.pipeline,
            "maps": self.maps,
            "report": None if self.report is None else self.report.to_dict(),
            "error": self.error,
            "plan_text": self.plan_text,
            "summary_text": self.summary_text,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CellResult":
        doc = dict(doc)
        if doc.get("report") is not None:
            doc["report"] = MetricsReport.from_dict(doc["report"])
        return cls(**doc)


def evaluate_cell(
    scenario: Scenario,
    config: ProviderConfig,
    pipeline_mode: PipelineMode,
    map_mode: MapMode,
    io_mode: IoMode,
    store: Optional[CassetteStore],
    travel_times: Callable[[TransitNetwork], TravelTimeProvider],
    depart: datetime,
    **invoke_kwargs,
) -> CellResult:
    cell = CellResult(scenario.id, config.name, PipelineMode(pipeline_mode).value, MapMode(map_mode).value)
    try:
        network = scenario.network()
        constraints = compile_constraints(network, scenario.disruption)
        origin = resolve_station(network, scenario.origin_name)
        dest = resolve_station(network, scenario.dest_name)
        result = run_pipeline(scenario, config, pipeline_mode, map_mode, store, io_mode, **invoke_kwargs)
        cell.plan_text, cell.summary_text = result.plan_text, result.summary_text
        cell.report = evaluate(
            network, constraints, origin, dest, result.parse_result, travel_times(network), depart
        )
    except DetourError as exc:
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


def run_evaluation(
    scenarios: Sequence[Scenario],
    provider_configs: Sequence[ProviderConfig],
    pipeline_mode: PipelineMode = PipelineMode.TWO_STAGE,
    map_mode: MapMode = MapMode.WITH_MAPS,
    io_mode: IoMode = IoMode.REPLAY,
    store: Optional[CassetteStore] = None,
    *,
    transport: Optional[Transport] = None,
    travel_times: Callable[[TransitNetwork], TravelTimeProvider] = NetworkTravelTimes,
    depart: datetime = DEFAULT_DEPART,
    concurrency: int = 4,
    sleep: Callable[[float], None] = time.sleep,
) -> list[CellResult]:
    """Score every scenario x provider cell; a failing cell never stops the others.

    Results come back in scenario-major order regardless of completion order.
    """
    if store is None:
        store = CassetteStore(bundled_data_dir() / "cassettes")
    jobs = [(sc, cfg) for sc in scenarios for cfg in provider_configs]
    kwargs = {"transport": transport, "sleep": sleep}

    def work(job):
        sc, cfg = job
        return evaluate_cell(sc, cfg, pipeline_mode, map_mode, io_mode, store, travel_times, depart, **kwargs)

    if concurrency <= 1 or len(jobs) <= 1:
        return [work(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        return list(pool.map(work, jobs))


def dump_results(cells: Sequence[CellResult]) -> str:
    from .llm.prompts import PROMPT_VERSION

    doc = {"prompt_version": PROMPT_VERSION, "cells": [c.to_dict() for c in cells]}
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def load_results(path: str | Path) -> list[CellResult]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return [CellResult.from_dict(c) for c in doc["cells"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SchemaError(f"cannot read results from {path}: {exc}") from None
