"""``detour`` command line.

JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 input or
config error, 2 no route, 3 provider/transport error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime
from pathlib import Path
from typing import Sequence
from zoneinfo import ZoneInfo

from . import __version__
from .disruption import DangerZone, DisruptionSpec, compile_constraints
from .errors import DetourError, NoRoute, ProviderError
from .gtfs import import_gtfs
from .llm import CassetteStore, IoMode, MapMode, PipelineMode, load_provider_configs, select_providers
from .llm.pipeline import require_token
from .metrics import count_transfers, evaluate
from .network import dump_network, load_network, resolve_station
from .report import LAYOUTS, aggregate, render_csv, render_table
from .router import Objective, plan
from .routes import parse_route, serialize_route
from .scenarios import bundled_data_dir, dump_results, load_results, load_scenario_file, load_scenarios, run_evaluation
from .traveltime import DEFAULT_DEPART

EXIT_OK, EXIT_INPUT, EXIT_NO_ROUTE, EXIT_PROVIDER = 0, 1, 2, 3


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _depart(text: str | None) -> datetime:
    if not text:
        return DEFAULT_DEPART
    when = datetime.fromisoformat(text)
    if when.tzinfo is None:
        when = when.replace(tzinfo=ZoneInfo("America/New_York"))
    return when


def _network_arg(args: argparse.Namespace, explicit: str | None = None):
    path = explicit or args.network
    if not path:
        raise DetourError("no network given (use --network PATH)")
    return load_network(Path(path))


# -- network ----------------------------------------------------------------------

def cmd_network_validate(args: argparse.Namespace) -> int:
    net = load_network(Path(args.document))
    _err(f"ok: {len(net.stations)} stations, {len(net.lines)} lines, {len(net.bike_stations)} bike stations")
    return EXIT_OK


def cmd_network_import(args: argparse.Namespace) -> int:
    net = import_gtfs(args.feed)
    text = dump_network(net)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _err(f"wrote {args.out}: {len(net.stations)} stations, {len(net.lines)} lines")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- plan / evaluate ----------------------------------------------------------------

def _zone(text: str) -> DangerZone:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise DetourError(f"--zone expects min_lat,min_lon,max_lat,max_lon, got {text!r}") from None
    if len(parts) != 4:
        raise DetourError(f"--zone expects four numbers, got {text!r}")
    return DangerZone(*parts)


def cmd_plan(args: argparse.Namespace) -> int:
    net = _network_arg(args)
    spec = DisruptionSpec()
    if args.disruption:
        try:
            spec = DisruptionSpec.from_dict(json.loads(Path(args.disruption).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise DetourError(f"cannot read disruption file: {exc}") from None
    spec = DisruptionSpec(
        disabled_lines=spec.disabled_lines | frozenset(args.disable_line),
        avoided_stations=spec.avoided_stations | frozenset(args.avoid_station),
        danger_zones=spec.danger_zones + tuple(_zone(z) for z in args.zone),
    )
    constraints = compile_constraints(net, spec)
    origin = resolve_station(net, args.origin)
    dest = resolve_station(net, args.dest)
    result = plan(net, constraints, origin, dest, Objective(args.objective))
    print(serialize_route(result.route))
    report = evaluate(net, constraints, origin, dest, result.route)
    _err(
        f"cost={result.total_cost_s:.0f}s transfers={result.transfers} stations={result.stations_visited} "
        f"connected={report.connected} avoided={report.avoided} normalized_time={report.normalized_time:.3f}"
    )
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    scenario_path = Path(args.scenario)
    if not scenario_path.is_file():
        raise DetourError(f"scenario file {scenario_path} does not exist")
    try:
        text = Path(args.route).read_text(encoding="utf-8")
    except OSError as exc:
        raise DetourError(f"cannot read route file: {exc}") from None
    scenario = load_scenario_file(scenario_path)[0]
    net = scenario.network()
    constraints = compile_constraints(net, scenario.disruption)
    origin = resolve_station(net, scenario.origin_name)
    dest = resolve_station(net, scenario.dest_name)
    report = evaluate(net, constraints, origin, dest, parse_route(text), depart=_depart(args.depart))
    print(json.dumps(report.to_dict(), indent=2, ensure_ascii=False))
    return EXIT_OK


# -- llm / report -------------------------------------------------------------------

def cmd_llm_run(args: argparse.Namespace) -> int:
    scenarios = load_scenarios(args.scenarios)
    configs = select_providers(load_provider_configs(args.providers_file), args.providers)
    io_mode = IoMode(args.io)
    if io_mode is not IoMode.REPLAY:
        for cfg in configs:
            require_token(cfg)
    store = CassetteStore(args.cassettes)
    cells = run_evaluation(
        scenarios, configs, PipelineMode(args.pipeline), MapMode(args.maps + "-maps"), io_mode, store,
        depart=_depart(args.depart), concurrency=args.concurrency,
    )
    out = Path(args.out) if args.out else Path(args.out_dir) / "results.json"
    if out.exists() and args.append:
        cells = load_results(out) + cells
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump_results(cells), encoding="utf-8")
    failed = 0
    for cell in cells:
        if cell.error:
            failed += 1
            _err(f"{cell.scenario:>4} {cell.provider:<8} {cell.pipeline}/{cell.maps}: ERROR {cell.error}")
        else:
            r = cell.report
            _err(
                f"{cell.scenario:>4} {cell.provider:<8} {cell.pipeline}/{cell.maps}: valid={r.valid} "
                f"connected={r.connected} avoided={r.avoided} time={r.normalized_time:.2f} "
                f"transfers={r.transfers} violation={r.format_violation}"
            )
    _err(f"{len(cells)} cells, {failed} errors -> {out}")
    return EXIT_PROVIDER if failed else EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cells = load_results(args.results)
    agg = aggregate(cells)
    providers = [p.strip() for p in args.columns.split(",")] if args.columns else None
    kwargs = {"subject": args.subject}
    if providers:
        kwargs["providers"] = providers
    sys.stdout.write(render_table(agg, args.layout, **kwargs))
    csv_path = Path(args.csv) if args.csv else Path(args.out_dir) / f"report-{args.layout}.csv"
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_text(render_csv(agg, args.layout, **kwargs), encoding="utf-8")
    _err(f"wrote {csv_path}")
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    data = bundled_data_dir()
    p = argparse.ArgumentParser(prog="detour", description="Disruption-aware transit routing and route evaluation.")
    p.add_argument("--version", action="version", version=f"detour {__version__}")
    p.add_argument("--network", help="network document (JSON)")
    p.add_argument("--cassettes", default=str(data / "cassettes"), help="transcript directory")
    p.add_argument("--providers-file", default=str(data / "providers.json"))
    p.add_argument("--depart", help="departure time, ISO 8601 (default 2024-05-01T13:30 America/New_York)")
    p.add_argument("--concurrency", type=int, default=4)
    p.add_argument("--out-dir", default=".")
    sub = p.add_subparsers(dest="command", required=True)

    net = sub.add_parser("network", help="validate or import networks")
    net_sub = net.add_subparsers(dest="network_command", required=True)
    v = net_sub.add_parser("validate", help="check a network document")
    v.add_argument("document")
    v.set_defaults(func=cmd_network_validate)
    g = net_sub.add_parser("import-gtfs", help="convert a GTFS feed directory")
    g.add_argument("feed")
    g.add_argument("--out", help="write the network document here instead of stdout")
    g.set_defaults(func=cmd_network_import)

    pl = sub.add_parser("plan", help="deterministic constrained route")
    pl.add_argument("origin")
    pl.add_argument("dest")
    pl.add_argument("--disruption", help="JSON file with disabled_lines / avoided_stations / danger_zones")
    pl.add_argument("--avoid-station", action="append", default=[])
    pl.add_argument("--disable-line", action="append", default=[])
    pl.add_argument("--zone", action="append", default=[], help="min_lat,min_lon,max_lat,max_lon")
    pl.add_argument("--objective", choices=[o.value for o in Objective], default="min-time")
    pl.set_defaults(func=cmd_plan)

    ev = sub.add_parser("evaluate", help="score a summary-stage route against a scenario")
    ev.add_argument("route", help="file holding the route text")
    ev.add_argument("scenario", help="scenario JSON file")
    ev.set_defaults(func=cmd_evaluate)

    llm = sub.add_parser("llm", help="run the two-stage pipeline over scenarios")
    llm_sub = llm.add_subparsers(dest="llm_command", required=True)
    run = llm_sub.add_parser("run")
    run.add_argument("--scenarios", default=str(data / "scenarios"))
    run.add_argument("--providers", default="all", help='"all" or comma-separated provider names')
    run.add_argument("--pipeline", choices=[m.value for m in PipelineMode], default="two-stage")
    run.add_argument("--maps", choices=["with", "without"], default="with")
    run.add_argument("--io", choices=[m.value for m in IoMode], default="replay")
    run.add_argument("--out", help="results file (default OUT_DIR/results.json)")
    run.add_argument("--append", action="store_true", help="add cells to an existing results file")
    run.set_defaults(func=cmd_llm_run)

    rep = sub.add_parser("report", help="render comparison tables from results")
    rep.add_argument("results")
    rep.add_argument("--layout", choices=LAYOUTS, default="models")
    rep.add_argument("--columns", help="provider columns for the models layout")
    rep.add_argument("--subject", default="GPT", help="provider used by the ablation layouts")
    rep.add_argument("--csv", help="CSV output path (default OUT_DIR/report-LAYOUT.csv)")
    rep.set_defaults(func=cmd_report)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoRoute as exc:
        _err(f"NoRoute: {exc}")
        return EXIT_NO_ROUTE
    except ProviderError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_PROVIDER
    except DetourError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
