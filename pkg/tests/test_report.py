import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detour.errors import EmptyGroup, MissingColumn
from detour.metrics import MetricsReport
from detour.report import MISSING, aggregate, render_csv, render_table, table_rows
from detour.scenarios import CellResult


def report(ok=True, violation=False, time=0.3, transfers=1):
    if violation:
        return MetricsReport(False, [], False, [], None, 1.0, 0, True, False, "ExtraProse")
    return MetricsReport(ok, [ok], ok, [], 100.0, time, transfers, False, True)


def cells(provider, reports, pipeline="two-stage", maps="with-maps"):
    return [CellResult(f"S{i + 1}", provider, pipeline, maps, r) for i, r in enumerate(reports)]


def full_matrix():
    out = []
    for p in ("GPT", "Gemini", "Claude"):
        out += cells(p, [report(i < 7) for i in range(9)])
    out += cells("GPT", [report(i < 5) for i in range(9)], maps="without-maps")
    out += cells("GPT", [report(violation=i < 6) for i in range(9)], pipeline="single-stage")
    return out


def test_seven_of_nine_renders_078():
    agg = aggregate(cells("GPT", [report(i < 7) for i in range(9)]))
    stats = agg.get("GPT")
    assert stats.connectivity == 7 / 9
    assert render_table(agg, "models", providers=["GPT"]).splitlines()[2].split("|")[1].strip() == "0.78"


def test_one_of_nine_violations_renders_011():
    agg = aggregate(full_matrix() + cells("GPT", [report(violation=i == 0) for i in range(9)], pipeline="single-stage", maps="without-maps"))
    stats = agg.get("GPT", "single-stage", "without-maps")
    assert stats.violation_rate == 1 / 9
    assert f"{stats.violation_rate:.2f}" == "0.11"


def test_all_invalid_group():
    agg = aggregate(cells("GPT", [report(violation=True)] * 9))
    stats = agg.get("GPT")
    assert stats.normalized_time == 1.0 and stats.transfers is None and stats.valid_count == 0
    header, body = table_rows(agg, "models", providers=["GPT"])
    assert dict((row[0], row[1]) for row in body)["# Transfers ↓"] == MISSING


def test_transfers_average_valid_routes_only():
    agg = aggregate(cells("GPT", [report(transfers=2), report(transfers=4), report(violation=True)]))
    assert agg.get("GPT").transfers == 3.0 and agg.get("GPT").valid_count == 2


def test_models_layout_shape():
    header, body = table_rows(aggregate(full_matrix()), "models")
    assert header == ["Metric", "GPT", "Gemini", "Claude"]
    assert [r[0] for r in body] == ["Connectivity ↑", "Avoidance ↑", "Approx. Time ↓", "# Transfers ↓"]


def test_ablation_layouts():
    agg = aggregate(full_matrix())
    header, body = table_rows(agg, "map-ablation")
    assert header == ["Metric", "GPT w/ Map", "GPT w/o Map"]
    assert body[0][1:] == ["0.78", "0.56"]
    header, body = table_rows(agg, "summary-ablation")
    assert header == ["Metric", "Separate summary: Yes", "Separate summary: No"]
    assert body[-1] == ["Violations of format ↓", "0.00", "0.67"]


def test_missing_column_and_empty():
    with pytest.raises(MissingColumn):
        render_table(aggregate(cells("GPT", [report()])), "models")
    with pytest.raises(EmptyGroup):
        aggregate([])


def test_errored_cells_counted_not_scored():
    mixed = cells("GPT", [report(), report(False)]) + [CellResult("S9", "GPT", "two-stage", "with-maps", None, "ReplayMiss: x")]
    stats = aggregate(mixed).get("GPT")
    assert stats.cells == 2 and stats.errors == 1 and stats.connectivity == 0.5
    with pytest.raises(EmptyGroup):
        aggregate([CellResult("S9", "GPT", "two-stage", "with-maps", None, "boom")])


def test_csv():
    text = render_csv(aggregate(full_matrix()), "models")
    lines = text.splitlines()
    assert lines[0] == "metric,GPT,Gemini,Claude" and len(lines) == 5


@settings(max_examples=50)
@given(st.randoms(use_true_random=False))
def test_aggregate_permutation_invariant(rnd: random.Random):
    base = full_matrix()
    for c in base:
        if c.report is not None and c.report.valid:
            c.report.normalized_time = rnd.random()
    shuffled = list(base)
    rnd.shuffle(shuffled)
    assert aggregate(shuffled) == aggregate(base)
