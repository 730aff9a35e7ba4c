import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detour.disruption import DangerZone, DisruptionSpec, EffectiveConstraints, compile_constraints
from detour.errors import SchemaError, UnknownLine, UnknownStation


def test_avoided_station(toy):
    got = compile_constraints(toy, DisruptionSpec(avoided_stations=frozenset({"C"})))
    assert got == EffectiveConstraints(frozenset({"C"}), frozenset())


def test_disabled_line_and_zone(toy):
    box = DangerZone(40.711, -74.009, 40.713, -74.007)
    got = compile_constraints(toy, DisruptionSpec(disabled_lines=frozenset({"R"}), danger_zones=(box,)))
    assert got == EffectiveConstraints(frozenset({"E"}), frozenset({"R"}))


def test_empty_spec(toy):
    assert compile_constraints(toy, DisruptionSpec()) == EffectiveConstraints()


def test_labels_cover_every_matching_line(nyc):
    got = compile_constraints(nyc, DisruptionSpec(disabled_lines=frozenset({"7", "M4"})))
    assert got.disabled_lines == {"7", "M4"}
    assert "7X" not in got.disabled_lines


def test_unknown_references(toy):
    with pytest.raises(UnknownStation):
        compile_constraints(toy, DisruptionSpec(avoided_stations=frozenset({"Atlantis"})))
    with pytest.raises(UnknownLine):
        compile_constraints(toy, DisruptionSpec(disabled_lines=frozenset({"Q"})))


def test_dict_round_trip():
    doc = {"disabled_lines": ["1", "A"], "avoided_stations": ["Times Sq-42 St"],
           "danger_zones": [{"min_lat": 1.0, "min_lon": 2.0, "max_lat": 3.0, "max_lon": 4.0}]}
    assert DisruptionSpec.from_dict(doc).to_dict() == doc


@pytest.mark.parametrize("doc", [
    [], {"zones": []}, {"disabled_lines": "1"},
    {"danger_zones": [{"min_lat": 1, "min_lon": 2, "max_lat": 3}]},
])
def test_bad_spec(doc):
    with pytest.raises(SchemaError):
        DisruptionSpec.from_dict(doc)


@settings(max_examples=100)
@given(
    st.frozensets(st.sampled_from("ABCDE")), st.frozensets(st.sampled_from("ABCDE")),
    st.frozensets(st.sampled_from("RG")), st.frozensets(st.sampled_from("RG")),
)
def test_compile_is_monotone(toy, s1, s2, l1, l2):
    small = compile_constraints(toy, DisruptionSpec(l1, s1))
    big = compile_constraints(toy, DisruptionSpec(l1 | l2, s1 | s2))
    assert small.forbidden_stations <= big.forbidden_stations
    assert small.disabled_lines <= big.disabled_lines


@settings(max_examples=100)
@given(st.integers(0, 10_000))
def test_covered_zone_forbids_subset(toy, seed):
    rng = random.Random(seed)
    lat0, lon0 = 40.69 + rng.random() * 0.05, -74.02 + rng.random() * 0.03
    inner = DangerZone(lat0, lon0, lat0 + rng.random() * 0.02, lon0 + rng.random() * 0.02)
    outer = DangerZone(inner.min_lat - rng.random() * 0.01, inner.min_lon - rng.random() * 0.01,
                       inner.max_lat + rng.random() * 0.01, inner.max_lon + rng.random() * 0.01)
    a = compile_constraints(toy, DisruptionSpec(danger_zones=(inner,)))
    b = compile_constraints(toy, DisruptionSpec(danger_zones=(outer,)))
    assert a.forbidden_stations <= b.forbidden_stations
