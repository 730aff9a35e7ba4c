import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import SUMMARY_CORPUS
from detour.errors import InvariantViolation
from detour.routes import (
    ROUTE_GRAMMAR,
    FormatViolation,
    Leg,
    Route,
    ViolationReason,
    parse_route,
    serialize_route,
    validate_chaining,
)

names = st.text(min_size=1, max_size=12).filter(lambda s: s.strip())
ride_leg = st.builds(Leg, st.sampled_from(["subway", "bus"]), names, names, names)
other_leg = st.builds(Leg, st.sampled_from(["walk", "bike"]), st.none() | names, names, names)
routes = st.lists(ride_leg | other_leg, max_size=6).map(lambda legs: Route(tuple(legs)))


def test_single_leg():
    got = parse_route('{"legs":[{"mode":"subway","line":"G","from":"A","to":"D"}]}')
    assert got == Route((Leg("subway", "G", "A", "D"),))


def test_empty_route_is_valid():
    assert parse_route('{"legs":[]}') == Route(())
    assert serialize_route(Route(())) == '{"legs":[]}'


def test_prose_wrapped():
    got = parse_route('Sure! Here is your route: {"legs":[]}')
    assert isinstance(got, FormatViolation) and got.reason is ViolationReason.EXTRA_PROSE


def test_bad_term():
    got = parse_route('{"legs":[{"mode":"teleport","from":"A","to":"D"}]}')
    assert got.reason is ViolationReason.BAD_MODE_TERM and got.offending_text == "teleport"


def test_train_is_subway_and_case_is_ignored():
    got = parse_route('{"legs":[{"mode":"Train","line":"7","from":"A","to":"B"}]}')
    assert got.legs[0].mode == "subway"
    assert serialize_route(got) == '{"legs":[{"mode":"subway","line":"7","from":"A","to":"B"}]}'


def test_numeric_line_label():
    assert parse_route('{"legs":[{"mode":"subway","line":7,"from":"A","to":"B"}]}').legs[0].line == "7"


def test_extra_keys_tolerated():
    got = parse_route('{"legs":[{"mode":"walk","from":"A","to":"B","minutes":4}],"note":"x"}')
    assert got == Route((Leg("walk", None, "A", "B"),))


@pytest.mark.parametrize("text,reason", [
    ('{"legs":[{"mode":"bus","from":"A","to":"B"}]}', "MissingField"),
    ('{"route":[]}', "MissingField"),
    ('{"legs":{"mode":"walk"}}', "NotAnObject"),
    ('{"legs":[{"mode":"walk","from":" ","to":"B"}]}', "EmptyName"),
    ("42", "NotAnObject"),
    ("Take the G train.", "NotAnObject"),
])
def test_violation_reasons(text, reason):
    got = parse_route(text)
    assert isinstance(got, FormatViolation) and got.reason.value == reason


def test_serialize_rejects_invalid_route():
    with pytest.raises(InvariantViolation):
        serialize_route(Route((Leg("subway", None, "A", "B"),)))
    with pytest.raises(InvariantViolation):
        serialize_route(Route((Leg("hover", None, "A", "B"),)))


def test_grammar_is_valid_json_template():
    assert '"legs"' in ROUTE_GRAMMAR and '"mode"' in ROUTE_GRAMMAR


@pytest.mark.parametrize("legs,gaps", [
    ([("A", "B"), ("B", "C")], []),
    ([("A", "B"), ("E", "D")], [(0, 1)]),
    ([], []),
])
def test_chaining(legs, gaps):
    route = Route(tuple(Leg("walk", None, a, b) for a, b in legs))
    assert validate_chaining(route) == gaps


@pytest.mark.parametrize("name,text,reason,gaps", SUMMARY_CORPUS, ids=[c[0] for c in SUMMARY_CORPUS])
def test_labeled_corpus(name, text, reason, gaps):
    got = parse_route(text)
    if reason is None:
        assert isinstance(got, Route)
        assert validate_chaining(got) == gaps
    else:
        assert isinstance(got, FormatViolation) and got.reason.value == reason


@settings(max_examples=300)
@given(routes)
def test_round_trip(route):
    assert parse_route(serialize_route(route)) == route


@settings(max_examples=200)
@given(routes, routes)
def test_serialize_injective(r1, r2):
    if r1 != r2:
        assert serialize_route(r1) != serialize_route(r2)


@settings(max_examples=300)
@given(st.text() | st.recursive(
    st.none() | st.booleans() | st.integers() | st.text(max_size=5),
    lambda inner: st.lists(inner, max_size=3) | st.dictionaries(st.sampled_from(["legs", "mode", "line", "from", "to"]), inner, max_size=4),
).map(json.dumps))
def test_parse_is_total(text):
    assert isinstance(parse_route(text), (Route, FormatViolation))
