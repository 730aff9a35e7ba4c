import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detour.errors import (
    Ambiguous,
    DanglingReference,
    DuplicateId,
    InvalidZone,
    NotFound,
    NotOnLine,
    SchemaError,
)
from detour.geo import BoundingBox
from detour.network import (
    dump_network,
    line_segment,
    load_network,
    network_to_dict,
    normalize_name,
    resolve_station,
    segment_time,
    stations_in_zone,
    walk_links,
    walk_time,
)


def ref_walk_seconds(lat1, lon1, lat2, lon2, speed=1.25):
    # independent great-circle distance (spherical law of cosines, mean radius)
    p1, p2, dl = math.radians(lat1), math.radians(lat2), math.radians(lon2 - lon1)
    c = math.sin(p1) * math.sin(p2) + math.cos(p1) * math.cos(p2) * math.cos(dl)
    return 6371008.8 * math.acos(min(1.0, c)) / speed


def tiny_doc(**overrides):
    doc = {
        "stations": [
            {"id": "a", "name": "Alpha", "aliases": [], "lat": 40.0, "lon": -74.0},
            {"id": "b", "name": "Beta", "aliases": [], "lat": 40.01, "lon": -74.0},
        ],
        "lines": [{"id": "L", "label": "1", "mode": "subway", "stops": ["a", "b"],
                   "hop_times_s": [60], "bidirectional": True}],
        "bike_stations": [],
        "walk_link_threshold_m": 1000,
        "walking_speed_mps": 1.25,
    }
    doc.update(overrides)
    return doc


def test_toy_fixture_shape(toy):
    assert [s.id for s in toy.stations] == ["A", "B", "C", "D", "E"]
    assert {ln.display_label: ln.stops for ln in toy.lines} == {
        "R": ("A", "B", "C", "D"),
        "G": ("A", "E", "D"),
    }
    assert toy.line("R").hop_times == (120.0, 120.0, 120.0)
    assert toy.line("G").hop_times == (180.0, 180.0)
    assert toy.station("E").lat == 40.712 and toy.station("E").lon == -74.008


def test_dangling_reference():
    doc = tiny_doc()
    doc["lines"][0]["stops"] = ["a", "Z"]
    with pytest.raises(DanglingReference):
        load_network(json.dumps(doc))


def test_zero_lines_one_station_is_valid():
    doc = tiny_doc(lines=[])
    doc["stations"] = doc["stations"][:1]
    net = load_network(json.dumps(doc))
    assert len(net.stations) == 1 and not net.lines


def test_duplicate_station_id():
    doc = tiny_doc()
    doc["stations"][1]["id"] = "a"
    with pytest.raises(DuplicateId):
        load_network(json.dumps(doc))


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(extra=1),
    lambda d: d["stations"][0].update(lat=91),
    lambda d: d["stations"][0].update(name="  "),
    lambda d: d["lines"][0].update(hop_times_s=[60, 60]),
    lambda d: d["lines"][0].update(hop_times_s=[0]),
    lambda d: d["lines"][0].update(stops=["a", "a"], hop_times_s=[60]),
    lambda d: d["lines"][0].update(mode="ferry"),
    lambda d: d.update(walking_speed_mps=0),
])
def test_schema_errors(mutate):
    doc = tiny_doc()
    mutate(doc)
    with pytest.raises(SchemaError):
        load_network(json.dumps(doc))


def test_canonical_name_collision():
    doc = tiny_doc()
    doc["stations"][1]["name"] = "ALPHA"
    with pytest.raises(DuplicateId):
        load_network(json.dumps(doc))


def test_not_json():
    with pytest.raises(SchemaError):
        load_network("{nope")


def test_document_round_trip(nyc):
    again = load_network(dump_network(nyc))
    assert network_to_dict(again) == network_to_dict(nyc)


def test_resolve_normalizes_spacing_and_case(nyc):
    assert resolve_station(nyc, "cathedral  parkway") == "cathedral"
    assert resolve_station(nyc, "FLUSHING MAIN ST") == "flushing"
    assert normalize_name("Flushing-Main  St") == normalize_name("flushing main st")


def test_resolve_ambiguous_alias(toy):
    doc = network_to_dict(toy)
    doc["stations"][0]["aliases"] = ["42 St"]
    doc["stations"][1]["aliases"] = ["42 St"]
    net = load_network(json.dumps(doc))
    with pytest.raises(Ambiguous) as info:
        resolve_station(net, "42 st")
    assert set(info.value.candidates) == {"A", "B"}


def test_resolve_not_found(toy):
    with pytest.raises(NotFound):
        resolve_station(toy, "Atlantis")


def test_every_canonical_name_resolves_to_itself(nyc, data_dir):
    dc = load_network(data_dir / "networks" / "dc.json")
    for net in (nyc, dc):
        for s in net.stations:
            assert resolve_station(net, s.canonical_name) == s.id


def test_walk_time_identity_and_toy_value(toy):
    assert walk_time(toy, "A", "A") == 0
    expected = ref_walk_seconds(40.700, -74.000, 40.730, -74.000)
    assert walk_time(toy, "A", "D") == pytest.approx(expected, rel=1e-9)
    assert walk_time(toy, "A", "D") == pytest.approx(2670, rel=0.01)


@settings(max_examples=60)
@given(st.sampled_from("ABCDE"), st.sampled_from("ABCDE"), st.sampled_from("ABCDE"))
def test_walk_time_symmetric_and_triangle(toy, a, b, c):
    assert walk_time(toy, a, b) == walk_time(toy, b, a) >= 0
    assert walk_time(toy, a, c) <= walk_time(toy, a, b) + walk_time(toy, b, c) + 1e-6


def test_stations_in_zone(toy):
    assert stations_in_zone(toy, BoundingBox(40.719, -74.001, 40.721, -73.999)) == {"C"}
    assert stations_in_zone(toy, BoundingBox(0.0, -30.0, 1.0, -29.0)) == set()
    assert stations_in_zone(toy, BoundingBox(-90, -180, 90, 180)) == {"A", "B", "C", "D", "E"}


def test_inverted_box_rejected():
    with pytest.raises(InvalidZone):
        BoundingBox(41.0, -74.0, 40.0, -73.0)


def test_line_segments(toy):
    assert line_segment(toy, "R", "A", "C") == ["A", "B", "C"]
    assert line_segment(toy, "R", "D", "B") == ["D", "C", "B"]
    with pytest.raises(NotOnLine):
        line_segment(toy, "R", "A", "E")
    assert segment_time(toy, "G", "A", "D") == 360.0


@settings(max_examples=80)
@given(st.data())
def test_segment_reverse_property(nyc, data):
    line = data.draw(st.sampled_from(nyc.lines))
    x = data.draw(st.sampled_from(line.stops))
    y = data.draw(st.sampled_from(line.stops))
    assert line_segment(nyc, line.id, x, y) == line_segment(nyc, line.id, y, x)[::-1]


def test_walk_links_respect_threshold(toy):
    links = {(a, b) for a, b, _ in walk_links(toy)}
    # B-E is about 0.71 km; A-D is over 3 km
    assert ("B", "E") in links or ("E", "B") in links
    assert ("A", "D") not in links and ("D", "A") not in links
    assert all(d <= toy.walk_link_threshold_m for _, _, d in walk_links(toy))
