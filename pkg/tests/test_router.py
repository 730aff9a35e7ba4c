import itertools
import random

import pytest

from randnet import corpus, random_network
from detour.disruption import NO_CONSTRAINTS, EffectiveConstraints, compile_constraints
from detour.errors import ForbiddenEndpoint, NoRoute, TooLarge
from detour.network import Station, TransitNetwork
from detour.router import Objective, brute_force_plan, plan
from detour.routes import Leg, Route, serialize_route
from detour.scenarios import load_scenarios


def test_toy_min_time_prefers_g_on_label_tie(toy):
    got = plan(toy, NO_CONSTRAINTS, "A", "D")
    assert got.route == Route((Leg("subway", "G", "A", "D"),))
    assert (got.total_cost_s, got.transfers, got.stations_visited) == (360.0, 0, 3)


def test_toy_avoiding_e_takes_r(toy):
    got = plan(toy, EffectiveConstraints(frozenset({"E"})), "A", "D")
    assert got.route == Route((Leg("subway", "R", "A", "D"),))
    assert (got.total_cost_s, got.transfers) == (360.0, 0)


def test_toy_stranded_is_no_route(toy):
    with pytest.raises(NoRoute):
        plan(toy, EffectiveConstraints(frozenset({"C"}), frozenset({"G"})), "A", "D")


def test_same_origin_and_destination(toy):
    got = plan(toy, NO_CONSTRAINTS, "A", "A")
    assert got.route == Route(()) and got.total_cost_s == 0 and got.transfers == 0


def test_forbidden_endpoint(toy):
    with pytest.raises(ForbiddenEndpoint):
        plan(toy, EffectiveConstraints(frozenset({"D"})), "A", "D")


def test_walk_leg_and_transfer_penalty(toy):
    # with R disabled past B, B->E on foot then G to D is the only way
    cons = EffectiveConstraints(frozenset({"A"}), frozenset({"R"}))
    got = plan(toy, cons, "B", "D")
    assert [leg.mode for leg in got.route.legs] == ["walk", "subway"]
    assert got.transfers == 1


def test_oracle_agrees_on_toy_pairs(toy):
    for cons in (NO_CONSTRAINTS, EffectiveConstraints(frozenset({"C"}))):
        for o, d in itertools.product("ABCDE", repeat=2):
            for obj in Objective:
                try:
                    fast = plan(toy, cons, o, d, obj)
                except (NoRoute, ForbiddenEndpoint) as exc:
                    with pytest.raises(type(exc)):
                        brute_force_plan(toy, cons, o, d, obj)
                    continue
                assert brute_force_plan(toy, cons, o, d, obj) == fast


def test_single_station_and_isolated_pair():
    one = TransitNetwork(stations=(Station("a", "Alpha", 0.0, 0.0),))
    assert brute_force_plan(one, NO_CONSTRAINTS, "a", "a").route == Route(())
    two = TransitNetwork(stations=(Station("a", "Alpha", 0.0, 0.0), Station("b", "Beta", 1.0, 1.0)))
    with pytest.raises(NoRoute):
        plan(two, NO_CONSTRAINTS, "a", "b")
    with pytest.raises(NoRoute):
        brute_force_plan(two, NO_CONSTRAINTS, "a", "b")


def test_brute_force_size_limit(nyc):
    with pytest.raises(TooLarge):
        brute_force_plan(nyc, NO_CONSTRAINTS, "wtc", "cathedral")


def test_min_stops_objective(nyc):
    fast = plan(nyc, NO_CONSTRAINTS, "timessq", "flushing", Objective.MIN_TIME)
    few = plan(nyc, NO_CONSTRAINTS, "timessq", "flushing", Objective.MIN_STOPS)
    # the shuttle skips Bryant Pk, saving a station at the price of a transfer
    assert (fast.stations_visited, few.stations_visited) == (8, 7)
    assert few.total_cost_s > fast.total_cost_s
    assert [leg.line for leg in few.route.legs] == ["S", "7 Express"]


def test_monotone_under_more_constraints():
    rng = random.Random(11)
    checked = 0
    for net, cons, o, d in corpus(11, 300):
        try:
            base = plan(net, cons, o, d)
        except (NoRoute, ForbiddenEndpoint):
            continue
        extra = [s.id for s in net.stations if s.id not in (o, d)]
        more = EffectiveConstraints(
            cons.forbidden_stations | frozenset(rng.sample(extra, k=min(len(extra), 1))),
            cons.disabled_lines | frozenset(ln.id for ln in net.lines if rng.random() < 0.3),
        )
        try:
            harder = plan(net, more, o, d)
        except NoRoute:
            continue
        assert harder.total_cost_s >= base.total_cost_s
        checked += 1
    assert checked > 50


def test_deterministic(nyc):
    sc = load_scenarios()
    for s in sc:
        net = s.network()
        cons = compile_constraints(net, s.disruption)
        from detour.network import resolve_station
        o, d = resolve_station(net, s.origin_name), resolve_station(net, s.dest_name)
        first = plan(net, cons, o, d, s.objective)
        again = plan(net, cons, o, d, s.objective)
        assert first == again
        assert serialize_route(first.route) == serialize_route(again.route)


def test_penalty_is_configurable(toy):
    cons = EffectiveConstraints(frozenset({"A"}), frozenset({"R"}))
    cheap = plan(toy, cons, "B", "D", transfer_penalty_s=0.0)
    dear = plan(toy, cons, "B", "D")
    assert dear.total_cost_s - cheap.total_cost_s == pytest.approx(300.0)


def test_random_network_helper_is_seeded():
    a = random_network(random.Random(3))
    b = random_network(random.Random(3))
    assert a == b
