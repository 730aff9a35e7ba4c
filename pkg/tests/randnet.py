"""Seeded small random networks for oracle and metric property tests."""

from __future__ import annotations

import random

from detour.disruption import EffectiveConstraints
from detour.network import Line, Station, TransitNetwork

LABELS = ["1", "2", "A", "G", "R", "M15"]


def random_network(rng: random.Random, max_stations: int = 8, max_lines: int = 3) -> TransitNetwork:
    n = rng.randint(2, max_stations)
    coords: set[tuple[float, float]] = set()
    while len(coords) < n:
        # about 2.2 km x 1.7 km, so some pairs fall under the walk threshold
        coords.add((round(40.70 + rng.random() * 0.02, 5), round(-74.00 + rng.random() * 0.02, 5)))
    stations = [
        Station(id=f"s{i}", canonical_name=f"Stop {i}", lat=lat, lon=lon)
        for i, (lat, lon) in enumerate(sorted(coords))
    ]
    ids = [s.id for s in stations]
    lines = []
    labels = rng.sample(LABELS, k=rng.randint(0, max_lines))
    for k, label in enumerate(labels):
        stops = rng.sample(ids, k=rng.randint(2, n))
        mode = rng.choice(["subway", "subway", "bus", "walk-network"])
        hops = [float(rng.choice([60, 90, 120, 120, 180, 300])) for _ in stops[1:]]
        lines.append(Line(
            id=f"L{k}", display_label=label, mode=mode, stops=tuple(stops),
            hop_times=tuple(hops), bidirectional=rng.random() < 0.7,
        ))
    return TransitNetwork(stations=tuple(stations), lines=tuple(lines))


def random_constraints(rng: random.Random, net: TransitNetwork) -> EffectiveConstraints:
    ids = [s.id for s in net.stations]
    forbidden = frozenset(s for s in ids if rng.random() < 0.2)
    disabled = frozenset(ln.id for ln in net.lines if rng.random() < 0.25)
    return EffectiveConstraints(forbidden_stations=forbidden, disabled_lines=disabled)


def corpus(seed: int, count: int):
    """Yield (network, constraints, origin, dest) cases."""
    rng = random.Random(seed)
    for _ in range(count):
        net = random_network(rng)
        ids = [s.id for s in net.stations]
        cons = random_constraints(rng, net)
        yield net, cons, rng.choice(ids), rng.choice(ids)
