"""Per-leg travel-time estimators used by the travel-time metric.

``estimate`` returns seconds, or ``None`` when the provider cannot time the
leg; callers then fall back to straight-line walking time.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Optional, Protocol
from zoneinfo import ZoneInfo

from .errors import AuthError, NotOnLine, DirectionUnavailable, TransportError
from .network import TransitNetwork, distance_m, segment_time, walk_time

DEFAULT_DEPART = datetime(2024, 5, 1, 13, 30, tzinfo=ZoneInfo("America/New_York"))
BIKE_SPEED_MPS = 4.0


class TravelTimeProvider(Protocol):
    def estimate(
        self, mode: str, line: Optional[str], start: str, end: str, depart: datetime
    ) -> Optional[float]: ...


def connecting_line(network: TransitNetwork, mode: str, label: str, start: str, end: str):
    """First line (document order) with this label and mode that links the two stations."""
    for line in network.lines_with_label(label, mode):
        try:
            segment_time(network, line.id, start, end)
        except (NotOnLine, DirectionUnavailable):
            continue
        return line
    return None


class NetworkTravelTimes:
    """Offline estimator: scheduled hop times for rides, fixed speeds otherwise."""

    def __init__(self, network: TransitNetwork, bike_speed_mps: float = BIKE_SPEED_MPS):
        self.network = network
        self.bike_speed_mps = bike_speed_mps

    def estimate(self, mode, line, start, end, depart):
        if mode == "walk":
            return walk_time(self.network, start, end)
        if mode == "bike":
            return distance_m(self.network, start, end) / self.bike_speed_mps
        if not line:
            return None
        found = connecting_line(self.network, mode, line, start, end)
        if found is None:
            return None
        return segment_time(self.network, found.id, start, end)


_DIRECTIONS_MODE = {"subway": "transit", "bus": "transit", "walk": "walking", "bike": "bicycling"}


class DirectionsTravelTimes:
    """Query an external directions service, caching every answer on disk.

    The cache is keyed by (mode, from, to, departure timestamp), so a rerun
    with the same cache directory never touches the network.
    """

    def __init__(
        self,
        network: TransitNetwork,
        endpoint: str,
        cache_dir: str | Path,
        api_key_env: str = "DIRECTIONS_API_KEY",
        http_get: Callable[[str, dict[str, Any]], dict] | None = None,
    ):
        self.network = network
        self.endpoint = endpoint
        self.cache_dir = Path(cache_dir)
        self.api_key_env = api_key_env
        self._http_get = http_get or _httpx_get
        self._lock = threading.Lock()

    def _cache_path(self, mode: str, start: str, end: str, depart: datetime) -> Path:
        raw = json.dumps([mode, start, end, depart.isoformat()], separators=(",", ":"))
        return self.cache_dir / (hashlib.sha256(raw.encode()).hexdigest() + ".json")

    def estimate(self, mode, line, start, end, depart):
        path = self._cache_path(mode, start, end, depart)
        if path.is_file():
            return json.loads(path.read_text())["seconds"]
        key = os.environ.get(self.api_key_env)
        if not key:
            raise AuthError(f"environment variable {self.api_key_env} is not set")
        a, b = self.network.station(start), self.network.station(end)
        params = {
            "origin": f"{a.lat},{a.lon}",
            "destination": f"{b.lat},{b.lon}",
            "mode": _DIRECTIONS_MODE.get(mode, "transit"),
            "departure_time": int(depart.timestamp()),
            "key": key,
        }
        body = self._http_get(self.endpoint, params)
        try:
            seconds = float(body["routes"][0]["legs"][0]["duration"]["value"])
        except (KeyError, IndexError, TypeError, ValueError):
            seconds = None
        with self._lock:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps({"seconds": seconds, "mode": mode, "from": start, "to": end,
                                       "depart": depart.isoformat()}, sort_keys=True))
            os.replace(tmp, path)
        return seconds


def _httpx_get(url: str, params: dict[str, Any]) -> dict:
    import httpx

    try:
        resp = httpx.get(url, params=params, timeout=30.0)
    except httpx.HTTPError as exc:
        raise TransportError(str(exc)) from exc
    if resp.status_code in (401, 403):
        raise AuthError(f"directions service rejected the key ({resp.status_code})")
    if resp.status_code >= 400:
        raise TransportError(f"directions service returned {resp.status_code}")
    return resp.json()
