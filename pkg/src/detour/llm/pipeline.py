"""Calling providers (live, record, replay) and chaining the two stages."""

from __future__ import annotations

import enum
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import TYPE_CHECKING, Callable, Optional

from ..errors import AuthError, RateLimited, ReplayMiss, TransportError
from ..routes import ParseResult, parse_route
from .cassette import CassetteStore, Transcript, request_snapshot, transcript_key
from .prompts import (
    MapMode,
    PipelineMode,
    build_planner_prompt,
    build_single_stage_prompt,
    build_summary_prompt,
)
from .providers import HttpxTransport, ProviderConfig, Transport, build_request, parse_response

if TYPE_CHECKING:
    from ..scenarios import Scenario
    from .prompts import PromptBundle

MAX_ATTEMPTS = 3
BACKOFF_START_S = 1.0


class IoMode(str, enum.Enum):
    LIVE = "live"
    RECORD = "record"
    REPLAY = "replay"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def require_token(config: ProviderConfig) -> str:
    token = os.environ.get(config.auth_token_env)
    if not token:
        raise AuthError(f"{config.name}: environment variable {config.auth_token_env} is not set")
    return token


def _call(
    config: ProviderConfig,
    bundle: "PromptBundle",
    transport: Transport,
    sleep: Callable[[float], None],
) -> str:
    token = require_token(config)
    url, headers, payload = build_request(config, bundle, token)
    delay = BACKOFF_START_S
    for attempt in range(1, MAX_ATTEMPTS + 1):
        status, body = transport.post(url, headers, payload)
        if status == 429:
            if attempt == MAX_ATTEMPTS:
                raise RateLimited(f"{config.name}: still rate limited after {MAX_ATTEMPTS} attempts")
            sleep(delay)
            delay *= 2
            continue
        if status in (401, 403):
            raise AuthError(f"{config.name}: credentials rejected ({status})")
        if status >= 400:
            raise TransportError(f"{config.name}: HTTP {status}: {str(body)[:200]}")
        return parse_response(config.api, body)
    raise AssertionError("unreachable")


def invoke(
    config: ProviderConfig,
    bundle: "PromptBundle",
    store: Optional[CassetteStore],
    io_mode: IoMode = IoMode.REPLAY,
    *,
    transport: Optional[Transport] = None,
    sleep: Callable[[float], None] = time.sleep,
    now: Callable[[], str] = _utc_now,
) -> str:
    io_mode = IoMode(io_mode)
    key = transcript_key(config, bundle)
    if io_mode is IoMode.REPLAY:
        found = store.get(key) if store is not None else None
        if found is None:
            raise ReplayMiss(key)
        return found.response_text

    text = _call(config, bundle, transport or HttpxTransport(), sleep)
    if io_mode is IoMode.RECORD:
        if store is None:
            raise ValueError("record mode needs a cassette store")
        store.put(Transcript(key, request_snapshot(config, bundle), text, now()))
    return text


@dataclass(frozen=True)
class PipelineResult:
    plan_text: str
    summary_text: Optional[str]
    parse_result: ParseResult
    planner_key: str
    summary_key: Optional[str] = None


def run_pipeline(
    scenario: "Scenario",
    config: ProviderConfig,
    pipeline_mode: PipelineMode = PipelineMode.TWO_STAGE,
    map_mode: MapMode = MapMode.WITH_MAPS,
    store: Optional[CassetteStore] = None,
    io_mode: IoMode = IoMode.REPLAY,
    **invoke_kwargs,
) -> PipelineResult:
    """Planner then summary (two-stage), or one merged call (single-stage)."""
    planner = build_planner_prompt(scenario, map_mode=map_mode)
    if PipelineMode(pipeline_mode) is PipelineMode.SINGLE_STAGE:
        bundle = build_single_stage_prompt(planner)
        text = invoke(config, bundle, store, io_mode, **invoke_kwargs)
        return PipelineResult(text, None, parse_route(text), transcript_key(config, bundle))

    plan_text = invoke(config, planner, store, io_mode, **invoke_kwargs)
    summary = build_summary_prompt(plan_text)
    summary_text = invoke(config, summary, store, io_mode, **invoke_kwargs)
    return PipelineResult(
        plan_text,
        summary_text,
        parse_route(summary_text),
        transcript_key(config, planner),
        transcript_key(config, summary),
    )
