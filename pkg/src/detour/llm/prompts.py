"""Prompt construction for the planner and summary stages."""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

from ..errors import EmptyPlan, MissingAttachmentFile, SchemaError
from ..routes import MODE_TERMS, ROUTE_GRAMMAR

if TYPE_CHECKING:
    from ..scenarios import Scenario

_MEDIA_TYPES = {".png": "image/png", ".jpg": "image/jpeg", ".jpeg": "image/jpeg"}


class MapMode(str, enum.Enum):
    WITH_MAPS = "with-maps"
    WITHOUT_MAPS = "without-maps"


class PipelineMode(str, enum.Enum):
    TWO_STAGE = "two-stage"
    SINGLE_STAGE = "single-stage"


@dataclass(frozen=True)
class ImageRef:
    path: Path
    caption: str


@dataclass(frozen=True)
class Attachment:
    media_type: str
    data: bytes
    caption: str

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.data).hexdigest()


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    attachments: tuple[Attachment, ...] = ()

    def __post_init__(self) -> None:
        if not self.system_text.strip():
            raise SchemaError("prompt bundle needs a system text")
        for att in self.attachments:
            if att.media_type not in ("image/png", "image/jpeg"):
                raise SchemaError(f"unsupported attachment type {att.media_type!r}")

    def canonical(self) -> dict:
        """Content-only encoding: identical texts and image bytes give identical output."""
        return {
            "system": self.system_text,
            "user": self.user_text,
            "attachments": [
                {"media_type": a.media_type, "caption": a.caption, "sha256": a.sha256, "bytes": len(a.data)}
                for a in self.attachments
            ],
        }


PLANNER_SYSTEM = """\
You are an alternative path-finding agent for public transit. The network maps \
attached to this conversation are your knowledge base: look at them again every \
time before you recommend anything, and only use services that appear on them.

Your priorities are safety first, then efficiency.
- A station the traveller marks as dangerous or wants to avoid must not appear \
anywhere on the route. Riding through such a station counts as a safety risk \
even if the traveller stays on the train and never gets off.
- Lines reported as not running must not be used.
- Among safe routes, prefer the quicker one with fewer transfers.

Describe the route step by step: the service (line or mode) for each step, \
where to board, where to get off, and any walking between stations."""

PLANNER_INSTRUCTIONS = (
    "Name every station where I board, transfer or get off.",
    "If a step is on foot or by bike, say so explicitly.",
)

SUMMARY_SYSTEM_TEMPLATE = """\
You are a route summary expert. Rewrite the travel plan in the user message \
into the standardized format below.

Reply with the JSON object only. Do not add explanations, markdown fences or \
any other text: a program reads your reply directly.

Format:
{grammar}

Accepted mode terms: {terms}.
Every walking step is its own leg with mode "walk" and no line, for example:
{example}
Keep the legs in travel order; each leg starts where the previous one ended."""

_WALK_EXAMPLE = (
    '{"legs":[{"mode":"walk","from":"Home Street","to":"Central"},'
    '{"mode":"subway","line":"7","from":"Central","to":"Harbor"}]}'
)

SUMMARY_SYSTEM = SUMMARY_SYSTEM_TEMPLATE.format(
    grammar=ROUTE_GRAMMAR, terms=", ".join(MODE_TERMS), example=_WALK_EXAMPLE
)

PROMPT_VERSION = hashlib.sha256(
    json.dumps([PLANNER_SYSTEM, PLANNER_INSTRUCTIONS, SUMMARY_SYSTEM]).encode()
).hexdigest()[:12]


def load_attachment(ref: ImageRef) -> Attachment:
    media_type = _MEDIA_TYPES.get(ref.path.suffix.lower())
    if media_type is None:
        raise MissingAttachmentFile(f"{ref.path}: only PNG and JPEG attachments are supported")
    try:
        data = ref.path.read_bytes()
    except OSError as exc:
        raise MissingAttachmentFile(f"cannot read attachment {ref.path}: {exc}") from None
    return Attachment(media_type, data, ref.caption)


def _user_text(query: str, extra: Iterable[str]) -> str:
    lines = [query.strip(), "", "Additional instructions:"]
    lines += [f"- {item}" for item in (*PLANNER_INSTRUCTIONS, *extra)]
    return "\n".join(lines)


def build_planner_prompt(
    scenario: "Scenario",
    network_docs: Optional[Sequence[ImageRef]] = None,
    map_mode: MapMode = MapMode.WITH_MAPS,
) -> PromptBundle:
    """Planner request for one scenario.

    Knowledge-base maps are attached only in with-maps mode; images that are
    part of the traveller's own query (marked danger zones, bike maps) are
    always attached.
    """
    maps = scenario.maps if network_docs is None else network_docs
    refs = list(maps) if MapMode(map_mode) is MapMode.WITH_MAPS else []
    refs += list(scenario.attachments)
    return PromptBundle(
        system_text=PLANNER_SYSTEM,
        user_text=_user_text(scenario.query_text, scenario.instructions),
        attachments=tuple(load_attachment(r) for r in refs),
    )


def build_summary_prompt(plan_text: str) -> PromptBundle:
    if not plan_text or not plan_text.strip():
        raise EmptyPlan("the planner returned an empty plan")
    return PromptBundle(system_text=SUMMARY_SYSTEM, user_text=plan_text)


def build_single_stage_prompt(planner: PromptBundle) -> PromptBundle:
    """One agent carrying both instruction sets, planner first."""
    return PromptBundle(
        system_text=planner.system_text + "\n\n" + SUMMARY_SYSTEM,
        user_text=planner.user_text,
        attachments=planner.attachments,
    )
