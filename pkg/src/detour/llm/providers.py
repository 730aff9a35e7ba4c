"""Provider configs and request/response adapters for three chat APIs.

Adapters only translate shapes; HTTP goes through a :class:`Transport` so tests
can swap in a recorder and never touch the network.
"""

from __future__ import annotations

import base64
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Protocol

from ..errors import SchemaError, TransportError
from .prompts import PromptBundle

APIS = ("openai-chat", "anthropic-messages", "gemini-generate")


@dataclass(frozen=True)
class ProviderConfig:
    name: str
    api: str
    endpoint: str
    model_id: str
    auth_token_env: str
    max_output_tokens: int = 2048
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if self.api not in APIS:
            raise SchemaError(f"provider {self.name!r}: api must be one of {APIS}")
        if self.temperature < 0:
            raise SchemaError(f"provider {self.name!r}: temperature must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


def load_provider_configs(path: str | Path) -> list[ProviderConfig]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read provider configs from {path}: {exc}") from None
    if not isinstance(doc, list):
        raise SchemaError("provider config file must hold a JSON array")
    try:
        return [ProviderConfig(**item) for item in doc]
    except TypeError as exc:
        raise SchemaError(f"bad provider config: {exc}") from None


def select_providers(configs: list[ProviderConfig], spec: str) -> list[ProviderConfig]:
    """``"all"`` or a comma list of names (case-insensitive)."""
    if spec.strip().lower() == "all":
        return list(configs)
    by_name = {c.name.lower(): c for c in configs}
    out = []
    for name in (s.strip() for s in spec.split(",") if s.strip()):
        if name.lower() not in by_name:
            raise SchemaError(f"unknown provider {name!r}; known: {', '.join(c.name for c in configs)}")
        out.append(by_name[name.lower()])
    return out


# -- wire shapes ---------------------------------------------------------------

def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def build_request(config: ProviderConfig, bundle: PromptBundle, token: str) -> tuple[str, dict, dict]:
    """Return ``(url, headers, json_payload)`` for one call."""
    if config.api == "openai-chat":
        content: list[dict[str, Any]] = [{"type": "text", "text": bundle.user_text}]
        content += [
            {"type": "image_url", "image_url": {"url": f"data:{a.media_type};base64,{_b64(a.data)}"}}
            for a in bundle.attachments
        ]
        payload = {
            "model": config.model_id,
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
            "messages": [
                {"role": "system", "content": bundle.system_text},
                {"role": "user", "content": content},
            ],
        }
        return config.endpoint, {"Authorization": f"Bearer {token}"}, payload

    if config.api == "anthropic-messages":
        content = [
            {"type": "image", "source": {"type": "base64", "media_type": a.media_type, "data": _b64(a.data)}}
            for a in bundle.attachments
        ]
        content.append({"type": "text", "text": bundle.user_text})
        payload = {
            "model": config.model_id,
            "max_tokens": config.max_output_tokens,
            "temperature": config.temperature,
            "system": bundle.system_text,
            "messages": [{"role": "user", "content": content}],
        }
        headers = {"x-api-key": token, "anthropic-version": "2023-06-01"}
        return config.endpoint, headers, payload

    parts: list[dict[str, Any]] = [{"text": bundle.user_text}]
    parts += [{"inline_data": {"mime_type": a.media_type, "data": _b64(a.data)}} for a in bundle.attachments]
    payload = {
        "systemInstruction": {"parts": [{"text": bundle.system_text}]},
        "contents": [{"role": "user", "parts": parts}],
        "generationConfig": {"temperature": config.temperature, "maxOutputTokens": config.max_output_tokens},
    }
    url = f"{config.endpoint.rstrip('/')}/models/{config.model_id}:generateContent"
    return url, {"x-goog-api-key": token}, payload


def parse_response(api: str, body: Any) -> str:
    try:
        if api == "openai-chat":
            return body["choices"][0]["message"]["content"]
        if api == "anthropic-messages":
            return "".join(b["text"] for b in body["content"] if b.get("type") == "text")
        return "".join(p.get("text", "") for p in body["candidates"][0]["content"]["parts"])
    except (KeyError, IndexError, TypeError) as exc:
        raise TransportError(f"unexpected {api} response shape: {exc!r}") from None


def response_body(api: str, text: str) -> dict:
    """The body a provider would send back for ``text``; for offline fixtures."""
    if api == "openai-chat":
        return {"choices": [{"message": {"role": "assistant", "content": text}}]}
    if api == "anthropic-messages":
        return {"content": [{"type": "text", "text": text}]}
    return {"candidates": [{"content": {"parts": [{"text": text}]}}]}


# -- transport -------------------------------------------------------------------

class Transport(Protocol):
    def post(self, url: str, headers: dict, payload: dict) -> tuple[int, Any]: ...


class HttpxTransport:
    def __init__(self, timeout_s: float = 120.0):
        self.timeout_s = timeout_s

    def post(self, url, headers, payload):
        import httpx

        try:
            resp = httpx.post(url, headers=headers, json=payload, timeout=self.timeout_s)
        except httpx.HTTPError as exc:
            raise TransportError(f"{url}: {exc}") from exc
        try:
            body = resp.json()
        except ValueError:
            body = resp.text
        return resp.status_code, body
