"""Transcript store: one JSON file per recorded call, named by content digest."""

from __future__ import annotations

import hashlib
import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

from .prompts import PromptBundle
from .providers import ProviderConfig


def transcript_key(config: ProviderConfig, bundle: PromptBundle) -> str:
    # sampling settings are recorded in the snapshot but kept out of the key
    payload = {"provider": config.name, "model_id": config.model_id, "bundle": bundle.canonical()}
    raw = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(raw.encode("utf-8")).hexdigest()


def request_snapshot(config: ProviderConfig, bundle: PromptBundle) -> dict:
    return {
        "provider": config.name,
        "api": config.api,
        "model_id": config.model_id,
        "temperature": config.temperature,
        "max_output_tokens": config.max_output_tokens,
        **bundle.canonical(),
    }


@dataclass(frozen=True)
class Transcript:
    key: str
    request_snapshot: dict
    response_text: str
    recorded_at: str

    def encode(self) -> bytes:
        doc = {
            "request_snapshot": self.request_snapshot,
            "response_text": self.response_text,
            "recorded_at": self.recorded_at,
        }
        return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


class CassetteStore:
    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._lock = threading.Lock()

    def path_for(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> Transcript | None:
        path = self.path_for(key)
        if not path.is_file():
            return None
        doc = json.loads(path.read_bytes().decode("utf-8"))
        return Transcript(key, doc["request_snapshot"], doc["response_text"], doc["recorded_at"])

    def put(self, transcript: Transcript) -> Path:
        path = self.path_for(transcript.key)
        with self._lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            tmp = path.with_name(path.name + ".tmp")
            tmp.write_bytes(transcript.encode())
            os.replace(tmp, path)
        return path

    def keys(self) -> list[str]:
        if not self.directory.is_dir():
            return []
        return sorted(p.stem for p in self.directory.glob("*.json"))
