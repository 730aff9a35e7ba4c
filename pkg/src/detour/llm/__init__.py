from .cassette import CassetteStore, Transcript, transcript_key
from .pipeline import IoMode, PipelineResult, invoke, run_pipeline
from .prompts import (
    Attachment,
    ImageRef,
    MapMode,
    PipelineMode,
    PromptBundle,
    build_planner_prompt,
    build_summary_prompt,
)
from .providers import ProviderConfig, load_provider_configs, select_providers

__all__ = [
    "Attachment",
    "CassetteStore",
    "ImageRef",
    "IoMode",
    "MapMode",
    "PipelineMode",
    "PipelineResult",
    "PromptBundle",
    "ProviderConfig",
    "Transcript",
    "build_planner_prompt",
    "build_summary_prompt",
    "invoke",
    "load_provider_configs",
    "run_pipeline",
    "select_providers",
    "transcript_key",
]
