# LLM generation pipeline package

from src.llm.client import ChatMessage, LlmClient, OpenAIChatClient, ReplayClient, Role
from src.llm.metrics import FieldSummary, RunSummary, aggregate_metrics
from src.llm.pipeline import (
    PipelineOutcome,
    PipelineRunner,
    correction_iteration,
    reply_to_bundle,
    run_pipeline,
)
from src.llm.prompting import extract_json, prompt_correction, prompt_markup, prompt_textual_plan
from src.llm.records import RunRecord, load_records, next_run_index, save_record

__all__ = [
    "ChatMessage",
    "FieldSummary",
    "LlmClient",
    "OpenAIChatClient",
    "PipelineOutcome",
    "PipelineRunner",
    "ReplayClient",
    "Role",
    "RunRecord",
    "RunSummary",
    "aggregate_metrics",
    "correction_iteration",
    "extract_json",
    "load_records",
    "next_run_index",
    "prompt_correction",
    "prompt_markup",
    "prompt_textual_plan",
    "reply_to_bundle",
    "run_pipeline",
    "save_record",
]
