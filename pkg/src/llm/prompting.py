import json
import re
from typing import List, Optional, Sequence

from config.prompts import (
    CORRECTION_PROMPT,
    MARKUP_ERRORS_ADDENDUM,
    MARKUP_PROMPT,
    SYSTEM_PROMPT,
    TEXTUAL_PLAN_PROMPT,
)
from src.checker import CheckReport
from src.markup import MARKUP_GRAMMAR, MarkupError
from src.llm.client import ChatMessage, Role

_FENCED_BLOCK = re.compile(r"```[A-Za-z0-9_-]*[ \t]*\n?(.*?)```", re.DOTALL)


def _system() -> ChatMessage:
    return ChatMessage(Role.SYSTEM, SYSTEM_PROMPT.strip())


def prompt_textual_plan(goal_description: str) -> List[ChatMessage]:
    """
    Step 1 messages: elaborate the goal into a textual plan

    Raises:
        ValueError: if the goal description is empty
    """
    if not goal_description or not goal_description.strip():
        raise ValueError("goal description must not be empty")
    return [_system(), ChatMessage(Role.USER, TEXTUAL_PLAN_PROMPT.format(goal=goal_description).strip())]


def prompt_markup(textual_plan: str) -> List[ChatMessage]:
    """Step 2 messages: translate the textual plan into a model document"""
    content = MARKUP_PROMPT.format(grammar=MARKUP_GRAMMAR, textual_plan=textual_plan)
    return [_system(), ChatMessage(Role.USER, content.strip())]


def prompt_correction(model_text: str, report: Optional[CheckReport],
                      failure_reason: Optional[str] = None,
                      markup_errors: Sequence[MarkupError] = ()) -> List[ChatMessage]:
    """
    Step 3 messages: the current model with its errors, asking for a corrected model

    Args:
        model_text: Serialized current model, or the raw previous reply when none parsed
        report: Consistency errors of the current model, if it parsed
        failure_reason: Why the previous reply could not be used, if it could not
        markup_errors: Grammar or structure errors of the previous reply
    """
    errors = report.errors_payload() if report is not None else "[]"
    content = CORRECTION_PROMPT.format(model=model_text, errors=errors, grammar=MARKUP_GRAMMAR)
    if failure_reason is not None:
        listed = json.dumps([e.to_dict() for e in markup_errors], indent=2, ensure_ascii=False) if markup_errors else ""
        content += MARKUP_ERRORS_ADDENDUM.format(reason=failure_reason, markup_errors=listed)
    return [_system(), ChatMessage(Role.USER, content.strip())]


def extract_json(reply: str) -> Optional[str]:
    """
    First JSON document in a reply

    A fenced code block holding an object wins; otherwise the text between the
    first '{' and the last '}' is taken.
    """
    for match in _FENCED_BLOCK.finditer(reply):
        block = match.group(1).strip()
        if block.startswith("{"):
            return block

    start, end = reply.find("{"), reply.rfind("}")
    if start == -1 or end <= start:
        return None
    return reply[start:end + 1]
