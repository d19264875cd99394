import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import backoff
import openai
from openai import OpenAI

from config.settings import Settings, settings
from src.exceptions import ReplayExhaustedError, TransportError

logger = logging.getLogger(__name__)


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    content: str

    def to_dict(self) -> Dict[str, str]:
        return {"role": self.role.value, "content": self.content}


class LlmClient(ABC):
    """Chat completion endpoint returning the assistant reply text"""

    @abstractmethod
    def complete(self, messages: Sequence[ChatMessage]) -> str:
        ...


_RETRYABLE = (
    openai.APIConnectionError,
    openai.APITimeoutError,
    openai.RateLimitError,
    openai.InternalServerError,
)


def _log_backoff(details) -> None:
    logger.warning(
        f"LLM request failed, retry {details['tries']} in {details['wait']:.1f}s: {details.get('exception')}"
    )


class OpenAIChatClient(LlmClient):
    """
    OpenAI-compatible chat completions client

    Transient failures are retried with exponential backoff; after the last
    retry a TransportError is raised. Instances hold no per-run state and can
    be shared between concurrent runs.
    """

    def __init__(self, base_url: Optional[str] = None, api_key: Optional[str] = None,
                 model: Optional[str] = None, temperature: Optional[float] = None,
                 timeout: Optional[float] = None, max_retries: Optional[int] = None,
                 config: Optional[Settings] = None):
        config = config or settings
        self.model = model or config.LLM_MODEL
        self.temperature = config.LLM_TEMPERATURE if temperature is None else temperature
        self.max_retries = config.LLM_MAX_RETRIES if max_retries is None else max_retries
        self.client = OpenAI(
            base_url=base_url or config.LLM_BASE_URL,
            api_key=api_key or config.LLM_API_KEY or "missing-api-key",
            timeout=config.LLM_TIMEOUT if timeout is None else timeout,
            max_retries=0,
        )

    def complete(self, messages: Sequence[ChatMessage]) -> str:
        payload = [m.to_dict() for m in messages]
        request = backoff.on_exception(
            backoff.expo,
            _RETRYABLE,
            max_tries=self.max_retries + 1,
            on_backoff=_log_backoff,
        )(self._create)
        try:
            return request(payload)
        except _RETRYABLE as e:
            raise TransportError(f"LLM endpoint unreachable after {self.max_retries} retries: {e}") from e
        except openai.APIStatusError as e:
            raise TransportError(f"LLM endpoint returned HTTP {e.status_code}: {e.message}") from e

    def _create(self, payload: List[Dict[str, str]]) -> str:
        response = self.client.chat.completions.create(
            model=self.model,
            messages=payload,
            temperature=self.temperature,
        )
        return response.choices[0].message.content or ""


_NUMBERED = re.compile(r"^(\d+)")


class ReplayClient(LlmClient):
    """
    Canned replies for deterministic runs

    The nth call returns the nth reply; calling past the end raises
    ReplayExhaustedError. Each run needs its own instance.
    """

    def __init__(self, responses: Sequence[str], source: str = "<memory>"):
        self.responses = list(responses)
        self.source = source
        self.calls = 0

    @classmethod
    def from_directory(cls, path: str) -> "ReplayClient":
        """Load numbered UTF-8 text files (001.txt, 002.txt, ...) in numeric order"""
        directory = Path(path)
        if not directory.is_dir():
            raise FileNotFoundError(f"replay directory not found: {path}")
        files = [f for f in directory.iterdir() if f.is_file() and _NUMBERED.match(f.name)]
        files.sort(key=lambda f: int(_NUMBERED.match(f.name).group(1)))
        return cls([f.read_text(encoding="utf-8") for f in files], source=str(directory))

    @classmethod
    def from_responses(cls, responses: Sequence[str]) -> "ReplayClient":
        return cls(responses)

    def complete(self, messages: Sequence[ChatMessage]) -> str:
        if self.calls >= len(self.responses):
            raise ReplayExhaustedError(
                f"replay transcript {self.source} has {len(self.responses)} replies, request {self.calls + 1} has none"
            )
        reply = self.responses[self.calls]
        self.calls += 1
        return reply

    def fresh(self) -> "ReplayClient":
        """Same transcript, rewound"""
        return ReplayClient(self.responses, self.source)
