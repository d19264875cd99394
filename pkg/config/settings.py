import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values

DEFAULT_CONFIG_FILE = ".env"


class Settings:
    """
    Pipeline settings

    Each value is taken from the first source that defines it: explicit
    overrides (CLI flags), the process environment, then the config file
    (a dotenv file, `.env` unless PIPELINE_CONFIG or --config names another).
    """

    def __init__(self, overrides: Optional[Mapping[str, Any]] = None, config_file: Optional[str] = None):
        self.config_file = config_file or os.getenv("PIPELINE_CONFIG", DEFAULT_CONFIG_FILE)
        self._overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        self._file_values = self._read_file(self.config_file)

        # LLM endpoint
        self.LLM_API_KEY: str = self._get("LLM_API_KEY", "")
        self.LLM_BASE_URL: str = self._get("LLM_BASE_URL", "https://api.openai.com/v1")
        self.LLM_MODEL: str = self._get("LLM_MODEL", "gpt-4-0125-preview")
        self.LLM_TEMPERATURE: float = float(self._get("LLM_TEMPERATURE", "0.0"))
        self.LLM_TIMEOUT: float = float(self._get("LLM_TIMEOUT", "120"))
        self.LLM_MAX_RETRIES: int = int(self._get("LLM_MAX_RETRIES", "3"))

        # Pipeline
        self.CORRECTION_CAP: int = int(self._get("CORRECTION_CAP", "15"))
        self.RUNS_DIR: str = self._get("RUNS_DIR", "runs")

        # Built-in planner limits
        self.SEARCH_MAX_EXPANDED_STATES: int = int(self._get("SEARCH_MAX_EXPANDED_STATES", "100000"))
        self.SEARCH_WALL_CLOCK_BUDGET: float = float(self._get("SEARCH_WALL_CLOCK_BUDGET", "30"))

        # Application
        self.LOG_LEVEL: str = self._get("LOG_LEVEL", "INFO").upper()
        self.DEBUG: bool = self._get("DEBUG", "False").lower() == "true"

    @staticmethod
    def _read_file(path: str) -> Dict[str, Optional[str]]:
        if not Path(path).is_file():
            return {}
        return dict(dotenv_values(path))

    def _get(self, key: str, default: str) -> str:
        if key in self._overrides:
            return str(self._overrides[key])
        if key in os.environ:
            return os.environ[key]
        value = self._file_values.get(key)
        return default if value is None else value

    @classmethod
    def from_sources(cls, overrides: Optional[Mapping[str, Any]] = None,
                     config_file: Optional[str] = None) -> "Settings":
        return cls(overrides, config_file)


settings = Settings()
