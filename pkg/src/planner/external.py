import json
import logging
import shlex
import subprocess
import tempfile
import time
from pathlib import Path
from typing import List

from pydantic import BaseModel, Field, PositiveFloat, ValidationError, field_validator

from src.exceptions import InvocationError, PddlParseError
from src.planner.plan import PlanSource, parse_plan_text
from src.planner.search import PlannerResult, PlannerStatus

logger = logging.getLogger(__name__)

PLACEHOLDERS = ("{domain}", "{problem}", "{plan_out}")


class ExternalPlannerConfig(BaseModel):
    """
    External planner command

    command is a template; {domain}, {problem} and {plan_out} are replaced by
    file paths inside a fresh working directory.
    """
    command: str
    unsolvable_exit_codes: List[int] = Field(default_factory=list)
    timeout: PositiveFloat = 300.0

    @field_validator("command")
    @classmethod
    def _has_placeholders(cls, value: str) -> str:
        missing = [p for p in PLACEHOLDERS if p not in value]
        if missing:
            raise ValueError(f"command template lacks {', '.join(missing)}")
        return value

    @classmethod
    def from_file(cls, path: str) -> "ExternalPlannerConfig":
        """Load a JSON config file; raises InvocationError when unreadable or invalid"""
        try:
            return cls.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError, ValidationError) as e:
            raise InvocationError(f"invalid external planner config '{path}': {e}") from e


class ExternalPlanner:
    """Runs a configured planner executable in a per-call temporary directory"""

    def __init__(self, config: ExternalPlannerConfig):
        self.config = config

    def solve(self, domain_text: str, problem_text: str) -> PlannerResult:
        """
        Write both PDDL files, run the command and read back the plan file

        Returns:
            PlannerResult solved with an external plan, or unsolvable

        Raises:
            InvocationError: on launch failure, timeout, unexpected exit code or unreadable plan
        """
        started = time.perf_counter()
        with tempfile.TemporaryDirectory(prefix="planner-") as workdir:
            domain_path = Path(workdir) / "domain.pddl"
            problem_path = Path(workdir) / "problem.pddl"
            plan_path = Path(workdir) / "plan.txt"
            domain_path.write_text(domain_text, encoding="utf-8")
            problem_path.write_text(problem_text, encoding="utf-8")

            command = self.config.command.format(
                domain=shlex.quote(str(domain_path)),
                problem=shlex.quote(str(problem_path)),
                plan_out=shlex.quote(str(plan_path)),
            )
            logger.info(f"Invoking external planner: {command}")
            try:
                result = subprocess.run(
                    shlex.split(command),
                    cwd=workdir,
                    capture_output=True,
                    text=True,
                    timeout=self.config.timeout,
                )
            except FileNotFoundError as e:
                raise InvocationError(f"planner executable not found: {e.filename}") from e
            except subprocess.TimeoutExpired as e:
                output = e.stdout if isinstance(e.stdout, str) else ""
                raise InvocationError(f"planner timed out after {self.config.timeout}s", output) from e
            except OSError as e:
                raise InvocationError(f"planner could not be started: {e}") from e

            output = (result.stdout or "") + (result.stderr or "")
            elapsed = time.perf_counter() - started
            if result.returncode in self.config.unsolvable_exit_codes:
                logger.info(f"External planner reported unsolvable (exit {result.returncode})")
                return PlannerResult(PlannerStatus.UNSOLVABLE, None, 0, elapsed, output)
            if result.returncode != 0:
                raise InvocationError(f"planner exited with code {result.returncode}", output, result.returncode)
            if not plan_path.exists():
                raise InvocationError("planner exited successfully but wrote no plan file", output, 0)

            try:
                plan = parse_plan_text(plan_path.read_text(encoding="utf-8"), PlanSource.EXTERNAL)
            except PddlParseError as e:
                raise InvocationError(f"unparsable plan file: {e}", output, 0) from e

        return PlannerResult(PlannerStatus.SOLVED, plan, 0, elapsed, output)


def invoke_external(cfg: ExternalPlannerConfig, domain_text: str, problem_text: str) -> PlannerResult:
    return ExternalPlanner(cfg).solve(domain_text, problem_text)
