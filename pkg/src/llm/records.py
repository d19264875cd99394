import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

logger = logging.getLogger(__name__)

STEPS = ("1", "2", "3", "4")
_RUN_FILE = re.compile(r"^run-(\d+)\.json$")


@dataclass
class RunRecord:
    """
    Metrics and transcripts of one pipeline run

    completed is true only when the model reached zero consistency errors
    within the correction cap; otherwise correction_iterations equals the cap.
    """
    goal: str
    cap: int
    prompts_version: str = ""
    action_count: int = 0
    step_durations: Dict[str, float] = field(default_factory=dict)
    iteration_durations: List[float] = field(default_factory=list)
    initial_error_count: int = 0
    correction_iterations: int = 0
    error_trajectory: List[int] = field(default_factory=list)
    final_error_count: Optional[int] = None
    completed: bool = False
    goal_reachable: bool = False
    plan_found: bool = False
    action_coverage: Optional[float] = None
    plan: List[str] = field(default_factory=list)
    feedback: str = ""
    domain_pddl: str = ""
    problem_pddl: str = ""
    transcripts: Dict[str, List[List[Dict[str, str]]]] = field(default_factory=dict)
    error: Optional[str] = None

    def add_transcript(self, step: str, messages: List[Dict[str, str]]) -> None:
        self.transcripts.setdefault(step, []).append(messages)

    def to_dict(self, include_durations: bool = True) -> Dict[str, Any]:
        data = {
            "goal": self.goal,
            "cap": self.cap,
            "prompts_version": self.prompts_version,
            "action_count": self.action_count,
            "initial_error_count": self.initial_error_count,
            "correction_iterations": self.correction_iterations,
            "error_trajectory": list(self.error_trajectory),
            "final_error_count": self.final_error_count,
            "completed": self.completed,
            "goal_reachable": self.goal_reachable,
            "plan_found": self.plan_found,
            "action_coverage": self.action_coverage,
            "plan": list(self.plan),
            "feedback": self.feedback,
            "domain_pddl": self.domain_pddl,
            "problem_pddl": self.problem_pddl,
            "transcripts": self.transcripts,
            "error": self.error,
        }
        if include_durations:
            data["step_durations"] = dict(self.step_durations)
            data["iteration_durations"] = list(self.iteration_durations)
        return data

    def to_json(self, include_durations: bool = True) -> str:
        return json.dumps(self.to_dict(include_durations), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        known = set(cls.__dataclass_fields__)
        return cls(**{key: value for key, value in data.items() if key in known})


def record_path(runs_dir: str, index: int) -> Path:
    return Path(runs_dir) / f"run-{index:03d}.json"


def next_run_index(runs_dir: str) -> int:
    """One past the highest existing run-NNN.json index"""
    directory = Path(runs_dir)
    if not directory.is_dir():
        return 1
    indices = [int(m.group(1)) for m in (_RUN_FILE.match(p.name) for p in directory.iterdir()) if m]
    return max(indices, default=0) + 1


def save_record(record: RunRecord, runs_dir: str, index: int) -> Path:
    path = record_path(runs_dir, index)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(record.to_json() + "\n", encoding="utf-8")
    logger.info(f"Run record written to {path}")
    return path


def load_records(runs_dir: str) -> List[RunRecord]:
    """Every run-NNN.json record in a directory, in index order"""
    directory = Path(runs_dir)
    if not directory.is_dir():
        raise FileNotFoundError(f"runs directory not found: {runs_dir}")
    files = sorted(
        (p for p in directory.iterdir() if _RUN_FILE.match(p.name)),
        key=lambda p: int(_RUN_FILE.match(p.name).group(1)),
    )
    return [RunRecord.from_dict(json.loads(p.read_text(encoding="utf-8"))) for p in files]
