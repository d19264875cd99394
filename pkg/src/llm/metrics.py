from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.llm.records import STEPS, RunRecord


@dataclass
class FieldSummary:
    """Mean, population standard deviation and range of one metric"""
    mean: float
    std: float
    min: float
    max: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "FieldSummary":
        data = np.asarray(values, dtype=float)
        return cls(float(np.mean(data)), float(np.std(data)), float(np.min(data)), float(np.max(data)))

    def to_dict(self) -> Dict[str, float]:
        return {"mean": self.mean, "std": self.std, "min": self.min, "max": self.max}


@dataclass
class RunSummary:
    runs: int
    action_count: FieldSummary
    initial_error_count: FieldSummary
    correction_iterations: FieldSummary
    step_durations: Dict[str, FieldSummary] = field(default_factory=dict)
    iteration_duration: Optional[FieldSummary] = None
    non_completed_rate: float = 0.0
    non_reachable_rate: float = 0.0
    plan_found_rate: float = 0.0
    mean_action_coverage: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "runs": self.runs,
            "action_count": self.action_count.to_dict(),
            "initial_error_count": self.initial_error_count.to_dict(),
            "correction_iterations": self.correction_iterations.to_dict(),
            "step_durations": {step: s.to_dict() for step, s in self.step_durations.items()},
            "iteration_duration": self.iteration_duration.to_dict() if self.iteration_duration else None,
            "non_completed_rate": self.non_completed_rate,
            "non_reachable_rate": self.non_reachable_rate,
            "plan_found_rate": self.plan_found_rate,
            "mean_action_coverage": self.mean_action_coverage,
        }


def _rate(flags: List[bool]) -> float:
    return float(np.mean(np.asarray(flags, dtype=float)))


def aggregate_metrics(records: Sequence[RunRecord]) -> RunSummary:
    """
    Summarize runs: per-field mean, population std, min and max plus failure rates

    Coverage is averaged over the runs that computed one. Iteration durations are
    pooled over every correction iteration of every run.

    Raises:
        ValueError: if records is empty
    """
    if not records:
        raise ValueError("aggregate_metrics needs at least one run record")

    durations = {}
    for step in STEPS:
        values = [r.step_durations[step] for r in records if step in r.step_durations]
        if values:
            durations[step] = FieldSummary.of(values)

    iterations = [d for r in records for d in r.iteration_durations]
    coverages = [r.action_coverage for r in records if r.action_coverage is not None]
    return RunSummary(
        runs=len(records),
        action_count=FieldSummary.of([r.action_count for r in records]),
        initial_error_count=FieldSummary.of([r.initial_error_count for r in records]),
        correction_iterations=FieldSummary.of([r.correction_iterations for r in records]),
        step_durations=durations,
        iteration_duration=FieldSummary.of(iterations) if iterations else None,
        non_completed_rate=_rate([not r.completed for r in records]),
        non_reachable_rate=_rate([not r.goal_reachable for r in records]),
        plan_found_rate=_rate([r.plan_found for r in records]),
        mean_action_coverage=float(np.mean(coverages)) if coverages else None,
    )
