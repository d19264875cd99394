import logging
import time
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Any, Deque, Dict, FrozenSet, Optional, Tuple

from src.analysis.grounding import GroundAction, ground
from src.model import Literal, ModelBundle
from src.planner.plan import Plan, PlanSource, PlanStep

logger = logging.getLogger(__name__)

State = FrozenSet[Literal]


class PlannerStatus(str, Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    RESOURCES_EXHAUSTED = "resources-exhausted"


@dataclass(frozen=True)
class SearchLimits:
    max_expanded_states: int = 100000
    wall_clock_budget: float = 30.0  # seconds

    def __post_init__(self):
        if self.max_expanded_states <= 0:
            raise ValueError("max_expanded_states must be positive")
        if self.wall_clock_budget <= 0:
            raise ValueError("wall_clock_budget must be positive")


@dataclass
class PlannerResult:
    """Verdict of a planner call; plan is set only when solved"""
    status: PlannerStatus
    plan: Optional[Plan] = None
    expanded_states: int = 0
    elapsed: float = 0.0
    output: str = ""

    @property
    def solved(self) -> bool:
        return self.status == PlannerStatus.SOLVED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "plan": self.plan.to_dict() if self.plan is not None else None,
            "expanded_states": self.expanded_states,
            "elapsed": round(self.elapsed, 6),
        }


def goal_satisfied(goal: Tuple[Literal, ...], state: State) -> bool:
    """Positive goal atoms present and negated ones absent"""
    return all((g.atom not in state) if g.negated else (g in state) for g in goal)


class BreadthFirstPlanner:
    """
    Breadth-first search over ground states

    The goal test happens when a state is dequeued, so the first plan found is
    a shortest one.
    """

    def __init__(self, limits: Optional[SearchLimits] = None):
        self.limits = limits or SearchLimits()

    def solve(self, b: ModelBundle) -> PlannerResult:
        """
        Search for a shortest plan

        Args:
            b: Model bundle with zero consistency errors

        Returns:
            PlannerResult with status solved, unsolvable or resources-exhausted
        """
        started = time.perf_counter()
        actions = ground(b)
        goal = b.problem.goal
        initial: State = frozenset(b.problem.init)

        parents: Dict[State, Optional[Tuple[State, GroundAction]]] = {initial: None}
        frontier: Deque[State] = deque([initial])
        expanded = 0

        while frontier:
            state = frontier.popleft()
            if goal_satisfied(goal, state):
                plan = self._extract_plan(parents, state)
                elapsed = time.perf_counter() - started
                logger.info(f"BFS found a {len(plan)}-step plan after {expanded} expansions")
                return PlannerResult(PlannerStatus.SOLVED, plan, expanded, elapsed)

            elapsed = time.perf_counter() - started
            if expanded >= self.limits.max_expanded_states or elapsed >= self.limits.wall_clock_budget:
                logger.info(f"BFS stopped at limits after {expanded} expansions ({elapsed:.2f}s)")
                return PlannerResult(PlannerStatus.RESOURCES_EXHAUSTED, None, expanded, elapsed)

            expanded += 1
            for action in actions:
                if not action.is_applicable(state):
                    continue
                successor = action.apply(state)
                if successor not in parents:
                    parents[successor] = (state, action)
                    frontier.append(successor)

        elapsed = time.perf_counter() - started
        logger.info(f"BFS exhausted the reachable state space ({expanded} states): unsolvable")
        return PlannerResult(PlannerStatus.UNSOLVABLE, None, expanded, elapsed)

    @staticmethod
    def _extract_plan(parents: Dict[State, Optional[Tuple[State, GroundAction]]], state: State) -> Plan:
        steps = []
        link = parents[state]
        while link is not None:
            previous, action = link
            steps.append(PlanStep(action.schema, action.args))
            link = parents[previous]
        steps.reverse()
        return Plan(tuple(steps), PlanSource.INTERNAL)


def solve_internal(b: ModelBundle, limits: Optional[SearchLimits] = None) -> PlannerResult:
    return BreadthFirstPlanner(limits).solve(b)
