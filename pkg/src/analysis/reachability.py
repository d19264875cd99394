import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Set, Tuple

from src.analysis.grounding import GroundAction, ground
from src.exceptions import InvalidPlanError
from src.model import DomainModel, Literal, ModelBundle, substitute
from src.planner.plan import Plan, validate_plan

logger = logging.getLogger(__name__)


class SupportReason(str, Enum):
    MISSING_FROM_INIT = "missing-from-init"
    TYPE_MISMATCH = "type-mismatch"


@dataclass(frozen=True)
class SupportIssue:
    """Static precondition of an action that the initial state cannot support"""
    action: str
    precondition: Literal
    reason: SupportReason

    def to_dict(self) -> Dict[str, str]:
        return {"action": self.action, "precondition": str(self.precondition), "reason": self.reason.value}


@dataclass
class ReachabilityReport:
    """
    Delete-relaxed reachability of a bundle

    reachable_schemas and the keys of unreachable_schemas partition the
    domain's action names. rounds counts fixpoint layers including the final
    one that adds nothing; goal_layer is the first layer satisfying the goal.
    """
    reachable_facts: FrozenSet[Literal] = frozenset()
    reachable_schemas: Set[str] = field(default_factory=set)
    unreachable_schemas: Dict[str, List[Literal]] = field(default_factory=dict)
    static_predicates: Set[str] = field(default_factory=set)
    unsupported_static: List[SupportIssue] = field(default_factory=list)
    goal_reachable: bool = False
    uninvolved_actions: Optional[Set[str]] = None
    action_coverage: Optional[float] = None
    rounds: int = 0
    goal_layer: Optional[int] = None
    ground_action_count: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "goal_reachable": self.goal_reachable,
            "goal_layer": self.goal_layer,
            "rounds": self.rounds,
            "ground_action_count": self.ground_action_count,
            "reachable_facts": sorted(str(f) for f in self.reachable_facts),
            "reachable_schemas": sorted(self.reachable_schemas),
            "unreachable_schemas": {
                name: [str(p) for p in blamed] for name, blamed in sorted(self.unreachable_schemas.items())
            },
            "static_predicates": sorted(self.static_predicates),
            "unsupported_static": [issue.to_dict() for issue in self.unsupported_static],
            "action_coverage": self.action_coverage,
            "uninvolved_actions": sorted(self.uninvolved_actions) if self.uninvolved_actions is not None else None,
        }


def static_predicates(d: DomainModel) -> Set[str]:
    """Declared predicates that no action effect mentions"""
    affected = {effect.predicate for action in d.actions for effect in action.effects}
    return {p.name for p in d.predicates if p.name not in affected}


def _goal_holds(goal: Tuple[Literal, ...], facts: Set[Literal]) -> bool:
    return all(literal in facts for literal in goal if not literal.negated)


def _blocked_by_static(action: GroundAction, static: Set[str], init: FrozenSet[Literal]) -> bool:
    """Negated precondition over a static predicate contradicted by the initial state"""
    return any(
        p.negated and p.predicate in static and p.atom in init
        for p in action.preconditions
    )


class ReachabilityAnalyzer:
    """
    Delete-relaxation analysis of a checked bundle

    Negated preconditions are treated as satisfied, except when they name a
    static atom present in the initial state.
    """

    def __init__(self, b: ModelBundle):
        self.bundle = b

    def relaxed_fixpoint(self) -> ReachabilityReport:
        """
        Compute the least fixpoint of delete-free action application

        Returns:
            ReachabilityReport with facts, schema partition, blame and goal verdict
        """
        domain, problem = self.bundle.domain, self.bundle.problem
        static = static_predicates(domain)
        init = frozenset(problem.init)
        actions = ground(self.bundle)

        pending = [a for a in actions if not _blocked_by_static(a, static, init)]
        blocked = [a for a in actions if _blocked_by_static(a, static, init)]
        facts: Set[Literal] = set(init)
        applied: Set[str] = set()
        goal_layer = 0 if _goal_holds(problem.goal, facts) else None
        rounds = 0

        while True:
            rounds += 1
            ready = [a for a in pending if all(p in facts for p in a.positive_preconditions)]
            new_facts = set()
            for action in ready:
                applied.add(action.schema)
                new_facts |= action.add_effects - facts
            pending = [a for a in pending if a not in ready]
            if not new_facts:
                break
            facts |= new_facts
            if goal_layer is None and _goal_holds(problem.goal, facts):
                goal_layer = rounds

        unreachable = {
            name: self._blame(name, actions, blocked, facts, static)
            for name in domain.action_names if name not in applied
        }
        report = ReachabilityReport(
            reachable_facts=frozenset(facts),
            reachable_schemas=set(domain.action_names) & applied,
            unreachable_schemas=unreachable,
            static_predicates=static,
            goal_reachable=_goal_holds(problem.goal, facts),
            rounds=rounds,
            goal_layer=goal_layer,
            ground_action_count=len(actions),
        )
        logger.debug(
            f"Relaxed fixpoint: {len(facts)} facts after {rounds} rounds, "
            f"{len(unreachable)} unreachable schemas, goal_reachable={report.goal_reachable}"
        )
        return report

    def _blame(self, name: str, actions: List[GroundAction], blocked: List[GroundAction],
               facts: Set[Literal], static: Set[str]) -> List[Literal]:
        """Lifted preconditions left unsatisfied by every grounding of a schema"""
        schema = self.bundle.domain.action(name)
        groundings = [a for a in actions if a.schema == name]
        if not groundings:
            return [p for p in schema.preconditions if not p.negated]

        blocked_set = set(blocked)
        common: Optional[Set[Literal]] = None
        for action in groundings:
            binding = action.binding_map
            unsatisfied = set()
            for precondition in schema.preconditions:
                ground_literal = substitute(precondition, binding)
                if precondition.negated:
                    if (action in blocked_set and precondition.predicate in static
                            and ground_literal.atom in self.bundle.init_atoms):
                        unsatisfied.add(precondition)
                elif ground_literal not in facts:
                    unsatisfied.add(precondition)
            common = unsatisfied if common is None else common & unsatisfied
        return [p for p in schema.preconditions if p in common]

    def support_check(self) -> List[SupportIssue]:
        """Static preconditions with no type-compatible initial state atom"""
        domain, problem = self.bundle.domain, self.bundle.problem
        hierarchy = domain.hierarchy
        static = static_predicates(domain)
        object_types = problem.object_types()
        issues = []

        for action in domain.actions:
            parameter_types = action.parameter_types()
            for precondition in action.preconditions:
                if precondition.negated or precondition.predicate not in static:
                    continue
                atoms = [atom for atom in problem.init if atom.predicate == precondition.predicate]
                if not atoms:
                    issues.append(SupportIssue(action.name, precondition, SupportReason.MISSING_FROM_INIT))
                    continue

                def compatible(atom: Literal) -> bool:
                    if len(atom.args) != len(precondition.args):
                        return False
                    for obj, variable in zip(atom.args, precondition.args):
                        wanted = parameter_types.get(variable)
                        if wanted is None:
                            continue
                        actual = object_types.get(obj)
                        if actual not in hierarchy or wanted not in hierarchy:
                            return False
                        if not hierarchy.is_subtype(actual, wanted):
                            return False
                    return True

                if not any(compatible(atom) for atom in atoms):
                    issues.append(SupportIssue(action.name, precondition, SupportReason.TYPE_MISMATCH))
        return issues

    def action_coverage(self, p: Plan) -> Tuple[float, Set[str]]:
        """
        Share of declared schemas used by a valid plan

        Raises:
            InvalidPlanError: if the plan does not execute or misses the goal
        """
        result = validate_plan(self.bundle, p)
        if not result.valid:
            raise InvalidPlanError(result.reason, result.step_index)
        declared = self.bundle.domain.action_names
        if not declared:
            return 1.0, set()
        used = set(result.schemas)
        uninvolved = {name for name in declared if name not in used}
        return (len(declared) - len(uninvolved)) / len(declared), uninvolved

    def analyze(self, plan: Optional[Plan] = None) -> ReachabilityReport:
        """Fixpoint plus static support, and plan coverage when a plan is given"""
        report = self.relaxed_fixpoint()
        report.unsupported_static = self.support_check()
        if plan is not None:
            report.action_coverage, report.uninvolved_actions = self.action_coverage(plan)
        return report


def relaxed_fixpoint(b: ModelBundle) -> ReachabilityReport:
    return ReachabilityAnalyzer(b).relaxed_fixpoint()


def support_check(b: ModelBundle) -> List[SupportIssue]:
    return ReachabilityAnalyzer(b).support_check()


def action_coverage(b: ModelBundle, p: Plan) -> Tuple[float, Set[str]]:
    return ReachabilityAnalyzer(b).action_coverage(p)


def analyze(b: ModelBundle, plan: Optional[Plan] = None) -> ReachabilityReport:
    return ReachabilityAnalyzer(b).analyze(plan)


def format_feedback(report: ReachabilityReport) -> str:
    """Plain-text feedback for a human reviewer or a follow-up prompt"""
    lines = []
    if report.goal_reachable:
        lines.append("The goal is reachable when delete effects are ignored.")
    else:
        lines.append("The goal is NOT reachable from the initial state, even when delete effects are ignored.")

    for name, blamed in sorted(report.unreachable_schemas.items()):
        if blamed:
            conditions = ", ".join(str(p) for p in blamed)
            lines.append(f"Action '{name}' can never be applied: precondition {conditions} is never satisfied.")
        else:
            lines.append(f"Action '{name}' can never be applied: no grounding has all preconditions satisfied.")

    for issue in report.unsupported_static:
        if issue.reason == SupportReason.MISSING_FROM_INIT:
            lines.append(
                f"Action '{issue.action}' requires {issue.precondition}, which no action produces, "
                f"but the initial state has no '{issue.precondition.predicate}' fact."
            )
        else:
            lines.append(
                f"Action '{issue.action}' requires {issue.precondition}, which no action produces, "
                f"but no '{issue.precondition.predicate}' fact in the initial state has matching argument types."
            )

    if report.uninvolved_actions:
        lines.append(f"Actions not involved in the plan: {', '.join(sorted(report.uninvolved_actions))}.")
    if len(lines) == 1 and report.goal_reachable:
        lines.append("No reachability issues found.")
    return "\n".join(lines)
