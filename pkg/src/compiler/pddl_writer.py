import logging
from typing import Iterable, List

from src.checker import ConsistencyChecker
from src.exceptions import CompileGuardError
from src.model import ActionSchema, DomainModel, Literal, ModelBundle, Parameter, ProblemModel, TypeHierarchy

logger = logging.getLogger(__name__)

REQUIREMENTS = (":strips", ":typing")
IMPLICIT_ROOT = "object"


def _variable(name: str) -> str:
    return f"?{name}"


def _typed_parameters(parameters: Iterable[Parameter]) -> str:
    items = []
    for parameter in parameters:
        declared_type = parameter.declared_type or IMPLICIT_ROOT
        items.append(f"{_variable(parameter.name)} - {declared_type}")
    return " ".join(items)


def _literal(literal: Literal, lifted: bool) -> str:
    args = [_variable(arg) if lifted else arg for arg in literal.args]
    atom = "(" + " ".join([literal.predicate] + args) + ")"
    return f"(not {atom})" if literal.negated else atom


def _conjunction(literals: Iterable[Literal], lifted: bool) -> str:
    parts = [_literal(literal, lifted) for literal in literals]
    if not parts:
        return "(and)"
    return "(and " + " ".join(parts) + ")"


def _types(hierarchy: TypeHierarchy) -> str:
    """Typed list with parented types first so roots do not pick up a parent"""
    children = [f"{name} - {parent}" for name, parent in hierarchy.entries if parent is not None]
    roots = [name for name, parent in hierarchy.entries if parent is None]
    return " ".join(children + roots)


class PddlCompiler:
    """
    Compiles consistency-checked models to PDDL domain and problem text

    Names keep their case; PDDL consumers compare names case-insensitively.
    """

    def __init__(self):
        """Initialize PDDL compiler"""
        self.checker = ConsistencyChecker()

    def compile_domain(self, d: DomainModel) -> str:
        """
        Compile a domain to a PDDL domain definition

        Args:
            d: Domain model; its declarations and action bodies must pass the checker

        Returns:
            PDDL domain text, LF line endings
        """
        domain_only = ModelBundle(d, ProblemModel(name="compile_guard"))
        errors = self.checker.check_declarations(domain_only) + self.checker.check_action_bodies(domain_only)
        if errors:
            codes = sorted({error.code.value for error in errors})
            raise CompileGuardError(f"domain has {len(errors)} consistency errors: {', '.join(codes)}", codes)

        requirements = list(REQUIREMENTS)
        if any(p.negated for schema in d.actions for p in schema.preconditions):
            requirements.append(":negative-preconditions")

        lines = [
            f"(define (domain {d.name})",
            f"  (:requirements {' '.join(requirements)})",
            f"  (:types {_types(d.hierarchy)})",
            "  (:predicates",
        ]
        for predicate in d.predicates:
            signature = f"{predicate.name} {_typed_parameters(predicate.parameters)}".strip()
            lines.append(f"    ({signature})")
        lines.append("  )")
        for schema in d.actions:
            lines.extend(self._action_lines(schema))
        lines.append(")")

        logger.debug(f"Compiled domain '{d.name}' with {len(d.actions)} actions")
        return "\n".join(lines) + "\n"

    @staticmethod
    def _action_lines(schema: ActionSchema) -> List[str]:
        return [
            f"  (:action {schema.name}",
            f"    :parameters ({_typed_parameters(schema.parameters)})",
            f"    :precondition {_conjunction(schema.preconditions, lifted=True)}",
            f"    :effect {_conjunction(schema.effects, lifted=True)})",
        ]

    def compile_problem(self, b: ModelBundle) -> str:
        """
        Compile the problem part of a bundle to a PDDL problem definition

        Args:
            b: Model bundle that passes every consistency check and has a goal

        Returns:
            PDDL problem text, LF line endings
        """
        report = self.checker.check_model(b)
        if not report.is_clean:
            codes = sorted({code.value for code in report.codes})
            raise CompileGuardError(f"model has {len(report.errors)} consistency errors: {', '.join(codes)}", codes)
        if not b.problem.goal:
            raise CompileGuardError("problem has an empty goal")
        for obj in b.problem.objects:
            if obj.declared_type not in b.domain.hierarchy:
                raise CompileGuardError(f"object '{obj.name}' has undeclared type '{obj.declared_type}'")

        problem = b.problem
        lines = [
            f"(define (problem {problem.name})",
            f"  (:domain {b.domain.name})",
            "  (:objects",
        ]
        lines.extend(f"    {obj.name} - {obj.declared_type}" for obj in problem.objects)
        lines.append("  )")
        lines.append("  (:init")
        lines.extend(f"    {_literal(literal, lifted=False)}" for literal in problem.init)
        lines.append("  )")
        lines.append(f"  (:goal {_conjunction(problem.goal, lifted=False)})")
        lines.append(")")
        return "\n".join(lines) + "\n"


def compile_domain(d: DomainModel) -> str:
    return PddlCompiler().compile_domain(d)


def compile_problem(b: ModelBundle) -> str:
    return PddlCompiler().compile_problem(b)
