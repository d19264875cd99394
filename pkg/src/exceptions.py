from typing import Any, Dict, List, Optional, Sequence


class PipelineError(Exception):
    """Base class for every failure raised by the planning model pipeline"""


class ModelLookupError(PipelineError, KeyError):
    """A type, predicate or object name is not declared in the model"""

    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind} '{name}'")

    def __str__(self) -> str:
        return f"unknown {self.kind} '{self.name}'"


class HierarchyError(PipelineError, ValueError):
    """Type hierarchy is cyclic or references an undeclared parent"""


class SubstitutionError(PipelineError, ValueError):
    """A literal argument has no value in the binding"""

    def __init__(self, parameter: str):
        self.parameter = parameter
        super().__init__(f"unbound parameter {parameter}")


class MarkupParseError(PipelineError, ValueError):
    """Markup text violates the grammar or the document structure"""

    def __init__(self, errors: Sequence[Any]):
        self.errors = list(errors)
        summary = "; ".join(f"{e.path or '/'}: {e.message}" for e in self.errors[:3])
        super().__init__(summary or "invalid markup")


class CompileGuardError(PipelineError, ValueError):
    """Model is not ready for PDDL compilation"""

    def __init__(self, message: str, codes: Optional[Sequence[str]] = None):
        self.codes = list(codes or [])
        super().__init__(message)


class PddlParseError(PipelineError, ValueError):
    """PDDL text is malformed or uses a construct outside STRIPS with typing"""


class InvalidPlanError(PipelineError, ValueError):
    """Plan does not execute against the model"""

    def __init__(self, message: str, step_index: Optional[int] = None):
        self.step_index = step_index
        super().__init__(message)


class InvocationError(PipelineError, RuntimeError):
    """External planner could not be run or produced unusable output"""

    def __init__(self, message: str, output: str = "", returncode: Optional[int] = None):
        self.output = output
        self.returncode = returncode
        super().__init__(message)


class IterationError(PipelineError):
    """An LLM reply could not be turned into a model"""

    def __init__(self, reason: str, raw_reply: str, markup_errors: Optional[List[Any]] = None):
        self.reason = reason
        self.raw_reply = raw_reply
        self.markup_errors = list(markup_errors or [])
        super().__init__(reason)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "reason": self.reason,
            "markup_errors": [e.to_dict() for e in self.markup_errors],
        }


class TransportError(PipelineError, ConnectionError):
    """LLM endpoint stayed unreachable after all retries"""


class ReplayExhaustedError(PipelineError):
    """Replay transcript has no reply left for the current request"""


class ModelInvariantError(PipelineError, ValueError):
    """A model value violates one of its construction invariants"""
