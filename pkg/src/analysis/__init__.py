# Reachability analysis package

from src.analysis.grounding import GroundAction, ground, ground_schema
from src.analysis.reachability import (
    ReachabilityAnalyzer,
    ReachabilityReport,
    SupportIssue,
    SupportReason,
    action_coverage,
    analyze,
    format_feedback,
    relaxed_fixpoint,
    static_predicates,
    support_check,
)

__all__ = [
    "GroundAction",
    "ReachabilityAnalyzer",
    "ReachabilityReport",
    "SupportIssue",
    "SupportReason",
    "action_coverage",
    "analyze",
    "format_feedback",
    "ground",
    "ground_schema",
    "relaxed_fixpoint",
    "static_predicates",
    "support_check",
]
