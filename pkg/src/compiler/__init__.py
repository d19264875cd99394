# PDDL compilation package

from src.compiler.pddl_reader import parse_pddl_domain, parse_pddl_problem
from src.compiler.pddl_writer import PddlCompiler, compile_domain, compile_problem

__all__ = [
    "PddlCompiler",
    "compile_domain",
    "compile_problem",
    "parse_pddl_domain",
    "parse_pddl_problem",
]
