# Command line package

from src.cli.main import ExitCode, build_parser, main

__all__ = ["ExitCode", "build_parser", "main"]
