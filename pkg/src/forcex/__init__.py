"""Forced execution of JavaScript: run every branch, fake what's missing,
report what the sample tried to do."""

from .explorer import (
    ExplorationResult,
    RunRecord,
    UnitResult,
    coverage_ratio,
    explore,
    explore_units,
)
from .hostenv import extract_scripts
from .interpreter import Budgets, ExecutionOutcome, execute
from .parser import JsSyntaxError, parse
from .policies import Finding, builtin_policies, evaluate_policies
from .report import build_report, to_json, to_text

__version__ = "0.1.0"

__all__ = [
    "Budgets",
    "ExecutionOutcome",
    "ExplorationResult",
    "Finding",
    "JsSyntaxError",
    "RunRecord",
    "UnitResult",
    "build_report",
    "builtin_policies",
    "coverage_ratio",
    "evaluate_policies",
    "execute",
    "explore",
    "explore_units",
    "extract_scripts",
    "parse",
    "to_json",
    "to_text",
    "__version__",
]
