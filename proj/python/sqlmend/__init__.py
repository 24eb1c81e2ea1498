"""Mutation-based SQL repair."""

import json
import os

from ._core import (
    Database,
    ExecutionError,
    LoadError,
    ParseError,
    canonical,
    edit_distance,
    jaccard,
    normalize_for_distance,
    repair,
    same_structure,
    skeleton,
)
from . import _core

__all__ = [
    "Database",
    "ExecutionError",
    "LoadError",
    "ParseError",
    "analyze",
    "canonical",
    "edit_distance",
    "jaccard",
    "normalize_for_distance",
    "repair",
    "run_repair",
    "same_structure",
    "skeleton",
]


def run_repair(tasks_file, db_root=None, *, max_mutations=2, beam_width=10, top_n=10, budget_ms=120000, fallback=""):
    """Repairs every task in a tasks.json file and returns the report as a dict."""
    if db_root is None:
        db_root = os.path.dirname(os.path.abspath(tasks_file))
    text = _core.run_repair_json(
        os.fspath(tasks_file), os.fspath(db_root), max_mutations, beam_width, top_n, budget_ms, fallback
    )
    return json.loads(text)


def analyze(tasks_file, db_root=None):
    """Failure statistics of candidate #1 against gold per task."""
    if db_root is None:
        db_root = os.path.dirname(os.path.abspath(tasks_file))
    return json.loads(_core.analyze_json(os.fspath(tasks_file), os.fspath(db_root)))
