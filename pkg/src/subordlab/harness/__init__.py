"""Randomized theorem harness."""
from ..errors import GeneratorStarved
from .cases import TheoremCase, converse_of, get_case, registry
from .common import Check
from .runner import TrialReport, falsify, load_report, persist_report, run_case

__all__ = [
    "Check",
    "GeneratorStarved",
    "TheoremCase",
    "TrialReport",
    "converse_of",
    "falsify",
    "get_case",
    "load_report",
    "persist_report",
    "registry",
    "run_case",
]
