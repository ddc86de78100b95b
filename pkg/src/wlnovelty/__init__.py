"""Greedy best-first planning with atom and Weisfeiler-Leman novelty heuristics."""

from .ground import GroundAction, GroundTask, apply, applicable, ground, is_goal
from .heuristics import h_add, h_ff, h_gc, make_heuristic
from .ilg import build_ilg, ilg_from_atoms
from .novelty import NoveltyTable, evaluate_qb, features_of, make_evaluator
from .pddl import PDDLError, parse_domain, parse_problem
from .search import Limits, Outcome, gbfs, validate
from .wl import HashStore, refine

__version__ = "0.1.0"

__all__ = [
    "GroundAction", "GroundTask", "apply", "applicable", "ground", "is_goal",
    "h_add", "h_ff", "h_gc", "make_heuristic",
    "build_ilg", "ilg_from_atoms",
    "NoveltyTable", "evaluate_qb", "features_of", "make_evaluator",
    "PDDLError", "parse_domain", "parse_problem",
    "Limits", "Outcome", "gbfs", "validate",
    "HashStore", "refine",
]
