"""Epistemic PDL over uncertainty maps: three checkers and a conformant planner."""

from .model import KripkeModel, ModelError, UncertaintyMap, fixtures, load_model
from .syntax import ParseError, parse_formula, parse_program

__version__ = "0.1.0"

__all__ = [
    "KripkeModel", "ModelError", "UncertaintyMap", "fixtures", "load_model",
    "ParseError", "parse_formula", "parse_program",
]
