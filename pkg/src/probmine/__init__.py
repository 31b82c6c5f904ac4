"""Proof-mining workbench for probabilistic statements over finite content spaces."""

__version__ = "0.1.0"

from .kernel import parse_formula, parse_type, show, typecheck  # noqa: E402
from .model import ContentSpace, EvalBounds, evaluate, fleet_model  # noqa: E402
