"""Finite content spaces, the bounded evaluator and the semantic checks built on it."""
from .content import ContentSpace, EvalBounds, parse_model, load_model, load_model_with_bounds, parse_rational
from .evaluate import Evaluator, evaluate, outer_inner_content, phi_set
from .sets import disjointify
from .majorize import majorizes
from .fluct import FluctuationQuery, count_fluctuations, count_fluctuations_brute
from .check import Report, check_modulus, bounded_functions, KINDS
from .fleet import fleet, fleet_model, FLEET_NAMES
