"""Types, syntax, concrete grammar, substitution and typing for the formula language."""
from .types import (
    FiniteType, Base, Arrow, NAT, OMEGA, EVENT, RAT, pure, curry, arg_types, value_type,
    hat_type, degree, pure_level, is_small, is_admissible, classify_type, TypeInfo,
    show_type, parse_type,
)
from .syntax import *  # noqa: F401,F403
from .syntax import free_vars, all_names, fresh_name, size, children
from .subst import substitute, subst_many
from .typecheck import typecheck, type_of, WellFormed, infer
from .parser import parse_formula, parse_term, parse_real
from .printer import show
from .macros import eq_omega, eq_event, subset_event, geq, leq
