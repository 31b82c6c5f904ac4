"""Syntactic formula classes, De Morgan duals and monotonicity verdicts."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .kernel.types import NAT, Arrow, Base, OMEGA, EVENT, RAT, is_small, is_admissible, show_type, value_type
from .kernel.syntax import (
    Var, NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq, ATOMS, free_vars, all_names, fresh_name,
)
from .kernel.subst import subst_many
from .kernel.macros import leq
from .errors import NoOrderAtType


class Cls(Enum):
    QuantifierFree = "QuantifierFree"
    Existential = "Existential"
    Universal = "Universal"
    General = "General"

    def __str__(self):
        return self.value


QF, EX, UN, GEN = Cls.QuantifierFree, Cls.Existential, Cls.Universal, Cls.General


@dataclass(frozen=True)
class QuantifierInfo:
    quantifier: str
    var: str
    type: object
    small: bool
    admissible: bool

    def __str__(self):
        return f"{self.quantifier} {self.var}:{show_type(self.type)} small={self.small} admissible={self.admissible}"


@dataclass(frozen=True)
class FormulaClass:
    value: Cls
    type_report: tuple = ()

    @property
    def name(self):
        return self.value.value

    @property
    def all_admissible(self):
        return all(q.admissible for q in self.type_report)


def _join(a, b):
    if a == b:
        return a
    if a == QF:
        return b
    if b == QF:
        return a
    return GEN


def _is_free_bounded(f):
    """Bounded quantifiers over type 0 do not count as quantifiers."""
    return isinstance(f, (BForall, BExists)) and f.var.type == NAT


def _class(f):
    if isinstance(f, ATOMS):
        return QF
    if isinstance(f, Not):
        return QF if _class(f.body) == QF else GEN
    if isinstance(f, (And, Or)):
        return _join(_class(f.left), _class(f.right))
    if isinstance(f, Implies):
        # a QF premise behaves like a disjunct
        return _class(f.right) if _class(f.left) == QF else GEN
    if _is_free_bounded(f):
        c = _class(f.body)
        if c == QF:
            return QF
        return c if c == (UN if isinstance(f, BForall) else EX) else GEN
    if isinstance(f, (Forall, BForall)):
        return UN if _class(f.body) in (QF, UN) else GEN
    if isinstance(f, (Exists, BExists)):
        return EX if _class(f.body) in (QF, EX) else GEN
    if isinstance(f, (ProbGeq, ProbLeq)):
        from .prob.expand import expand_node
        return _class(expand_node(f))
    raise TypeError(f"not a formula: {f!r}")


def _report(f, out):
    if isinstance(f, (Forall, Exists, BForall, BExists)):
        q = {Forall: "all", Exists: "ex", BForall: "all<=", BExists: "ex<="}[type(f)]
        out.append(QuantifierInfo(q, f.var.name, f.var.type, is_small(f.var.type), is_admissible(f.var.type)))
        _report(f.body, out)
    elif isinstance(f, Not):
        _report(f.body, out)
    elif isinstance(f, (And, Or, Implies)):
        _report(f.left, out)
        _report(f.right, out)
    elif isinstance(f, (ProbGeq, ProbLeq)):
        _report(f.body, out)


def formula_class(f):
    out = []
    _report(f, out)
    return FormulaClass(_class(f), tuple(out))


def is_quantifier_free(f):
    return _class(f) == QF


# ---------------------------------------------------------------- duals

_NAT_FLIP = {"<": ">=", "<=": ">", ">=": "<", ">": "<="}


def demorgan_dual(f):
    """Classical De Morgan dual: negation pushed to the atoms."""
    if isinstance(f, NatCmp):
        if f.op == "=":
            return Not(f)
        return NatCmp(_NAT_FLIP[f.op], f.left, f.right)
    if isinstance(f, RealCmp):
        if f.op == "=":
            return Not(f)
        return RealCmp(f.left, _NAT_FLIP[f.op], f.right)
    if isinstance(f, AtomIn):
        return Not(f)
    if isinstance(f, Not):
        return f.body
    if isinstance(f, And):
        return Or(demorgan_dual(f.left), demorgan_dual(f.right))
    if isinstance(f, Or):
        return And(demorgan_dual(f.left), demorgan_dual(f.right))
    if isinstance(f, Implies):
        return And(f.left, demorgan_dual(f.right))
    if isinstance(f, Forall):
        return Exists(f.var, demorgan_dual(f.body))
    if isinstance(f, Exists):
        return Forall(f.var, demorgan_dual(f.body))
    if isinstance(f, BForall):
        return BExists(f.var, f.bound, demorgan_dual(f.body))
    if isinstance(f, BExists):
        return BForall(f.var, f.bound, demorgan_dual(f.body))
    if isinstance(f, (ProbGeq, ProbLeq)):
        return Not(f)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------- monotonicity

class Direction(Enum):
    Monotone = "Monotone"
    AntiMonotone = "AntiMonotone"
    Unknown = "Unknown"

    def __str__(self):
        return self.value


MONO, ANTI, UNKNOWN = Direction.Monotone, Direction.AntiMonotone, Direction.Unknown


@dataclass(frozen=True)
class Syntactic:
    rule: str

    def __str__(self):
        return f"Syntactic({self.rule})"


@dataclass(frozen=True)
class Annotated:
    def __str__(self):
        return "Annotated"


@dataclass(frozen=True)
class SemanticallyChecked:
    model_id: str
    bound: str

    def __str__(self):
        return f"SemanticallyChecked({self.model_id}, {self.bound})"


@dataclass(frozen=True)
class NoEvidence:
    note: str = ""

    def __str__(self):
        return "none" + (f" ({self.note})" if self.note else "")


@dataclass(frozen=True)
class MonotoneVerdict:
    direction: Direction
    evidence: object
    var: str = ""

    def as_record(self):
        return {"direction": str(self.direction), "evidence": str(self.evidence)}

    def __str__(self):
        return f"{{direction: {self.direction}, evidence: {self.evidence}}}"


# a neutral verdict (x does not occur) is compatible with both directions
_NEUTRAL = "neutral"


def _syntactic(f, x):
    """Return MONO, ANTI, _NEUTRAL or None (no rule applies), with the rule name."""
    if x not in free_vars(f):
        return _NEUTRAL, "independent"
    if isinstance(f, (BExists, BForall)) and isinstance(f.bound, Var) and f.bound.name == x \
            and f.var.name != x and x not in free_vars(f.body):
        if isinstance(f, BExists):
            return MONO, "widening-bounded-ex"
        return ANTI, "widening-bounded-all"
    if isinstance(f, NatCmp) and f.op != "=":
        lx = isinstance(f.left, Var) and f.left.name == x and x not in free_vars(f.right)
        rx = isinstance(f.right, Var) and f.right.name == x and x not in free_vars(f.left)
        if lx or rx:
            # x on the small side of <= / < is anti-monotone
            small_side_left = f.op in ("<", "<=")
            anti = lx == small_side_left
            return (ANTI if anti else MONO), "comparison"
        return None, ""
    if isinstance(f, (And, Or)):
        a, ra = _syntactic(f.left, x)
        b, rb = _syntactic(f.right, x)
        if a is None or b is None:
            return None, ""
        if a == _NEUTRAL:
            return b, rb if b != _NEUTRAL else "independent"
        if b == _NEUTRAL or a == b:
            return a, "congruence"
        return None, ""
    if isinstance(f, (Forall, Exists, BForall, BExists)):
        if f.var.name == x:
            return _NEUTRAL, "independent"
        if isinstance(f, (BForall, BExists)) and x in free_vars(f.bound):
            return None, ""
        d, r = _syntactic(f.body, x)
        if d is None:
            return None, ""
        return d, ("quantifier-congruence" if d != _NEUTRAL else r)
    return None, ""


def _check_direction(f, xv, direction, space, bounds, env):
    from .model.evaluate import Evaluator
    avoid = all_names(f) | set(env or {})
    y = Var(fresh_name(xv.name + "'", avoid), xv.type)
    fy = subst_many(f, {xv.name: y})
    small, big = (f, fy) if direction == MONO else (fy, f)
    body = Implies(leq(xv, y, xv.type), Implies(small, big))
    stmt = Forall(xv, Forall(y, body))
    others = [Var(n, t) for n, t in free_vars(stmt).items() if n not in (env or {})]
    for v in reversed(others):
        stmt = Forall(v, stmt)
    ev = Evaluator(space, bounds, [stmt], env)
    return ev.holds(stmt, ev.coerce_env(stmt, env or {}))


def _has_order(t):
    # naturals and rationals by size, events by inclusion, functions pointwise; sample points are unordered
    if isinstance(t, Base):
        return t != OMEGA
    return isinstance(t, Arrow) and _has_order(t.result)


def monotonicity(f, x, hint=None, oracle=None, prefer=None):
    """Verdict on how f behaves as the variable x grows.

    x: a Var or a variable name free in f.
    hint: "Monotone" / "AntiMonotone" annotation supplied by the caller.
    oracle: (ContentSpace, EvalBounds) or (ContentSpace, EvalBounds, env) for an
        exhaustive check over the bounded domain.
    prefer: direction to report when both hold (x absent or f constant in x).
    """
    name = x.name if isinstance(x, Var) else x
    fv = free_vars(f)
    xt = x.type if isinstance(x, Var) else fv.get(name)
    if xt is None:
        xt = NAT
    if not _has_order(xt):
        raise NoOrderAtType(show_type(xt))
    prefer = Direction(prefer) if prefer else None

    d, rule = _syntactic(f, name)
    if d == _NEUTRAL:
        return MonotoneVerdict(prefer or MONO, Syntactic(rule), name)
    if d is not None and (prefer is None or prefer == d):
        return MonotoneVerdict(d, Syntactic(rule), name)

    refuted = set()
    if oracle is not None:
        space, bounds = oracle[0], oracle[1]
        env = oracle[2] if len(oracle) > 2 else None
        order = [prefer] if prefer else [MONO, ANTI]
        xv = Var(name, xt)
        for direction in order:
            if _check_direction(f, xv, direction, space, bounds, env):
                return MonotoneVerdict(direction, SemanticallyChecked(space.name, bounds.describe()), name)
            refuted.add(direction)
    if hint:
        hd = Direction(hint)
        if hd not in refuted:
            return MonotoneVerdict(hd, Annotated(), name)
        return MonotoneVerdict(UNKNOWN, NoEvidence(f"annotation {hd} refuted by the model"), name)
    if d is not None:
        return MonotoneVerdict(d, Syntactic(rule), name)
    return MonotoneVerdict(UNKNOWN, NoEvidence(), name)
