"""Derived relations, expanded into primitive syntax."""
from __future__ import annotations

from .types import NAT, OMEGA, EVENT, RAT, Arrow
from .syntax import (
    Var, App, NatLit, EmptySet, Compl, const, ProbOf, QVal, NatCmp, AtomIn, RealCmp,
    Implies, Forall, iff, free_vars, all_names, fresh_name,
)
from ..errors import NoOrderAtType


def _fresh(base, *nodes):
    avoid = set()
    for n in nodes:
        avoid |= all_names(n)
    return fresh_name(base, avoid)


def eq_omega(a, b):
    return NatCmp("=", App(App(const("eq"), a), b), NatLit(0))


def eq_event(a, b):
    v = Var(_fresh("v", a, b), OMEGA)
    return Forall(v, iff(AtomIn(v, a), AtomIn(v, b)))


def subset_event(a, b):
    v = Var(_fresh("v", a, b), OMEGA)
    return Forall(v, Implies(AtomIn(v, a), AtomIn(v, b)))


def whole():
    return Compl(EmptySet())


def geq(a, b, t):
    """a >= b at type t: pointwise at arrow types, via P at Om and Ev."""
    if t == NAT:
        return NatCmp(">=", a, b)
    if t == OMEGA:
        return RealCmp(ProbOf(whole()), ">=", ProbOf(whole()))
    if t == EVENT:
        return RealCmp(ProbOf(a), ">=", ProbOf(b))
    if t == RAT:
        return RealCmp(QVal(a), ">=", QVal(b))
    if isinstance(t, Arrow):
        z = Var(_fresh("z", a, b), t.arg)
        return Forall(z, geq(App(a, z), App(b, z), t.result))
    raise NoOrderAtType(str(t))


def leq(a, b, t):
    return geq(b, a, t)
