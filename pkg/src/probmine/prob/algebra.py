"""Finite sums of outer contents and the two sigma-additivity statements."""
from __future__ import annotations

from ..kernel.types import NAT, OMEGA, EVENT, RAT, Arrow, show_type
from ..kernel.syntax import (
    Var, App, NatLit, Up, QVal, ProbOf, RAdd, RSum, PowHalf, RealCmp, AtomIn, Or, Implies,
    Forall, Exists, BExists, ProbGeq, ProbLeq, all_names, fresh_name,
)
from ..kernel.subst import subst_many
from ..kernel.typecheck import typecheck
from ..errors import TypeMismatch


def _avoid(*nodes):
    out = {"w"}
    for n in nodes:
        out |= all_names(n)
    return out


def sum_outer_geq(phi, m, lam, n="n", sample="w"):
    """sum_{n<=m} Pr[phi(n)] >= lam, unfolded over a sequence lt of rational bounds.

    With a literal m the sum and the choice of index are written out; otherwise
    they stay symbolic as a finite sum and a bounded existential.
    """
    avoid = _avoid(phi, m, lam)
    lt = Var(fresh_name("lt", avoid), Arrow(RAT, NAT))
    if isinstance(m, NatLit):
        terms = [QVal(App(lt, NatLit(i))) for i in range(m.n + 1)]
        total = terms[0]
        for t in terms[1:]:
            total = RAdd(total, t)
        cases = [ProbGeq(subst_many(phi, {n: NatLit(i)}), QVal(App(lt, NatLit(i))), sample)
                 for i in range(m.n + 1)]
        choice = cases[0]
        for c in cases[1:]:
            choice = Or(choice, c)
    else:
        i = Var(fresh_name("i", avoid | {lt.name}), NAT)
        total = RSum(i, m, QVal(App(lt, i)))
        nv = Var(n, NAT)
        choice = BExists(nv, m, ProbGeq(phi, QVal(App(lt, nv)), sample))
    return Forall(lt, Implies(RealCmp(lam, ">=", total), choice))


def sigma_additivity_statement(a):
    """The lower and upper sigma-additivity statements for an event sequence a : Ev(0)."""
    t = typecheck(a)
    if t != Arrow(EVENT, NAT):
        raise TypeMismatch("Ev(0)", show_type(t), "sigma-additivity sequence")
    avoid = _avoid(a)
    n = Var(fresh_name("n", avoid), NAT)
    i = Var(fresh_name("i", avoid | {n.name}), NAT)
    l = Var(fresh_name("l", avoid | {n.name, i.name}), NAT)
    k = Var(fresh_name("k", avoid | {n.name, i.name, l.name}), NAT)
    w = Var("w", OMEGA)
    union = Exists(n, AtomIn(w, App(a, n)))
    partial = RSum(i, l, ProbOf(App(Up(a), i)))
    lower = Forall(l, ProbGeq(union, partial))
    upper = Forall(k, Exists(l, ProbLeq(union, RAdd(partial, PowHalf(k)))))
    return lower, upper
