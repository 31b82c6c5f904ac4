"""Unfolding of the probability nodes into plain quantified formulas."""
from __future__ import annotations

from ..kernel.types import OMEGA, EVENT, RAT
from ..kernel.syntax import (
    Var, Compl, ProbOf, QVal, RatLit, RAdd, RSub, RealCmp, AtomIn, And, Implies, Forall, Exists,
    ProbGeq, ProbLeq, free_vars, all_names, fresh_name,
)
from ..classify import demorgan_dual
from ..errors import SampleVarMissing


def _check_sample(phi, sample, require):
    if require and sample not in free_vars(phi):
        raise SampleVarMissing(f"sample variable {sample!r} does not occur free in the formula")
    t = free_vars(phi).get(sample)
    if t is not None and t != OMEGA:
        raise SampleVarMissing(f"{sample!r} is free but has type {t}, not Om")


def _fresh_event(phi, lam, sample):
    return Var(fresh_name("A", all_names(phi) | all_names(lam) | {sample}), EVENT)


def outer_expand(phi, lam, sample="w", require_sample=True):
    """all A:Ev. (Pr(A) < lam -> ex w:Om. (w in A^c & phi))"""
    _check_sample(phi, sample, require_sample)
    a = _fresh_event(phi, lam, sample)
    w = Var(sample, OMEGA)
    return Forall(a, Implies(RealCmp(ProbOf(a), "<", lam),
                             Exists(w, And(AtomIn(w, Compl(a)), phi))))


def inner_expand(phi, lam, sample="w", require_sample=True):
    """all A:Ev. (Pr(A) > lam -> ex w:Om. (w in A & dual phi))"""
    _check_sample(phi, sample, require_sample)
    a = _fresh_event(phi, lam, sample)
    w = Var(sample, OMEGA)
    return Forall(a, Implies(RealCmp(ProbOf(a), ">", lam),
                             Exists(w, And(AtomIn(w, a), demorgan_dual(phi)))))


def leq_by_duality(phi, lam, sample="w"):
    """The defining reading of Pr[phi] <= lam: Pr[dual phi] >= 1 - lam."""
    return ProbGeq(demorgan_dual(phi), RSub(RatLit(1), lam), sample)


def expand_node(node):
    if isinstance(node, ProbGeq):
        return outer_expand(node.body, node.lam, node.sample, require_sample=False)
    if isinstance(node, ProbLeq):
        return inner_expand(node.body, node.lam, node.sample, require_sample=False)
    raise TypeError(f"not a probability node: {node!r}")


def _fresh_q(base, *nodes):
    avoid = set()
    for n in nodes:
        avoid |= all_names(n)
    return Var(fresh_name(base, avoid), RAT)


def prob_gt(phi, lam, sample="w", margin="nu"):
    """Pr[phi] > lam, written ex nu:Q. (nu > 0 & Pr[phi] >= lam + nu)."""
    nu = _fresh_q(margin, phi, lam, Var(sample, OMEGA))
    return Exists(nu, And(RealCmp(QVal(nu), ">", RatLit(0)), ProbGeq(phi, RAdd(lam, QVal(nu)), sample)))


def prob_lt(phi, lam, sample="w", margin="nu"):
    """Pr[phi] < lam, written ex nu:Q. (nu > 0 & Pr[phi] <= lam - nu)."""
    nu = _fresh_q(margin, phi, lam, Var(sample, OMEGA))
    return Exists(nu, And(RealCmp(QVal(nu), ">", RatLit(0)), ProbLeq(phi, RSub(lam, QVal(nu)), sample)))
