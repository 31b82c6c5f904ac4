"""Instances of the uniform boundedness and contra-collection schemas."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..kernel.types import NAT, OMEGA, EVENT, Arrow, pure_level, value_type, show_type, is_admissible
from ..kernel.syntax import (
    Var, App, MinAlpha, Implies, Forall, Exists, BForall, BExists, forall_many, exists_many,
    free_vars, all_names, fresh_name,
)
from ..kernel.subst import subst_many
from ..kernel.typecheck import typecheck
from ..classify import formula_class, QF, EX
from ..errors import NotPure, BadAlphaShape, FormulaClassViolation, TypeMismatch

SORTS = {"omega": OMEGA, "Om": OMEGA, "ev": EVENT, "Ev": EVENT, OMEGA: OMEGA, EVENT: EVENT}


@dataclass(frozen=True)
class SchemaInstance:
    principle: str
    parameters: dict = field(hash=False)
    rendered: object = None


def _sort(sort):
    try:
        return SORTS[sort]
    except KeyError:
        raise TypeMismatch("omega or ev", str(sort), "schema sort") from None


def _check_betas(betas, sort):
    for b in betas:
        if value_type(b) != sort:
            raise TypeMismatch(f"a type ending in {show_type(sort)}", show_type(b), "beta")


def _principle_name(kind, sort, rho=None, full=False):
    s = "Omega" if sort == OMEGA else "S"
    if kind == "UB":
        return f"UB_{s}{'_full' if full else ''}({show_type(rho)})"
    return f"CC0_{s}"


def instantiate_ub(rho, sort, phi, alpha, betas=(), mode="restricted", names=None):
    """Render the uniform boundedness schema for the matrix phi.

    phi is written in the variables y : alpha(0), k : 0, x : alpha, the
    z-variables (one per beta) and w : rho; ``names`` overrides these names
    (keys y, k, x, z, w).  Every occurrence of x is replaced by min(x, y k).
    """
    sort = _sort(sort)
    if pure_level(rho) is None:
        raise NotPure(f"{show_type(rho)} is not a pure type")
    if value_type(alpha) != NAT:
        raise BadAlphaShape(f"{show_type(alpha)} does not have natural-number values")
    betas = list(betas)
    _check_betas(betas, sort)
    if mode not in ("restricted", "full"):
        raise ValueError("mode must be 'restricted' or 'full'")
    nm = {"y": "y", "k": "k", "x": "x", "w": "w",
          "z": [f"z{i + 1}" for i in range(len(betas))] if len(betas) != 1 else ["z"]}
    nm.update(names or {})
    if mode == "restricted":
        cls = formula_class(phi)
        if cls.value not in (QF, EX) or not cls.all_admissible:
            raise FormulaClassViolation(
                f"restricted uniform boundedness needs an existential matrix with admissible quantifier types, got {cls.name}")
    y = Var(nm["y"], Arrow(alpha, NAT))
    k = Var(nm["k"], NAT)
    x = Var(nm["x"], alpha)
    w = Var(nm["w"], rho)
    zs = [Var(n, b) for n, b in zip(nm["z"], betas)]
    typecheck(phi, {v.name: v.type for v in [y, k, x, w, *zs]})
    chi = Var(fresh_name("chi", all_names(phi) | {v.name for v in [y, k, x, w, *zs]}), Arrow(rho, NAT))
    body = subst_many(phi, {x.name: MinAlpha(alpha, x, App(y, k))})
    premise = forall_many([k, x, *zs], Exists(w, body))
    conclusion = Exists(chi, forall_many([k, x, *zs], BExists(w, App(chi, k), body)))
    rendered = Forall(y, Implies(premise, conclusion))
    typecheck(rendered)
    params = {"rho": show_type(rho), "sort": show_type(sort), "alpha": show_type(alpha),
              "betas": [show_type(b) for b in betas], "mode": mode}
    return SchemaInstance(_principle_name("UB", sort, rho, mode == "full"), params, rendered)


def instantiate_cc(sort, phi0, betas=(), names=None):
    """Render contra-collection at type 0 for a quantifier-free phi0(z..., n)."""
    sort = _sort(sort)
    betas = list(betas)
    _check_betas(betas, sort)
    if formula_class(phi0).value != QF:
        raise FormulaClassViolation("contra-collection needs a quantifier-free matrix")
    nm = {"n": "n", "z": [f"z{i + 1}" for i in range(len(betas))] if len(betas) != 1 else ["z"]}
    nm.update(names or {})
    n = Var(nm["n"], NAT)
    zs = [Var(z, b) for z, b in zip(nm["z"], betas)]
    typecheck(phi0, {v.name: v.type for v in [n, *zs]})
    k = Var(fresh_name("k", all_names(phi0) | {v.name for v in [n, *zs]}), NAT)
    premise = Forall(k, exists_many(zs, BForall(n, k, phi0)))
    conclusion = exists_many(zs, Forall(n, phi0))
    rendered = Implies(premise, conclusion)
    typecheck(rendered)
    params = {"sort": show_type(sort), "betas": [show_type(b) for b in betas]}
    return SchemaInstance(_principle_name("CC", sort), params, rendered)
