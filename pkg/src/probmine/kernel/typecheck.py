"""Type checking, with unification so the parser can infer free-variable types."""
from __future__ import annotations

import dataclasses
import itertools

from .types import FiniteType, Base, Arrow, NAT, OMEGA, EVENT, RAT, show_type, value_type
from .syntax import (
    Node, Expr, RealTerm, Formula, Var, Const, App, Lam, NatLit, Add, MinAlpha, Union,
    Compl, EmptySet, Up, RatLit, QVal, ProbOf, RAdd, RSub, RMin, PowHalf, RSum,
    NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq, CONSTANTS,
)
from ..errors import TypeMismatch, ArityError, UnboundVariable


class WellFormedType:
    def __repr__(self):
        return "WellFormed"


WellFormed = WellFormedType()

_meta_ids = itertools.count()


class TMeta(FiniteType):
    """Unknown type, only used while inferring."""
    __slots__ = ("id", "hint")

    def __init__(self, hint=""):
        self.id = next(_meta_ids)
        self.hint = hint

    def __eq__(self, other):
        return isinstance(other, TMeta) and other.id == self.id

    def __hash__(self):
        return hash(("meta", self.id))

    def __repr__(self):
        return f"?{self.hint or self.id}"

    __str__ = __repr__


class Checker:
    def __init__(self, ctx=None):
        self.ctx = dict(ctx or {})
        self.sub = {}
        self.free = {}

    # ---- unification
    def resolve(self, t):
        while isinstance(t, TMeta) and t in self.sub:
            t = self.sub[t]
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.result), self.resolve(t.arg))
        return t

    def _occurs(self, m, t):
        t = self.resolve(t)
        if t == m:
            return True
        return isinstance(t, Arrow) and (self._occurs(m, t.result) or self._occurs(m, t.arg))

    def unify(self, expected, found, loc):
        a, b = self.resolve(expected), self.resolve(found)
        if a == b:
            return a
        if isinstance(a, TMeta) and not self._occurs(a, b):
            self.sub[a] = b
            return b
        if isinstance(b, TMeta) and not self._occurs(b, a):
            self.sub[b] = a
            return a
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            r = self.unify(a.result, b.result, loc)
            g = self.unify(a.arg, b.arg, loc)
            return Arrow(r, g)
        raise TypeMismatch(show_type(a), show_type(b), loc)

    # ---- variables
    def var(self, v, env, loc):
        if v.name in env:
            return self.unify(env[v.name], v.type, loc)
        if v.name in self.ctx:
            self.unify(self.ctx[v.name], v.type, loc)
        if v.name in self.free:
            return self.unify(self.free[v.name], v.type, loc)
        self.free[v.name] = v.type
        return v.type

    # ---- terms
    def expr(self, e, env, loc="term"):
        if isinstance(e, Var):
            return self.var(e, env, loc)
        if isinstance(e, Const):
            if e.name not in CONSTANTS:
                raise UnboundVariable(f"unknown constant {e.name!r}")
            return self.unify(CONSTANTS[e.name], e.type, f"{loc}:{e.name}")
        if isinstance(e, App):
            ft = self.resolve(self.expr(e.fun, env, loc + ".fun"))
            at = self.expr(e.arg, env, loc + ".arg")
            if isinstance(ft, Base):
                raise ArityError(f"{loc}: term of type {show_type(ft)} applied to an argument")
            if isinstance(ft, TMeta):
                res = TMeta()
                self.unify(ft, Arrow(res, at), loc)
                return res
            self.unify(ft.arg, at, loc + ".arg")
            return ft.result
        if isinstance(e, Lam):
            bt = self.expr(e.body, {**env, e.var.name: e.var.type}, loc + ".body")
            return Arrow(bt, e.var.type)
        if isinstance(e, NatLit):
            return NAT
        if isinstance(e, Add):
            self.unify(NAT, self.expr(e.left, env, loc + ".left"), loc + ".left")
            self.unify(NAT, self.expr(e.right, env, loc + ".right"), loc + ".right")
            return NAT
        if isinstance(e, MinAlpha):
            if value_type(e.type) != NAT:
                raise TypeMismatch("a type with natural-number values", show_type(e.type), loc)
            self.unify(e.type, self.expr(e.left, env, loc + ".left"), loc + ".left")
            self.unify(e.type, self.expr(e.right, env, loc + ".right"), loc + ".right")
            return e.type
        if isinstance(e, Union):
            self.unify(EVENT, self.expr(e.left, env, loc + ".left"), loc + ".left")
            self.unify(EVENT, self.expr(e.right, env, loc + ".right"), loc + ".right")
            return EVENT
        if isinstance(e, Compl):
            self.unify(EVENT, self.expr(e.arg, env, loc + ".arg"), loc + ".arg")
            return EVENT
        if isinstance(e, EmptySet):
            return EVENT
        if isinstance(e, Up):
            seq = Arrow(EVENT, NAT)
            self.unify(seq, self.expr(e.seq, env, loc + ".seq"), loc + ".seq")
            return seq
        raise TypeError(f"not a term: {e!r}")

    # ---- real terms
    def real(self, r, env, loc="real"):
        if isinstance(r, RatLit):
            return RAT
        if isinstance(r, QVal):
            self.unify(RAT, self.expr(r.term, env, loc), loc)
            return RAT
        if isinstance(r, ProbOf):
            self.unify(EVENT, self.expr(r.event, env, loc + ".event"), loc + ".event")
            return RAT
        if isinstance(r, (RAdd, RSub, RMin)):
            self.real(r.left, env, loc + ".left")
            self.real(r.right, env, loc + ".right")
            return RAT
        if isinstance(r, PowHalf):
            self.unify(NAT, self.expr(r.exponent, env, loc + ".exp"), loc + ".exp")
            return RAT
        if isinstance(r, RSum):
            self.unify(NAT, r.var.type, loc + ".var")
            self.unify(NAT, self.expr(r.bound, env, loc + ".bound"), loc + ".bound")
            self.real(r.body, {**env, r.var.name: NAT}, loc + ".body")
            return RAT
        raise TypeError(f"not a real term: {r!r}")

    # ---- formulas
    def formula(self, f, env, loc="formula"):
        if isinstance(f, NatCmp):
            self.unify(NAT, self.expr(f.left, env, loc + ".left"), loc + ".left")
            self.unify(NAT, self.expr(f.right, env, loc + ".right"), loc + ".right")
        elif isinstance(f, AtomIn):
            self.unify(OMEGA, self.expr(f.elem, env, loc + ".elem"), loc + ".elem")
            self.unify(EVENT, self.expr(f.event, env, loc + ".event"), loc + ".event")
        elif isinstance(f, RealCmp):
            self.real(f.left, env, loc + ".left")
            self.real(f.right, env, loc + ".right")
        elif isinstance(f, Not):
            self.formula(f.body, env, loc + ".not")
        elif isinstance(f, (And, Or, Implies)):
            self.formula(f.left, env, loc + ".left")
            self.formula(f.right, env, loc + ".right")
        elif isinstance(f, (Forall, Exists)):
            self.formula(f.body, {**env, f.var.name: f.var.type}, loc + "." + f.var.name)
        elif isinstance(f, (BForall, BExists)):
            self.unify(f.var.type, self.expr(f.bound, env, loc + ".bound"), loc + ".bound")
            self.formula(f.body, {**env, f.var.name: f.var.type}, loc + "." + f.var.name)
        elif isinstance(f, (ProbGeq, ProbLeq)):
            self.formula(f.body, {**env, f.sample: OMEGA}, loc + ".Pr")
            self.real(f.lam, env, loc + ".bound")
        else:
            raise TypeError(f"not a formula: {f!r}")
        return WellFormed

    def check(self, node, env=None):
        env = env or {}
        if isinstance(node, Formula):
            return self.formula(node, env)
        if isinstance(node, RealTerm):
            return self.real(node, env)
        return self.resolve(self.expr(node, env))


def typecheck(node, ctx=None):
    """Type of a term, RAT for a real term, WellFormed for a formula."""
    c = Checker(ctx)
    return c.check(node)


def type_of(e):
    return Checker().check(e)


def free_types(node, ctx=None):
    c = Checker(ctx)
    c.check(node)
    return {k: c.resolve(t) for k, t in c.free.items()}


def has_meta(t):
    if isinstance(t, TMeta):
        return True
    return isinstance(t, Arrow) and (has_meta(t.result) or has_meta(t.arg))


def infer(node, ctx=None):
    """Resolve inference metavariables left by the parser."""
    c = Checker(ctx)
    c.check(node)
    for name, t in c.free.items():
        if has_meta(c.resolve(t)):
            raise UnboundVariable(f"cannot determine the type of free variable {name!r}; annotate it as {name}:type")
    return map_types(node, c.resolve)


def map_types(node, fn):
    if isinstance(node, FiniteType):
        return fn(node)
    if not isinstance(node, Node):
        return node
    changes = {}
    for fl in dataclasses.fields(node):
        v = getattr(node, fl.name)
        if isinstance(v, (Node, FiniteType)):
            nv = map_types(v, fn)
            if nv is not v:
                changes[fl.name] = nv
    return dataclasses.replace(node, **changes) if changes else node
