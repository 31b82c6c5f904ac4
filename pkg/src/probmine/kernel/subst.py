"""Capture-avoiding substitution."""
from __future__ import annotations

from .syntax import (
    Var, Const, App, Lam, NatLit, Add, MinAlpha, Union, Compl, EmptySet, Up,
    RatLit, QVal, ProbOf, RAdd, RSub, RMin, PowHalf, RSum,
    NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq, free_vars, fresh_name,
)
from .types import show_type, OMEGA
from ..errors import TypeMismatch


def substitute(node, x, t):
    """Replace free occurrences of variable x by term t."""
    if x.type != _type_of_replacement(t, x):
        raise TypeMismatch(show_type(x.type), show_type(_type_of_replacement(t, x)), f"substitute {x.name}")
    return subst_many(node, {x.name: t})


def _type_of_replacement(t, x):
    from .typecheck import type_of
    return type_of(t)


def subst_many(node, mapping, rmap=None):
    """Simultaneous substitution.

    mapping: name -> Expr for term variables.
    rmap: name -> RealTerm, replacing occurrences ``QVal(Var(name))``.
    """
    mapping = dict(mapping)
    rmap = dict(rmap or {})
    if not mapping and not rmap:
        return node
    return _Subst().go(node, mapping, rmap)


def rename_bound(node, old, new):
    return subst_many(node, {old.name: Var(new, old.type)})


class _Subst:
    def go(self, n, m, r):
        if not m and not r:
            return n
        meth = getattr(self, "_" + type(n).__name__)
        return meth(n, m, r)

    # -- terms
    def _Var(self, n, m, r):
        return m.get(n.name, n)

    def _Const(self, n, m, r):
        return n

    _NatLit = _EmptySet = _RatLit = _Const

    def _App(self, n, m, r):
        return App(self.go(n.fun, m, r), self.go(n.arg, m, r))

    def _Add(self, n, m, r):
        return Add(self.go(n.left, m, r), self.go(n.right, m, r))

    def _Union(self, n, m, r):
        return Union(self.go(n.left, m, r), self.go(n.right, m, r))

    def _MinAlpha(self, n, m, r):
        return MinAlpha(n.type, self.go(n.left, m, r), self.go(n.right, m, r))

    def _Compl(self, n, m, r):
        return Compl(self.go(n.arg, m, r))

    def _Up(self, n, m, r):
        return Up(self.go(n.seq, m, r))

    def _Lam(self, n, m, r):
        v, body = self._binder(n.var, n.body, m, r)
        return Lam(v, body)

    # -- real terms
    def _QVal(self, n, m, r):
        if isinstance(n.term, Var) and n.term.name in r:
            return r[n.term.name]
        return QVal(self.go(n.term, m, r))

    def _ProbOf(self, n, m, r):
        return ProbOf(self.go(n.event, m, r))

    def _RAdd(self, n, m, r):
        return RAdd(self.go(n.left, m, r), self.go(n.right, m, r))

    def _RSub(self, n, m, r):
        return RSub(self.go(n.left, m, r), self.go(n.right, m, r))

    def _RMin(self, n, m, r):
        return RMin(self.go(n.left, m, r), self.go(n.right, m, r))

    def _PowHalf(self, n, m, r):
        return PowHalf(self.go(n.exponent, m, r))

    def _RSum(self, n, m, r):
        bound = self.go(n.bound, m, r)
        v, body = self._binder(n.var, n.body, m, r)
        return RSum(v, bound, body)

    # -- formulas
    def _NatCmp(self, n, m, r):
        return NatCmp(n.op, self.go(n.left, m, r), self.go(n.right, m, r))

    def _AtomIn(self, n, m, r):
        return AtomIn(self.go(n.elem, m, r), self.go(n.event, m, r))

    def _RealCmp(self, n, m, r):
        return RealCmp(self.go(n.left, m, r), n.op, self.go(n.right, m, r))

    def _Not(self, n, m, r):
        return Not(self.go(n.body, m, r))

    def _And(self, n, m, r):
        return And(self.go(n.left, m, r), self.go(n.right, m, r))

    def _Or(self, n, m, r):
        return Or(self.go(n.left, m, r), self.go(n.right, m, r))

    def _Implies(self, n, m, r):
        return Implies(self.go(n.left, m, r), self.go(n.right, m, r))

    def _Forall(self, n, m, r):
        v, body = self._binder(n.var, n.body, m, r)
        return Forall(v, body)

    def _Exists(self, n, m, r):
        v, body = self._binder(n.var, n.body, m, r)
        return Exists(v, body)

    def _BForall(self, n, m, r):
        bound = self.go(n.bound, m, r)
        v, body = self._binder(n.var, n.body, m, r)
        return BForall(v, bound, body)

    def _BExists(self, n, m, r):
        bound = self.go(n.bound, m, r)
        v, body = self._binder(n.var, n.body, m, r)
        return BExists(v, bound, body)

    def _ProbGeq(self, n, m, r):
        lam = self.go(n.lam, m, r)
        v, body = self._binder(Var(n.sample, OMEGA), n.body, m, r)
        return ProbGeq(body, lam, v.name)

    def _ProbLeq(self, n, m, r):
        lam = self.go(n.lam, m, r)
        v, body = self._binder(Var(n.sample, OMEGA), n.body, m, r)
        return ProbLeq(body, lam, v.name)

    def _binder(self, var, body, m, r):
        m = {k: t for k, t in m.items() if k != var.name}
        r = {k: t for k, t in r.items() if k != var.name}
        body_free = free_vars(body)
        live = [t for k, t in m.items() if k in body_free] + [t for k, t in r.items() if k in body_free]
        incoming = set()
        for t in live:
            incoming |= set(free_vars(t))
        if var.name in incoming:
            avoid = set(body_free) | incoming | set(m) | set(r)
            new = Var(fresh_name(var.name, avoid), var.type)
            m[var.name] = new
            return new, self.go(body, m, r)
        return var, self.go(body, m, r)
