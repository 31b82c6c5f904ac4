"""Negative translation, Dialectica and modified realizability as syntax transformations.

Quantifier-free subformulas (including bounded quantifiers over 0 with a
quantifier-free body) count as prime: they are decidable, so they keep their
own shape and carry no witnesses.
"""
from __future__ import annotations

from dataclasses import dataclass

from .kernel.types import NAT, curry
from .kernel.syntax import (
    Var, NatLit, NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq, FALSUM, apply_many, exists_many, forall_many, free_vars, all_names, fresh_name,
)
from .kernel.subst import subst_many
from .kernel.macros import leq
from .classify import is_quantifier_free
from .errors import UnsupportedNode

ATOMS = (NatCmp, AtomIn, RealCmp)


# ---------------------------------------------------------------- Kuroda

def kuroda(f):
    """Double negation at the root and after every universal quantifier."""
    return Not(Not(_star(f)))


def _star(f):
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Not):
        return Not(_star(f.body))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_star(f.left), _star(f.right))
    if isinstance(f, Exists):
        return Exists(f.var, _star(f.body))
    if isinstance(f, Forall):
        return Forall(f.var, Not(Not(_star(f.body))))
    if isinstance(f, BExists):
        return BExists(f.var, f.bound, _star(f.body))
    if isinstance(f, BForall):
        return BForall(f.var, f.bound, Not(Not(_star(f.body))))
    if isinstance(f, (ProbGeq, ProbLeq)):
        from .prob.expand import expand_node
        return _star(expand_node(f))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------- shared helpers

class _Names:
    """Fresh-name supply seeded from the input formula, so results do not depend on call history."""

    def __init__(self, f):
        self.used = set(all_names(f))
        self.taken = set(free_vars(f))

    def fresh(self, base):
        name = fresh_name(base, self.used)
        self.used.add(name)
        self.taken.add(name)
        return name

    def bind(self, v, body):
        """Rename a bound variable that would clash with one already placed in the output."""
        if v.name not in self.taken:
            self.taken.add(v.name)
            return v, body
        nv = Var(self.fresh(v.name), v.type)
        return nv, subst_many(body, {v.name: nv})


def _lift(names, v, args):
    """Fresh variable standing for v as a function of args; capitalised when it really is a function."""
    if not args:
        return Var(names.fresh(v.name), v.type)
    return Var(names.fresh(v.name[:1].upper() + v.name[1:]), curry(v.type, args))


def _unbound(f):
    """Bounded quantifiers as their unbounded expansions."""
    if isinstance(f, BForall):
        return Forall(f.var, Implies(leq(f.var, f.bound, f.var.type), f.body))
    if isinstance(f, BExists):
        return Exists(f.var, And(leq(f.var, f.bound, f.var.type), f.body))
    return f


def _reject_prob(f):
    if isinstance(f, (ProbGeq, ProbLeq)):
        raise UnsupportedNode(f"{type(f).__name__}: expand probability statements first (outer/inner expansion)")


def _prime(f):
    _reject_prob(f)
    return isinstance(f, ATOMS) or _no_prob(f) and is_quantifier_free(f)


def _no_prob(f):
    stack = [f]
    while stack:
        n = stack.pop()
        _reject_prob(n)
        if isinstance(n, Not):
            stack.append(n.body)
        elif isinstance(n, (And, Or, Implies)):
            stack += [n.left, n.right]
        elif isinstance(n, (Forall, Exists, BForall, BExists)):
            stack.append(n.body)
    return True


def _flag_cases(z, left, right):
    zero = NatCmp("=", z, NatLit(0))
    return And(Implies(zero, left), Implies(Not(zero), right))


# ---------------------------------------------------------------- Dialectica

@dataclass(frozen=True)
class DialecticaForm:
    exists_vars: tuple
    forall_vars: tuple
    matrix: object
    source: object

    def render(self):
        return exists_many(self.exists_vars, forall_many(self.forall_vars, self.matrix))


def dialectica(f):
    """exists-forall normal form: witnesses, counterexamples and the matrix."""
    _no_prob(f)
    names = _Names(f)
    xs, ys, m = _dial(f, names)
    return DialecticaForm(tuple(xs), tuple(ys), m, f)


def _dial(f, names):
    if _prime(f):
        return [], [], f
    f = _unbound(f)
    if isinstance(f, Not):
        f = Implies(f.body, FALSUM)
    if isinstance(f, And):
        x, y, a = _dial(f.left, names)
        u, v, b = _dial(f.right, names)
        return x + u, y + v, And(a, b)
    if isinstance(f, Or):
        z = Var(names.fresh("z"), NAT)
        x, y, a = _dial(f.left, names)
        u, v, b = _dial(f.right, names)
        return [z] + x + u, y + v, _flag_cases(z, a, b)
    if isinstance(f, Implies):
        x, y, a = _dial(f.left, names)
        u, v, b = _dial(f.right, names)
        xt = [w.type for w in x]
        big_u = [_lift(names, w, xt) for w in u]
        big_y = [_lift(names, w, xt + [t.type for t in v]) for w in y]
        prem = subst_many(a, {w.name: apply_many(Y, x + v) for w, Y in zip(y, big_y)})
        concl = subst_many(b, {w.name: apply_many(U, x) for w, U in zip(u, big_u)})
        return big_u + big_y, x + v, Implies(prem, concl)
    if isinstance(f, Exists):
        z, body = names.bind(f.var, f.body)
        x, y, a = _dial(body, names)
        return [z] + x, y, a
    if isinstance(f, Forall):
        z, body = names.bind(f.var, f.body)
        x, y, a = _dial(body, names)
        big_x = [_lift(names, w, [z.type]) for w in x]
        a = subst_many(a, {w.name: apply_many(X, [z]) for w, X in zip(x, big_x)})
        return big_x, [z] + y, a
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------- modified realizability

@dataclass(frozen=True)
class MRForm:
    witness_vars: tuple
    matrix: object
    source: object

    def render(self):
        return exists_many(self.witness_vars, self.matrix)


def modified_realizability(f):
    """Witness tuple and the realizability matrix."""
    _no_prob(f)
    names = _Names(f)
    xs, m = _mr(f, names)
    return MRForm(tuple(xs), m, f)


def _mr(f, names):
    if _prime(f):
        return [], f
    f = _unbound(f)
    if isinstance(f, Not):
        f = Implies(f.body, FALSUM)
    if isinstance(f, And):
        x, a = _mr(f.left, names)
        y, b = _mr(f.right, names)
        return x + y, And(a, b)
    if isinstance(f, Or):
        z = Var(names.fresh("z"), NAT)
        x, a = _mr(f.left, names)
        y, b = _mr(f.right, names)
        return [z] + x + y, _flag_cases(z, a, b)
    if isinstance(f, Implies):
        x, a = _mr(f.left, names)
        y, b = _mr(f.right, names)
        xt = [w.type for w in x]
        big_y = [_lift(names, w, xt) for w in y]
        b = subst_many(b, {w.name: apply_many(Y, x) for w, Y in zip(y, big_y)})
        return big_y, forall_many(x, Implies(a, b))
    if isinstance(f, Forall):
        w, body = names.bind(f.var, f.body)
        x, a = _mr(body, names)
        big_x = [_lift(names, v, [w.type]) for v in x]
        a = subst_many(a, {v.name: apply_many(X, [w]) for v, X in zip(x, big_x)})
        return big_x, Forall(w, a)
    if isinstance(f, Exists):
        z, body = names.bind(f.var, f.body)
        x, a = _mr(body, names)
        return [z] + x, a
    raise TypeError(f"not a formula: {f!r}")
