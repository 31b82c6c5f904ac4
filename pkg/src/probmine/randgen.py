"""Seeded random syntax for the verification suites and property tests."""
from __future__ import annotations

import random
from fractions import Fraction

from .kernel.types import NAT, OMEGA, EVENT, RAT, Arrow
from .kernel.syntax import (
    Var, App, NatLit, Add, MinAlpha, Union, Compl, EmptySet, Up,
    RatLit, QVal, ProbOf, RAdd, RSub, RMin, PowHalf, RSum,
    NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq, NAT_OPS, REAL_OPS,
)
from .kernel.macros import eq_omega

FUN1 = Arrow(NAT, NAT)
SEQ = Arrow(EVENT, NAT)

# free symbols of the random round-trip corpus
ROUNDTRIP_CTX = {"c": NAT, "f": FUN1, "A": SEQ, "B": EVENT, "lam": RAT, "o": OMEGA}
_BOUND_NAMES = ("x", "y", "z", "n", "k")


class _Syntax:
    """Random well-typed syntax over ROUNDTRIP_CTX, tracking the variables in scope."""

    def __init__(self, rng):
        self.rng = rng

    def nat(self, depth, scope):
        r = self.rng
        vs = [Var(n, t) for n, t in scope.items() if t == NAT]
        funs = [Var(n, t) for n, t in scope.items() if t == FUN1]
        choice = r.randrange(6) if depth > 0 else r.randrange(2)
        if choice == 0 and vs:
            return r.choice(vs)
        if choice <= 1:
            return NatLit(r.randrange(5))
        if choice == 2:
            return Add(self.nat(depth - 1, scope), self.nat(depth - 1, scope))
        if choice == 3 and funs:
            return App(r.choice(funs), self.nat(depth - 1, scope))
        if choice == 4:
            return MinAlpha(NAT, self.nat(depth - 1, scope), self.nat(depth - 1, scope))
        return App(Var("f", FUN1), self.nat(depth - 1, scope))

    def event(self, depth, scope):
        r = self.rng
        choice = r.randrange(6) if depth > 0 else r.randrange(2)
        if choice == 0:
            return Var("B", EVENT)
        if choice == 1:
            return EmptySet()
        if choice == 2:
            return App(Var("A", SEQ), self.nat(depth - 1, scope))
        if choice == 3:
            return Union(self.event(depth - 1, scope), self.event(depth - 1, scope))
        if choice == 4:
            return Compl(self.event(depth - 1, scope))
        return App(Up(Var("A", SEQ)), self.nat(depth - 1, scope))

    def real(self, depth, scope):
        r = self.rng
        choice = r.randrange(8) if depth > 0 else r.randrange(2)
        if choice == 0:
            return RatLit(Fraction(r.randrange(5), r.choice((1, 2, 3, 4))))
        if choice == 1:
            qs = [Var(n, t) for n, t in scope.items() if t == RAT]
            return QVal(r.choice(qs)) if qs else RatLit(Fraction(1, 2))
        if choice == 2:
            return PowHalf(self.nat(depth - 1, scope))
        if choice == 3:
            return ProbOf(self.event(depth - 1, scope))
        if choice == 4:
            return RAdd(self.real(depth - 1, scope), self.real(depth - 1, scope))
        if choice == 5:
            return RSub(self.real(depth - 1, scope), self.real(depth - 1, scope))
        if choice == 6:
            return RMin(self.real(depth - 1, scope), self.real(depth - 1, scope))
        i = Var(r.choice(("i", "j")), NAT)
        return RSum(i, self.nat(depth - 1, scope), self.real(depth - 1, {**scope, i.name: NAT}))

    def formula(self, depth, scope, in_prob=False):
        r = self.rng
        if depth <= 0:
            return self.atom(0, scope)
        choice = r.randrange(10)
        if choice <= 1:
            return self.atom(depth - 1, scope)
        if choice == 2:
            return Not(self.formula(depth - 1, scope, in_prob))
        if choice == 3:
            cls = r.choice((And, Or, Implies))
            return cls(self.formula(depth - 1, scope, in_prob), self.formula(depth - 1, scope, in_prob))
        if choice in (4, 5):
            t = r.choice((NAT, NAT, FUN1, RAT))
            v = Var(r.choice(_BOUND_NAMES), t)
            cls = r.choice((Forall, Exists))
            return cls(v, self.formula(depth - 1, {**scope, v.name: t}, in_prob))
        if choice == 6:
            v = Var(r.choice(_BOUND_NAMES), NAT)
            cls = r.choice((BForall, BExists))
            bound = self.nat(1, scope)
            return cls(v, bound, self.formula(depth - 1, {**scope, v.name: NAT}, in_prob))
        if choice in (7, 8) and not in_prob:
            cls = r.choice((ProbGeq, ProbLeq))
            body = self.formula(depth - 1, {**scope, "w": OMEGA}, True)
            return cls(body, self.real(1, scope))
        return self.atom(depth - 1, scope)

    def atom(self, depth, scope):
        r = self.rng
        choice = r.randrange(3)
        if choice == 0:
            return NatCmp(r.choice(NAT_OPS), self.nat(depth, scope), self.nat(depth, scope))
        if choice == 1:
            om = [Var(n, t) for n, t in scope.items() if t == OMEGA]
            return AtomIn(r.choice(om), self.event(depth, scope))
        return RealCmp(self.real(depth, scope), r.choice(REAL_OPS), self.real(depth, scope))


def random_formula(rng, depth=6):
    """Random formula over ROUNDTRIP_CTX with nesting depth at most ``depth``."""
    return _Syntax(rng).formula(depth, dict(ROUNDTRIP_CTX))


# ---------------------------------------------------------------- pure logic over 0

def random_logic(rng, max_quants=4, depth=5):
    """Closed formula with type-0 quantifiers and decidable atoms.

    Implication premises and negated formulas hold at most one quantifier, which
    keeps the functional types in the interpreted forms small enough to search.
    """
    state = {"q": 0, "names": 0}

    def fresh():
        state["names"] += 1
        k = state["names"]
        return "xyzuvst"[k % 7] + ("" if k < 7 else str(k // 7))

    def term(vs):
        c = rng.random()
        if vs and c < 0.6:
            return Var(rng.choice(vs), NAT)
        if vs and c < 0.8:
            other = Var(rng.choice(vs), NAT) if rng.random() < 0.5 else NatLit(1)
            return Add(Var(rng.choice(vs), NAT), other)
        return NatLit(rng.randrange(4))

    def atom(vs):
        return NatCmp(rng.choice(NAT_OPS), term(vs), term(vs))

    def quant(vs, body):
        state["q"] += 1
        n = fresh()
        return rng.choice((Forall, Exists))(Var(n, NAT), body(vs + [n]))

    def simple(vs):
        if state["q"] < max_quants and rng.random() < 0.7:
            return quant(vs, atom)
        return atom(vs)

    def gen(d, vs):
        if d <= 0:
            return atom(vs)
        c = rng.randrange(9)
        if c <= 2 and state["q"] < max_quants:
            return quant(vs, lambda vs2: gen(d - 1, vs2))
        if c == 3:
            return rng.choice((And, Or))(gen(d - 1, vs), gen(d - 1, vs))
        if c in (4, 5):
            return Implies(simple(vs), gen(d - 1, vs))
        if c == 6:
            return Not(simple(vs))
        if c == 7 and state["q"] < max_quants:
            v = Var(fresh(), NAT)
            state["q"] += 1
            return rng.choice((BForall, BExists))(v, term(vs), gen(d - 1, vs + [v.name]))
        return rng.choice((And, Or))(atom(vs), gen(d - 1, vs))

    return gen(depth, [])


# ---------------------------------------------------------------- predicates on a content space

def random_env(rng, space, seq_len=4):
    """Events E0..E2, points p0 p1 and an event sequence S of algebra sets."""
    alg = list(space.algebra)
    env = {f"E{i}": rng.choice(alg) for i in range(3)}
    om = list(space.omega)
    env["p0"] = rng.choice(om)
    env["p1"] = rng.choice(om)
    env["S"] = [rng.choice(alg) for _ in range(seq_len)]
    return env


ENV_TYPES = {"E0": EVENT, "E1": EVENT, "E2": EVENT, "p0": OMEGA, "p1": OMEGA, "S": SEQ}


def random_predicate(rng, depth=3, xvar=None, sample="w", unbounded=False):
    """Formula in the sample variable over random_env's symbols.

    xvar: optional name of a type-0 parameter that may appear in indices and bounds.
    unbounded: allow unbounded quantifiers over 0 (not quantifier-free then).
    """
    w = Var(sample, OMEGA)

    def index(vs):
        pool = list(vs) + ([xvar] if xvar else [])
        if pool and rng.random() < 0.6:
            return Var(rng.choice(pool), NAT)
        return NatLit(rng.randrange(3))

    def atom(vs):
        c = rng.randrange(4)
        if c == 0:
            return AtomIn(w, Var(f"E{rng.randrange(3)}", EVENT))
        if c == 1:
            return eq_omega(w, Var(f"p{rng.randrange(2)}", OMEGA))
        if c == 2:
            return AtomIn(w, App(Var("S", SEQ), index(vs)))
        if xvar and rng.random() < 0.5:
            return NatCmp(rng.choice(("<=", ">=")), Var(xvar, NAT), NatLit(rng.randrange(4)))
        return AtomIn(w, Compl(Var(f"E{rng.randrange(3)}", EVENT)))

    def gen(d, vs):
        if d <= 0:
            return atom(vs)
        c = rng.randrange(8)
        if c <= 1:
            return atom(vs)
        if c == 2:
            return Not(gen(d - 1, vs))
        if c in (3, 4):
            return rng.choice((And, Or))(gen(d - 1, vs), gen(d - 1, vs))
        if c == 5 and unbounded:
            n = f"n{len(vs)}"
            return rng.choice((Forall, Exists))(Var(n, NAT), gen(d - 1, vs + [n]))
        n = f"n{len(vs)}"
        bound = Var(xvar, NAT) if xvar and rng.random() < 0.5 else NatLit(rng.randrange(3))
        return rng.choice((BForall, BExists))(Var(n, NAT), bound, gen(d - 1, vs + [n]))

    return gen(depth, [])


def grid_lambdas(space):
    d = 2 * space.denominator()
    return [Fraction(i, d) for i in range(d + 1)]


def make_rng(seed):
    return random.Random(seed)
