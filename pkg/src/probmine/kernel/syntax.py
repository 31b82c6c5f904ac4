"""Term, real-term and formula ASTs.

Every node is an immutable dataclass, so structural equality and hashing come
for free.  Variables carry their type; bound occurrences repeat the binder's
type.  Probability nodes bind a sample variable, ``w`` unless stated otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .types import FiniteType, NAT, OMEGA, EVENT, RAT, Arrow, pure


class Node:
    __slots__ = ()


# ---------------------------------------------------------------- terms

class Expr(Node):
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str
    type: FiniteType


@dataclass(frozen=True)
class Const(Expr):
    name: str
    type: FiniteType


@dataclass(frozen=True)
class App(Expr):
    fun: Expr
    arg: Expr


@dataclass(frozen=True)
class Lam(Expr):
    var: Var
    body: Expr


@dataclass(frozen=True)
class NatLit(Expr):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("natural literal must be non-negative")


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class MinAlpha(Expr):
    """Pointwise minimum at a type whose values are naturals."""
    type: FiniteType
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Union(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Compl(Expr):
    arg: Expr


@dataclass(frozen=True)
class EmptySet(Expr):
    pass


@dataclass(frozen=True)
class Up(Expr):
    """Disjointified event sequence: (up A) 0 = A 0, (up A)(n+1) = A(n+1) minus earlier ones."""
    seq: Expr


# Constant signatures of the base language.
CONSTANTS = {
    "eq": Arrow(Arrow(NAT, OMEGA), OMEGA),
    "mem": Arrow(Arrow(NAT, EVENT), OMEGA),
    "union": Arrow(Arrow(EVENT, EVENT), EVENT),
    "compl": Arrow(EVENT, EVENT),
    "empty": EVENT,
    "P": Arrow(pure(1), EVENT),
}


def const(name):
    return Const(name, CONSTANTS[name])


# ---------------------------------------------------------------- real terms

class RealTerm(Node):
    __slots__ = ()


@dataclass(frozen=True)
class RatLit(RealTerm):
    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        if v < 0:
            raise ValueError("rational literal must be non-negative")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class QVal(RealTerm):
    """A term of sort Q used as a real, e.g. a bound ``lam`` or ``lt n``."""
    term: Expr


@dataclass(frozen=True)
class ProbOf(RealTerm):
    event: Expr


@dataclass(frozen=True)
class RAdd(RealTerm):
    left: RealTerm
    right: RealTerm


@dataclass(frozen=True)
class RSub(RealTerm):
    left: RealTerm
    right: RealTerm


@dataclass(frozen=True)
class RMin(RealTerm):
    left: RealTerm
    right: RealTerm


@dataclass(frozen=True)
class PowHalf(RealTerm):
    """2^-m."""
    exponent: Expr


@dataclass(frozen=True)
class RSum(RealTerm):
    """Finite sum over var = 0..bound."""
    var: Var
    bound: Expr
    body: RealTerm


def LambdaVar(name):
    return QVal(Var(name, RAT))


# ---------------------------------------------------------------- formulas

class Formula(Node):
    __slots__ = ()


NAT_OPS = ("=", "<", "<=", ">=", ">")
REAL_OPS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True)
class NatCmp(Formula):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in NAT_OPS:
            raise ValueError(f"bad comparison {self.op!r}")


def AtomEq0(left, right):
    return NatCmp("=", left, right)


@dataclass(frozen=True)
class AtomIn(Formula):
    elem: Expr
    event: Expr


@dataclass(frozen=True)
class RealCmp(Formula):
    left: RealTerm
    op: str
    right: RealTerm

    def __post_init__(self):
        if self.op not in REAL_OPS:
            raise ValueError(f"bad comparison {self.op!r}")


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True)
class BForall(Formula):
    var: Var
    bound: Expr
    body: Formula


@dataclass(frozen=True)
class BExists(Formula):
    var: Var
    bound: Expr
    body: Formula


@dataclass(frozen=True)
class ProbGeq(Formula):
    body: Formula
    lam: RealTerm
    sample: str = field(default="w")


@dataclass(frozen=True)
class ProbLeq(Formula):
    body: Formula
    lam: RealTerm
    sample: str = field(default="w")


QUANTIFIERS = (Forall, Exists, BForall, BExists)
BOUNDED = (BForall, BExists)
PROB_NODES = (ProbGeq, ProbLeq)
BINARY = (And, Or, Implies)
ATOMS = (NatCmp, AtomIn, RealCmp)

FALSUM = NatCmp("=", NatLit(0), NatLit(1))


def sample_var(node):
    return Var(node.sample, OMEGA)


def iff(a, b):
    return And(Implies(a, b), Implies(b, a))


def conj(parts):
    parts = list(parts)
    if not parts:
        return NatCmp("=", NatLit(0), NatLit(0))
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def forall_many(vars_, body):
    for v in reversed(list(vars_)):
        body = Forall(v, body)
    return body


def exists_many(vars_, body):
    for v in reversed(list(vars_)):
        body = Exists(v, body)
    return body


def apply_many(fun, args):
    for a in args:
        fun = App(fun, a)
    return fun


# ---------------------------------------------------------------- traversal helpers

def children(node):
    """Immediate sub-nodes in left-to-right source order."""
    if isinstance(node, (Var, Const, NatLit, EmptySet, RatLit)):
        return ()
    if isinstance(node, App):
        return (node.fun, node.arg)
    if isinstance(node, Lam):
        return (node.var, node.body)
    if isinstance(node, (Add, Union, RAdd, RSub, RMin, And, Or, Implies)):
        return (node.left, node.right)
    if isinstance(node, MinAlpha):
        return (node.left, node.right)
    if isinstance(node, Compl):
        return (node.arg,)
    if isinstance(node, Up):
        return (node.seq,)
    if isinstance(node, QVal):
        return (node.term,)
    if isinstance(node, ProbOf):
        return (node.event,)
    if isinstance(node, PowHalf):
        return (node.exponent,)
    if isinstance(node, RSum):
        return (node.var, node.bound, node.body)
    if isinstance(node, (NatCmp, RealCmp)):
        return (node.left, node.right)
    if isinstance(node, AtomIn):
        return (node.elem, node.event)
    if isinstance(node, Not):
        return (node.body,)
    if isinstance(node, (Forall, Exists)):
        return (node.var, node.body)
    if isinstance(node, BOUNDED):
        return (node.var, node.bound, node.body)
    if isinstance(node, PROB_NODES):
        return (node.body, node.lam)
    raise TypeError(f"not a syntax node: {node!r}")


def free_vars(node):
    """Free variables as an ordered dict name -> type (first occurrence order)."""
    out = {}
    _free(node, frozenset(), out)
    return out


def _free(node, bound, out):
    if isinstance(node, Var):
        if node.name not in bound and node.name not in out:
            out[node.name] = node.type
        return
    if isinstance(node, (Lam, Forall, Exists)):
        _free(node.body, bound | {node.var.name}, out)
        return
    if isinstance(node, BOUNDED):
        _free(node.bound, bound, out)
        _free(node.body, bound | {node.var.name}, out)
        return
    if isinstance(node, RSum):
        _free(node.bound, bound, out)
        _free(node.body, bound | {node.var.name}, out)
        return
    if isinstance(node, PROB_NODES):
        _free(node.body, bound | {node.sample}, out)
        _free(node.lam, bound, out)
        return
    for c in children(node):
        _free(c, bound, out)


def all_names(node):
    """Every variable name occurring in node, bound or free."""
    out = set()
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, Var):
            out.add(n.name)
        elif isinstance(n, PROB_NODES):
            out.add(n.sample)
            stack.extend(children(n))
        else:
            stack.extend(children(n))
    return out


def size(node):
    return 1 + sum(size(c) for c in children(node))


def fresh_name(base, avoid):
    """base, base', base'', base''' and then base_1, base_2, ... outside avoid."""
    if base not in avoid:
        return base
    for k in range(1, 4):
        cand = base + "'" * k
        if cand not in avoid:
            return cand
    i = 1
    while f"{base}_{i}" in avoid:
        i += 1
    return f"{base}_{i}"


def strip_primes(name):
    return name.rstrip("'")
