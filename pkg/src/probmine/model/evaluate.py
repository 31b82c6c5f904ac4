"""Bounded classical evaluation over a finite content space.

Base-type quantifiers loop over their finite surrogate ranges.  Quantifiers over
function types search lazily: the function starts as an empty table, and an
entry is only chosen (and later backtracked over) when evaluation first reads
it.  Evaluating the body under a partial table is sound because a result that
did not read an entry holds for every value of that entry, so the search visits
each distinct behaviour once instead of enumerating the whole function space.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import lcm

from ..kernel.types import NAT, OMEGA, EVENT, RAT, Arrow, Base, show_type, value_type
from ..kernel.syntax import (
    Var, Const, App, Lam, NatLit, Add, MinAlpha, Union, Compl, EmptySet, Up,
    RatLit, QVal, ProbOf, RAdd, RSub, RMin, PowHalf, RSum,
    NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq, children, free_vars,
)
from ..kernel.typecheck import type_of
from ..errors import BoundsExceeded, UnsupportedQuantifierType, UnboundVariable, UnsupportedNode
from .content import EvalBounds

_END = object()


class Undetermined(Exception):
    """A lazily chosen function entry was read before it was assigned."""

    def __init__(self, root, key, args):
        self.root = root
        self.key = key
        self.args = args


class Fun:
    type: Arrow

    def apply(self, v):
        raise NotImplementedError


class PyFun(Fun):
    def __init__(self, typ, fn, ev):
        self.type = typ
        self.fn = fn
        self.ev = ev

    def apply(self, v):
        return self.ev.coerce(self.fn(v), self.type.result)

    def __repr__(self):
        return f"<fun {show_type(self.type)}>"


class TableFun(Fun):
    """Finite table keyed by argument keys; reading outside the table is an error."""

    def __init__(self, typ, table, ev):
        self.type = typ
        self.table = table
        self.ev = ev

    def apply(self, v):
        k = self.ev.key(v)
        try:
            return self.table[k]
        except KeyError:
            raise BoundsExceeded(f"argument {k!r} outside the enumerated domain of {show_type(self.type)}") from None

    def __repr__(self):
        return f"<table {show_type(self.type)} {self.table}>"


class SeqFun(Fun):
    def __init__(self, typ, items, ev):
        self.type = typ
        self.items = [ev.coerce(x, typ.result) for x in items]

    def apply(self, v):
        if not isinstance(v, int) or v >= len(self.items):
            raise BoundsExceeded(f"index {v!r} beyond the supplied sequence of length {len(self.items)}")
        return self.items[v]

    def __repr__(self):
        return f"<seq {self.items}>"


class Closure(Fun):
    def __init__(self, lam, env, ev):
        self.lam = lam
        self.env = env
        self.ev = ev
        self.type = type_of(lam)

    def apply(self, v):
        return self.ev.term(self.lam.body, {**self.env, self.lam.var.name: v})


class LazyRoot:
    def __init__(self, typ, bound=None):
        self.type = typ
        self.table = {}
        self.bound = bound


class LazyView(Fun):
    def __init__(self, root, keys, args, typ):
        self.root = root
        self.keys = keys
        self.args = args
        self.type = typ

    def apply(self, v):
        ev_key = _KEYER.key(v) if _KEYER is not None else v
        keys = self.keys + (ev_key,)
        args = self.args + (v,)
        if isinstance(self.type.result, Arrow):
            return LazyView(self.root, keys, args, self.type.result)
        try:
            val = self.root.table[keys]
        except KeyError:
            raise Undetermined(self.root, keys, args) from None
        if _KEYER is not None:
            _KEYER._reads.add((self.root, keys))
        return val


# LazyView needs the active evaluator to compute keys of function arguments.
_KEYER = None


def _denominators(nodes):
    dens = set()
    pow_half = False
    stack = list(nodes)
    while stack:
        n = stack.pop()
        if isinstance(n, RatLit):
            dens.add(n.value.denominator)
        elif isinstance(n, PowHalf):
            pow_half = True
        if hasattr(n, "__dataclass_fields__"):
            stack.extend(c for c in children(n) if hasattr(c, "__dataclass_fields__"))
    return dens, pow_half


class Evaluator:
    def __init__(self, space, bounds=None, nodes=(), env=None):
        self.M = space
        self.b = bounds or EvalBounds()
        self.N = self.b.nat_bound
        self.D, self.R = self.b.fun_bound
        self.cap = self.b.cap
        self.ticks = 0
        self._reads = set()
        self._searching = 0
        self._elements = {}
        self._expansions = {}
        self.grid = self.b.rat_grid or self._derive_grid(nodes, env)
        self._consts = self._make_constants()

    # ---- setup
    def _derive_grid(self, nodes, env):
        dens, pow_half = _denominators(nodes)
        for v in (env or {}).values():
            if isinstance(v, Fraction):
                dens.add(v.denominator)
        d = lcm(self.M.denominator(), *dens) if dens else self.M.denominator()
        if pow_half:
            d = lcm(d, 2 ** self.N)
        d *= 2
        return tuple(Fraction(i, d) for i in range(d + 1))

    def _make_constants(self):
        full = self.M.full
        ev = self

        def eq(a):
            return PyFun(Arrow(NAT, OMEGA), lambda b: 0 if a == b else 1, ev)

        def mem(w):
            return PyFun(Arrow(NAT, EVENT), lambda a: 0 if w in a else 1, ev)

        def union(a):
            return PyFun(Arrow(EVENT, EVENT), lambda b: a | b, ev)

        def p_const(a):
            raise UnsupportedNode("P as a type-1 real is not evaluated; write Pr(A) for the content of an event")

        return {
            "eq": PyFun(Arrow(Arrow(NAT, OMEGA), OMEGA), eq, ev),
            "mem": PyFun(Arrow(Arrow(NAT, EVENT), OMEGA), mem, ev),
            "union": PyFun(Arrow(Arrow(EVENT, EVENT), EVENT), union, ev),
            "compl": PyFun(Arrow(EVENT, EVENT), lambda a: full - a, ev),
            "empty": frozenset(),
            "P": PyFun(Arrow(Arrow(NAT, NAT), EVENT), p_const, ev),
        }

    def _tick(self):
        self.ticks += 1
        if self.ticks > self.cap:
            raise BoundsExceeded(f"evaluation exceeded {self.cap} steps ({self.b.describe()})")

    # ---- domains
    def domain(self, t, role="quant"):
        if t == NAT:
            return range({"quant": self.N, "arg": self.D, "result": self.R}[role] + 1)
        if t == OMEGA:
            return self.M.omega
        if t == EVENT:
            return self.M.algebra
        if t == RAT:
            return self.grid
        if isinstance(t, Arrow):
            return self.elements(t)
        raise UnsupportedQuantifierType(show_type(t))

    def elements(self, t):
        """All functions of arrow type t over the bounded argument and result ranges."""
        if t in self._elements:
            return self._elements[t]
        args = list(self.domain(t.arg, "arg"))
        results = list(self.domain(t.result, "result"))
        size = len(results) ** len(args)
        if size > self.cap:
            raise BoundsExceeded(f"{show_type(t)} has {size} elements at {self.b.describe()}")
        keys = [self.key(a) for a in args]
        out = [TableFun(t, dict(zip(keys, combo)), self) for combo in product(results, repeat=len(args))]
        self._elements[t] = out
        return out

    def key(self, v):
        if isinstance(v, Fun):
            return ("fn",) + tuple(self.key(v.apply(a)) for a in self.domain(v.type.arg, "arg"))
        return v

    # ---- values from Python
    def coerce(self, x, t):
        if t == NAT:
            if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                raise TypeError(f"expected a natural number, got {x!r}")
            return x
        if t == OMEGA:
            if x not in self.M.full:
                raise TypeError(f"{x!r} is not a sample point of {self.M.name}")
            return x
        if t == EVENT:
            s = frozenset(x)
            if not s <= self.M.full:
                raise TypeError(f"{sorted(s)} is not a subset of omega")
            return s
        if t == RAT:
            return Fraction(x)
        if isinstance(t, Arrow):
            if isinstance(x, Fun):
                return x
            if isinstance(x, (list, tuple)):
                if t.arg != NAT:
                    raise TypeError("sequences only represent functions on type 0")
                return SeqFun(t, x, self)
            if isinstance(x, dict):
                return TableFun(t, {self.key(self.coerce(k, t.arg)): self.coerce(v, t.result) for k, v in x.items()}, self)
            if callable(x):
                return PyFun(t, x, self)
        raise TypeError(f"cannot use {x!r} as a value of type {show_type(t)}")

    def coerce_env(self, node, env):
        out = {}
        fv = free_vars(node)
        for name, t in fv.items():
            if name not in env:
                raise UnboundVariable(f"no value for free variable {name!r}")
            out[name] = self.coerce(env[name], t)
        for name, v in env.items():
            if name not in out:
                out[name] = v
        return out

    # ---- terms
    def term(self, e, env):
        cls = type(e)
        if cls is Var:
            try:
                return env[e.name]
            except KeyError:
                raise UnboundVariable(f"no value for {e.name!r}") from None
        if cls is App:
            return self.term(e.fun, env).apply(self.term(e.arg, env))
        if cls is NatLit:
            return e.n
        if cls is Add:
            return self.term(e.left, env) + self.term(e.right, env)
        if cls is Union:
            return self.term(e.left, env) | self.term(e.right, env)
        if cls is Compl:
            return self.M.full - self.term(e.arg, env)
        if cls is EmptySet:
            return frozenset()
        if cls is Const:
            return self._consts[e.name]
        if cls is Lam:
            return Closure(e, env, self)
        if cls is MinAlpha:
            return self._min(e.type, self.term(e.left, env), self.term(e.right, env))
        if cls is Up:
            seq = self.term(e.seq, env)
            return PyFun(Arrow(EVENT, NAT), lambda n: disjointify_at(seq, n), self)
        raise TypeError(f"not a term: {e!r}")

    def _min(self, t, a, b):
        if t == NAT:
            return min(a, b)
        return PyFun(t, lambda z: self._min(t.result, a.apply(z), b.apply(z)), self)

    def real(self, r, env):
        cls = type(r)
        if cls is RatLit:
            return r.value
        if cls is QVal:
            v = self.term(r.term, env)
            if not isinstance(v, Fraction):
                raise TypeError(f"{r.term!r} did not evaluate to a rational")
            return v
        if cls is ProbOf:
            return self.M.P(self.term(r.event, env))
        if cls is RAdd:
            return self.real(r.left, env) + self.real(r.right, env)
        if cls is RSub:
            return self.real(r.left, env) - self.real(r.right, env)
        if cls is RMin:
            return min(self.real(r.left, env), self.real(r.right, env))
        if cls is PowHalf:
            return Fraction(1, 2 ** self.term(r.exponent, env))
        if cls is RSum:
            b = self.term(r.bound, env)
            return sum((self.real(r.body, {**env, r.var.name: i}) for i in range(b + 1)), Fraction(0))
        raise TypeError(f"not a real term: {r!r}")

    # ---- formulas
    def holds(self, f, env):
        global _KEYER
        prev = _KEYER
        _KEYER = self
        try:
            return self._holds(f, env)
        finally:
            _KEYER = prev

    def _holds(self, f, env):
        cls = type(f)
        if cls is NatCmp:
            a = self.term(f.left, env)
            b = self.term(f.right, env)
            op = f.op
            if op == "=":
                return a == b
            if op == "<=":
                return a <= b
            if op == "<":
                return a < b
            if op == ">=":
                return a >= b
            return a > b
        if cls is AtomIn:
            return self.term(f.elem, env) in self.term(f.event, env)
        if cls is RealCmp:
            return _cmp(self.real(f.left, env), f.op, self.real(f.right, env))
        if cls is Not:
            return not self._holds(f.body, env)
        if cls in (And, Or, Implies):
            if self._searching:
                return self._connective(f, env)
            if cls is And:
                return self._holds(f.left, env) and self._holds(f.right, env)
            if cls is Or:
                return self._holds(f.left, env) or self._holds(f.right, env)
            return (not self._holds(f.left, env)) or self._holds(f.right, env)
        if cls in (Forall, Exists, BForall, BExists):
            return self._quant(f, env)
        if cls in (ProbGeq, ProbLeq):
            return self._holds(self._expansion(f), env)
        raise TypeError(f"not a formula: {f!r}")

    def _tracked(self, f, env):
        """Truth value of f and the lazily chosen entries it read."""
        parent = self._reads
        reads = set()
        self._reads = reads
        try:
            return self._holds(f, env), reads
        finally:
            self._reads = parent

    def _connective(self, f, env):
        # blame only the side that decided the value, so backjumping stays sharp
        cls = type(f)
        a, ra = self._tracked(f.left, env)
        if cls is And and not a or cls is Or and a or cls is Implies and not a:
            self._reads |= ra
            return cls is not And
        b, rb = self._tracked(f.right, env)
        if cls is And:
            decided = not b
        else:
            decided = b
        self._reads |= rb if decided else ra | rb
        return b

    def _expansion(self, f):
        hit = self._expansions.get(id(f))
        if hit is None or hit[0] is not f:
            from ..prob.expand import expand_node
            hit = (f, expand_node(f))
            self._expansions[id(f)] = hit
        return hit[1]

    def _quant(self, f, env):
        universal = isinstance(f, (Forall, BForall))
        v = f.var
        bounded = isinstance(f, (BForall, BExists))
        bval = self.term(f.bound, env) if bounded else None
        if isinstance(v.type, Base):
            dom = self._below(v.type, bval) if bounded else self.domain(v.type)
            name = v.name
            if self._searching:
                seen = set()
                for val in dom:
                    self._tick()
                    env2 = dict(env)
                    env2[name] = val
                    r, reads = self._tracked(f.body, env2)
                    if r != universal:
                        self._reads |= reads
                        return not universal
                    seen |= reads
                self._reads |= seen
                return universal
            for val in dom:
                self._tick()
                env2 = dict(env)
                env2[name] = val
                if self._holds(f.body, env2) != universal:
                    return not universal
            return universal
        if bounded and value_type(v.type) != NAT:
            raise UnsupportedQuantifierType(f"bounded quantifier over {show_type(v.type)}")
        return self._lazy(f, env, universal, bval)

    def _below(self, t, b):
        if t == NAT:
            return range(b + 1)
        if t == OMEGA:
            return self.M.omega
        if t == EVENT:
            pb = self.M.P(b)
            return [a for a in self.M.algebra if self.M.prob[a] <= pb]
        if t == RAT:
            return [q for q in self.grid if q <= b]
        raise UnsupportedQuantifierType(show_type(t))

    def _entry_domain(self, root, args):
        rt = value_type(root.type)
        if root.bound is not None:
            bv = root.bound
            for a in args:
                bv = bv.apply(a)
            return range(bv + 1)
        return self.domain(rt, "result") if rt != NAT else range(self.R + 1)

    def _lazy(self, f, env, universal, bound):
        # Depth-first search over the entries read so far, with conflict-directed
        # backjumping: a failed evaluation only blames the entries it actually read.
        root = LazyRoot(f.var.type, bound)
        env2 = dict(env)
        env2[f.var.name] = LazyView(root, (), (), f.var.type)
        stack = []                      # [key, remaining values, conflict set]
        table = root.table
        parent = self._reads
        self._searching += 1
        try:
            while True:
                self._tick()
                reads = set()
                self._reads = reads
                try:
                    r = self._holds(f.body, env2)
                except Undetermined as u:
                    if u.root is not root:
                        raise
                    it = iter(self._entry_domain(root, u.args))
                    first = next(it, _END)
                    if first is _END:
                        raise BoundsExceeded(f"empty range for an entry of {f.var.name}")
                    table[u.key] = first
                    stack.append([u.key, it, set()])
                    continue
                if r != universal:
                    parent |= {e for e in reads if e[0] is not root}
                    return r
                conflict = reads
                while True:
                    own = {e[1] for e in conflict if e[0] is root}
                    j = max((i for i, entry in enumerate(stack) if entry[0] in own), default=-1)
                    if j < 0:
                        parent |= conflict
                        return universal
                    for entry in stack[j + 1:]:
                        del table[entry[0]]
                    del stack[j + 1:]
                    k, it, blame = stack[j]
                    blame |= {e for e in conflict if not (e[0] is root and e[1] == k)}
                    nxt = next(it, _END)
                    if nxt is _END:
                        del table[k]
                        stack.pop()
                        conflict = blame
                        continue
                    table[k] = nxt
                    break
        finally:
            self._reads = parent
            self._searching -= 1


def _cmp(a, op, b):
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == "=":
        return a == b
    if op == ">=":
        return a >= b
    return a > b


def disjointify_at(seq, n):
    earlier = frozenset()
    for i in range(n):
        earlier |= seq.apply(i)
    return seq.apply(n) - earlier


def evaluate(f, space, bounds=None, env=None):
    """Classical truth value of f over the finite space with bounded quantifier ranges."""
    env = env or {}
    ev = Evaluator(space, bounds, [f], env)
    return ev.holds(f, ev.coerce_env(f, env))


def phi_set(pred, space, bounds=None, env=None, sample="w"):
    env = dict(env or {})
    env.pop(sample, None)
    ev = Evaluator(space, bounds, [pred], env)
    base = {}
    fv = free_vars(pred)
    for name, t in fv.items():
        if name == sample:
            continue
        if name not in env:
            raise UnboundVariable(f"no value for free variable {name!r}")
        base[name] = ev.coerce(env[name], t)
    return frozenset(o for o in space.omega if ev.holds(pred, {**base, sample: o}))


def outer_inner_content(pred, space, bounds=None, side="outer", env=None, sample="w"):
    """min P(B) over events B containing the pred-set, or max P(B) over events inside it."""
    s = phi_set(pred, space, bounds, env, sample)
    if side == "outer":
        return space.outer(s)
    if side == "inner":
        return space.inner(s)
    raise ValueError(f"side must be 'outer' or 'inner', not {side!r}")
