"""Bounded checks of quantitative moduli against finite data on a content space.

Event families are lists of sets indexed by n and processes are lists of maps
from sample points to rationals.  Both are read as eventually constant: an
index past the end repeats the last entry.  Every probability is the outer
content of the relevant set of sample points, so data sets need not be events.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .content import EvalBounds
from .fluct import count_fluctuations
from ..errors import BoundsExceeded

KINDS = ("IO_pointwise", "IO_uniform", "RateAS", "MetastableUniform", "MetastablePointwise",
         "Fluctuation", "PlusTwo", "PlusOne")


@dataclass
class Report:
    kind: str
    passed: bool
    model: str
    bounds: str
    cases: int
    counterexample: dict | None = None

    @property
    def pass_(self):
        return self.passed

    def line(self):
        if self.passed:
            return f"PASS kind={self.kind} model={self.model} cases={self.cases} bounds={self.bounds}"
        wit = ",".join(f"{k}={_fmt(v)}" for k, v in self.counterexample.items())
        return f"FAIL kind={self.kind} model={self.model} witness={wit} bounds={self.bounds}"


def _fmt(v):
    if isinstance(v, (list, tuple)):
        return "[" + " ".join(_fmt(x) for x in v) + "]"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, frozenset):
        return "{" + " ".join(sorted(v)) + "}"
    return str(v)


def _at(seq, i):
    return seq[i] if i < len(seq) else seq[-1]


def _threshold(m):
    return 1 - Fraction(1, 2 ** m)


class _Fn:
    """A bounded function 0..D -> 0..R, extended by 0 past D."""

    def __init__(self, values):
        self.values = tuple(values)

    def __call__(self, n):
        return self.values[n] if n < len(self.values) else 0

    def __repr__(self):
        return f"g{list(self.values)}"


def bounded_functions(d, r, cap):
    size = (r + 1) ** (d + 1)
    if size > cap:
        raise BoundsExceeded(f"{size} functions 0..{d} -> 0..{r} exceed the cap {cap}")
    for vals in product(range(r + 1), repeat=d + 1):
        yield _Fn(vals)


def _cauchy_on(process, n, width, k, w):
    t = Fraction(1, 2 ** k)
    xs = [Fraction(_at(process, i)[w]) for i in range(n, n + width + 1)]
    return max(xs) - min(xs) <= t


def check_modulus(kind, phi, data, space, bounds=None, horizon=None):
    """Check the defining property of a modulus of the given kind over bounded ranges.

    m, k, x and l range over 0..nat_bound; g ranges over the bounded function
    space of ``bounds.fun_bound``.  ``horizon`` is the N of the fluctuation count
    (default: the process length).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown modulus kind {kind!r}; expected one of {', '.join(KINDS)}")
    b = bounds or EvalBounds()
    nb = b.nat_bound
    omega = space.omega
    outer = space.outer
    cases = 0

    def fail(**wit):
        return Report(kind, False, space.name, b.describe(), cases, wit)

    if kind == "IO_pointwise":
        for m in range(nb + 1):
            for k in range(nb + 1):
                cases += 1
                hi = phi(m, k)
                s = frozenset().union(*(frozenset(_at(data, i)) for i in range(k, hi + 1)))
                if outer(s) < _threshold(m):
                    return fail(m=m, k=k, bound=hi, content=outer(s))
    elif kind == "IO_uniform":
        for m in range(nb + 1):
            cases += 1
            s = frozenset(w for w in omega
                          if all(any(w in _at(data, i) for i in range(k, phi(m, k) + 1)) for k in range(nb + 1)))
            if outer(s) < _threshold(m):
                return fail(m=m, content=outer(s))
    elif kind == "RateAS":
        for m in range(nb + 1):
            for k in range(nb + 1):
                cases += 1
                hi = phi(m, k)
                ok = any(all(outer(frozenset(w for w in omega if _cauchy_on(data, n, l, k, w))) >= _threshold(m)
                             for l in range(nb + 1))
                         for n in range(hi + 1))
                if not ok:
                    return fail(m=m, k=k, bound=hi)
    elif kind in ("MetastableUniform", "MetastablePointwise"):
        d, r = b.fun_bound
        uniform = kind == "MetastableUniform"
        for m in range(nb + 1):
            for k in range(nb + 1):
                for g in bounded_functions(d, r, b.cap):
                    cases += 1
                    hi = phi(m, k, g)
                    if uniform:
                        ok = any(outer(frozenset(w for w in omega if _cauchy_on(data, n, g(n), k, w))) >= _threshold(m)
                                 for n in range(hi + 1))
                    else:
                        s = frozenset(w for w in omega
                                      if any(_cauchy_on(data, n, g(n), k, w) for n in range(hi + 1)))
                        ok = outer(s) >= _threshold(m)
                    if not ok:
                        return fail(m=m, k=k, g=list(g.values), bound=hi)
    elif kind == "Fluctuation":
        n_hor = len(data) if horizon is None else horizon
        for m in range(nb + 1):
            for k in range(nb + 1):
                cases += 1
                hi = phi(m, k)
                s = frozenset(w for w in omega
                              if count_fluctuations([_at(data, i)[w] for i in range(n_hor)], k, n_hor) <= hi)
                if outer(s) < _threshold(m):
                    return fail(m=m, k=k, bound=hi, content=outer(s))
    elif kind == "PlusTwo":
        # data[x][n]: events of a family indexed by x and n
        for m in range(nb + 1):
            for x in range(nb + 1):
                cases += 1
                hi = phi(m, x)
                row = _at(data, x)
                s = frozenset().union(*(frozenset(_at(row, n)) for n in range(hi + 1)))
                if outer(s) < _threshold(m):
                    return fail(m=m, x=x, bound=hi, content=outer(s))
    elif kind == "PlusOne":
        for m in range(nb + 1):
            cases += 1
            s = frozenset(w for w in omega
                          if all(any(w in _at(_at(data, x), n) for n in range(phi(m, x) + 1)) for x in range(nb + 1)))
            if outer(s) < _threshold(m):
                return fail(m=m, content=outer(s))
    return Report(kind, True, space.name, b.describe(), cases)
