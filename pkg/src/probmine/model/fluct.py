"""Counting 2^-k fluctuations of a finite rational sequence."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ..errors import HorizonExceeded


@dataclass(frozen=True)
class FluctuationQuery:
    sequence: tuple
    k: int
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(Fraction(x) for x in self.sequence))
        if self.k < 0 or self.horizon < 0:
            raise ValueError("k and horizon must be non-negative")
        if self.horizon > len(self.sequence):
            raise HorizonExceeded(f"horizon {self.horizon} exceeds sequence length {len(self.sequence)}")


def _args(q, k, horizon):
    if isinstance(q, FluctuationQuery):
        return q
    return FluctuationQuery(tuple(q), k, len(q) if horizon is None else horizon)


def count_fluctuations(q, k=None, horizon=None):
    """Maximal n with i1<j1<=i2<j2<=...<=in<jn<N and |X_il - X_jl| > 2^-k for every l.

    Accepts a FluctuationQuery or a plain sequence with k and horizon.
    """
    q = _args(q, k, horizon)
    xs = q.sequence[:q.horizon]
    t = Fraction(1, 2 ** q.k)
    # ends[j]: most fluctuations in a chain whose last pair ends exactly at j
    ends = [0] * len(xs)
    # upto[i]: most fluctuations in a chain ending at some j' <= i
    upto = [0] * len(xs)
    for j in range(len(xs)):
        best = 0
        for i in range(j):
            if abs(xs[i] - xs[j]) > t:
                best = max(best, 1 + upto[i])
        ends[j] = best
        upto[j] = max(best, upto[j - 1] if j else 0)
    return upto[-1] if xs else 0


def count_fluctuations_brute(q, k=None, horizon=None):
    """Exhaustive search over index tuples; exponential, for cross-checking only."""
    q = _args(q, k, horizon)
    xs = q.sequence[:q.horizon]
    t = Fraction(1, 2 ** q.k)
    pairs = [(i, j) for i, j in combinations(range(len(xs)), 2) if abs(xs[i] - xs[j]) > t]

    def extend(last_j, start):
        best = 0
        for p in range(start, len(pairs)):
            i, j = pairs[p]
            if i >= last_j:
                best = max(best, 1 + extend(j, p + 1))
        return best

    # pairs are sorted by i, so a valid next pair always comes later in the list
    return extend(0, 0)
