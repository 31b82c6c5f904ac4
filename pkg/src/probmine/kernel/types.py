"""Finite types over the base sorts 0 (naturals), Om (samples) and Ev (events).

``Arrow(result, arg)`` is the type of functions from ``arg`` to ``result`` and
prints as ``result(arg)``, so ``0(Ev)(Om)`` takes an ``Om`` first and then an
``Ev``.  ``Q`` is an extra base sort for exact rationals (probability values,
error bounds); majorant-wise it behaves like the type ``0(0)`` of reals.
"""
from __future__ import annotations

from dataclasses import dataclass
import re

from ..errors import UnknownSort


class FiniteType:
    __slots__ = ()

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True, repr=False)
class Base(FiniteType):
    name: str

    def __repr__(self):
        return f"Base({self.name!r})"


@dataclass(frozen=True, repr=False)
class Arrow(FiniteType):
    result: FiniteType
    arg: FiniteType

    def __repr__(self):
        return f"Arrow({self.result!r}, {self.arg!r})"


NAT = Base("0")
OMEGA = Base("Om")
EVENT = Base("Ev")
RAT = Base("Q")

BASES = {"0": NAT, "Om": OMEGA, "Ev": EVENT, "Q": RAT}


def show_type(t):
    if isinstance(t, Base):
        return t.name
    if isinstance(t, Arrow):
        return f"{show_type(t.result)}({show_type(t.arg)})"
    # inference metavariables and the like
    return str(t)


def pure(n):
    """Pure type n: 0, then n+1 = 0(n)."""
    t = NAT
    for _ in range(n):
        t = Arrow(NAT, t)
    return t


def curry(result, args):
    """Type of a function taking ``args`` in order and returning ``result``."""
    t = result
    for a in reversed(list(args)):
        t = Arrow(t, a)
    return t


def arg_types(t):
    """Argument types in application order."""
    out = []
    while isinstance(t, Arrow):
        out.append(t.arg)
        t = t.result
    return out


def value_type(t):
    while isinstance(t, Arrow):
        t = t.result
    return t


def hat_type(t):
    if t == RAT:
        return pure(1)
    if isinstance(t, Base):
        return NAT
    return Arrow(hat_type(t.result), hat_type(t.arg))


def degree(t):
    if t == RAT:
        return 1
    if isinstance(t, Base):
        return 0
    return max(degree(t.result), degree(t.arg) + 1)


def pure_level(t):
    """n with pure(n) == t, or None."""
    if t == NAT:
        return 0
    if isinstance(t, Arrow) and t.result == NAT:
        k = pure_level(t.arg)
        return None if k is None else k + 1
    return None


def is_small(t):
    if t == RAT:
        return True
    return value_type(t) in (NAT, OMEGA, EVENT) and all(a == NAT for a in arg_types(t))


def is_admissible(t):
    return all(is_small(a) for a in arg_types(t))


@dataclass(frozen=True)
class TypeInfo:
    is_pure: bool
    degree: int
    is_small: bool
    is_admissible: bool


def classify_type(t):
    return TypeInfo(pure_level(t) is not None, degree(t), is_small(t), is_admissible(t))


def contains_sample_sorts(t):
    if isinstance(t, Base):
        return t in (OMEGA, EVENT)
    return contains_sample_sorts(t.result) or contains_sample_sorts(t.arg)


_TYPE_TOKEN = re.compile(r"\s*(\d+|Om|Ev|Q|[A-Za-z_]\w*|\(|\))")


def parse_type(text):
    """Parse a type written in the concrete grammar; digits denote pure types."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TYPE_TOKEN.match(text, pos)
        if not m:
            raise UnknownSort(f"cannot read type {text!r} at {pos}")
        toks.append(m.group(1))
        pos = m.end()
    t, rest = _type_from_tokens(toks, 0)
    if rest != len(toks):
        raise UnknownSort(f"trailing input in type {text!r}")
    return t


def _type_from_tokens(toks, i):
    if i >= len(toks):
        raise UnknownSort("type expected")
    tok = toks[i]
    if tok == "(":
        t, i = _type_from_tokens(toks, i + 1)
        if i >= len(toks) or toks[i] != ")":
            raise UnknownSort("unbalanced parenthesis in type")
        i += 1
    elif tok.isdigit():
        t = pure(int(tok))
        i += 1
    elif tok in BASES:
        t = BASES[tok]
        i += 1
    else:
        raise UnknownSort(f"unknown sort {tok!r}")
    while i < len(toks) and toks[i] == "(":
        a, i = _type_from_tokens(toks, i + 1)
        if i >= len(toks) or toks[i] != ")":
            raise UnknownSort("unbalanced parenthesis in type")
        i += 1
        t = Arrow(t, a)
    return t, i
