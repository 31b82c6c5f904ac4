"""Low-type majorizability between naturals-valued majorants and model objects."""
from __future__ import annotations

from ..kernel.types import NAT, OMEGA, EVENT, Arrow, Base, hat_type, show_type
from ..errors import UnsupportedType


def _apply(f, v):
    return f.apply(v) if hasattr(f, "apply") else f(v)


def _domain(t, space, bound):
    if t == NAT:
        return range(bound + 1)
    if t == OMEGA:
        return space.omega
    if t == EVENT:
        return space.algebra
    raise UnsupportedType(show_type(t))


def majorizes(a, b, t, space, bound=3):
    """a majorizes b at type t in the finite space.

    Arrow types may only take base-sort arguments; their quantifiers range over
    0..bound for naturals and over the whole space for Om and Ev.
    """
    if isinstance(t, Base):
        if not isinstance(a, int) or a < 0:
            return False
        if t == NAT:
            return a >= b
        if t == OMEGA:
            return a >= 1
        if t == EVENT:
            return a >= space.P(b)
        raise UnsupportedType(show_type(t))
    if not isinstance(t.arg, Base):
        raise UnsupportedType(f"argument type {show_type(t.arg)} of {show_type(t)} is not a base sort")
    for ys in range(bound + 1):
        for y in _domain(t.arg, space, bound):
            if majorizes(ys, y, t.arg, space, bound) and not majorizes(_apply(a, ys), _apply(b, y), t.result, space, bound):
                return False
    # self-majorization of the majorant at the erased type
    ht = hat_type(t.result)
    for ys in range(bound + 1):
        for y in range(ys + 1):
            if not majorizes(_apply(a, ys), _apply(a, y), ht, space, bound):
                return False
    return True
