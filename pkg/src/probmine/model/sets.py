"""Set-family helpers."""
from __future__ import annotations


def disjointify(sets):
    """Replace each set by its part not covered by the earlier ones; partial unions are kept."""
    out = []
    seen = frozenset()
    for s in sets:
        s = frozenset(s)
        out.append(s - seen)
        seen |= s
    return out
