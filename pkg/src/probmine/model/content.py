"""Finite content spaces and the model-file loader."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from pathlib import Path
import re

from ..errors import NotAnAlgebra, NotAdditive, BadRational


def _fmt_set(s, order=None):
    items = sorted(s, key=(order.index if order else None))
    return "{" + " ".join(items) + "}"


def parse_rational(text):
    m = re.fullmatch(r"\s*(\d+)\s*(?:/\s*(\d+))?\s*", text)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise BadRational(f"not a rational p/q: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


class ContentSpace:
    """Finite sample set with an algebra of events and an exact additive content."""

    def __init__(self, omega, algebra, prob, name="model"):
        self.omega = tuple(omega)
        if len(set(self.omega)) != len(self.omega) or not self.omega:
            raise NotAnAlgebra("omega must be a non-empty list of distinct atoms")
        full = frozenset(self.omega)
        alg = {frozenset(a) for a in algebra}
        for a in alg:
            if not a <= full:
                raise NotAnAlgebra(f"{_fmt_set(a)} is not a subset of omega")
        order = list(self.omega)
        self.algebra = tuple(sorted(alg, key=lambda s: (len(s), sorted(order.index(x) for x in s))))
        self.prob = {frozenset(k): Fraction(v) for k, v in prob.items()}
        self.name = name
        self._order = order
        self._check()

    def _check(self):
        alg = set(self.algebra)
        full = frozenset(self.omega)
        if frozenset() not in alg:
            raise NotAnAlgebra("the empty set is missing")
        if full not in alg:
            raise NotAnAlgebra("omega is missing")
        for a in self.algebra:
            if full - a not in alg:
                raise NotAnAlgebra(f"complement of {self.show_set(a)} is missing")
        for a, b in combinations(self.algebra, 2):
            if a | b not in alg:
                raise NotAnAlgebra(f"union of {self.show_set(a)} and {self.show_set(b)} is missing")
        for a in self.algebra:
            if a not in self.prob:
                raise NotAdditive(f"no content given for {self.show_set(a)}")
            v = self.prob[a]
            if not 0 <= v <= 1:
                raise BadRational(f"content of {self.show_set(a)} is {v}, outside [0,1]")
        if self.prob[frozenset()] != 0:
            raise NotAdditive("P(empty) must be 0")
        if self.prob[full] != 1:
            raise NotAdditive("P(omega) must be 1")
        for a, b in combinations(self.algebra, 2):
            if not a & b and self.prob[a | b] != self.prob[a] + self.prob[b]:
                raise NotAdditive(f"P({self.show_set(a | b)}) != P({self.show_set(a)}) + P({self.show_set(b)})")

    # ---- queries
    def P(self, a):
        a = frozenset(a)
        try:
            return self.prob[a]
        except KeyError:
            raise NotAnAlgebra(f"{self.show_set(a)} is not an event of {self.name}") from None

    def is_event(self, a):
        return frozenset(a) in self.prob

    @property
    def full(self):
        return frozenset(self.omega)

    def outer(self, s):
        s = frozenset(s)
        return min(self.prob[b] for b in self.algebra if s <= b)

    def inner(self, s):
        s = frozenset(s)
        return max(self.prob[b] for b in self.algebra if b <= s)

    def atoms(self):
        """Minimal non-empty events; they partition omega."""
        out = []
        for x in self.omega:
            a = self.full
            for b in self.algebra:
                if x in b:
                    a &= b
            if a not in out:
                out.append(a)
        return out

    def denominator(self):
        return lcm(*(v.denominator for v in self.prob.values()))

    def show_set(self, s):
        return _fmt_set(s, self._order)

    def __repr__(self):
        return f"ContentSpace({self.name}: {len(self.omega)} points, {len(self.algebra)} events)"

    def dump(self):
        lines = [f"omega = {' '.join(self.omega)}"]
        if len(self.algebra) == 2 ** len(self.omega):
            lines.append("algebra = powerset")
            for x in self.omega:
                lines.append(f"prob {{{x}}} = {_frac(self.prob[frozenset([x])])}")
        else:
            for a in self.algebra:
                if a and a != self.full:
                    lines.append(f"set {self.show_set(a)}")
            for a in self.atoms():
                lines.append(f"prob {self.show_set(a)} = {_frac(self.prob[a])}")
        return "\n".join(lines) + "\n"


def _frac(v):
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class EvalBounds:
    """Finite surrogates for the infinite quantifier ranges.

    nat_bound: type-0 quantifiers range over 0..nat_bound.
    fun_bound: (D, R); function arguments of type 0 range over 0..D, natural
        results over 0..R.
    rat_grid: values for quantifiers of sort Q; None derives a grid from the
        model and the formula's literals.
    cap: limit on enumeration sizes and on evaluation steps.
    """
    nat_bound: int = 3
    fun_bound: tuple = (3, 3)
    rat_grid: tuple | None = None
    cap: int = 2_000_000

    def __post_init__(self):
        d, r = self.fun_bound
        if self.nat_bound < 0 or d < 0 or r < 0:
            raise ValueError("bounds must be non-negative")
        if self.rat_grid is not None:
            object.__setattr__(self, "rat_grid", tuple(sorted({Fraction(x) for x in self.rat_grid})))

    def describe(self):
        d, r = self.fun_bound
        return f"nat={self.nat_bound} fun={d}x{r}"


_SET = re.compile(r"\{([^}]*)\}")


def parse_model(text, name="model"):
    """Read the line-oriented model format.

    ``omega = a b c``; ``algebra = powerset`` or ``set {a b}`` lines (empty set
    and omega are implicit); ``prob {a b} = 1/2`` lines; optional
    ``bounds nat=4 fun=3x3`` and ``name = ...``.  Contents given on some events
    are extended additively; they must determine every atom of the algebra.
    """
    omega = None
    powerset = False
    sets = []
    given = []
    bounds = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("omega"):
            omega = line.split("=", 1)[1].split()
        elif line.startswith("name"):
            name = line.split("=", 1)[1].strip()
        elif line.startswith("algebra"):
            val = line.split("=", 1)[1].strip()
            if val != "powerset":
                raise NotAnAlgebra(f"unknown algebra shorthand {val!r}")
            powerset = True
        elif line.startswith("set"):
            m = _SET.search(line)
            if not m:
                raise NotAnAlgebra(f"cannot read set line {raw!r}")
            sets.append(frozenset(m.group(1).split()))
        elif line.startswith("prob"):
            m = _SET.search(line)
            if not m or "=" not in line[m.end():]:
                raise BadRational(f"cannot read prob line {raw!r}")
            given.append((frozenset(m.group(1).split()), parse_rational(line[m.end():].split("=", 1)[1])))
        elif line.startswith("bounds"):
            bounds = _parse_bounds(line[len("bounds"):])
        else:
            raise NotAnAlgebra(f"unrecognised line {raw!r}")
    if omega is None:
        raise NotAnAlgebra("missing omega line")
    full = frozenset(omega)
    if powerset:
        algebra = [frozenset(c) for r in range(len(omega) + 1) for c in combinations(omega, r)]
    else:
        algebra = set(sets) | {frozenset(), full}
    for s, _ in given:
        if s not in set(algebra):
            raise NotAnAlgebra(f"content given for {_fmt_set(s, omega)}, which is not an event")
    prob = _extend(omega, algebra, given)
    space = ContentSpace(omega, algebra, prob, name=name)
    return space, bounds


def _parse_bounds(text):
    kw = dict(re.findall(r"(\w+)\s*=\s*(\S+)", text))
    nat = int(kw.get("nat", 3))
    fun = kw.get("fun", "3x3").split("x")
    return EvalBounds(nat_bound=nat, fun_bound=(int(fun[0]), int(fun[1])))


def _extend(omega, algebra, given):
    """Solve for the contents of the algebra's atoms and extend additively."""
    full = frozenset(omega)
    alg = list(algebra)
    atoms = []
    for x in omega:
        a = full
        for b in alg:
            if x in b:
                a &= b
        if a not in atoms:
            atoms.append(a)
    rows = [([Fraction(1)] * len(atoms), Fraction(1), "P(omega) = 1")]
    for s, v in given:
        rows.append(([Fraction(1 if a <= s else 0) for a in atoms], v, f"prob {_fmt_set(s, omega)} = {v}"))
    sol = _solve(rows, len(atoms))
    for a, v in zip(atoms, sol):
        if v < 0:
            raise NotAdditive(f"given contents force P({_fmt_set(a, omega)}) = {v} < 0")
    prob = {}
    for b in alg:
        prob[b] = sum((v for a, v in zip(atoms, sol) if a <= b), Fraction(0))
    return prob


def _solve(rows, n):
    mat = [list(coef) + [rhs] for coef, rhs, _ in rows]
    labels = [lab for _, _, lab in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if p is None:
            continue
        mat[r], mat[p] = mat[p], mat[r]
        labels[r], labels[p] = labels[p], labels[r]
        piv = mat[r][c]
        mat[r] = [x / piv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(mat)):
        if mat[i][n] != 0:
            raise NotAdditive(f"inconsistent contents: {labels[i]}")
    if len(pivots) < n:
        raise NotAdditive("the given contents do not determine every atom of the algebra")
    sol = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        sol[c] = mat[i][n]
    return sol


def load_model(path):
    path = Path(path)
    return parse_model(path.read_text(), name=path.stem)[0]


def load_model_with_bounds(path):
    path = Path(path)
    return parse_model(path.read_text(), name=path.stem)
