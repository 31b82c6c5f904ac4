"""Moduli given as finite tables, closed arithmetic expressions or callables."""
from __future__ import annotations

import ast

from ..errors import DomainExceeded, ProbmineError

_ALLOWED = (ast.Expression, ast.BinOp, ast.Add, ast.Mult, ast.Constant, ast.Name, ast.Load, ast.Call)


class ModulusTable:
    """A natural-number valued function of named natural arguments.

    Exactly one representation is set: ``table`` maps argument tuples to
    values, ``expr`` is arithmetic text over + * max and integer constants,
    ``fn`` is any Python callable.
    """

    def __init__(self, params=("m", "x"), table=None, expr=None, fn=None):
        self.params = tuple(params)
        if sum(v is not None for v in (table, expr, fn)) != 1:
            raise ValueError("give exactly one of table, expr, fn")
        self.table = None if table is None else {tuple(k) if isinstance(k, tuple) else (k,): int(v)
                                                 for k, v in table.items()}
        self.fn = fn
        self.expr = None
        if expr is not None:
            self.expr = normalize(expr, self.params)
            self._code = compile(self.expr, "<modulus>", "eval")

    @classmethod
    def from_expr(cls, text, params=("m", "x")):
        return cls(params, expr=text)

    @classmethod
    def constant(cls, c, params=("m", "x")):
        return cls(params, expr=str(int(c)))

    def __call__(self, *args):
        if len(args) != len(self.params):
            raise TypeError(f"modulus takes {len(self.params)} arguments, got {len(args)}")
        if self.table is not None:
            try:
                return self.table[tuple(args)]
            except KeyError:
                raise DomainExceeded(f"no table entry for {dict(zip(self.params, args))}") from None
        if self.expr is not None:
            return eval(self._code, {"__builtins__": {}, "max": max}, dict(zip(self.params, args)))
        return int(self.fn(*args))

    def describe(self):
        if self.expr is not None:
            return self.expr
        if self.table is not None:
            return "table{" + ", ".join(f"{','.join(map(str, k))}:{v}" for k, v in sorted(self.table.items())) + "}"
        return getattr(self.fn, "__name__", "callable")

    def __repr__(self):
        return f"ModulusTable({', '.join(self.params)} -> {self.describe()})"


def _check_ast(text, params):
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ProbmineError(f"cannot read modulus expression {text!r}: {exc.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED):
            raise ProbmineError(f"{type(node).__name__} is not allowed in a modulus expression")
        if isinstance(node, ast.Constant) and (not isinstance(node.value, int) or node.value < 0):
            raise ProbmineError(f"constant {node.value!r} is not a natural number")
        if isinstance(node, ast.Name) and node.id not in params and node.id != "max":
            raise ProbmineError(f"unknown name {node.id!r} in modulus expression")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name) and node.func.id == "max"):
            raise ProbmineError("only max(...) calls are allowed")
    return tree


def normalize(text, params):
    """Expand and collect a modulus expression into a canonical printed form."""
    import sympy
    _check_ast(text, params)
    syms = {p: sympy.Symbol(p, integer=True, nonnegative=True) for p in params}
    value = sympy.sympify(text, locals={**syms, "max": sympy.Max})
    return _show(sympy.expand(value))


def _show(value):
    return str(value).replace("Max(", "max(")


def transform_modulus_equiv(phi):
    """The modulus x -> phi(m + x + 1, x) for the strong form, from a pointwise one in (m, x)."""
    if len(phi.params) != 2:
        raise ValueError("the transform needs a modulus of two arguments (m, x)")
    m, x = phi.params
    if phi.expr is not None:
        import sympy
        syms = {p: sympy.Symbol(p, integer=True, nonnegative=True) for p in phi.params}
        value = sympy.sympify(phi.expr, locals={**syms, "max": sympy.Max})
        shifted = value.subs(syms[m], syms[m] + syms[x] + 1, simultaneous=True)
        return ModulusTable(phi.params, expr=_show(sympy.expand(shifted)))
    if phi.table is not None:
        table = {}
        for (mm, xx) in phi.table:
            mp = mm - xx - 1
            if mp >= 0:
                table[(mp, xx)] = phi.table[(mm, xx)]
        return ModulusTable(phi.params, table=table)
    return ModulusTable(phi.params, fn=lambda a, b: phi(a + b + 1, b))
