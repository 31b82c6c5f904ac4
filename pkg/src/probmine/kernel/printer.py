"""Pretty printer emitting the concrete grammar accepted by the parser."""
from __future__ import annotations

from .types import show_type, NAT
from .syntax import (
    Var, Const, App, Lam, NatLit, Add, MinAlpha, Union, Compl, EmptySet, Up,
    RatLit, QVal, ProbOf, RAdd, RSub, RMin, PowHalf, RSum,
    NatCmp, AtomIn, RealCmp, Not, And, Or, Implies, Forall, Exists, BForall, BExists,
    ProbGeq, ProbLeq, Formula, RealTerm, free_vars,
)
from .typecheck import Checker, TMeta, has_meta

NAT_OP_TEXT = {"=": "=0", "<": "<0", "<=": "<=0", ">=": ">=0", ">": ">0"}

# term precedence levels
L_LAM, L_CUP, L_ADD, L_APP, L_POST, L_PRIM = range(6)
# formula levels
F_QUANT, F_IMP, F_OR, F_AND, F_NOT, F_ATOM = range(6)


class Printer:
    def __init__(self, annotate=()):
        self.pending = set(annotate)

    # ---- terms
    def term(self, e, need, bound):
        text, level = self._term(e, bound)
        return f"({text})" if level < need else text

    def _term(self, e, bound):
        if isinstance(e, Var):
            if e.name not in bound and e.name in self.pending:
                self.pending.discard(e.name)
                return f"({e.name}:{show_type(e.type)})", L_PRIM
            return e.name, L_PRIM
        if isinstance(e, Const):
            return e.name, L_PRIM
        if isinstance(e, NatLit):
            return str(e.n), L_PRIM
        if isinstance(e, EmptySet):
            return "empty", L_PRIM
        if isinstance(e, Up):
            return f"up({self.term(e.seq, L_LAM, bound)})", L_PRIM
        if isinstance(e, MinAlpha):
            a = self.term(e.left, L_LAM, bound)
            b = self.term(e.right, L_LAM, bound)
            return f"min[{show_type(e.type)}]({a}, {b})", L_PRIM
        if isinstance(e, Compl):
            return f"{self.term(e.arg, L_POST, bound)}^c", L_POST
        if isinstance(e, App):
            return f"{self.term(e.fun, L_APP, bound)} {self.term(e.arg, L_POST, bound)}", L_APP
        if isinstance(e, Add):
            return f"{self.term(e.left, L_ADD, bound)} + {self.term(e.right, L_APP, bound)}", L_ADD
        if isinstance(e, Union):
            return f"{self.term(e.left, L_CUP, bound)} cup {self.term(e.right, L_ADD, bound)}", L_CUP
        if isinstance(e, Lam):
            body = self.term(e.body, L_LAM, bound | {e.var.name})
            return f"\\{e.var.name}:{show_type(e.var.type)}. {body}", L_LAM
        raise TypeError(f"not a term: {e!r}")

    # ---- real terms
    def real(self, r, need, bound):
        text, level = self._real(r, bound)
        return f"({text})" if level < need else text

    def _real(self, r, bound):
        if isinstance(r, RatLit):
            v = r.value
            return (str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"), 1
        if isinstance(r, QVal):
            return self.term(r.term, L_APP, bound), 1
        if isinstance(r, ProbOf):
            return f"Pr({self.term(r.event, L_LAM, bound)})", 1
        if isinstance(r, PowHalf):
            return f"2^-{self.term(r.exponent, L_POST, bound)}", 1
        if isinstance(r, RMin):
            return f"min({self.real(r.left, 0, bound)}, {self.real(r.right, 0, bound)})", 1
        if isinstance(r, RSum):
            b = self.term(r.bound, L_LAM, bound)
            body = self.real(r.body, 0, bound | {r.var.name})
            return f"sum[{r.var.name} <= {b}]({body})", 1
        if isinstance(r, RAdd):
            return f"{self.real(r.left, 0, bound)} + {self.real(r.right, 1, bound)}", 0
        if isinstance(r, RSub):
            return f"{self.real(r.left, 0, bound)} - {self.real(r.right, 1, bound)}", 0
        raise TypeError(f"not a real term: {r!r}")

    # ---- formulas
    def formula(self, f, need, bound):
        text, level = self._formula(f, bound)
        return f"({text})" if level < need else text

    def _formula(self, f, bound):
        if isinstance(f, NatCmp):
            a = self.term(f.left, L_POST, bound)
            b = self.term(f.right, L_POST, bound)
            return f"{a} {NAT_OP_TEXT[f.op]} {b}", F_ATOM
        if isinstance(f, AtomIn):
            a = self.term(f.elem, L_POST, bound)
            b = self.term(f.event, L_POST, bound)
            return f"{a} in {b}", F_ATOM
        if isinstance(f, RealCmp):
            return f"{self.real(f.left, 0, bound)} {f.op} {self.real(f.right, 0, bound)}", F_ATOM
        if isinstance(f, (ProbGeq, ProbLeq)):
            op = ">=" if isinstance(f, ProbGeq) else "<="
            inner_bound = bound | {f.sample}
            body = self.formula(f.body, F_QUANT, inner_bound)
            head = "" if f.sample == "w" else f"{f.sample}. "
            return f"Pr[ {head}{body} ] {op} {self.real(f.lam, 0, bound)}", F_ATOM
        if isinstance(f, Not):
            if isinstance(f.body, Not):
                return "!" + self.formula(f.body, F_NOT, bound), F_NOT
            return f"!({self.formula(f.body, F_QUANT, bound)})", F_NOT
        if isinstance(f, And):
            return f"{self.formula(f.left, F_AND, bound)} & {self.formula(f.right, F_NOT, bound)}", F_AND
        if isinstance(f, Or):
            return f"{self.formula(f.left, F_OR, bound)} | {self.formula(f.right, F_AND, bound)}", F_OR
        if isinstance(f, Implies):
            return f"{self.formula(f.left, F_OR, bound)} -> {self.formula(f.right, F_IMP, bound)}", F_IMP
        if isinstance(f, (Forall, Exists)):
            q = "all" if isinstance(f, Forall) else "ex"
            body = self.formula(f.body, F_QUANT, bound | {f.var.name})
            return f"{q} {f.var.name}:{show_type(f.var.type)}. {body}", F_QUANT
        if isinstance(f, (BForall, BExists)):
            q = "all" if isinstance(f, BForall) else "ex"
            b = self._bound_term(f.bound, bound)
            body = self.formula(f.body, F_QUANT, bound | {f.var.name})
            return f"{q} {f.var.name} <= {b} : {show_type(f.var.type)}. {body}", F_QUANT
        raise TypeError(f"not a formula: {f!r}")

    def _bound_term(self, e, bound):
        # annotations are not read at the top of a bound, so force parentheses there
        if isinstance(e, Var) and e.name not in bound and e.name in self.pending:
            return self.term(e, L_PRIM, bound)
        return self.term(e, L_CUP, bound)

    def show(self, node):
        if isinstance(node, Formula):
            return self.formula(node, F_QUANT, frozenset())
        if isinstance(node, RealTerm):
            return self.real(node, 0, frozenset())
        return self.term(node, L_LAM, frozenset())


def needed_annotations(node, ctx=None):
    """Free variables whose types cannot be recovered by inference alone."""
    ctx = dict(ctx or {})
    free = free_vars(node)
    known = set(ctx)
    while True:
        forget = [n for n in free if n not in known]
        c = _ForgetfulChecker(ctx, forget)
        c.check(node)
        open_ = [n for n in forget if has_meta(c.resolve(c.free.get(n, c.metas[n])))]
        if not open_:
            return [n for n in free if n in known and n not in ctx]
        known.add(open_[0])


class _ForgetfulChecker(Checker):
    def __init__(self, ctx, forget):
        super().__init__(ctx)
        self.metas = {n: TMeta(n) for n in forget}

    def var(self, v, env, loc):
        if v.name not in env and v.name in self.metas:
            v = Var(v.name, self.metas[v.name])
        return super().var(v, env, loc)


def show(node, ctx=None):
    """Render a formula, term or real term; annotate free variables only where needed."""
    return Printer(needed_annotations(node, ctx)).show(node)
