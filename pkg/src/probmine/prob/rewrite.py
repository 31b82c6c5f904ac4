"""Single-step prenex rewrites of probability statements, with a ledger of the principles used."""
from __future__ import annotations

import dataclasses
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..kernel.types import OMEGA, RAT, pure_level, show_type
from ..kernel.syntax import (
    Node, Var, QVal, RatLit, RAdd, RSub, ProbOf, RealCmp, AtomIn, Not, Implies, Forall, Exists,
    ProbGeq, ProbLeq, children, free_vars, all_names, fresh_name, iff,
)
from ..classify import Cls, Direction, MonotoneVerdict, Annotated, formula_class, monotonicity
from ..errors import SideConditionUnmet, RuleMismatch
from .expand import prob_gt, prob_lt

RULES = tuple(f"R{i}" for i in range(1, 14))


@dataclass(frozen=True)
class Step:
    rule: str
    position: tuple
    principles: tuple
    before: object
    after: object

    def record(self, ctx=None):
        from ..kernel.printer import show
        return {"rule": self.rule, "position": list(self.position), "principles": list(self.principles),
                "before": show(self.before, ctx), "after": show(self.after, ctx)}


@dataclass(frozen=True)
class Justification:
    principles: tuple = ()
    rule_trace: tuple = ()
    steps: tuple = ()

    def __add__(self, other):
        return Justification(tuple(sorted(self.principles + other.principles)),
                             self.rule_trace + other.rule_trace, self.steps + other.steps)

    @property
    def multiset(self):
        return Counter(self.principles)

    @property
    def outright(self):
        """True when no principle beyond the base system was consumed."""
        return not self.principles

    def records(self, ctx=None):
        return [s.record(ctx) for s in self.steps]


@dataclass(frozen=True)
class Side:
    """Evidence for a rule's side conditions.

    verdict: MonotoneVerdict or direction name for the quantified variable.
    witness: event term (measurable set for R12, null set for R13).
    target: the new probability body for R13.
    oracle: (space, bounds) or (space, bounds, env); used to derive verdicts and check witnesses.
    assume: names of conditions accepted without evidence, e.g. {"AntiMonotone", "Measurable"}.
    """
    verdict: object = None
    witness: Node | None = None
    target: Node | None = None
    oracle: tuple | None = None
    assume: frozenset = field(default_factory=frozenset)


# ---------------------------------------------------------------- positions

def subformula_at(node, position):
    for i in position:
        kids = children(node)
        if not 0 <= i < len(kids):
            raise RuleMismatch(f"position {list(position)} does not exist")
        node = kids[i]
    return node


def replace_at(node, position, new):
    if not position:
        return new
    i, rest = position[0], position[1:]
    node_fields = [f.name for f in dataclasses.fields(node) if isinstance(getattr(node, f.name), Node)]
    name = node_fields[i]
    return dataclasses.replace(node, **{name: replace_at(getattr(node, name), rest, new)})


# ---------------------------------------------------------------- helpers

def _mu(f, lam):
    avoid = all_names(f) | all_names(lam)
    return Var(fresh_name("mu", avoid), RAT)


def _positive(mu):
    return RealCmp(QVal(mu), ">", RatLit(0))


def _match_mu_block(f, inner_type):
    """Match all mu:Q. (mu > 0 -> ex x. <inner_type>) and return (mu, x, prob-node)."""
    if not (isinstance(f, Forall) and f.var.type == RAT and isinstance(f.body, Implies)):
        raise RuleMismatch("expected all mu:Q. (mu > 0 -> ex x. ...)")
    mu, imp = f.var, f.body
    if imp.left != _positive(mu):
        raise RuleMismatch("premise of the mu block must be mu > 0")
    ex = imp.right
    if not (isinstance(ex, Exists) and isinstance(ex.body, inner_type)):
        raise RuleMismatch(f"expected ex x. {'Pr[..] >=' if inner_type is ProbGeq else 'Pr[..] <='} after mu > 0")
    return mu, ex.var, ex.body


def _strip_margin(lam, mu, op):
    if isinstance(lam, op) and lam.right == QVal(mu) and mu.name not in free_vars(lam.left):
        return lam.left
    raise RuleMismatch(f"bound must be lam {'+' if op is RAdd else '-'} {mu.name}")


def _need(kind, f, body, x, side):
    """Ensure body has the required monotonicity in x, or raise SideConditionUnmet."""
    want = Direction(kind)
    if kind in side.assume:
        return MonotoneVerdict(want, Annotated(), x.name)
    v = side.verdict
    if v is not None:
        got = v.direction if isinstance(v, MonotoneVerdict) else Direction(str(v))
        if got != want:
            raise SideConditionUnmet(kind, f"verdict says {got}")
        return v
    if side.oracle is not None:
        v = monotonicity(body, x, oracle=side.oracle, prefer=kind)
        if v.direction == want:
            return v
        raise SideConditionUnmet(kind, f"not {kind.lower()} in {x.name} on the model")
    raise SideConditionUnmet(kind, "no monotonicity verdict supplied")


def _need_class(body, allowed, which):
    c = formula_class(body).value
    if c not in allowed:
        raise SideConditionUnmet(which, f"formula class is {c}")


def _need_pure(x):
    lvl = pure_level(x.type)
    if lvl is None:
        raise SideConditionUnmet("PureType", f"{x.name}:{show_type(x.type)} is not a pure type")
    return lvl


def _semantic(stmt, oracle):
    from ..model.evaluate import evaluate
    space, bounds = oracle[0], oracle[1]
    env = dict(oracle[2]) if len(oracle) > 2 and oracle[2] else {}
    for name, t in reversed(list(free_vars(stmt).items())):
        if name not in env:
            stmt = Forall(Var(name, t), stmt)
    return evaluate(stmt, space, bounds, env)


def _check_measurable(body, sample, witness, side):
    if witness is None:
        raise SideConditionUnmet("Measurable", "no witness set supplied")
    if "Measurable" in side.assume:
        return
    if side.oracle is None:
        raise SideConditionUnmet("Measurable", "no model to check the witness on")
    w = Var(sample, OMEGA)
    if not _semantic(Forall(w, iff(body, AtomIn(w, witness))), side.oracle):
        raise SideConditionUnmet("Measurable", "formula and witness set differ on the model")


def _check_null_implication(src, dst, sample, side):
    if side.witness is None:
        raise SideConditionUnmet("NullImplication", "no null set supplied")
    if "NullImplication" in side.assume:
        return
    if side.oracle is None:
        raise SideConditionUnmet("NullImplication", "no model to check the witness on")
    w = Var(sample, OMEGA)
    null = RealCmp(ProbOf(side.witness), "=", RatLit(Fraction(0)))
    off = Forall(w, Implies(Not(AtomIn(w, side.witness)), Implies(src, dst)))
    if not _semantic(null, side.oracle):
        raise SideConditionUnmet("NullImplication", "witness set is not null")
    if not _semantic(off, side.oracle):
        raise SideConditionUnmet("NullImplication", "implication fails outside the witness set")


def _expect(f, cls, text):
    if not isinstance(f, cls):
        raise RuleMismatch(f"expected {text}")


# ---------------------------------------------------------------- rules

def _r1(f, side):
    _expect(f, ProbGeq, "Pr[ all x. phi ] >= lam")
    _expect(f.body, Forall, "Pr[ all x. phi ] >= lam")
    x = f.body.var
    return Forall(x, ProbGeq(f.body.body, f.lam, f.sample)), ()


def _r2(f, side):
    mu, x, pr = _match_mu_block(f, ProbLeq)
    lam = _strip_margin(pr.lam, mu, RAdd)
    return ProbLeq(Forall(x, pr.body), lam, pr.sample), ()


def _r3(f, side):
    _expect(f, ProbLeq, "Pr[ ex x. phi ] <= lam")
    _expect(f.body, Exists, "Pr[ ex x. phi ] <= lam")
    return Forall(f.body.var, ProbLeq(f.body.body, f.lam, f.sample)), ()


def _r4(f, side):
    mu, x, pr = _match_mu_block(f, ProbGeq)
    lam = _strip_margin(pr.lam, mu, RSub)
    return ProbGeq(Exists(x, pr.body), lam, pr.sample), ()


def _r5(f, side):
    _expect(f, Forall, "all x. Pr[ phi ] >= lam")
    _expect(f.body, ProbGeq, "all x. Pr[ phi ] >= lam")
    x, pr = f.var, f.body
    lvl = _need_pure(x)
    _need_class(pr.body, (Cls.QuantifierFree, Cls.Universal), "Universal")
    _need("AntiMonotone", f, pr.body, x, side)
    return ProbGeq(Forall(x, pr.body), pr.lam, pr.sample), (f"UB_Omega({lvl})", "ClassicalLogic")


def _mu_exists(f, x, body, lam, strict, sample):
    mu = _mu(f, lam)
    if strict is prob_lt:
        inner = prob_lt(body, RAdd(lam, QVal(mu)), sample)
    else:
        inner = prob_gt(body, RSub(lam, QVal(mu)), sample)
    return Forall(mu, Implies(_positive(mu), Exists(x, inner)))


def _r6(f, side, full=False):
    _expect(f, ProbLeq, "Pr[ all x. phi ] <= lam")
    _expect(f.body, Forall, "Pr[ all x. phi ] <= lam")
    x, body = f.body.var, f.body.body
    lvl = _need_pure(x)
    if not full:
        _need_class(body, (Cls.QuantifierFree, Cls.Universal), "Universal")
    _need("AntiMonotone", f, body, x, side)
    out = _mu_exists(f, x, body, f.lam, prob_lt, f.sample)
    return out, ((f"UB_S_full({lvl})", "IP_forall") if full else (f"UB_S({lvl})", "ClassicalLogic"))


def _r7(f, side):
    _expect(f, Forall, "all x. Pr[ phi ] <= lam")
    _expect(f.body, ProbLeq, "all x. Pr[ phi ] <= lam")
    x, pr = f.var, f.body
    lvl = _need_pure(x)
    _need_class(pr.body, (Cls.QuantifierFree, Cls.Existential), "Existential")
    _need("Monotone", f, pr.body, x, side)
    return ProbLeq(Exists(x, pr.body), pr.lam, pr.sample), (f"UB_Omega({lvl})", "ClassicalLogic")


def _r8(f, side, full=False):
    _expect(f, ProbGeq, "Pr[ ex x. phi ] >= lam")
    _expect(f.body, Exists, "Pr[ ex x. phi ] >= lam")
    x, body = f.body.var, f.body.body
    lvl = _need_pure(x)
    if not full:
        _need_class(body, (Cls.QuantifierFree, Cls.Existential), "Existential")
    _need("Monotone", f, body, x, side)
    out = _mu_exists(f, x, body, f.lam, prob_gt, f.sample)
    return out, ((f"UB_S_full({lvl})", "IP_forall") if full else (f"UB_S({lvl})", "ClassicalLogic"))


def _r11(f, side):
    if not isinstance(f, Forall) or not isinstance(f.body, (ProbGeq, ProbLeq)):
        raise RuleMismatch("expected all x:0. Pr[ phi ] >= lam or all x:0. Pr[ phi ] <= lam")
    x, pr = f.var, f.body
    if pure_level(x.type) != 0:
        raise SideConditionUnmet("TypeZero", f"{x.name}:{show_type(x.type)}")
    _need_class(pr.body, (Cls.QuantifierFree,), "QuantifierFree")
    if isinstance(pr, ProbGeq):
        _need("AntiMonotone", f, pr.body, x, side)
        return ProbGeq(Forall(x, pr.body), pr.lam, pr.sample), ("CC0_Omega",)
    _need("Monotone", f, pr.body, x, side)
    return ProbLeq(Exists(x, pr.body), pr.lam, pr.sample), ("CC0_Omega",)


def _r12(f, side):
    _expect(f, (ProbGeq, ProbLeq), "a probability statement")
    _check_measurable(f.body, f.sample, side.witness, side)
    op = ">=" if isinstance(f, ProbGeq) else "<="
    return RealCmp(ProbOf(side.witness), op, f.lam), ()


def _r13(f, side):
    _expect(f, (ProbGeq, ProbLeq), "a probability statement")
    if side.target is None:
        raise SideConditionUnmet("NullImplication", "no target formula supplied")
    if isinstance(f, ProbGeq):
        _check_null_implication(f.body, side.target, f.sample, side)
    else:
        _check_null_implication(side.target, f.body, f.sample, side)
    return type(f)(side.target, f.lam, f.sample), ()


_TABLE = {
    "R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4, "R5": _r5, "R6": _r6, "R7": _r7, "R8": _r8,
    "R9": lambda f, s: _r6(f, s, full=True), "R10": lambda f, s: _r8(f, s, full=True),
    "R11": _r11, "R12": _r12, "R13": _r13,
}

# principles each rule consumes, with T standing for the level of the quantified type
LEDGER = {
    "R1": (), "R2": (), "R3": (), "R4": (),
    "R5": ("UB_Omega(T)", "ClassicalLogic"), "R6": ("UB_S(T)", "ClassicalLogic"),
    "R7": ("UB_Omega(T)", "ClassicalLogic"), "R8": ("UB_S(T)", "ClassicalLogic"),
    "R9": ("UB_S_full(T)", "IP_forall"), "R10": ("UB_S_full(T)", "IP_forall"),
    "R11": ("CC0_Omega",), "R12": (), "R13": (),
}


def prenex_rewrite(f, rule, side=None, position=()):
    """Apply one rule at the subformula found by following child indices in position."""
    rule = rule.upper()
    if rule not in _TABLE:
        raise RuleMismatch(f"unknown rule {rule!r}")
    side = side or Side()
    if not isinstance(side.assume, frozenset):
        side = dataclasses.replace(side, assume=frozenset(side.assume))
    position = tuple(position)
    target = subformula_at(f, position)
    new, principles = _TABLE[rule](target, side)
    principles = tuple(sorted(principles))
    out = replace_at(f, position, new)
    step = Step(rule, position, principles, target, new)
    return out, Justification(principles, ((rule, position),), (step,))


def rewrite_chain(f, steps):
    """Apply (rule, side, position) triples in order and merge their justifications."""
    just = Justification()
    for rule, side, position in steps:
        f, j = prenex_rewrite(f, rule, side, position)
        just = just + j
    return f, just
