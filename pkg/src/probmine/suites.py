"""Seeded verification suites over the bundled fleet of content spaces.

Each suite returns a SuiteResult whose line() is a single PASS or FAIL record;
a FAIL carries enough of the failing case (seed, index, formula) to rerun it.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .kernel.types import NAT, OMEGA, EVENT, RAT, Arrow
from .kernel.syntax import (
    Var, App, NatLit, RatLit, QVal, RAdd, RSub, RealCmp, AtomIn, Not, Implies, Forall, Exists,
    BForall, BExists, ProbGeq, ProbLeq, size,
)
from .kernel.parser import parse_formula
from .kernel.printer import show
from .kernel.subst import subst_many
from .interp import kuroda, dialectica, modified_realizability
from .classify import demorgan_dual
from .prob.expand import outer_expand, inner_expand, prob_gt, prob_lt
from .prob.algebra import sum_outer_geq, sigma_additivity_statement
from .prob.rewrite import prenex_rewrite, Side, LEDGER
from .prob.modulus import ModulusTable, transform_modulus_equiv
from .model.content import EvalBounds
from .model.evaluate import evaluate, phi_set
from .model.fleet import FLEET_NAMES, fleet_model
from .model.fluct import count_fluctuations, count_fluctuations_brute
from .model.check import check_modulus
from .errors import SideConditionUnmet
from . import randgen
from .randgen import ROUNDTRIP_CTX, ENV_TYPES, SEQ, make_rng, random_env, random_predicate

SUITES = ("roundtrip", "interp-equiv", "outer-oracle", "algebra", "prenex", "sigma", "fluct", "modulus")


@dataclass
class SuiteResult:
    suite: str
    model: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return not self.failures

    def fail(self, **witness):
        self.failures.append(witness)

    def line(self):
        head = f"suite={self.suite} model={self.model} seed={self.seed}"
        if self.passed:
            return f"PASS {head} cases={self.cases}"
        wit = " ".join(f"{k}={v}" for k, v in self.failures[0].items())
        return f"FAIL {head} cases={self.cases} failures={len(self.failures)} witness: {wit}"


def _models(model):
    if model is None:
        return [fleet_model(n) for n in FLEET_NAMES]
    return [model]


def _label(model):
    return "fleet" if model is None else model.name


def _text(f, ctx=None):
    return repr(show(f, ctx))


# ---------------------------------------------------------------- kernel

def roundtrip(seed=0, count=200, depth=6, model=None):
    res = SuiteResult("roundtrip", "-", seed)
    rng = make_rng(seed)
    for i in range(count):
        f = randgen.random_formula(rng, depth)
        text = show(f, ROUNDTRIP_CTX)
        res.cases += 1
        try:
            back = parse_formula(text, ROUNDTRIP_CTX)
        except Exception as e:                                  # noqa: BLE001 - report any parse failure
            res.fail(case=i, error=type(e).__name__, formula=repr(text))
            continue
        if back != f:
            res.fail(case=i, formula=repr(text))
    return res


# ---------------------------------------------------------------- interpretations

def interp_equiv(seed=0, count=100, model=None):
    space = model or fleet_model("trivial")
    bounds = EvalBounds(nat_bound=3, fun_bound=(3, 3), cap=2_000_000)
    res = SuiteResult("interp-equiv", space.name, seed)
    rng = make_rng(seed)
    for i in range(count):
        f = randgen.random_logic(rng)
        forms = {"source": f, "kuroda": kuroda(f), "dialectica": dialectica(f).render(),
                 "mr": modified_realizability(f).render()}
        values = {k: evaluate(g, space, bounds) for k, g in forms.items()}
        res.cases += 1
        if len(set(values.values())) != 1:
            res.fail(case=i, values=",".join(f"{k}:{v}" for k, v in values.items()), formula=_text(f))
    return res


# ---------------------------------------------------------------- outer and inner contents

def outer_oracle(seed=0, count=200, model=None):
    res = SuiteResult("outer-oracle", _label(model), seed)
    rng = make_rng(seed)
    for space in _models(model):
        bounds = EvalBounds(nat_bound=3, fun_bound=(3, 3))
        lams = randgen.grid_lambdas(space)
        for i in range(count):
            env = random_env(rng, space)
            phi = random_predicate(rng, depth=rng.randrange(1, 4), unbounded=rng.random() < 0.3)
            s = phi_set(phi, space, bounds, env)
            out, inn = space.outer(s), space.inner(s)
            lam = rng.choice(lams)
            geq = evaluate(outer_expand(phi, RatLit(lam)), space, bounds, env)
            leq = evaluate(inner_expand(phi, RatLit(lam)), space, bounds, env)
            res.cases += 1
            if geq != (out >= lam) or leq != (inn <= lam):
                res.fail(model=space.name, case=i, lam=lam, outer=out, inner=inn,
                         expanded=f"{geq},{leq}", formula=_text(phi, ENV_TYPES))
    return res


def algebra(seed=0, count=60, model=None):
    """Duality, measurable collapse, null-set weakening and subadditivity."""
    res = SuiteResult("algebra", _label(model), seed)
    rng = make_rng(seed)
    for space in _models(model):
        bounds = EvalBounds(nat_bound=3, fun_bound=(3, 3))
        lams = randgen.grid_lambdas(space)
        nulls = [a for a in space.algebra if space.P(a) == 0]
        for i in range(count):
            env = random_env(rng, space)
            phi = random_predicate(rng, depth=rng.randrange(1, 4))
            lam = rng.choice(lams)

            # the inner form agrees with the dual outer form at 1 - lam
            a = evaluate(inner_expand(phi, RatLit(lam)), space, bounds, env)
            b = evaluate(outer_expand(demorgan_dual(phi), RSub(RatLit(1), RatLit(lam))), space, bounds, env)
            res.cases += 1
            if a != b:
                res.fail(model=space.name, case=i, check="duality", lam=lam, formula=_text(phi, ENV_TYPES))

            # measurable formulas collapse to the content of their witness set
            s = phi_set(phi, space, bounds, env)
            if space.is_event(s):
                res.cases += 1
                p = space.P(s)
                if not (space.outer(s) == space.inner(s) == p):
                    res.fail(model=space.name, case=i, check="collapse", formula=_text(phi, ENV_TYPES))
                for lam2 in lams:
                    g = evaluate(ProbGeq(phi, RatLit(lam2)), space, bounds, env)
                    l = evaluate(ProbLeq(phi, RatLit(lam2)), space, bounds, env)
                    if g != (p >= lam2) or l != (p <= lam2):
                        res.fail(model=space.name, case=i, check="collapse-formula", lam=lam2,
                                 formula=_text(phi, ENV_TYPES))
                        break

            # weakening outside a null set
            psi = random_predicate(rng, depth=rng.randrange(1, 3))
            zero = rng.choice(nulls)
            t = phi_set(psi, space, bounds, env)
            if all(w in t for w in s - zero):
                res.cases += 1
                if space.outer(s) > space.outer(t):
                    res.fail(model=space.name, case=i, check="weakening", formula=_text(phi, ENV_TYPES),
                             target=_text(psi, ENV_TYPES))
                for lam2 in lams:
                    if evaluate(ProbGeq(phi, RatLit(lam2)), space, bounds, env) and \
                            not evaluate(ProbGeq(psi, RatLit(lam2)), space, bounds, env):
                        res.fail(model=space.name, case=i, check="weakening-formula", lam=lam2)
                        break

            # subadditivity over finite unions, by contents and by the unfolded sum form
            m = rng.randrange(0, 3)
            n = Var("n0", NAT)
            body = random_predicate(rng, depth=rng.randrange(1, 3), xvar="n0")
            union = BExists(n, NatLit(m), body)
            total = sum((space.outer(phi_set(body, space, bounds, {**env, "n0": j})) for j in range(m + 1)),
                        Fraction(0))
            res.cases += 1
            if space.outer(phi_set(union, space, bounds, env)) > total:
                res.fail(model=space.name, case=i, check="subadditivity", m=m, formula=_text(body, ENV_TYPES))
            if m <= 1:
                lam3 = rng.choice(lams)
                lhs = evaluate(ProbGeq(union, RatLit(lam3)), space, bounds, env)
                rhs = evaluate(sum_outer_geq(body, NatLit(m), RatLit(lam3), n="n0"), space, bounds, env)
                res.cases += 1
                if lhs and not rhs:
                    res.fail(model=space.name, case=i, check="subadditivity-formula", m=m, lam=lam3,
                             formula=_text(body, ENV_TYPES))
    return res


# ---------------------------------------------------------------- prenex rules

def _mu_block(x, body, lam, kind):
    mu = Var("mu", RAT)
    positive = RealCmp(QVal(mu), ">", RatLit(0))
    if kind == "leq":
        inner = ProbLeq(body, RAdd(RatLit(lam), QVal(mu)))
    else:
        inner = ProbGeq(body, RSub(RatLit(lam), QVal(mu)))
    return Forall(mu, Implies(positive, Exists(x, inner)))


def _prenex_instance(rule, rng, space, env):
    """A left-hand side for the rule and the side evidence; None when no instance was found."""
    x = Var("x", NAT)
    lam = rng.choice(randgen.grid_lambdas(space))
    L = RatLit(lam)
    oracle = (space, EvalBounds(nat_bound=3, fun_bound=(3, 3)), env)
    qf = rule in ("R5", "R6", "R7", "R8", "R11")
    phi = random_predicate(rng, depth=rng.randrange(1, 4), xvar="x", unbounded=not qf and rng.random() < 0.4)
    side = Side(oracle=oracle)
    if rule == "R1":
        return ProbGeq(Forall(x, phi), L), side
    if rule == "R2":
        return _mu_block(x, phi, lam, "leq"), side
    if rule == "R3":
        return ProbLeq(Exists(x, phi), L), side
    if rule == "R4":
        return _mu_block(x, phi, lam, "geq"), side
    if rule == "R5" or rule == "R11" and rng.random() < 0.5:
        return Forall(x, ProbGeq(phi, L)), side
    if rule in ("R6", "R9"):
        return ProbLeq(Forall(x, phi), L), side
    if rule == "R7":
        return Forall(x, ProbLeq(phi, L)), side
    if rule in ("R8", "R10"):
        return ProbGeq(Exists(x, phi), L), side
    if rule == "R11":
        return Forall(x, ProbLeq(phi, L)), side
    if rule == "R12":
        body = random_predicate(rng, depth=rng.randrange(1, 4))
        s = phi_set(body, space, oracle[1], env)
        if not space.is_event(s):
            return None
        env["W"] = s
        cls = ProbGeq if rng.random() < 0.5 else ProbLeq
        return cls(body, L), Side(witness=Var("W", EVENT), oracle=oracle)
    if rule == "R13":
        body = random_predicate(rng, depth=rng.randrange(1, 3))
        target = random_predicate(rng, depth=rng.randrange(1, 3))
        env["Z"] = rng.choice([a for a in space.algebra if space.P(a) == 0])
        cls = ProbGeq if rng.random() < 0.5 else ProbLeq
        return cls(body, L), Side(witness=Var("Z", EVENT), target=target, oracle=oracle)
    raise ValueError(rule)


EQUIVALENCES = ("R5", "R6", "R7", "R8", "R9", "R10", "R12")


def prenex(seed=0, count=12, model=None):
    """Rules are sound on the fleet, the UB rules are equivalences there, and ledgers match."""
    res = SuiteResult("prenex", _label(model), seed)
    rng = make_rng(seed)
    for space in _models(model):
        bounds = EvalBounds(nat_bound=3, fun_bound=(3, 3))
        for rule in LEDGER:
            applied = 0
            for attempt in range(count * 8):
                if applied >= count:
                    break
                env = random_env(rng, space)
                inst = _prenex_instance(rule, rng, space, env)
                if inst is None:
                    continue
                lhs, side = inst
                try:
                    rhs, just = prenex_rewrite(lhs, rule, side)
                except SideConditionUnmet:
                    continue
                applied += 1
                res.cases += 1
                a = evaluate(lhs, space, bounds, env)
                b = evaluate(rhs, space, bounds, env)
                if a and not b or rule in EQUIVALENCES and a != b:
                    res.fail(model=space.name, rule=rule, lhs=a, rhs=b, formula=_text(lhs, {**ENV_TYPES, "W": EVENT, "Z": EVENT}))
                want = tuple(sorted(p.replace("(T)", "(0)") for p in LEDGER[rule]))
                if just.principles != want:
                    res.fail(model=space.name, rule=rule, ledger=",".join(just.principles))
            if applied == 0 and space.name != "trivial":
                res.fail(model=space.name, rule=rule, error="no instance met the side conditions")
    return res


# ---------------------------------------------------------------- sigma additivity

def sigma(seed=0, count=10, model=None, index_bound=6):
    res = SuiteResult("sigma", _label(model), seed)
    rng = make_rng(seed)
    lower, upper = sigma_additivity_statement(Var("A", SEQ))
    bounds = EvalBounds(nat_bound=index_bound, fun_bound=(3, 3))
    for space in _models(model):
        alg = list(space.algebra)
        for i in range(count):
            live = rng.randrange(1, index_bound + 1)
            seq = [rng.choice(alg) for _ in range(live)] + [frozenset()] * (index_bound + 1 - live)
            env = {"A": seq}
            res.cases += 1
            lo = evaluate(lower, space, bounds, env)
            up = evaluate(upper, space, bounds, env)
            if not (lo and up):
                res.fail(model=space.name, case=i, lower=lo, upper=up,
                         A="[" + ";".join(space.show_set(a) for a in seq) + "]")
    return res


# ---------------------------------------------------------------- fluctuations

FLUCT_VALUES = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1))


def fluct(seed=0, length=8, ks=(0, 1, 2), sample=None, model=None):
    """Dynamic-programming count against brute force, exhaustive unless sample is given."""
    res = SuiteResult("fluct", "-", seed)
    if sample is None:
        seqs = itertools.product(FLUCT_VALUES, repeat=length)
    else:
        rng = make_rng(seed)
        seqs = (tuple(rng.choice(FLUCT_VALUES) for _ in range(length)) for _ in range(sample))
    for seq in seqs:
        for k in ks:
            res.cases += 1
            a = count_fluctuations(seq, k, length)
            b = count_fluctuations_brute(seq, k, length)
            if a != b:
                res.fail(seq=",".join(str(v) for v in seq), k=k, dp=a, brute=b)
    return res


# ---------------------------------------------------------------- modulus pipeline

def _family(rng, space, width, length):
    """Event families A[x][n] whose tail is the whole space."""
    alg = list(space.algebra)
    fam = []
    for _ in range(width):
        live = rng.randrange(0, length)
        fam.append([rng.choice(alg) for _ in range(live)] + [space.full])
    return fam


def _least_modulus(space, fam, m_max, x_max, rng):
    table = {}
    for x in range(x_max + 1):
        row = fam[min(x, len(fam) - 1)]
        for m in range(m_max + 1):
            need = 1 - Fraction(1, 2 ** m)
            n, acc = 0, frozenset(row[0])
            while space.outer(acc) < need:
                n += 1
                acc |= row[min(n, len(row) - 1)]
            table[(m, x)] = n + rng.randrange(2)
    return ModulusTable(("m", "x"), table=table)


def modulus(seed=0, count=50, model=None, nat_bound=2):
    res = SuiteResult("modulus", _label(model), seed)
    rng = make_rng(seed)
    spaces = [s for s in _models(model)]
    wide = 2 * nat_bound + 1
    for i in range(count):
        space = rng.choice(spaces)
        fam = _family(rng, space, wide + 1, 5)
        phi = _least_modulus(space, fam, wide, wide, rng)
        premise = check_modulus("PlusTwo", phi, fam, space, EvalBounds(nat_bound=wide))
        if not premise.passed:
            res.fail(case=i, stage="premise", report=premise.line())
            continue
        phi2 = transform_modulus_equiv(phi)
        concl = check_modulus("PlusOne", phi2, fam, space, EvalBounds(nat_bound=nat_bound))
        res.cases += 1
        if not concl.passed:
            res.fail(case=i, stage="transformed", report=concl.line())
    return res


RUNNERS = {
    "roundtrip": roundtrip, "interp-equiv": interp_equiv, "outer-oracle": outer_oracle,
    "algebra": algebra, "prenex": prenex, "sigma": sigma, "fluct": fluct, "modulus": modulus,
}


def run_suite(name, seed=0, model=None, **kw):
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    t0 = time.perf_counter()
    res = RUNNERS[name](seed=seed, model=model, **kw)
    res.seconds = time.perf_counter() - t0
    return res
