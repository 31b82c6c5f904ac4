"""Shapes of probabilistic forall-exists statements and their modulus specifications."""
from __future__ import annotations

from dataclasses import dataclass

from ..kernel.types import NAT, Arrow, curry, hat_type, degree, show_type
from ..kernel.types import contains_sample_sorts
from ..kernel.syntax import (
    Var, App, NatLit, RatLit, RSub, PowHalf, Forall, Exists, BForall, BExists, ProbGeq,
    forall_many, apply_many, free_vars, all_names, fresh_name,
)
from ..kernel.subst import subst_many
from ..kernel.typecheck import typecheck
from ..errors import ShapeOther, UnsupportedType

FORM1, FORM2, FORM3, OTHER = "Form1", "Form2", "Form3", "Other"


@dataclass(frozen=True)
class ProbForm:
    shape: str
    outer_vars: tuple = ()
    inner_var: Var | None = None
    error_var: Var | None = None
    matrix: object = None
    lam: object = None
    sample: str = "w"
    diagnostic: str = ""
    source: object = None

    @property
    def outer_var(self):
        return self.outer_vars[0] if len(self.outer_vars) == 1 else (self.outer_vars or None)


@dataclass(frozen=True)
class ModulusSpec:
    kind: str
    spec_formula: object
    modulus: Var
    majorant_note: str
    strengthened: bool = False


def _strip_foralls(f):
    vs = []
    while isinstance(f, Forall):
        vs.append(f.var)
        f = f.body
    return vs, f


def _error_shape(lam, m):
    """lam' when lam is lam' - 2^-m for the variable m, else None."""
    if isinstance(lam, RSub) and isinstance(lam.right, PowHalf) and lam.right.exponent == m:
        if m.name not in free_vars(lam.left):
            return lam.left
    return None


def detect_form(f):
    """Classify f as Form1 (Pr outside), Form2 (Pr under the foralls) or Form3 (Pr under forall-exists)."""
    if isinstance(f, ProbGeq):
        vs, body = _strip_foralls(f.body)
        if vs and isinstance(body, Exists) and body.var.type == NAT:
            return ProbForm(FORM1, tuple(vs), body.var, None, body.body, f.lam, f.sample, source=f)
        return ProbForm(OTHER, diagnostic="probability of a formula that is not forall-exists with an inner exists over 0",
                        source=f)
    vs, body = _strip_foralls(f)
    if not vs:
        return ProbForm(OTHER, diagnostic="no leading universal quantifier", source=f)
    if isinstance(body, ProbGeq):
        inner = body.body
        if isinstance(inner, Exists) and inner.var.type == NAT:
            return ProbForm(FORM2, tuple(vs), inner.var, None, inner.body, body.lam, body.sample, source=f)
        return ProbForm(OTHER, diagnostic="probability body is not an exists over 0", source=f)
    if isinstance(body, Exists) and body.var.type == NAT and isinstance(body.body, ProbGeq):
        m = vs[0]
        pr = body.body
        lam = _error_shape(pr.lam, m) if m.type == NAT else None
        if lam is None:
            return ProbForm(OTHER, diagnostic="bound is not of the form lam - 2^-m for the first quantified m", source=f)
        return ProbForm(FORM3, tuple(vs[1:]), body.var, m, pr.body, lam, pr.sample, source=f)
    return ProbForm(OTHER, diagnostic="no probability node after the universal quantifiers", source=f)


def _fresh(base, avoid):
    name = fresh_name(base, avoid)
    avoid.add(name)
    return name


def _plus_bound(lam, m):
    return RSub(lam, PowHalf(m))


def quantitative_interpretation(pf, mode="classical", monotone=None):
    """Modulus specification for a detected form.

    mode: "classical" or "semiconstructive"; only Form1 depends on it.
    monotone: a verdict that the matrix is monotone in the inner variable; with
        it the modulus is a direct witness for Form2 and Form3.
    """
    if pf.shape == OTHER:
        raise ShapeOther(pf.diagnostic or "statement has none of the three forms")
    if mode not in ("classical", "semiconstructive", "c", "i"):
        raise ValueError(f"unknown mode {mode!r}")
    classical = mode in ("classical", "c")
    avoid = set(all_names(pf.source)) | {pf.sample}
    n = pf.inner_var
    strengthen = monotone is not None and str(getattr(monotone, "direction", monotone)) == "Monotone"

    if pf.shape in (FORM2, FORM3):
        for v in pf.outer_vars:
            if contains_sample_sorts(v.type):
                raise UnsupportedType(f"outer variable {v.name}:{show_type(v.type)} has no natural-number majorant "
                                      "to feed the modulus directly")
        m = pf.error_var or Var(_fresh("m", avoid), NAT)
        phi = Var(_fresh("Phi", avoid), curry(NAT, [NAT] + [hat_type(v.type) for v in pf.outer_vars]))
        bound = apply_many(phi, [m, *pf.outer_vars])
        lam = _plus_bound(pf.lam, m)
        if strengthen:
            core = ProbGeq(subst_many(pf.matrix, {n.name: bound}), lam, pf.sample)
        elif pf.shape == FORM2:
            core = ProbGeq(BExists(n, bound, pf.matrix), lam, pf.sample)
        else:
            core = BExists(n, bound, ProbGeq(pf.matrix, lam, pf.sample))
        spec = forall_many([m, *pf.outer_vars], core)
        kind = "PlusTwo" if pf.shape == FORM2 else "PlusThree"
        note = ("outer variables are fed to the modulus directly: at type 0 a natural number majorizes itself, "
                "and higher-type arguments are read through their own values")
        if strengthen:
            note += "; the matrix is monotone in the inner variable, so the modulus is a witness"
        typecheck(spec)
        return ModulusSpec(kind, spec, phi, note, strengthen)

    # Form1
    m = Var(_fresh("m", avoid), NAT)
    lam = _plus_bound(pf.lam, m)
    if not classical:
        majorants = []
        for v in pf.outer_vars:
            if contains_sample_sorts(v.type):
                raise UnsupportedType(f"majorization of {v.name}:{show_type(v.type)} is only rendered without Om and Ev")
            majorants.append(Var(_fresh(v.name + "s", avoid), hat_type(v.type)))
        phi = Var(_fresh("Phi", avoid), curry(NAT, [NAT] + [s.type for s in majorants]))
        body = BExists(n, apply_many(phi, [m, *majorants]), pf.matrix)
        for v, s in reversed(list(zip(pf.outer_vars, majorants))):
            body = Forall(s, BForall(v, s, body))
        spec = Forall(m, ProbGeq(body, lam, pf.sample))
        note = "x <= xs stands for majorization: at types 0 and 1 without Om and Ev it is the pointwise order"
        typecheck(spec)
        return ModulusSpec("PlusOneIntuitionistic", spec, phi, note)

    if len(pf.outer_vars) != 1:
        raise UnsupportedType("the classical strong form is rendered for a single outer variable only")
    x = pf.outer_vars[0]
    if degree(x.type) > 1 or contains_sample_sorts(x.type):
        raise UnsupportedType(f"the classical strong form needs a type of degree at most 1, not {show_type(x.type)}")
    choice_t = Arrow(NAT, x.type)                  # N : 0(tau)
    maj_t = Arrow(x.type, choice_t)                # xs, xt : tau(0(tau))
    xs = Var(_fresh(x.name + "s", avoid), maj_t)
    xt = Var(_fresh(x.name + "t", avoid), maj_t)
    big_n = Var(_fresh("N", avoid), choice_t)
    phi = Var(_fresh("Phi", avoid), curry(choice_t, [NAT, maj_t]))
    matrix = subst_many(pf.matrix, {n.name: App(big_n, x)})
    inner = BExists(big_n, apply_many(phi, [m, xs]), BForall(x, App(xt, big_n), matrix))
    spec = Forall(m, Forall(xs, BForall(xt, xs, ProbGeq(inner, lam, pf.sample))))
    note = ("majorization between xt and xs and between N and Phi m xs is rendered as the pointwise order "
            "after erasing Om and Ev; the model check is only meaningful at type 0")
    typecheck(spec)
    return ModulusSpec("PlusOneClassical", spec, phi, note)
