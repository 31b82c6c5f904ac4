from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from probmine.errors import (
    SideConditionUnmet, FormulaClassViolation, ShapeOther, SampleVarMissing, RuleMismatch, UnsupportedType,
)
from probmine.kernel import (
    NAT, OMEGA, EVENT, RAT, Arrow, pure, curry, Var, NatLit, QVal, RatLit, parse_formula, show,
)
from probmine.model import EvalBounds, evaluate, fleet_model, FLEET_NAMES
from probmine.prob import (
    outer_expand, inner_expand, expand_node, sum_outer_geq, sigma_additivity_statement, detect_form,
    quantitative_interpretation, prenex_rewrite, rewrite_chain, Side, LEDGER, instantiate_ub, instantiate_cc,
    ModulusTable, transform_modulus_equiv, FORM1, FORM2, FORM3, OTHER,
)
from probmine.suites import outer_oracle, prenex, algebra as algebra_suite, modulus as modulus_suite

CTX = {"B": EVENT, "A": Arrow(EVENT, NAT), "lam": RAT}
LAM = QVal(Var("lam", RAT))


def p(text, ctx=CTX):
    return parse_formula(text, ctx)


# ---------------------------------------------------------------- expansion

def test_outer_expansion_of_an_event():
    f = outer_expand(p("w in B"), RatLit(1))
    assert show(f, CTX) == "all A:Ev. Pr(A) < 1 -> (ex w:Om. w in A^c & w in B)"


def test_outer_expansion_avoids_used_names():
    f = expand_node(p("Pr[ ex n:0. w in A n ] >= lam"))
    assert show(f, CTX) == "all A':Ev. Pr(A') < lam -> (ex w:Om. w in A'^c & (ex n:0. w in (A n)))"


def test_inner_expansion_dualises_the_body():
    f = inner_expand(p("w in B"), RatLit(0))
    assert show(f, CTX) == "all A:Ev. Pr(A) > 0 -> (ex w:Om. w in A & !(w in B))"


def test_expansion_needs_the_sample_variable():
    with pytest.raises(SampleVarMissing):
        outer_expand(p("c =0 0", {"c": NAT}), RatLit(1))


@pytest.mark.parametrize("name", FLEET_NAMES)
def test_expansion_matches_content_comparison(name):
    res = outer_oracle(seed=3, count=40, model=fleet_model(name))
    assert res.passed, res.line()


def test_measurable_inner_expansion_is_content_bound():
    space = fleet_model("three")
    for ev in space.algebra:
        for lam in (0, Fraction(1, 3), Fraction(1, 2), 1):
            f = inner_expand(p("w in B"), RatLit(lam))
            assert evaluate(f, space, env={"B": ev}) == (space.P(ev) <= lam)


# ---------------------------------------------------------------- subadditivity

def test_sum_form_single_term():
    f = sum_outer_geq(p("w in A n", {**CTX, "n": NAT}), NatLit(0), LAM)
    assert show(f, CTX) == "all lt:Q(0). lam >= lt 0 -> Pr[ w in (A 0) ] >= lt 0"


def test_sum_form_literal_expands_the_sum():
    f = sum_outer_geq(p("w in A n", {**CTX, "n": NAT}), NatLit(1), LAM)
    assert show(f, CTX) == "all lt:Q(0). lam >= lt 0 + lt 1 -> Pr[ w in (A 0) ] >= lt 0 | Pr[ w in (A 1) ] >= lt 1"


def test_sum_form_symbolic_bound():
    f = sum_outer_geq(p("w in A n", {**CTX, "n": NAT}), Var("m", NAT), LAM)
    assert show(f, CTX) == "all lt:Q(0). lam >= sum[i <= m](lt i) -> (ex n <= m : 0. Pr[ w in (A n) ] >= lt n)"


@pytest.mark.parametrize("name", ["two", "sub4", "three"])
def test_algebra_identities_on_model(name):
    res = algebra_suite(seed=11, count=8, model=fleet_model(name))
    assert res.passed, res.line()


# ---------------------------------------------------------------- sigma additivity

def test_sigma_statements_are_symbolic():
    lower, upper = sigma_additivity_statement(Var("A", Arrow(EVENT, NAT)))
    assert show(lower) == "all l:0. Pr[ ex n:0. w in (A n) ] >= sum[i <= l](Pr(up(A) i))"
    assert show(upper) == "all k:0. ex l:0. Pr[ ex n:0. w in (A n) ] <= sum[i <= l](Pr(up(A) i)) + 2^-k"


def test_sigma_statements_hold_when_sequence_dies_out():
    space = fleet_model("three")
    seq = [["a"], ["a", "b"], ["c"], [], [], [], []]
    b = EvalBounds(nat_bound=6)
    for f in sigma_additivity_statement(Var("A", Arrow(EVENT, NAT))):
        assert evaluate(f, space, b, {"A": seq})


# ---------------------------------------------------------------- statement forms

def test_form_detection():
    assert detect_form(p("Pr[ all k:0. ex n:0. w in A n & k <=0 n ] >= 1")).shape == FORM1
    assert detect_form(p("all k:0. Pr[ ex n:0. w in A n & k <=0 n ] >= 1")).shape == FORM2
    f3 = p("all m:0. all k:0. ex n:0. Pr[ w in A n & k <=0 n ] >= 1 - 2^-m")
    pf = detect_form(f3)
    assert pf.shape == FORM3 and pf.error_var.name == "m"
    other = detect_form(p("ex k:0. Pr[ w in A k ] >= 1"))
    assert other.shape == OTHER and other.diagnostic
    with pytest.raises(ShapeOther):
        quantitative_interpretation(other)


def test_form1_semiconstructive():
    pf = detect_form(p("Pr[ all k:0. ex n:0. w in A n & k <=0 n ] >= 1"))
    spec = quantitative_interpretation(pf, "i")
    assert show(spec.spec_formula, CTX) == (
        "all m:0. Pr[ all ks:0. all k <= ks : 0. ex n <= Phi m ks : 0. w in (A n) & k <=0 n ] >= 1 - 2^-m")


def test_form1_classical_bounds_a_functional():
    pf = detect_form(p("Pr[ all k:0. ex n:0. w in A n & k <=0 n ] >= 1"))
    spec = quantitative_interpretation(pf, "c")
    assert spec.modulus.type == curry(pure(1), [NAT, pure(2)])
    assert "ex N <= Phi m ks : 0(0)" in show(spec.spec_formula, CTX)


def test_monotone_matrix_gives_direct_witness():
    pf = detect_form(p("all m:0. all k:0. all g:0(0). ex n:0. Pr[ all i <= n + g n : 0. w in A i | k <=0 i ] >= 1 - 2^-m"))
    spec = quantitative_interpretation(pf, "c", monotone="Monotone")
    assert spec.strengthened
    assert "ex n" not in show(spec.spec_formula, CTX)
    assert "Phi m k g" in show(spec.spec_formula, CTX)


def test_sample_sort_outer_variables_have_no_modulus():
    pf = detect_form(p("all z:Ev. Pr[ ex n:0. w in A n | w in z ] >= 1"))
    assert pf.shape == FORM2
    with pytest.raises(UnsupportedType):
        quantitative_interpretation(pf)


# ---------------------------------------------------------------- rewriting

def test_r1_needs_no_principles():
    f = p("Pr[ all k:0. ex n:0. w in A n & k <=0 n ] >= 1")
    out, just = prenex_rewrite(f, "R1")
    assert out == p("all k:0. Pr[ ex n:0. w in A n & k <=0 n ] >= 1")
    assert just.principles == ()


def test_r5_with_verdict():
    f = p("all x:0. Pr[ all k <= x : 0. w in A k ] >= 1/2")
    out, just = prenex_rewrite(f, "R5", Side(verdict="AntiMonotone"))
    assert out == p("Pr[ all x:0. all k <= x : 0. w in A k ] >= 1/2")
    assert just.principles == ("ClassicalLogic", "UB_Omega(0)")
    assert just.records(CTX)[0]["rule"] == "R5"


def test_r5_without_verdict_is_refused():
    f = p("all x:0. Pr[ all k <= x : 0. w in A k ] >= 1/2")
    with pytest.raises(SideConditionUnmet) as e:
        prenex_rewrite(f, "R5")
    assert e.value.which == "AntiMonotone"


def test_r5_verdict_from_model():
    f = p("all x:0. Pr[ w in A x ] >= 1/2")
    space = fleet_model("two")
    shrinking = {"A": [["a", "b"], ["a"], ["a"], ["a"]]}
    out, _ = prenex_rewrite(f, "R5", Side(oracle=(space, EvalBounds(nat_bound=3), shrinking)))
    assert out == p("Pr[ all x:0. w in A x ] >= 1/2")
    growing = {"A": [["a"], ["a", "b"], ["a"], ["a"]]}
    with pytest.raises(SideConditionUnmet):
        prenex_rewrite(f, "R5", Side(oracle=(space, EvalBounds(nat_bound=3), growing)))


def test_rule_shape_mismatch():
    with pytest.raises(RuleMismatch):
        prenex_rewrite(p("Pr[ w in B ] >= 1"), "R1")


def test_rewrite_at_a_position_and_chain():
    f = p("c =0 0 & Pr[ all k:0. ex n:0. w in A n & k <=0 n ] >= 1", {**CTX, "c": NAT})
    out, just = rewrite_chain(f, [("R1", None, (1,))])
    assert show(out, CTX) == "c =0 0 & (all k:0. Pr[ ex n:0. w in (A n) & k <=0 n ] >= 1)"
    assert just.rule_trace == (("R1", (1,)),)


@pytest.mark.parametrize("name", ["two", "sub4"])
def test_rules_on_model(name):
    res = prenex(seed=5, count=3, model=fleet_model(name))
    assert res.passed, res.line()


def test_ledger_principle_sets():
    assert set(LEDGER["R5"]) == set(LEDGER["R7"]) == {"UB_Omega(T)", "ClassicalLogic"}
    assert set(LEDGER["R6"]) == set(LEDGER["R8"]) == {"UB_S(T)", "ClassicalLogic"}
    assert set(LEDGER["R9"]) == {"UB_S_full(T)", "IP_forall"}
    assert set(LEDGER["R11"]) == {"CC0_Omega"}
    assert all(not LEDGER[r] for r in ("R1", "R2", "R3", "R4", "R12", "R13"))


# ---------------------------------------------------------------- schemas

UB_CTX = {"k": NAT, "x": NAT, "w": NAT, "y": Arrow(NAT, NAT)}


def test_ub_at_type_zero():
    inst = instantiate_ub(NAT, "omega", p("(R k x w) =0 0", UB_CTX), NAT)
    assert inst.principle == "UB_Omega(0)"
    assert show(inst.rendered) == (
        "all y:0(0). (all k:0. all x:0. ex w:0. (R k min[0](x, y k) w) =0 0) -> "
        "(ex chi:0(0). all k:0. all x:0. ex w <= chi k : 0. (R k min[0](x, y k) w) =0 0)")


def test_ub_at_type_one_bounds_by_a_functional():
    ctx = {**UB_CTX, "w": pure(1)}
    inst = instantiate_ub(pure(1), "omega", p("(R k x w) =0 0", ctx), NAT)
    text = show(inst.rendered)
    assert "ex chi:0(0)(0)." in text and "ex w <= chi k : 0(0)." in text


def test_restricted_ub_rejects_general_matrix():
    with pytest.raises(FormulaClassViolation):
        instantiate_ub(NAT, "omega", p("all u:0. ex v:0. (R k x w u v) =0 0", UB_CTX), NAT)


def test_cc_over_points():
    phi = p("z in A n", {"A": Arrow(EVENT, NAT), "z": OMEGA, "n": NAT})
    inst = instantiate_cc("omega", phi, [OMEGA])
    assert inst.principle == "CC0_Omega"
    assert show(inst.rendered) == "(all k:0. ex z:Om. all n <= k : 0. z in (A n)) -> (ex z:Om. all n:0. z in (A n))"


def test_cc_over_events():
    inst = instantiate_cc("ev", p("(R n z) =0 0", {"z": EVENT, "n": NAT}), [EVENT])
    assert inst.principle == "CC0_S"
    assert show(inst.rendered) == "(all k:0. ex z:Ev. all n <= k : 0. (R n z) =0 0) -> (ex z:Ev. all n:0. (R n z) =0 0)"


def test_cc_rejects_unbounded_matrix():
    with pytest.raises(FormulaClassViolation):
        instantiate_cc("omega", p("ex u:0. z in A u", {"A": Arrow(EVENT, NAT), "z": OMEGA}), [OMEGA])


# ---------------------------------------------------------------- moduli

def test_transform_linear_modulus():
    assert transform_modulus_equiv(ModulusTable.from_expr("m + x")).describe() == "m + 2*x + 1"


def test_transform_constant_modulus():
    assert transform_modulus_equiv(ModulusTable.from_expr("0")).describe() == "0"


@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 3), st.integers(0, 3))
def test_transform_agrees_with_shifted_call(a, b, m, x):
    phi = ModulusTable.from_expr(f"{a}*m + {b}*x + max(m, x)")
    assert transform_modulus_equiv(phi)(m, x) == phi(m + x + 1, x)
    table = ModulusTable(("m", "x"), table={(i, j): phi(i, j) for i in range(12) for j in range(4)})
    assert transform_modulus_equiv(table)(m, x) == phi(m + x + 1, x)


def test_transformed_moduli_pass_the_uniform_check():
    res = modulus_suite(seed=2, count=10)
    assert res.passed, res.line()
