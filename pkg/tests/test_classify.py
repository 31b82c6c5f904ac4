import pytest
from hypothesis import given, settings, strategies as st

from probmine.classify import (
    formula_class, demorgan_dual, monotonicity, QF, EX, UN, GEN, MONO, ANTI, Syntactic,
    SemanticallyChecked,
)
from probmine.errors import NoOrderAtType
from probmine.kernel import EVENT, Arrow, NAT, parse_formula
from probmine.model import EvalBounds, evaluate, fleet_model, parse_model
from probmine.randgen import ENV_TYPES, make_rng, random_env, random_predicate

SEQ = {"A": Arrow(EVENT, NAT)}


@pytest.mark.parametrize("text, cls", [
    ("ex n:0. w in A n", EX),
    ("all k:0. ex n:0. w in A n & k <=0 n", GEN),
    ("ex i <= n : 0. w in A i", QF),
    ("all k:0. w in A k", UN),
    ("w in A 0 -> w in A 1", QF),
])
def test_formula_class(text, cls):
    assert formula_class(parse_formula(text, SEQ)).value == cls


def test_bounded_quantifiers_agree_with_unbounded_expansion():
    # the QF convention for bounded quantifiers is justified by evaluation agreement
    space = fleet_model("three")
    bounded = parse_formula("all n:0. ex i <= n : 0. w in A i", SEQ)
    expanded = parse_formula("all n:0. ex i:0. i <=0 n & w in A i", SEQ)
    env = {"A": [sorted(space.omega)[:1], [], sorted(space.omega)]}
    for o in space.omega:
        e = {**env, "w": o}
        assert evaluate(bounded, space, EvalBounds(nat_bound=2), e) == evaluate(expanded, space, EvalBounds(nat_bound=2), e)


def test_dual_pushes_negation_to_atoms():
    f = parse_formula("all k:0. ex n:0. w in A n", SEQ)
    assert demorgan_dual(f) == parse_formula("ex k:0. all n:0. !(w in A n)", SEQ)


def test_dual_flips_real_comparison():
    f = parse_formula("Pr(B) < lam", {"B": EVENT})
    assert demorgan_dual(f) == parse_formula("Pr(B) >= lam", {"B": EVENT})


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["two", "sub4", "three"]))
def test_double_dual_preserves_truth(seed, model):
    space = fleet_model(model)
    rng = make_rng(seed)
    env = random_env(rng, space)
    env["w"] = rng.choice(sorted(space.omega))
    f = random_predicate(rng, depth=3, unbounded=True)
    b = EvalBounds(nat_bound=2)
    assert evaluate(demorgan_dual(demorgan_dual(f)), space, b, env) == evaluate(f, space, b, env)
    assert evaluate(demorgan_dual(f), space, b, env) != evaluate(f, space, b, env)


def test_widening_bounded_exists_is_monotone():
    v = monotonicity(parse_formula("ex i <= n : 0. w in A i", SEQ), "n")
    assert v.direction == MONO
    assert isinstance(v.evidence, Syntactic)


def test_widening_bounded_forall_is_antimonotone():
    v = monotonicity(parse_formula("all i <= k : 0. w in A i", SEQ), "k")
    assert v.direction == ANTI
    assert isinstance(v.evidence, Syntactic)


def test_increasing_family_checked_on_model():
    space, _ = parse_model("omega = a b\nalgebra = powerset\nprob {a} = 1/2\nprob {b} = 1/2\n", "chain")
    f = parse_formula("w in A x", SEQ)
    env = {"A": [["a"], ["a", "b"], ["a", "b"], ["a", "b"]]}
    v = monotonicity(f, "x", oracle=(space, EvalBounds(nat_bound=3), env))
    assert v.direction == MONO
    assert isinstance(v.evidence, SemanticallyChecked)
    assert v.as_record()["direction"] == "Monotone"


def test_hint_is_recorded():
    f = parse_formula("w in A x", SEQ)
    v = monotonicity(f, "x", hint="AntiMonotone")
    assert v.direction == ANTI


def test_no_order_on_sample_points():
    with pytest.raises(NoOrderAtType):
        monotonicity(parse_formula("w in B", {"B": EVENT}), "w")
