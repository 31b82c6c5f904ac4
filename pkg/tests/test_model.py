from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from probmine.errors import NotAnAlgebra, NotAdditive, BadRational, HorizonExceeded, UnboundVariable
from probmine.kernel import OMEGA, EVENT, NAT, Arrow, parse_formula
from probmine.model import (
    EvalBounds, evaluate, outer_inner_content, phi_set, parse_model, fleet, fleet_model, FLEET_NAMES,
    disjointify, majorizes, count_fluctuations, count_fluctuations_brute, check_modulus,
)
from probmine.prob import ModulusTable

SUB4 = """omega = a b c d
set {a b}
set {c d}
prob {a b} = 1/2
"""
POINT = {"p": OMEGA}


def sub4():
    return parse_model(SUB4, "sub4")[0]


# ---------------------------------------------------------------- model files

def test_powerset_coin():
    space, bounds = parse_model("omega = a b\nalgebra = powerset\nprob {a} = 1/2\nprob {b} = 1/2\n")
    assert space.P({"a"}) == Fraction(1, 2)
    assert len(space.algebra) == 4
    assert bounds is None


def test_proper_subalgebra():
    space = sub4()
    assert set(space.algebra) == {frozenset(), frozenset("ab"), frozenset("cd"), frozenset("abcd")}
    assert space.P({"c", "d"}) == Fraction(1, 2)


def test_missing_complement_is_not_an_algebra():
    with pytest.raises(NotAnAlgebra):
        parse_model("omega = a b c\nset {a b}\nprob {a b} = 1/2\n")


def test_contents_must_sum_to_one():
    with pytest.raises(NotAdditive):
        parse_model("omega = a b\nalgebra = powerset\nprob {a} = 1/2\nprob {b} = 1/3\n")


def test_bad_rational():
    with pytest.raises(BadRational):
        parse_model("omega = a b\nalgebra = powerset\nprob {a} = half\nprob {b} = 1/2\n")


def test_bounds_line():
    _, b = parse_model(SUB4 + "bounds nat=4 fun=2x5\n")
    assert (b.nat_bound, b.fun_bound) == (4, (2, 5))


def test_fleet_has_the_subalgebra_space():
    assert len(FLEET_NAMES) >= 5
    assert fleet_model("sub4").algebra == sub4().algebra


# ---------------------------------------------------------------- evaluation

@pytest.mark.parametrize("space", fleet(), ids=FLEET_NAMES)
def test_whole_space_has_content_one(space):
    assert evaluate(parse_formula("Pr(empty^c) = 1"), space)


def test_outer_content_of_a_point():
    f = parse_formula("Pr[ (eq w p) =0 0 ] >= 1/2", POINT)
    assert evaluate(f, sub4(), env={"p": "a"})
    assert not evaluate(parse_formula("Pr[ (eq w p) =0 0 ] >= 3/4", POINT), sub4(), env={"p": "a"})


def test_inner_content_of_a_point():
    f = parse_formula("Pr[ (eq w p) =0 0 ] <= 0", POINT)
    assert evaluate(f, sub4(), env={"p": "a"})


def test_outer_and_inner_of_a_non_event():
    pred = parse_formula("(eq w p) =0 0", POINT)
    space = sub4()
    assert phi_set(pred, space, env={"p": "a"}) == frozenset("a")
    assert outer_inner_content(pred, space, env={"p": "a"}) == Fraction(1, 2)
    assert outer_inner_content(pred, space, side="inner", env={"p": "a"}) == 0


def test_measurable_sets_collapse():
    space = fleet_model("three")
    for a in space.algebra:
        assert space.outer(a) == space.inner(a) == space.P(a)


def test_empty_set_has_outer_content_zero():
    assert sub4().outer(frozenset()) == 0


def test_free_variable_needs_a_value():
    with pytest.raises(UnboundVariable):
        evaluate(parse_formula("Pr[ (eq w p) =0 0 ] <= 0", POINT), sub4())


def test_function_quantifier_is_bounded():
    # some g:0(0) with g 0 = 2 exists only when results reach 2
    f = parse_formula("ex g:0(0). g 0 =0 2")
    assert evaluate(f, sub4(), EvalBounds(fun_bound=(1, 2)))
    assert not evaluate(f, sub4(), EvalBounds(fun_bound=(1, 1)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FLEET_NAMES), st.data())
def test_outer_content_is_least_superset_content(name, data):
    space = fleet_model(name)
    pts = sorted(space.omega)
    s = frozenset(data.draw(st.sets(st.sampled_from(pts))))
    sup = [a for a in space.algebra if s <= a]
    sub = [a for a in space.algebra if a <= s]
    assert space.outer(s) == min(space.P(a) for a in sup)
    assert space.inner(s) == max(space.P(a) for a in sub)
    assert space.inner(s) <= space.outer(s)
    assert space.outer(s) == 1 - space.inner(space.full - s)


# ---------------------------------------------------------------- sets and majorization

def test_disjointify():
    assert disjointify([{"a", "b"}, {"b", "c"}]) == [frozenset("ab"), frozenset("c")]
    assert disjointify([{"a"}, {"b"}]) == [frozenset("a"), frozenset("b")]


@given(st.lists(st.sets(st.sampled_from("abcde")), min_size=1, max_size=5))
def test_disjointify_keeps_partial_unions(sets):
    out = disjointify(sets)
    for i in range(len(sets)):
        assert frozenset().union(*out[:i + 1]) == frozenset().union(*map(frozenset, sets[:i + 1]))
        for j in range(i):
            assert not out[i] & out[j]


def test_majorize_sample_point():
    space = fleet_model("two")
    assert majorizes(1, "a", OMEGA, space)


def test_majorize_event_by_content():
    space = fleet_model("two")
    assert not majorizes(0, frozenset("a"), EVENT, space)
    assert majorizes(1, frozenset("a"), EVENT, space)


def test_majorize_event_sequences():
    space = fleet_model("two")
    t = Arrow(EVENT, NAT)
    seq = [frozenset("a"), frozenset("ab"), frozenset()]

    def b(n):
        return seq[min(n, 2)]

    assert majorizes(lambda n: 1, b, t, space)
    assert not majorizes(lambda n: 0, b, t, space)


# ---------------------------------------------------------------- fluctuations

def test_constant_sequence_has_no_fluctuations():
    assert count_fluctuations([Fraction(1, 3)] * 6, 0, 6) == 0


def test_alternating_sequence():
    assert count_fluctuations([0, 1, 0, 1], 1, 4) == 3
    assert count_fluctuations([0, 1, 0, 1], 1, 3) == 2


def test_horizon_beyond_sequence():
    with pytest.raises(HorizonExceeded):
        count_fluctuations([0, 1], 0, 3)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([0, Fraction(1, 4), Fraction(1, 2), 1]), max_size=7), st.integers(0, 3))
def test_dp_count_matches_brute_force(seq, k):
    assert count_fluctuations(seq, k, len(seq)) == count_fluctuations_brute(seq, k, len(seq))


# ---------------------------------------------------------------- modulus checks

def test_constant_process_has_rate_zero():
    space = fleet_model("two")
    process = [{"a": Fraction(1, 3), "b": 0}] * 4
    rep = check_modulus("RateAS", lambda m, k: 0, process, space, EvalBounds(nat_bound=2))
    assert rep.passed


def test_full_events_occur_infinitely_often():
    space = fleet_model("two")
    data = [space.omega] * 5
    assert check_modulus("IO_pointwise", lambda m, k: k, data, space, EvalBounds(nat_bound=3)).passed


def test_vanishing_events_fail_with_witness():
    space = fleet_model("two")
    data = [space.omega] + [[]] * 5
    rep = check_modulus("IO_pointwise", lambda m, k: k, data, space, EvalBounds(nat_bound=3))
    assert not rep.passed
    assert rep.counterexample["k"] == 1
    assert rep.line().startswith("FAIL kind=IO_pointwise model=two witness=m=1,k=1,bound=1,content=0")


def test_plus_two_and_plus_one():
    space = fleet_model("two")
    data = [[["a"], ["a", "b"]], [[], ["b"], ["a", "b"]]]
    phi = ModulusTable.from_expr("x + 1")
    b = EvalBounds(nat_bound=3)
    assert check_modulus("PlusTwo", phi, data, space, b).passed
    assert check_modulus("PlusOne", phi, data, space, b).passed
    assert not check_modulus("PlusTwo", ModulusTable.from_expr("0"), data, space, b).passed
