from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from probmine.errors import FormulaSyntaxError, TypeMismatch, UnknownSort
from probmine.kernel import (
    NAT, OMEGA, EVENT, RAT, Arrow, pure, curry, hat_type, degree, pure_level, is_small, is_admissible,
    classify_type, parse_type, show_type, Var, Const, App, Union, NatLit, RatLit, AtomIn, NatCmp,
    Forall, Exists, ProbGeq, parse_formula, parse_term, show, typecheck, substitute, free_vars,
)
from probmine.kernel.typecheck import WellFormed
from probmine.randgen import ROUNDTRIP_CTX, random_formula, make_rng

A = Var("A", EVENT)
B = Var("B", EVENT)
C = Var("C", EVENT)
w = Var("w", OMEGA)


# ---------------------------------------------------------------- parsing

def test_parse_nested_quantifiers():
    f = parse_formula("all x:0. ex y:0. y >=0 x")
    x, y = Var("x", NAT), Var("y", NAT)
    assert f == Forall(x, Exists(y, NatCmp(">=", y, x)))


def test_parse_probability_atom():
    f = parse_formula("Pr[ w in A ] >= 1/2", {"A": EVENT})
    assert f == ProbGeq(AtomIn(w, A), RatLit(Fraction(1, 2)))


def test_term_where_formula_expected():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("all x:0. x")
    assert e.value.position == len("all x:0. x")


def test_syntax_error_reports_position_and_expectations():
    with pytest.raises(FormulaSyntaxError) as e:
        parse_formula("all x:0. ex y:0. y >=0 + x")
    assert e.value.position == 23
    assert e.value.expected


def test_free_variable_types_are_inferred():
    f = parse_formula("all x:0. f x >=0 c")
    assert free_vars(f) == {"f": Arrow(NAT, NAT), "c": NAT}


def test_parse_type_grammar():
    assert parse_type("Ev(0)") == Arrow(EVENT, NAT)
    assert parse_type("Q(Om)(0)") == Arrow(Arrow(RAT, OMEGA), NAT)
    assert parse_type("2") == pure(2)
    assert show_type(parse_type("0(0(0))")) == "0(0(0))"
    with pytest.raises(UnknownSort):
        parse_type("0(")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_show_parse_roundtrip(seed):
    f = random_formula(make_rng(seed), depth=6)
    assert parse_formula(show(f, ROUNDTRIP_CTX), ROUNDTRIP_CTX) == f


# ---------------------------------------------------------------- typing

def test_membership_has_type_zero():
    mem = Const("mem", Arrow(Arrow(NAT, EVENT), OMEGA))
    assert typecheck(App(App(mem, w), A)) == NAT


def test_union_of_events():
    assert typecheck(Union(A, B)) == EVENT


def test_content_of_a_point_is_a_type_error():
    with pytest.raises(TypeMismatch):
        typecheck(App(Const("P", Arrow(pure(1), EVENT)), w))


def test_formulas_are_well_formed():
    assert typecheck(parse_formula("Pr[ w in A ] >= 1/2", {"A": EVENT})) is WellFormed


# ---------------------------------------------------------------- types

@pytest.mark.parametrize("src, expected", [
    ("Om", "0"), ("1(Ev)", "1(0)"), ("0(Ev)(Om)", "0(0)(0)"), ("Q", "1"),
])
def test_hat_type(src, expected):
    assert hat_type(parse_type(src)) == parse_type(expected)


def test_type_predicates():
    one = pure(1)
    assert (pure_level(one), degree(one), is_small(one), is_admissible(one)) == (1, 1, True, True)
    sv = Arrow(EVENT, NAT)
    info = classify_type(sv)
    assert (info.is_pure, info.is_small, info.is_admissible) == (False, True, True)
    t = Arrow(NAT, pure(1))
    assert (pure_level(t), degree(t), is_small(t), is_admissible(t)) == (2, 2, False, True)


def test_curry_applies_arguments_in_order():
    t = curry(NAT, [NAT, EVENT])
    assert t == Arrow(Arrow(NAT, EVENT), NAT)


@given(st.integers(0, 4))
def test_pure_level_inverts_pure(n):
    assert pure_level(pure(n)) == n


# ---------------------------------------------------------------- substitution

def test_substitute_event():
    f = AtomIn(w, A)
    assert substitute(f, A, Union(B, C)) == AtomIn(w, Union(B, C))


def test_substitute_avoids_capture():
    x, y = Var("x", NAT), Var("y", NAT)
    f = Exists(y, NatCmp("=", y, x))
    out = substitute(f, x, y)
    y2 = out.var
    assert y2.name != "y"
    assert out == Exists(y2, NatCmp("=", y2, y))


def test_substitute_leaves_bound_occurrences():
    x = Var("x", NAT)
    f = Forall(x, NatCmp("<=", x, NatLit(3)))
    assert substitute(f, x, NatLit(1)) == f


def test_substitute_rejects_wrong_type():
    with pytest.raises(TypeMismatch):
        substitute(AtomIn(w, A), A, NatLit(0))


def test_parse_term():
    assert parse_term("A cup B", {"A": EVENT, "B": EVENT}) == Union(A, B)
