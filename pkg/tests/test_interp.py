import pytest
from hypothesis import given, settings, strategies as st

from probmine.errors import UnsupportedNode
from probmine.interp import kuroda, dialectica, modified_realizability
from probmine.kernel import NAT, EVENT, Arrow, Var, Not, parse_formula, show
from probmine.model import EvalBounds, evaluate, fleet_model
from probmine.randgen import make_rng, random_logic


def test_kuroda_atom():
    f = parse_formula("c =0 0")
    assert kuroda(f) == Not(Not(f))


def test_kuroda_inserts_after_universals():
    f = parse_formula("all x:0. ex y:0. y >=0 x")
    assert show(kuroda(f)) == "!!(all x:0. !!(ex y:0. y >=0 x))"


def test_dialectica_skolemises_inner_existential():
    d = dialectica(parse_formula("all x:0. ex y:0. y >=0 x"))
    assert show(d.render()) == "ex Y:0(0). all x:0. (Y x) >=0 x"
    assert [v.name for v in d.exists_vars] == ["Y"]
    assert [v.name for v in d.forall_vars] == ["x"]


def test_dialectica_implication_with_existential_conclusion():
    d = dialectica(parse_formula("c =0 0 -> ex y:0. y >=0 c"))
    assert len(d.exists_vars) == 1 and not d.forall_vars
    u = d.exists_vars[0]
    assert u.type == NAT
    assert show(d.render()) == f"ex {u.name}:0. c =0 0 -> {u.name} >=0 c"


def test_mr_existential_witness():
    m = modified_realizability(parse_formula("ex z:0. z >=0 3"))
    assert m.witness_vars == (Var("z", NAT),)
    assert show(m.matrix) == "z >=0 3"


def test_mr_function_witness():
    m = modified_realizability(parse_formula("all x:0. ex y:0. y >=0 x"))
    assert [(v.name, v.type) for v in m.witness_vars] == [("Y", Arrow(NAT, NAT))]
    assert show(m.matrix) == "all x:0. (Y x) >=0 x"


def test_probability_nodes_are_rejected():
    f = parse_formula("Pr[ w in B ] >= 1/2", {"B": EVENT})
    with pytest.raises(UnsupportedNode):
        dialectica(f)
    with pytest.raises(UnsupportedNode):
        modified_realizability(f)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_translations_preserve_bounded_truth(seed):
    f = random_logic(make_rng(seed))
    space = fleet_model("trivial")
    b = EvalBounds(nat_bound=3, fun_bound=(3, 3))
    v = evaluate(f, space, b)
    assert evaluate(kuroda(f), space, b) == v
    assert evaluate(dialectica(f).render(), space, b) == v
    assert evaluate(modified_realizability(f).render(), space, b) == v
