"""Suite plumbing and negative controls showing the oracles can fail."""
import pytest

from probmine.kernel import parse_formula, EVENT, NAT, Arrow
from probmine.model import EvalBounds, evaluate, fleet_model, check_modulus
from probmine.prob import prenex_rewrite, Side
from probmine.suites import SuiteResult, SUITES, run_suite, _family, _least_modulus
from probmine.randgen import make_rng


def test_suite_line_formats():
    r = SuiteResult("algebra", "two", 4, cases=10)
    assert r.line() == "PASS suite=algebra model=two seed=4 cases=10"
    r.fail(case=3, formula="'x'")
    assert r.line() == "FAIL suite=algebra model=two seed=4 cases=10 failures=1 witness: case=3 formula='x'"


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suite("nope")


@pytest.mark.parametrize("name", ["roundtrip", "sigma"])
def test_small_runs_pass(name):
    res = run_suite(name, seed=1, count=5)
    assert res.passed and res.cases > 0
    assert res.seconds >= 0


def test_all_suites_listed():
    assert set(SUITES) == {"roundtrip", "interp-equiv", "outer-oracle", "algebra", "prenex", "sigma",
                           "fluct", "modulus"}


def test_forced_r5_is_unsound_without_its_side_condition():
    # each A x has content 1/2 but no point lies in all of them
    f = parse_formula("all x:0. Pr[ w in A x ] >= 1/2", {"A": Arrow(EVENT, NAT)})
    space = fleet_model("two")
    env = {"A": [["a"], ["b"], ["a"], ["b"]]}
    b = EvalBounds(nat_bound=3)
    out, _ = prenex_rewrite(f, "R5", Side(assume={"AntiMonotone"}))
    assert evaluate(f, space, b, env)
    assert not evaluate(out, space, b, env)


def test_untransformed_modulus_fails_the_uniform_check():
    rng = make_rng(0)
    failures = 0
    for _ in range(50):
        space = fleet_model(rng.choice(["two", "sub4", "three", "sub6"]))
        fam = _family(rng, space, 6, 5)
        phi = _least_modulus(space, fam, 5, 5, rng)
        assert check_modulus("PlusTwo", phi, fam, space, EvalBounds(nat_bound=5)).passed
        if not check_modulus("PlusOne", phi, fam, space, EvalBounds(nat_bound=2)).passed:
            failures += 1
    assert failures > 0
