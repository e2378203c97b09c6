import random

import pytest

from fdva import gallery
from fdva.automata import empty_set, full_set, is_cyclic, isomorphic, member, minimize
from fdva.encoding import BasisParams
from fdva.formula import emit, parse
from fdva.sampling import random_formula
from fdva.synthesis import (Verdict, cyclic_reduction, decide_and_synthesize,
                            dim1_periodicity_oracle, finite_language_formula, formula_eval,
                            orthant_subproblems, points_formula, positive_reduction, synthesize)
from fdva.translate import formula_to_fdva
from oracles import box

P1 = BasisParams(2, 1)
P2 = BasisParams(2, 2)


def auto(text, p=P2):
    return minimize(formula_to_fdva(parse(text), p))


def defines(f, a, bound=12):
    b = formula_to_fdva(f, a.params)
    return all(member(b, x) == member(a, x) for x in box(a.m, bound))


def test_formula_eval():
    assert formula_eval(parse("x1 % 3 = 0"), (6,))
    assert formula_eval(parse("x1 <= 2*x2"), (1, 1))
    for x in box(1, 10):
        assert formula_eval(parse("!(x1 >= 2)"), x) == (not formula_eval(parse("x1 >= 2"), x))
    with pytest.raises(ValueError):
        formula_eval(parse("E y. x1 = y"), (1,))


def test_points_formula():
    pts = {(0, 0), (0, 1), (1, 1), (3, -2), (4, -2)}
    f = points_formula(pts, 2)
    assert {x for x in box(2, 6) if formula_eval(f, x)} == pts
    assert emit(points_formula(set(), 2)) == "false"


def test_finite_language_formula():
    assert formula_eval(finite_language_formula([()], P1), (0,))
    f = finite_language_formula([(0, 1, 1)], P1)
    assert {x for (x,) in box(1, 20) if formula_eval(f, (x,))} == {6}
    assert emit(f) == "x1 = 6"


def test_cyclic_reduction_cyclic_input():
    a = auto("x1 % 3 = 0", P1)
    subs, combine = cyclic_reduction(a)
    assert subs == [(a.initial, a)]
    g = parse("x1 >= 1")
    assert combine([g]) == g


def test_cyclic_reduction_singleton():
    a = auto("x1 = 6", P1)
    assert not is_cyclic(a)
    subs, combine = cyclic_reduction(a)
    f = combine([synthesize(sub) for _, sub in subs])
    assert defines(f, a, 40)


def test_cyclic_reduction_random():
    rng = random.Random(3)
    checked = 0
    while checked < 5:
        f = random_formula(rng, 2)
        a = minimize(formula_to_fdva(f, BasisParams(rng.choice([2, 3]), 2)))
        if is_cyclic(a) or a.size > 40:
            continue
        subs, combine = cyclic_reduction(a)
        assert all(is_cyclic(sub) for _, sub in subs)
        assert defines(combine([synthesize(sub) for _, sub in subs]), a, 8)
        checked += 1


def test_positive_reduction_nonneg_input():
    a = auto("x1 >= 0 & x2 >= 0 & x1 <= 2*x2")
    subs, _ = positive_reduction(a)
    assert [s for s, _ in subs] == [(0, 0)]
    assert isomorphic(subs[0][1], a)


def test_positive_reduction_integers():
    a = minimize(full_set(P1))
    subs, combine = positive_reduction(a)
    # every state accepts both sign vectors, so nothing needs separating
    assert subs == []
    f = combine([])
    assert defines(f, a, 20)


@pytest.mark.parametrize("text", ["x1 % 3 = 1", "x1 >= -4", "x1 <= 2 | x1 % 2 = 0"])
def test_positive_reduction_mixed_signs(text):
    a = auto(text, P1)
    subs, combine = positive_reduction(a)
    f = combine([synthesize(sub) for _, sub in subs])
    assert isomorphic(minimize(formula_to_fdva(f, P1)), a)


def test_orthant_subproblems():
    a = auto("x1 >= -3 & x2 < 2")
    subs = orthant_subproblems(a)
    assert set(subs) == set(P2.sign_vectors())
    assert orthant_subproblems(auto("x1 >= 0 & x2 >= 0")).keys() == {(0, 0)}


def test_decide_values():
    v = decide_and_synthesize(empty_set(P2))
    assert v.presburger and emit(v.formula) == "false"
    v = decide_and_synthesize(minimize(gallery.leq2()))
    assert v.presburger
    assert isomorphic(minimize(formula_to_fdva(v.formula, P2)), minimize(gallery.leq2()))
    assert v.render().startswith("Presburger: ")
    v = decide_and_synthesize(gallery.powers_of_two())
    assert not v.presburger and v.render().startswith("NotPresburger(")
    assert not dim1_periodicity_oracle(gallery.powers_of_two())
    v = decide_and_synthesize(full_set(P2))
    assert v.presburger and isomorphic(minimize(formula_to_fdva(v.formula, P2)), full_set(P2))


def test_verdict_render():
    assert Verdict(False, None, "components", "").render() == "NotPresburger(components)"
    assert Verdict(False, None, "synthesis", "why").render() == "NotPresburger(synthesis: why)"


def test_dim1_oracle():
    assert dim1_periodicity_oracle(auto("x1 % 3 = 0 & x1 >= 0", P1))
    assert dim1_periodicity_oracle(auto("x1 >= 100", P1))
    assert dim1_periodicity_oracle(auto("x1 % 6 = 1 | x1 = 37", BasisParams(3, 1)))
    assert not dim1_periodicity_oracle(gallery.powers_of_two())
    with pytest.raises(ValueError):
        dim1_periodicity_oracle(full_set(P2))


@pytest.mark.parametrize("text,r", [
    ("x1 % 3 = 0 & x1 >= 0", 2), ("x1 >= 5", 3), ("x1 = 6", 2), ("x1 <= -3 | x1 % 4 = 1", 2),
    ("x1 > 2 & x1 < 9", 3), ("x1 % 5 = 2 | x1 = 7", 2),
])
def test_dim1_agreement(text, r):
    a = auto(text, BasisParams(r, 1))
    v = decide_and_synthesize(a)
    assert v.presburger
    assert dim1_periodicity_oracle(a)


@pytest.mark.parametrize("text", [
    "x1 <= 2*x2", "x1 - x2 = 1", "x1 + x2 % 3 = 0", "5 <= x1 & x1 <= 9 & x2 >= x1",
    "E y. x1 = 2*y & y <= x2", "x1 = 2*x2 | x2 = 2*x1",
])
def test_round_trip(text):
    a = auto(text)
    v = decide_and_synthesize(a)
    assert v.presburger
    assert isomorphic(minimize(formula_to_fdva(v.formula, P2)), a)
