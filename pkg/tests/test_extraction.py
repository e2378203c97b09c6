import itertools
import random

import pytest

from fdva import gallery
from fdva.automata import (full_set, intersect_nonneg, is_cyclic, isomorphic, loop_word,
                           member, minimize, move_initial, replace_final)
from fdva.encoding import BasisParams, xi
from fdva.extraction import (boolean_combination_solve, boundary, components, degenerate_equiv,
                             destruction_check, detectable_pattern_partition,
                             evaluate_signatures, final_function_from_membership,
                             halfspace_detectable, invariant_lattice, terminal_components,
                             vec_saff, vgt, vgt_fixpoint_violations)
from fdva.formula import parse
from fdva.linalg import AffineSpace, Lattice, VectorSpace
from fdva.polyhedra import Hyperplane
from fdva.sampling import random_formula
from fdva.semiaffine import (SemiPattern, from_spaces, normalize_components, pattern_invariants,
                             saff_of_cyclic_check)
from fdva.translate import formula_to_fdva
from oracles import box

Q2 = VectorSpace.full(2)


def auto(text, r=2, m=2):
    return minimize(formula_to_fdva(parse(text), BasisParams(r, m)))


def spaces_of(a):
    return sorted((c.vgt for c in components(a) if c.untransient), key=lambda v: v.dim)


def test_components_singleton_one():
    a = minimize(gallery.singleton_one())
    by_state = {}
    for c in components(a):
        for q in c.states:
            by_state[q] = c
    zero_state = a.run(a.initial, (1,))
    sink = a.run(a.initial, (0,))
    assert not by_state[a.initial].untransient
    assert by_state[zero_state].untransient and by_state[sink].untransient


def test_components_self_loop():
    (c,) = components(full_set(BasisParams(2, 1)))
    assert c.untransient and c.terminal


def test_vgt_plus():
    a = minimize(gallery.plus())
    terms = terminal_components(a)
    assert len(terms) == 1
    assert terms[0].vgt == VectorSpace.span([(1, 0, 1), (0, 1, 1)], 3)
    others = [c for c in components(a) if c.untransient and not c.terminal]
    assert [c.vgt for c in others] == [VectorSpace.full(3)]


def test_vgt_valuation():
    a = minimize(gallery.valuation())
    got = spaces_of(a)
    assert got == [VectorSpace.zero(2), VectorSpace.span([(1, 0)], 2), Q2]


def test_vgt_fixpoints_and_loop_choice():
    rng = random.Random(1)
    for a in [gallery.plus(), gallery.valuation(), gallery.leq2(), gallery.union_of_lines(),
              auto("x1 - 3*x2 % 4 = 1 | x1 >= 2*x2", r=3)]:
        a = minimize(a)
        for c in components(a):
            if not c.untransient:
                continue
            assert vgt_fixpoint_violations(a, c, c.vgt, c.anchors) == []
            # a loop word that goes around twice gives the same space
            words = {}
            for q in c.states:
                w = loop_word(a, q)
                words[q] = w * rng.randint(1, 2) if w else w
            assert vgt(a, c, words)[0] == c.vgt


def test_vec_saff():
    lines = vec_saff(minimize(gallery.union_of_lines()))
    assert lines == from_spaces([VectorSpace.span([(2, 1)], 2), VectorSpace.span([(1, 2)], 2)], 2)
    assert vec_saff(auto("false")).is_empty
    for m in (1, 2, 3):
        n = auto(" & ".join(f"x{i + 1} >= 0" for i in range(m)), m=m)
        assert vec_saff(n) == from_spaces([VectorSpace.full(m)], m)


def test_terminal_hull_property():
    a = auto("x1 + 2*x2 >= 3 & x1 - x2 % 3 = 1 | x1 = 2*x2 + 1")
    for c in terminal_components(a):
        for q in c.states:
            assert vec_saff(move_initial(a, q)) == from_spaces([c.vgt], 2)


def test_degenerate_equiv():
    a = minimize(gallery.leq2())
    q0 = a.initial
    q1 = a.run(q0, (1, 0))
    assert degenerate_equiv(a, Q2, q0, q0)
    assert degenerate_equiv(a, Q2, q0, q1)
    sink = a.run(q0, (0, 1, 0, 1))
    b = auto("x1 % 3 = 0 | x1 <= 2*x2 & x2 >= 0 | x1 + x2 = 4")
    qs = b.principal()
    for x, y, z in itertools.combinations(qs, 3):
        e1, e2, e3 = (degenerate_equiv(b, Q2, x, y), degenerate_equiv(b, Q2, y, z),
                      degenerate_equiv(b, Q2, x, z))
        assert not (e1 and e2) or e3
    assert sink in a.principal()


@pytest.mark.parametrize("text,m,pattern", [
    ("x1 % 3 = 0", 1, SemiPattern.make([(0,)], Lattice.from_generators([(3,)], 1))),
    ("true", 2, SemiPattern.make([(0, 0)], Lattice.standard(2))),
    ("x1 + x2 % 3 = 0", 2, SemiPattern.make([(0, 0)], Lattice.from_generators([(1, -1), (3, 0)], 2))),
])
def test_invariant_lattice(text, m, pattern):
    a = auto(text, m=m)
    w = loop_word(a, a.initial)
    v = VectorSpace.full(m)
    assert invariant_lattice(a, w, v) == pattern_invariants(pattern)


def test_boundary():
    assert boundary(auto("x1 >= 0 & x2 >= 0"), Q2) == []
    (h,) = boundary(minimize(gallery.leq2()), Q2)
    assert h == Hyperplane.make(Q2, (1, -2))
    fan = auto("x1 >= 0 & x2 >= 0 & (x2 >= 4*x1 | x1 >= 4*x2)")
    got = {h.normal for h in boundary(fan, Q2)}
    assert got == {Hyperplane.make(Q2, (4, -1)).normal, Hyperplane.make(Q2, (1, -4)).normal}


def test_detectable_pattern_partition():
    a = auto("x1 % 3 = 0", m=1)
    lat3 = Lattice.from_generators([(3,)], 1)
    zero, good = detectable_pattern_partition(a, lat3, [(0,), (1,), (2,)])
    assert frozenset({(0,)}) in good
    parts = [set(g) for g in good] + [set(zero)]
    assert set().union(*parts) == {(0,), (1,), (2,)}
    assert sum(map(len, parts)) == 3
    n = minimize(intersect_nonneg(full_set(BasisParams(2, 1))))
    zero, good = detectable_pattern_partition(n, lat3, [(0,), (1,), (2,)])
    # one state: only the empty set and all of Z are detectable
    assert good == [frozenset({(0,), (1,), (2,)})] and not zero


def test_halfspace_detectable():
    a = minimize(gallery.leq2())
    z2 = SemiPattern.make([(0, 0)], Lattice.standard(2))
    h = Hyperplane.make(Q2, (1, -2))
    origin = (0, 0)
    assert halfspace_detectable(a, z2, z2, h, origin, ("<", ">="))
    one = full_set(BasisParams(2, 2))
    assert halfspace_detectable(one, z2, z2, h, origin, ("<=", ">"))
    empty = SemiPattern((), Lattice.standard(2))
    # x1 <= 2 x2 is the "<=" side of x1 - 2 x2 = 0
    assert halfspace_detectable(a, z2, empty, h, origin, ("<=", ">"))
    final = final_function_from_membership(a, lambda x: x[0] <= 2 * x[1])
    assert isomorphic(minimize(replace_final(a, final)), a)
    with pytest.raises(ValueError):
        halfspace_detectable(a, z2, z2, h, origin, ("<", ">"))


def test_final_function_from_membership():
    a = auto("x1 >= 0 & x2 >= 0 & x1 - x2 % 3 = 0 | x1 >= 0 & x2 >= 0 & x1 <= 2*x2")
    none = replace_final(a, final_function_from_membership(a, lambda x: False))
    assert all(not member(none, x) for x in box(2, 6))
    same = replace_final(a, final_function_from_membership(a, lambda x: member(a, x)))
    assert isomorphic(minimize(same), a)
    pat = replace_final(a, final_function_from_membership(a, lambda x: (x[0] - x[1]) % 3 == 0))
    for x in box(2, 15):
        assert member(pat, x) == (min(x) >= 0 and (x[0] - x[1]) % 3 == 0)


def test_boolean_combination_solve():
    A, B = {1, 2}, {2, 3}
    sigs = boolean_combination_solve(A, [A, B], {0, 1, 2, 3})
    assert {e for e in range(4) if evaluate_signatures(sigs, (e in A, e in B))} == A
    assert boolean_combination_solve(set(), [A, B], {0, 1, 2, 3}) == frozenset()
    sigs = boolean_combination_solve(A ^ B, [A, B], {0, 1, 2, 3})
    assert {e for e in range(4) if evaluate_signatures(sigs, (e in A, e in B))} == {1, 3}
    assert boolean_combination_solve({1}, [A], {0, 1, 2}) is None


def test_destruction_check():
    p = BasisParams(2, 1)
    assert not destruction_check(AffineSpace.make((0,), VectorSpace.full(1)), (0,), p)
    assert destruction_check(AffineSpace.empty(1), (0,), p)
    five = AffineSpace.point((5,))
    assert destruction_check(five, (0,), p)
    # the iterated inverse images of {5} under x -> 2x die out
    pts = {5}
    for _ in range(5):
        pts = {x for x in range(-20, 21) if 2 * x in pts}
    assert pts == set()


def test_cyclic_sets_lie_in_anchored_hull():
    rng = random.Random(6)
    done = 0
    while done < 20:
        f = random_formula(rng, 2)
        a = minimize(formula_to_fdva(f, BasisParams(rng.choice([2, 3]), 2)))
        if not is_cyclic(a) or vec_saff(a).is_empty:
            continue
        w = loop_word(a, a.initial)
        hull = normalize_components([AffineSpace.make(xi(w, a.params), c.space)
                                     for c in vec_saff(a).components], 2)
        assert saff_of_cyclic_check(hull, w, a.params)
        for x in box(2, 8):
            if member(a, x):
                assert hull.contains(x)
        done += 1
