import itertools
import random

import pytest

from fdva import gallery
from fdva.automata import (Fdva, FdvaError, apply_sign_flip, check_saturated, combine, complement,
                           detectability_pairs, dumps, dumps_ndd, empty_set, equivalent, eyes,
                           from_ndd, full_set, intersect_nonneg, is_empty, isomorphic, loads,
                           loads_ndd, make_fdva, member, minimize, move_initial, nonneg_set,
                           replace_final, to_ndd)
from fdva.encoding import BasisParams, decompose, flip_signs, gamma, in_orthant
from fdva.formula import evaluate, parse
from fdva.translate import formula_to_fdva
from oracles import box, qf_formula

P1 = BasisParams(2, 1)
P2 = BasisParams(2, 2)


def auto(text, r=2, m=2):
    return formula_to_fdva(parse(text), BasisParams(r, m))


def random_autos(seed, count, m=2):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        p = BasisParams(rng.choice([2, 3]), m)
        f = qf_formula(rng, m)
        out.append((f, formula_to_fdva(f, p)))
    return out


def test_saturation():
    assert check_saturated(empty_set(P1))
    assert check_saturated(gallery.naturals())
    one = make_fdva(P1, [0], [[0, 0]], 0, [[(0,)]])
    assert check_saturated(one)
    # reading the sign digit 1 leads to a state that rejects the sign vector 1
    bad = make_fdva(P1, [0, 0], [[0, 1], [1, 1]], 0, [[(1,)], []])
    assert not check_saturated(bad)


def test_member_values():
    n = gallery.naturals()
    assert member(n, (5,)) and not member(n, (-1,))
    assert member(gallery.leq2(), (1, 1)) and not member(gallery.leq2(), (3, 1))
    with pytest.raises(FdvaError):
        member(n, (1, 2))


def test_boolean_algebra():
    for f, a in random_autos(1, 8):
        e = empty_set(a.params)
        assert isomorphic(combine(a, e, "union"), minimize(a))
        assert is_empty(combine(a, a, "symdiff"))
        assert isomorphic(complement(complement(a)), minimize(a))
    assert isomorphic(complement(empty_set(P2)), full_set(P2))


def test_boolean_box():
    autos = random_autos(2, 6)
    for (f, a), (g, b) in zip(autos[::2], autos[1::2]):
        if a.params != b.params:
            b = formula_to_fdva(g, a.params)
        u, i, d = combine(a, b, "union"), combine(a, b, "intersection"), combine(a, b, "difference")
        c = complement(a)
        for x in box(2, 20):
            fa, fb = evaluate(f, x), evaluate(g, x)
            assert member(u, x) == (fa or fb)
            assert member(i, x) == (fa and fb)
            assert member(d, x) == (fa and not fb)
            assert member(c, x) == (not fa)


def test_minimize():
    leq = gallery.leq2()
    assert minimize(leq) == leq
    # a duplicated copy of every state still minimizes to the original
    n = leq.size
    delta = [tuple(k + n * (b % 2) for b, k in enumerate(row)) for row in leq.delta] * 2
    twin = Fdva(leq.params, leq.levels * 2, tuple(delta), 0, leq.final * 2)
    assert minimize(twin) == leq
    for _, a in random_autos(3, 6):
        assert minimize(combine(a, a, "union")) == minimize(a)


def test_equivalence():
    assert equivalent(auto("x1 <= 2*x2 & x1 >= 0"), auto("!(x1 > 2*x2 | x1 < 0)"))
    assert not equivalent(gallery.naturals(), gallery.integers())


def test_move_initial():
    plus = minimize(gallery.plus())
    assert move_initial(plus, plus.initial) == plus
    shifted = move_initial(plus, plus.run(plus.initial, (1, 1, 0)))
    for x in box(3, 4):
        assert member(shifted, x) == (x[0] + x[1] + 1 == x[2])
    with pytest.raises(FdvaError):
        move_initial(plus, 1)


def test_move_initial_box():
    a = minimize(auto("x1 - 2*x2 % 5 = 1 | x1 + x2 >= 3", r=3))
    for w in [(0, 1), (2, 2, 1, 0)]:
        b = move_initial(a, a.run(a.initial, w))
        for x in box(2, 10):
            assert member(b, x) == member(a, gamma(w, x, a.params))


def test_replace_final():
    a = minimize(gallery.leq2())
    assert replace_final(a, a.final) == a
    signs = a.params.sign_vectors()
    full = replace_final(a, {q: signs for q in a.principal()})
    assert equivalent(full, full_set(a.params))
    s0 = (1, 0)
    orth = replace_final(a, {q: [s0] for q in a.principal()})
    for x in box(2, 6):
        assert member(orth, x) == in_orthant(s0, x)
    with pytest.raises(FdvaError):
        replace_final(a, {a.initial: [s0]})


def test_detectability_pairs():
    one = full_set(P1)
    for w1, w2 in detectability_pairs(one):
        assert one.run(0, w1) == one.run(0, w2)
    for _, a in random_autos(4, 10):
        pairs = detectability_pairs(a)
        assert len(pairs) <= a.r * a.size
        for w1, w2 in pairs:
            assert a.run(a.initial, w1) == a.run(a.initial, w2)


def test_eyes():
    one = full_set(P1)
    assert eyes(one, (0,)) == [(frozenset({0}), frozenset({0}))]
    pic, names = gallery.eye_picture()
    ((eye, kernel),) = eyes(pic, (1,))
    assert {names[k] for k in kernel} == gallery.EYE_KERNEL
    assert len(eye) == 26
    for _, a in random_autos(5, 6):
        for s in a.params.sign_vectors():
            for _, ker in eyes(a, s):
                assert {a.run(q, s) for q in ker} == set(ker)


def test_sign_flip():
    for _, a in random_autos(6, 5):
        zero = (0,) * a.m
        assert isomorphic(minimize(apply_sign_flip(a, zero)), minimize(a))
        top = a.r - 1
        s = (top,) + (0,) * (a.m - 1)
        b = minimize(apply_sign_flip(a, s))
        assert isomorphic(minimize(apply_sign_flip(b, s)), minimize(a))
        for x in box(2, 8):
            assert member(b, flip_signs(s, x)) == member(a, x)


def test_intersect_nonneg():
    for m in (1, 2):
        assert isomorphic(minimize(intersect_nonneg(full_set(BasisParams(2, m)))), nonneg_set(BasisParams(2, m)))
    n = gallery.naturals()
    assert isomorphic(minimize(intersect_nonneg(n)), minimize(n))
    for _, a in random_autos(7, 4):
        b = minimize(intersect_nonneg(a))
        for x in box(2, 10):
            assert member(b, x) == (member(a, x) and min(x) >= 0)


def test_ndd_round_trip():
    for _, a in random_autos(8, 8):
        assert isomorphic(from_ndd(to_ndd(a), a.params), minimize(a))
    e = empty_set(P2)
    assert isomorphic(from_ndd(to_ndd(e), P2), e)


def test_ndd_singleton_six():
    d = to_ndd(auto("x1 = 6", m=1))
    assert d.accepts((0, 1, 1, 0)) and d.accepts((0, 1, 1, 0, 0, 0))
    assert not d.accepts((0, 1, 1)) and not d.accepts((0, 1, 1, 1))
    accepted = [w for n in range(1, 7) for w in itertools.product((0, 1), repeat=n)
                if d.accepts(w)]
    assert accepted == [(0, 1, 1) + (0,) * k for k in range(1, 4)]
    assert decompose((6,), P1).word == (0, 1, 1)


def test_text_formats():
    a = minimize(gallery.plus())
    assert loads(dumps(a)) == a
    d = to_ndd(a)
    d2, m = loads_ndd(dumps_ndd(d, 3))
    assert d2 == d and m == 3
    with pytest.raises(FdvaError):
        loads("trans 0 0 0\n")
    with pytest.raises(FdvaError):
        loads("fdva r=2 m=1\nstate 0 level=0\ninitial 0\ntrans 0 0 1\ntrans 0 1 0\n")
