import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from fdva.linalg import (AffineLattice, AffineSpace, Lattice, VectorSpace, affine_integer_point,
                         affine_lattice_intersect, characteristic_sequence, gamma_inf_lattice,
                         gamma_inv_lattice, gamma_inv_lattice_direct, h_r, h_r_inf, lattice_index,
                         lattice_intersect, orth_complement, project_affine, relatively_prime_to_r,
                         vspace_add_vector, vspace_from_generators)
from oracles import box, digit_map_power, in_z_span, random_basis, recombine

vec = st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))


def test_vector_space_add():
    z = VectorSpace.zero(2)
    assert vspace_add_vector(z, (0, 0)) is z
    v = vspace_add_vector(z, (2, 1))
    assert v.indices == (0,) and v.basis == ((F(1), F(1, 2)),)
    assert vspace_add_vector(v, (4, 2)) == v


def test_vector_space_generators():
    assert vspace_from_generators([], 3) == VectorSpace.zero(3)
    # every pair is a basis of Q^2, however large the coordinates
    for n in range(6):
        assert vspace_from_generators([(2 * n + 1, n), (2, 1)], 2) == VectorSpace.full(2)
    ref = vspace_from_generators([(2, 1)], 2)
    assert vspace_from_generators([(2, 1), (4, 2)], 2) == ref
    assert vspace_from_generators([(-6, -3)], 2) == ref


@given(st.lists(vec, max_size=4), st.randoms())
def test_vector_space_permutation_invariant(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    ys = [tuple(3 * c for c in y) for y in ys]
    assert vspace_from_generators(xs, 3) == vspace_from_generators(ys, 3)


def test_orth_values():
    assert orth_complement(VectorSpace.full(3)) == VectorSpace.zero(3)
    assert orth_complement(VectorSpace.span([(2, 1)], 2)) == VectorSpace.span([(1, -2)], 2)


@given(st.lists(vec, max_size=4))
def test_orth_dimension(xs):
    v = VectorSpace.span(xs, 3)
    o = orth_complement(v)
    assert v.dim + o.dim == 3
    assert all(sum(a * b for a, b in zip(x, y)) == 0 for x in v.basis for y in o.basis)


def test_project_affine():
    a = AffineSpace.make((0, 1), VectorSpace.span([(2, 1)], 2))
    assert project_affine(a, (2, 2)) == (2, 2)
    y = project_affine(a, (3, -2))
    assert y == (F(6, 5), F(8, 5))
    assert project_affine(a, y) == y


def test_hermite_values():
    lat = Lattice.from_generators([(2, 0), (0, 2)], 2)
    assert lat.hermite == ((2, 0), (0, 2))
    assert Lattice.from_generators([(1, 0), (0, 1), (1, 1)], 2) == Lattice.standard(2)


def test_hermite_regenerations():
    rng = random.Random(11)
    for _ in range(30):
        m = rng.choice([2, 3])
        basis = random_basis(rng, m, rng.randint(1, m))
        ref = Lattice.from_generators(basis, m)
        for _ in range(5):
            assert Lattice.from_generators(recombine(rng, basis), m) == ref


def test_integer_points():
    assert Lattice.integer_points(VectorSpace.full(2)) == Lattice.standard(2)
    line = Lattice.integer_points(VectorSpace.span([(2, 1)], 2))
    assert line == Lattice.from_generators([(2, 1)], 2)
    brute = [x for x in box(2, 20) if x[0] == 2 * x[1]]
    assert all(line.contains(x) for x in brute)
    assert all(c.denominator == 1 for b in line.basis() for c in b)


def test_lattice_intersect_values():
    m1 = Lattice.from_generators([(2,)], 1)
    assert lattice_intersect([m1, m1]) == m1
    got = lattice_intersect([m1, Lattice.from_generators([(3,)], 1)])
    assert got == Lattice.from_generators([(6,)], 1)
    assert [x for x in range(-30, 31) if x % 2 == 0 and x % 3 == 0] == [
        x for x in range(-30, 31) if got.contains((x,))]


def test_characteristic_sequence_values():
    big = Lattice.standard(2)
    assert characteristic_sequence(big, big)[0] == [1, 1]
    small = Lattice.from_generators([(2, 0), (0, 4)], 2)
    assert characteristic_sequence(small, big)[0] == [2, 4]
    assert lattice_index(small, big) == 8


def test_h_r():
    assert h_r(9, 2) == 9
    assert h_r(12, 2) == 6
    assert h_r_inf(12, 2) == 3
    with pytest.raises(ValueError):
        h_r(0, 2)


def test_gamma_inv_lattice_values():
    lat = Lattice.from_generators([(12,)], 1)
    assert gamma_inv_lattice(lat, 0, 2) == lat
    assert gamma_inv_lattice(lat, 1, 2) == Lattice.from_generators([(6,)], 1)
    assert [x for x in range(-40, 41) if (2 * x) % 12 == 0] == [
        x for x in range(-40, 41) if gamma_inv_lattice(lat, 1, 2).contains((x,))]


def test_gamma_inv_lattice_paths_agree():
    rng = random.Random(3)
    for _ in range(40):
        lat = Lattice.from_generators(random_basis(rng, 2, rng.randint(1, 2)), 2)
        z, r = rng.randint(0, 5), rng.choice([2, 3])
        assert gamma_inv_lattice(lat, z, r) == gamma_inv_lattice_direct(lat, z, r)


def test_gamma_inf_lattice_values():
    assert gamma_inf_lattice(Lattice.from_generators([(12,)], 1), 2) == Lattice.from_generators([(3,)], 1)
    lat = Lattice.from_generators([(3,)], 1)
    assert gamma_inf_lattice(lat, 2) == lat


def test_relatively_prime():
    z = Lattice.standard(1)
    assert not relatively_prime_to_r(Lattice.from_generators([(6,)], 1), 2)
    assert relatively_prime_to_r(Lattice.from_generators([(3,)], 1), 2)
    lat = Lattice.from_generators([(2, 0), (0, 4)], 2)
    assert lat.contains((2, 4)) and lat.contains((0, 0))
    assert relatively_prime_to_r(z, 2)


def test_affine_integer_point():
    a = AffineSpace.make((0, 1), VectorSpace.span([(2, 1)], 2))
    x = affine_integer_point(a)
    assert a.contains(x) and all(isinstance(c, int) or c.denominator == 1 for c in x)
    assert affine_integer_point(AffineSpace.make((F(1, 2), 0), VectorSpace.span([(0, 1)], 2))) is None
    assert affine_integer_point(AffineSpace.make((0, 0), VectorSpace.full(2))) == (0, 0)


def test_affine_lattice_intersect_values():
    two = Lattice.from_generators([(2,)], 1)
    p = AffineLattice.make((0,), two)
    assert affine_lattice_intersect(p, p) == p
    assert affine_lattice_intersect(p, AffineLattice.make((1,), two)).is_empty


@pytest.mark.parametrize("seed", range(5))
def test_lattice_ops_brute_force(seed):
    rng = random.Random(seed)
    b1 = random_basis(rng, 2, rng.randint(1, 2))
    b2 = random_basis(rng, 2, 2)
    m1, m2 = Lattice.from_generators(b1, 2), Lattice.from_generators(b2, 2)
    both = lattice_intersect([m1, m2])
    z, r = rng.randint(1, 4), rng.choice([2, 3])
    inv = gamma_inv_lattice(m2, z, r)
    for x in box(2, 15):
        assert both.contains(x) == (in_z_span(b1, x) and in_z_span(b2, x))
        assert inv.contains(x) == in_z_span(b2, digit_map_power(x, z, r))
