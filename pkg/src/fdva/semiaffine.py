"""Semi-affine spaces (finite unions of affine spaces) and semi-patterns B + M."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .encoding import gamma, xi
from .linalg import (AffineSpace, Lattice, affine_integer_point, characteristic_sequence,
                     fmt_vec, frac_vec, gamma0_linear, gamma_inv_lattice, int_vec, integer_solve,
                     lattice_intersect, relatively_prime_to_r, vadd, vscale, vsub)


def _affine_key(a):
    return (a.dim, a.space.indices, a.space.basis, a.anchor)


@dataclass(frozen=True)
class SemiAffineSpace:
    m: int
    components: tuple = ()

    @property
    def is_empty(self):
        return not self.components

    def contains(self, x):
        return any(a.contains(x) for a in self.components)

    def render(self):
        if not self.components:
            return "{}"
        return " U ".join(a.render() for a in self.components)


def normalize_components(parts, m=None):
    parts = [a for a in parts if not a.is_empty]
    if m is None:
        if not parts:
            raise ValueError("cannot infer the dimension of an empty union")
        m = parts[0].m
    if any(a.m != m for a in parts):
        raise ValueError("dimension mismatch")
    kept = []
    # larger spaces first so that absorption only needs one pass
    for a in sorted(parts, key=lambda a: -a.dim):
        if not any(a.subset_of(b) for b in kept):
            kept.append(a)
    return SemiAffineSpace(m, tuple(sorted(kept, key=_affine_key)))


def union(s1, s2):
    return normalize_components(list(s1.components) + list(s2.components), s1.m)


def affine_included_in_union(a0, s):
    if a0.is_empty:
        return True
    return any(a0.subset_of(a) for a in s.components)


def space_included_in_union(v, s):
    return affine_included_in_union(AffineSpace.make((0,) * v.m, v), s)


def direction(s):
    return normalize_components([AffineSpace.make((0,) * s.m, a.space) for a in s.components], s.m)


def directions(s):
    """The vector spaces of the direction, as VectorSpace values."""
    return [a.space for a in direction(s).components]


def from_spaces(spaces, m):
    return normalize_components([AffineSpace.make((0,) * m, v) for v in spaces], m)


def saff_of_cyclic_check(s, w, p):
    x = xi(w, p)
    return all(a.contains(x) for a in s.components)


# ---------------------------------------------------------------- patterns


@dataclass(frozen=True)
class SemiPattern:
    """The set B + M with B a finite set of integer vectors reduced modulo M."""
    base: tuple
    lattice: Lattice

    @property
    def m(self):
        return self.lattice.m

    @property
    def space(self):
        return self.lattice.space

    @property
    def is_empty(self):
        return not self.base

    @classmethod
    def make(cls, base, lattice):
        reduced = {int_vec(lattice.reduce(b)) for b in base}
        return cls(tuple(sorted(reduced)), lattice)

    def contains(self, x):
        x = frac_vec(x)
        return any(self.lattice.contains(vsub(x, b)) for b in self.base)

    def shift(self, v):
        return SemiPattern.make([vadd(b, v) for b in self.base], self.lattice)

    def render(self):
        pts = " ".join(fmt_vec(b) for b in self.base)
        return f"P = {{ {pts} }} + {self.lattice.render()}"

    def __repr__(self):
        return self.render()


def coset_representatives(small, big):
    """Representatives of big / small (small must be a sublattice spanning the same space)."""
    ns, vs = characteristic_sequence(small, big)
    reps = [(Fraction(0),) * big.m]
    for n, v in zip(ns, vs):
        reps = [vadd(x, vscale(k, v)) for x in reps for k in range(n)]
    return reps


def refine(p, lat):
    """Rewrite p over a sublattice lat of its lattice."""
    reps = coset_representatives(lat, p.lattice)
    return SemiPattern.make([vadd(b, c) for b in p.base for c in reps], lat)


def pattern_normalize(parts, require_integer=True):
    parts = [q for q in parts if not q.is_empty]
    if not parts:
        raise ValueError("cannot infer a lattice from an empty list")
    spaces = {q.lattice.space for q in parts}
    if len(spaces) != 1:
        raise ValueError("all lattices must span the same space")
    common = lattice_intersect([q.lattice for q in parts])
    base = []
    for q in parts:
        for c in coset_representatives(common, q.lattice):
            base.append(vadd(q.base, c))
    if require_integer and not (common.is_integral() and all(
            Fraction(c).denominator == 1 for b in base for c in b)):
        raise ValueError("pattern is not included in Z^m")
    return SemiPattern.make(base, common)


def pattern_union(patterns):
    patterns = [q for q in patterns if not q.is_empty]
    if not patterns:
        raise ValueError("empty union has no lattice")
    common = lattice_intersect([q.lattice for q in patterns])
    base = []
    for q in patterns:
        base.extend(refine(q, common).base)
    return SemiPattern.make(base, common)


def pattern_equal(p1, p2):
    if p1.m != p2.m:
        raise ValueError("dimension mismatch")
    if p1.is_empty or p2.is_empty:
        return p1.is_empty and p2.is_empty
    if p1.space != p2.space:
        return False
    common = lattice_intersect([p1.lattice, p2.lattice])
    return refine(p1, common).base == refine(p2, common).base


def pattern_invariants(p):
    """The lattice of vectors v with v + P = P (a lattice over the span of M)."""
    if p.is_empty:
        return Lattice.integer_points(p.space)
    b0 = p.base[0]
    gens = list(p.lattice.basis())
    for b in p.base:
        v = vsub(b, b0)
        if p.shift(v).base == p.base:
            gens.append(v)
    return Lattice.from_generators(gens, p.m)


def gamma_inv_pattern(p, w, params):
    """The pattern {x in Z^m : gamma_w(x) in P}."""
    return _gamma_inv_pattern(p, tuple(w), params)


@lru_cache(maxsize=65536)
def _gamma_inv_pattern(p, w, params):
    m = p.m
    z = len(w)
    lat_w = gamma_inv_lattice(p.lattice, z, params.r)
    offset = gamma(w, (0,) * m, params)
    images = []
    for j in range(m):
        e = tuple(1 if i == j else 0 for i in range(m))
        for _ in range(z):
            e = gamma0_linear(e, params.r)
        images.append(e)
    gens = [int_vec(g) for g in p.lattice.basis()]
    cols = images + [tuple(-c for c in g) for g in gens]
    a = [[c[i] for c in cols] for i in range(m)]
    base = []
    for b in p.base:
        sol = integer_solve(a, vsub(b, offset), len(cols))
        if sol is not None:
            base.append(sol[:m])
    return SemiPattern.make(base, lat_w)


def pattern_cyclic_certificate(p, w, params):
    if p.is_empty:
        return True
    if not pattern_equal(gamma_inv_pattern(p, w, params), p):
        return False
    if not relatively_prime_to_r(p.lattice, params.r):
        raise AssertionError("cyclic pattern is not relatively prime to r")
    anchor = AffineSpace.make(xi(w, params), p.space)
    if not all(anchor.contains(b) for b in p.base):
        raise AssertionError("cyclic pattern is not anchored at the fixed point")
    return True


def dense_pattern_nonempty(p, a, w, params):
    if p.is_empty:
        raise ValueError("pattern must be non-empty")
    if not relatively_prime_to_r(p.lattice, params.r):
        raise ValueError("pattern must be relatively prime to r")
    if not all(a.contains(b) for b in p.base) or not p.space.subset_of(a.space):
        raise ValueError("pattern must be included in the affine space")
    result = not gamma_inv_pattern(p, w, params).is_empty
    # affine criterion: some integer point of a survives the inverse image
    lat = Lattice.integer_points(a.space)
    x0 = affine_integer_point(a)
    if x0 is None:
        affine = False
    else:
        affine = not gamma_inv_pattern(SemiPattern.make([x0], lat), w, params).is_empty
    if affine != result:
        raise AssertionError("dense pattern criterion disagrees with the affine criterion")
    return result
