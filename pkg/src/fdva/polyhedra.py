"""Hyperplanes of a vector space V, open convex V-polyhedra and their degeneracy.

A hyperplane {x in V : <alpha, x> = c} is stored with alpha a primitive
integer vector of V whose first non-zero coordinate is positive.  Since
<alpha, pi_V(e_i)> = alpha[i] for alpha in V, this makes the positive side
the side containing pi_V(e_i) for the least i with pi_V(e_i) outside the
direction, which depends on the direction only.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .linalg import VectorSpace, dot, fmt_rat, frac_vec, is_zero, orthogonal_projection, primitive


class PolyhedronError(ValueError):
    pass


_FLIP = {"<": ">", ">": "<"}


@dataclass(frozen=True)
class Hyperplane:
    space: VectorSpace
    normal: tuple
    constant: Fraction

    @classmethod
    def make(cls, space, normal, constant=0):
        normal = frac_vec(normal)
        if is_zero(normal):
            raise PolyhedronError("normal vector is zero")
        if not space.contains(normal):
            raise PolyhedronError("normal vector is not in the ambient space")
        return orient(space, cls(space, normal, Fraction(constant)))

    @property
    def m(self):
        return self.space.m

    @property
    def direction(self):
        """The hyperplane through the origin with the same normal."""
        return Hyperplane(self.space, self.normal, Fraction(0))

    def value(self, x):
        return dot(self.normal, x) - self.constant

    def side(self, x):
        v = self.value(x)
        return "=" if v == 0 else (">" if v > 0 else "<")

    def render(self):
        terms = []
        for i, a in enumerate(self.normal):
            if a:
                sign = "-" if a < 0 else "+"
                terms.append(f"{sign} {abs(a)}*x{i + 1}")
        text = " ".join(terms)
        text = text[2:] if text.startswith("+ ") else "-" + text[2:]
        return f"H: {text} = {fmt_rat(self.constant)} in {self.space.render()}"

    def __repr__(self):
        return self.render()


def orient(v, h):
    """Rescale h to a primitive integer normal with the uniform orientation."""
    if v != h.space:
        raise PolyhedronError("hyperplane lives in another space")
    i = next((j for j, a in enumerate(h.normal) if a), None)
    if i is None:
        raise PolyhedronError("no coordinate separates the hyperplane")
    normal = frac_vec(primitive(h.normal))
    if normal[i] < 0:
        normal = tuple(-a for a in normal)
    scale = normal[i] / h.normal[i]
    return Hyperplane(v, normal, h.constant * scale)


def positive_direction(h):
    """The vector pi_V(e_i) that points into the positive side."""
    i = next(j for j, a in enumerate(h.normal) if a)
    e = tuple(Fraction(1 if j == i else 0) for j in range(h.m))
    return orthogonal_projection(h.space, e)


@dataclass(frozen=True)
class OpenConvex:
    space: VectorSpace
    constraints: tuple = ()

    @classmethod
    def make(cls, space, constraints=()):
        cs = []
        for h, side in constraints:
            if side not in _FLIP:
                raise PolyhedronError(f"bad side {side!r}")
            if h.space != space:
                raise PolyhedronError("constraint lives in another space")
            cs.append((h, side))
        return cls(space, tuple(cs))

    def contains(self, x):
        return self.space.contains(x) and all(h.side(x) == s for h, s in self.constraints)

    def restrict(self, h, side):
        return OpenConvex.make(self.space, self.constraints + ((h, side),))


def _signed_rows(c):
    """Rows beta with constraint <beta, t> > bound in the coordinates of V."""
    basis = c.space.basis
    rows = []
    for h, side in c.constraints:
        sign = 1 if side == ">" else -1
        rows.append((tuple(sign * dot(h.normal, b) for b in basis), sign * h.constant))
    return rows


def _fourier_motzkin(rows):
    """Decide whether {t : <beta_k, t> > 0 for all k} is non-empty.

    Returns (True, None) when feasible, or (False, lam) with lam >= 0 a
    non-zero certificate sum_k lam_k beta_k = 0.
    """
    n = len(rows)
    ncols = len(rows[0]) if rows else 0
    # each row carries its multipliers on the original rows
    cur = {}
    for k, beta in enumerate(rows):
        lam = tuple(Fraction(1 if j == k else 0) for j in range(n))
        _insert(cur, frac_vec(beta), lam)
    for col in range(ncols):
        pos = [(b, l) for b, l in cur.items() if b[col] > 0]
        neg = [(b, l) for b, l in cur.items() if b[col] < 0]
        nxt = {}
        for b, l in cur.items():
            if b[col] == 0:
                _insert(nxt, b, l)
        for bp, lp in pos:
            for bn, ln in neg:
                fp, fn = -bn[col], bp[col]
                b = tuple(fp * x + fn * y for x, y in zip(bp, bn))
                l = tuple(fp * x + fn * y for x, y in zip(lp, ln))
                _insert(nxt, b, l)
        cur = nxt
    for b, l in cur.items():
        if is_zero(b):
            return False, l
    return True, None


def _insert(rows, beta, lam):
    if is_zero(beta):
        rows.setdefault(beta, lam)
        return
    scale = max(abs(c) for c in beta)
    key = tuple(c / scale for c in beta)
    if key not in rows:
        rows[key] = tuple(c / scale for c in lam)


def nondegenerate_open_convex(c):
    rows = [beta for beta, _ in _signed_rows(c)]
    if c.space.dim == 0:
        return not rows
    ok, _ = _fourier_motzkin(rows)
    return ok


def interior_direction(c):
    """A vector v of V with <alpha_H, v> #_H 0 for every constraint, or None."""
    if not nondegenerate_open_convex(c):
        return None
    rows = [beta for beta, _ in _signed_rows(c)]
    d = c.space.dim
    t = _strict_solution(rows, d)
    return c.space.from_coords(t)


def _strict_solution(rows, d):
    # back substitution over the elimination order
    if d == 0:
        return ()
    last = d - 1
    projected = []
    pos = [b for b in rows if b[last] > 0]
    neg = [b for b in rows if b[last] < 0]
    projected = [b[:last] for b in rows if b[last] == 0]
    for bp in pos:
        for bn in neg:
            projected.append(tuple(-bn[last] * x + bp[last] * y for x, y in zip(bp[:last], bn[:last])))
    head = _strict_solution([b for b in projected], last) if last else ()
    head = tuple(head)
    lo = max((-dot(b[:last], head) / b[last] for b in pos), default=None)
    hi = min((-dot(b[:last], head) / b[last] for b in neg), default=None)
    if lo is None and hi is None:
        val = Fraction(0)
    elif lo is None:
        val = hi - 1
    elif hi is None:
        val = lo + 1
    else:
        val = (lo + hi) / 2
    return head + (val,)


def refine_avoiding(c, h0, avoid):
    below, above = c.restrict(h0, "<"), c.restrict(h0, ">")
    if not (nondegenerate_open_convex(below) and nondegenerate_open_convex(above)):
        raise PolyhedronError("both sides of the splitting hyperplane must be non-degenerate")
    for h in avoid:
        if h.normal == h0.normal:
            raise PolyhedronError("an avoided hyperplane is parallel to the splitting one")
    chosen = []

    def search(i, lo, hi):
        if i == len(avoid):
            return True
        for side in (">", "<"):
            lo2, hi2 = lo.restrict(avoid[i], side), hi.restrict(avoid[i], side)
            if nondegenerate_open_convex(lo2) and nondegenerate_open_convex(hi2):
                chosen.append(side)
                if search(i + 1, lo2, hi2):
                    return True
                chosen.pop()
        return False

    if not search(0, below, above):
        return None
    return tuple(chosen)


@dataclass(frozen=True)
class Slab:
    """{x in V : lower < <normal, x> < upper}."""
    hyperplane: Hyperplane
    lower: Fraction
    upper: Fraction

    def contains(self, x):
        v = dot(self.hyperplane.normal, x)
        return self.lower < v < self.upper


def degenerate_cover_witness(c):
    """Slabs covering a degenerate open convex set, or None when it is not degenerate."""
    signed = _signed_rows(c)
    if c.space.dim == 0:
        return None if not signed else []
    ok, lam = _fourier_motzkin([beta for beta, _ in signed])
    if ok:
        return None
    slabs = []
    for k, (h, side) in enumerate(c.constraints):
        if lam[k] == 0:
            continue
        # sum_j lam_j sign_j <alpha_j, x> = 0 bounds sign_k <alpha_k, x> from above
        rest = sum(lam[j] * signed[j][1] for j in range(len(signed)) if j != k)
        sign = 1 if side == ">" else -1
        bound = -rest / lam[k]
        if sign > 0:
            lower, upper = h.constant, bound
        else:
            lower, upper = -bound, h.constant
        slabs.append(Slab(h.direction, lower, upper))
    return slabs


def sample_points(c, count, box=20):
    """Up to count points of c found on a grid of the coordinates of V."""
    d = c.space.dim
    found = []
    step = Fraction(1, 2)
    rng = [step * k for k in range(-2 * box, 2 * box + 1)]
    for t in product(rng, repeat=d):
        x = c.space.from_coords(t)
        if c.contains(x):
            found.append(x)
            if len(found) >= count:
                break
    return found


__all__ = [
    "Hyperplane", "OpenConvex", "PolyhedronError", "Slab", "degenerate_cover_witness",
    "interior_direction", "nondegenerate_open_convex", "orient", "positive_direction",
    "refine_avoiding", "sample_points",
]
