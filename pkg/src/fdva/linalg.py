"""Exact linear algebra over Q and Z.

Vector spaces are kept in reduced row echelon form: a sorted index set I
and one basis vector per index with a 1 at its own index and 0 at the
other indices of I.  Lattices are stored as a vector space plus a lower
triangular Hermite matrix expressed in the coordinates I.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from math import gcd


def frac_vec(x):
    return tuple(Fraction(c) for c in x)


def vadd(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vsub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x):
    return tuple(c * a for a in x)


def dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def is_zero(x):
    return all(c == 0 for c in x)


def is_integral(x):
    return all(Fraction(c).denominator == 1 for c in x)


def int_vec(x):
    if not is_integral(x):
        raise ValueError(f"vector {x} is not integral")
    return tuple(int(c) for c in x)


def lcm(a, b):
    return a * b // gcd(a, b) if a and b else 0


def common_denominator(vectors):
    d = 1
    for v in vectors:
        for c in v:
            d = lcm(d, Fraction(c).denominator)
    return d


def primitive(x):
    """Scale a non-zero rational vector to a primitive integer vector (same direction)."""
    d = common_denominator([x])
    y = [int(c * d) for c in x]
    g = reduce(gcd, (abs(c) for c in y), 0)
    return tuple(c // g for c in y)


def fmt_rat(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def fmt_vec(x):
    return "(" + ",".join(fmt_rat(c) for c in x) + ")"


# ---------------------------------------------------------------- vector spaces


@dataclass(frozen=True)
class VectorSpace:
    m: int
    indices: tuple = ()
    basis: tuple = ()

    @classmethod
    def zero(cls, m):
        return cls(m)

    @classmethod
    def full(cls, m):
        return cls(m, tuple(range(m)), tuple(unit(m, i) for i in range(m)))

    @classmethod
    def span(cls, vectors, m):
        v = cls(m)
        for x in vectors:
            v = v.add(x)
        return v

    @property
    def dim(self):
        return len(self.indices)

    def residual(self, x):
        x = frac_vec(x)
        if len(x) != self.m:
            raise ValueError("dimension mismatch")
        for i, v in zip(self.indices, self.basis):
            if x[i]:
                x = vsub(x, vscale(x[i], v))
        return x

    def contains(self, x):
        return is_zero(self.residual(x))

    def add(self, x):
        y = self.residual(x)
        if is_zero(y):
            return self
        j0 = next(j for j, c in enumerate(y) if c)
        y = vscale(1 / y[j0], y)
        basis = {i: (vsub(v, vscale(v[j0], y)) if v[j0] else v)
                 for i, v in zip(self.indices, self.basis)}
        basis[j0] = y
        idx = tuple(sorted(basis))
        return VectorSpace(self.m, idx, tuple(basis[i] for i in idx))

    def join(self, other):
        v = self
        for x in other.basis:
            v = v.add(x)
        return v

    def subset_of(self, other):
        return all(other.contains(x) for x in self.basis)

    def __le__(self, other):
        return self.subset_of(other)

    def orth(self):
        vectors = []
        pivots = set(self.indices)
        for j in range(self.m):
            if j in pivots:
                continue
            x = [Fraction(0)] * self.m
            x[j] = Fraction(1)
            for i, v in zip(self.indices, self.basis):
                x[i] = -v[j]
            vectors.append(tuple(x))
        return VectorSpace.span(vectors, self.m)

    def meet(self, other):
        return self.orth().join(other.orth()).orth()

    def coords(self, x):
        """Coordinates of x in V with respect to the echelon basis."""
        return tuple(Fraction(x[i]) for i in self.indices)

    def from_coords(self, c):
        x = (Fraction(0),) * self.m
        for ci, v in zip(c, self.basis):
            x = vadd(x, vscale(ci, v))
        return x

    def integer_normals(self):
        """Primitive integer vectors spanning the orthogonal complement."""
        return [primitive(v) for v in self.orth().basis]

    def map(self, f):
        return VectorSpace.span([f(v) for v in self.basis], self.m)

    def render(self):
        idx = "{" + ",".join(str(i + 1) for i in self.indices) + "}"
        parts = [f"v{i + 1}={fmt_vec(v)}" for i, v in zip(self.indices, self.basis)]
        return " ".join([f"I={idx}"] + parts)

    def __repr__(self):
        return f"VectorSpace({self.render()})"


def unit(m, i):
    return tuple(Fraction(1 if j == i else 0) for j in range(m))


def vspace_add_vector(v, x):
    return v.add(x)


def vspace_from_generators(xs, m):
    return VectorSpace.span(xs, m)


def orth_complement(v):
    return v.orth()


def gram_solve(rows, rhs):
    """Solve a square rational system by Gauss-Jordan elimination."""
    n = len(rows)
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [c / p for c in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [ci - f * cc for ci, cc in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]


def orthogonal_projection(v, x):
    """Orthogonal projection of x on the vector space v."""
    x = frac_vec(x)
    if v.dim == 0:
        return (Fraction(0),) * v.m
    rows = [[dot(b1, b2) for b2 in v.basis] for b1 in v.basis]
    rhs = [dot(b, x) for b in v.basis]
    c = gram_solve(rows, rhs)
    return v.from_coords(c)


# ---------------------------------------------------------------- affine spaces


@dataclass(frozen=True)
class AffineSpace:
    """Empty when anchor is None; otherwise anchor + space with anchor zero on I."""
    m: int
    anchor: tuple = None
    space: VectorSpace = None

    @classmethod
    def empty(cls, m):
        return cls(m)

    @classmethod
    def make(cls, point, space):
        return cls(space.m, space.residual(point), space)

    @classmethod
    def point(cls, x):
        return cls.make(x, VectorSpace.zero(len(x)))

    @property
    def is_empty(self):
        return self.anchor is None

    @property
    def dim(self):
        return -1 if self.is_empty else self.space.dim

    def contains(self, x):
        return not self.is_empty and self.space.contains(vsub(frac_vec(x), self.anchor))

    def subset_of(self, other):
        if self.is_empty:
            return True
        return other.contains(self.anchor) and self.space.subset_of(other.space)

    def join(self, other):
        """Smallest affine space containing both."""
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        v = self.space.join(other.space).add(vsub(other.anchor, self.anchor))
        return AffineSpace.make(self.anchor, v)

    def add_point(self, x):
        return self.join(AffineSpace.point(frac_vec(x)))

    def meet(self, other):
        if self.is_empty or other.is_empty:
            return AffineSpace.empty(self.m)
        # solve a1 + u = a2 + w with u in V1, w in V2: a2 - a1 in V1 + V2
        v1, v2 = self.space, other.space
        d = vsub(other.anchor, self.anchor)
        joined = v1.join(v2)
        if not joined.contains(d):
            return AffineSpace.empty(self.m)
        # find u in V1 with d - u in V2: project within coordinates
        gens1 = list(v1.basis)
        gens2 = list(v2.basis)
        sol = _solve_combination(gens1 + [vscale(-1, g) for g in gens2], d, self.m)
        u = (Fraction(0),) * self.m
        for c, g in zip(sol[:len(gens1)], gens1):
            u = vadd(u, vscale(c, g))
        return AffineSpace.make(vadd(self.anchor, u), v1.meet(v2))

    def render(self):
        if self.is_empty:
            return "empty"
        return f"{fmt_vec(self.anchor)} + V[{self.space.render()}]"

    def __repr__(self):
        return f"AffineSpace({self.render()})"


def _solve_combination(gens, target, m):
    """Rational coefficients c with sum c_i gens_i = target (assumed solvable)."""
    n = len(gens)
    rows = [[g[j] for g in gens] + [Fraction(target[j])] for j in range(m)]
    piv_cols = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [c / p for c in rows[r]]
        for i in range(m):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    if any(rows[i][n] for i in range(r, m)):
        raise ValueError("system is not solvable")
    sol = [Fraction(0)] * n
    for i, col in enumerate(piv_cols):
        sol[col] = rows[i][n]
    return sol


def affine_hull(points, m):
    a = AffineSpace.empty(m)
    for x in points:
        a = a.add_point(x)
    return a


def project_affine(a, x):
    if a.is_empty:
        raise ValueError("projection on the empty affine space")
    x = frac_vec(x)
    return vadd(a.anchor, orthogonal_projection(a.space, vsub(x, a.anchor)))


# ---------------------------------------------------------------- integer matrices


def column_echelon(a, ncols):
    """Column-style echelon form of an integer matrix (list of rows).

    Returns (h, u, pivots) with a*u = h, u unimodular, and pivots the list of
    (row, col) pairs; columns after the last pivot column are zero.
    """
    nrows = len(a)
    h = [list(row) for row in a]
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_op(dst, src, c):
        # column dst += c * column src
        for row in h:
            row[dst] += c * row[src]
        for row in u:
            row[dst] += c * row[src]

    def swap(i, j):
        for row in h:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def negate(i):
        for row in h:
            row[i] = -row[i]
        for row in u:
            row[i] = -row[i]

    pivots = []
    col = 0
    for i in range(nrows):
        if col >= ncols:
            break
        while True:
            nz = [j for j in range(col, ncols) if h[i][j]]
            if not nz:
                break
            j = min(nz, key=lambda k: abs(h[i][k]))
            if j != col:
                swap(j, col)
            done = True
            for k in range(col + 1, ncols):
                if h[i][k]:
                    col_op(k, col, -(h[i][k] // h[i][col]))
                    if h[i][k]:
                        done = False
            if done:
                break
        if h[i][col]:
            if h[i][col] < 0:
                negate(col)
            pivots.append((i, col))
            col += 1
    return h, u, pivots


def integer_kernel(a, ncols):
    """Z-basis of {x in Z^ncols : a x = 0} for an integer matrix a."""
    if not a:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    _, u, pivots = column_echelon(a, ncols)
    rank = len(pivots)
    return [tuple(u[i][j] for i in range(ncols)) for j in range(rank, ncols)]


@lru_cache(maxsize=4096)
def _cached_echelon(a, ncols):
    return column_echelon(a, ncols)


def integer_solve(a, rhs, ncols):
    """Some x in Z^ncols with a x = rhs, or None."""
    rhs = [Fraction(c) for c in rhs]
    if any(c.denominator != 1 for c in rhs):
        return None
    if not a:
        return (0,) * ncols
    a = tuple(tuple(int(c) for c in row) for row in a)
    h, u, pivots = _cached_echelon(a, ncols)
    y = [0] * ncols
    for (i, col) in pivots:
        acc = sum(h[i][k] * y[k] for k in range(col))
        rem = rhs[i] - acc
        if rem % h[i][col]:
            return None
        y[col] = int(rem // h[i][col])
    x = [sum(u[i][k] * y[k] for k in range(ncols)) for i in range(ncols)]
    for row, b in zip(a, rhs):
        if sum(c * xi for c, xi in zip(row, x)) != b:
            return None
    return tuple(x)


def _integer_rows(vectors):
    """Scale rational vectors to integer rows by a common denominator."""
    d = common_denominator(vectors)
    return [[int(c * d) for c in v] for v in vectors], d


def smith_form(c):
    """Smith normal form of a square integer matrix with its left transform inverse.

    Returns (diag, pinv) with c = pinv * diag(n) * q for some unimodular q.
    """
    n = len(c)
    a = [list(row) for row in c]
    pinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_add(dst, src, k):
        # row dst += k * row src  (pinv: column src -= k * column dst)
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        for row in pinv:
            row[src] -= k * row[dst]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in pinv:
            row[i], row[j] = row[j], row[i]

    def col_add(dst, src, k):
        for row in a:
            row[dst] += k * row[src]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]

    for t in range(n):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, n) if a[i][j]]
            if not nz:
                return [a[i][i] for i in range(n)], pinv
            _, i, j = min(nz)
            row_swap(t, i)
            col_swap(t, j)
            changed = False
            for i in range(t + 1, n):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // a[t][t]))
                    changed |= a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // a[t][t]))
                    changed |= a[t][j] != 0
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            for row in pinv:
                row[t] = -row[t]
    return [a[i][i] for i in range(n)], pinv


# ---------------------------------------------------------------- lattices


@dataclass(frozen=True)
class Lattice:
    """A discrete subgroup of Q^m spanning `space`, with a canonical Hermite matrix.

    hermite[k][j] is the k-th coordinate (index space.indices[k]) of the j-th
    generator; it is lower triangular with a positive diagonal and each row
    reduced so that 0 <= entry < diagonal left of the diagonal.
    """
    space: VectorSpace
    hermite: tuple

    @property
    def m(self):
        return self.space.m

    @property
    def dim(self):
        return self.space.dim

    @classmethod
    def from_generators(cls, xs, m):
        xs = [frac_vec(x) for x in xs]
        space = VectorSpace.span(xs, m)
        d = space.dim
        if d == 0:
            return cls(space, ())
        coords = [space.coords(x) for x in xs]
        rows_t, den = _integer_rows(coords)
        # matrix with generators as columns
        a = [[rows_t[j][k] for j in range(len(xs))] for k in range(d)]
        h, _, pivots = column_echelon(a, len(xs))
        if len(pivots) != d:
            raise ArithmeticError("generators do not span their space")
        h = [row[:d] for row in h]
        for i in range(d):
            for j in range(i):
                q = h[i][j] // h[i][i]
                if q:
                    for k in range(d):
                        h[k][j] -= q * h[k][i]
        herm = tuple(tuple(Fraction(h[k][j], den) for j in range(d)) for k in range(d))
        return cls(space, herm)

    @classmethod
    def integer_points(cls, space):
        """The lattice Z^m cap space."""
        normals = space.integer_normals()
        kernel = integer_kernel([list(n) for n in normals], space.m)
        return cls.from_generators(kernel, space.m)

    @classmethod
    def standard(cls, m):
        return cls.integer_points(VectorSpace.full(m))

    @cached_property
    def _basis(self):
        d = self.dim
        return tuple(self.space.from_coords([self.hermite[k][j] for k in range(d)]) for j in range(d))

    def basis(self):
        return list(self._basis)

    def solve_coords(self, x):
        """Integer coefficients of x in the Hermite basis, or None."""
        x = frac_vec(x)
        if len(x) != self.m or not self.space.contains(x):
            return None
        y = self.space.coords(x)
        c = []
        for k in range(self.dim):
            rem = y[k] - sum(self.hermite[k][j] * c[j] for j in range(k))
            q = rem / self.hermite[k][k]
            if q.denominator != 1:
                return None
            c.append(q)
        return c

    def contains(self, x):
        return self.solve_coords(x) is not None

    def subset_of(self, other):
        return all(other.contains(b) for b in self.basis())

    def scaled(self, n):
        return Lattice.from_generators([vscale(n, b) for b in self.basis()], self.m)

    def is_integral(self):
        return all(is_integral(b) for b in self.basis())

    def reduce(self, x):
        """Canonical representative of x + self inside the fundamental box of the Hermite basis."""
        x = frac_vec(x)
        y = self.space.coords(x)
        basis = self.basis()
        for k in range(self.dim):
            diag = self.hermite[k][k]
            q = (y[k] // diag)
            if q:
                col = [self.hermite[i][k] for i in range(self.dim)]
                y = tuple(yi - q * ci for yi, ci in zip(y, col))
                x = vsub(x, vscale(q, basis[k]))
        return x

    def render(self):
        rows = ["[" + " ".join(fmt_rat(c) for c in row) + "]" for row in self.hermite]
        return f"L[{self.space.render()} B=" + "".join(rows) + "]"

    def __repr__(self):
        return self.render()


def hermite_from_generators(xs, m):
    return Lattice.from_generators(xs, m)


def lattice_zm_cap(v):
    return Lattice.integer_points(v)


def lattice_sum(ms, m):
    gens = [b for lat in ms for b in lat.basis()]
    return Lattice.from_generators(gens, m)


def lattice_intersect(ms):
    if not ms:
        raise ValueError("empty intersection list")
    result = ms[0]
    for other in ms[1:]:
        result = _intersect2(result, other)
    return result


def _intersect2(m1, m2):
    b1, b2 = m1.basis(), m2.basis()
    m = m1.m
    if not b1 or not b2:
        return Lattice.from_generators([], m)
    cols = b1 + [vscale(-1, b) for b in b2]
    rows, _ = _integer_rows([tuple(c[i] for c in cols) for i in range(m)])
    kernel = integer_kernel(rows, len(cols))
    gens = []
    for k in kernel:
        x = (Fraction(0),) * m
        for c, b in zip(k[:len(b1)], b1):
            x = vadd(x, vscale(c, b))
        gens.append(x)
    return Lattice.from_generators(gens, m)


def characteristic_sequence(small, big):
    """Return (ns, vs) with vs a Z-basis of big and (n_i v_i) a Z-basis of small."""
    if small.space != big.space:
        raise ValueError("lattices span different spaces")
    d = big.dim
    bb = big.basis()
    cmat = []
    for b in small.basis():
        c = big.solve_coords(b)
        if c is None:
            raise ValueError("first lattice is not contained in the second")
        cmat.append([int(x) for x in c])
    # columns of cmat^T express small's generators in big's basis
    c = [[cmat[j][k] for j in range(d)] for k in range(d)]
    diag, pinv = smith_form(c)
    vs = []
    for j in range(d):
        x = (Fraction(0),) * big.m
        for k in range(d):
            if pinv[k][j]:
                x = vadd(x, vscale(pinv[k][j], bb[k]))
        vs.append(x)
    return diag, vs


def lattice_index(small, big):
    ns, _ = characteristic_sequence(small, big)
    out = 1
    for n in ns:
        out *= n
    return out


def h_r(n, r):
    if n <= 0:
        raise ValueError("h_r needs a positive integer")
    return n // gcd(n, r)


def h_r_inf(n, r):
    if n <= 0:
        raise ValueError("h_r needs a positive integer")
    while gcd(n, r) != 1:
        n //= gcd(n, r)
    return n


def relatively_prime_to_r(lat, r, within=None):
    if within is None:
        within = Lattice.integer_points(lat.space)
    return gcd(lattice_index(lat, within), r) == 1


def gamma0_linear(x, r):
    return (r * x[-1],) + tuple(x[:-1])


def gamma0_linear_inv(y, r):
    return tuple(y[1:]) + (Fraction(y[0]) / r,)


def gamma0_power_space(v, z, r):
    """Image of a vector space under the z-th power of the inverse linear digit map."""
    f = lambda x: _apply_n(gamma0_linear_inv, x, z, r)
    return v.map(f)


def _apply_n(f, x, n, r):
    for _ in range(n):
        x = f(x, r)
    return x


def _require_integral(lat):
    if not lat.is_integral():
        raise ValueError("lattice is not included in Z^m")


def gamma_inv_lattice_direct(lat, z, r):
    """{x in Z^m : Gamma_0^z(x) in lat} via the integer kernel of the auxiliary system."""
    _require_integral(lat)
    m = lat.m
    basis = [int_vec(b) for b in lat.basis()]
    # columns: lattice generators k, then -Gamma_0^z(e_j)
    images = [_apply_n(gamma0_linear, tuple(1 if i == j else 0 for i in range(m)), z, r)
              for j in range(m)]
    cols = basis + [tuple(-c for c in g) for g in images]
    rows = [[c[i] for c in cols] for i in range(m)]
    kernel = integer_kernel(rows, len(cols))
    gens = [k[len(basis):] for k in kernel]
    return Lattice.from_generators(gens, m)


@lru_cache(maxsize=4096)
def gamma_inv_lattice(lat, z, r):
    """gamma_0^{-z}(lat): z = z' + m k, residual part direct, full-vector part by h_r."""
    _require_integral(lat)
    m = lat.m
    k, z1 = divmod(z, m)
    cur = gamma_inv_lattice_direct(lat, z1, r) if z1 else lat
    if k == 0 or cur.dim == 0:
        return cur
    within = Lattice.integer_points(cur.space)
    ns, vs = characteristic_sequence(cur, within)
    rk = r ** k
    return Lattice.from_generators([vscale(n // gcd(n, rk), v) for n, v in zip(ns, vs)], m)


def gamma_inf_lattice(lat, r):
    _require_integral(lat)
    if lat.dim == 0:
        return lat
    within = Lattice.integer_points(lat.space)
    ns, vs = characteristic_sequence(lat, within)
    return Lattice.from_generators([vscale(h_r_inf(n, r), v) for n, v in zip(ns, vs)], lat.m)


# ---------------------------------------------------------------- affine lattices


@dataclass(frozen=True)
class AffineLattice:
    m: int
    base: tuple = None
    lattice: Lattice = None

    @property
    def is_empty(self):
        return self.base is None

    @classmethod
    def empty(cls, m):
        return cls(m)

    @classmethod
    def make(cls, base, lattice):
        return cls(lattice.m, lattice.reduce(base), lattice)

    def contains(self, x):
        return not self.is_empty and self.lattice.contains(vsub(frac_vec(x), self.base))


def affine_integer_point(a):
    """Some integer point of the affine space a, or None."""
    if a.is_empty:
        return None
    normals = a.space.integer_normals()
    if not normals:
        return (0,) * a.m
    rhs = [dot(n, a.anchor) for n in normals]
    x = integer_solve([list(n) for n in normals], rhs, a.m)
    if x is None:
        return None
    assert a.contains(x)
    return x


def affine_lattice_intersect(p1, p2):
    if p1.is_empty or p2.is_empty:
        return AffineLattice.empty(p1.m)
    m = p1.m
    b1, b2 = p1.lattice.basis(), p2.lattice.basis()
    cols = b1 + [vscale(-1, b) for b in b2]
    target = vsub(p2.base, p1.base)
    if not cols:
        return p1 if is_zero(target) else AffineLattice.empty(m)
    vecs = [tuple(c[i] for c in cols) + (target[i],) for i in range(m)]
    rows, _ = _integer_rows(vecs)
    a = [row[:-1] for row in rows]
    rhs = [row[-1] for row in rows]
    sol = integer_solve(a, rhs, len(cols))
    if sol is None:
        return AffineLattice.empty(m)
    x = p1.base
    for c, b in zip(sol[:len(b1)], b1):
        x = vadd(x, vscale(c, b))
    return AffineLattice.make(x, _intersect2(p1.lattice, p2.lattice))
