"""Geometric extraction from automata: components, hull directions, invariants and boundaries.

All operations assume the represented set is Presburger-definable.  When an
internal consistency check fails the input cannot be Presburger-definable and
NotPresburger is raised with the stage that detected it.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import networkx as nx

from .automata import (Fdva, bfs_words, canonical, combine, detectability_pairs, explore, eyes,
                       language_classes, minimize, move_initial, parallel_graph, reachable_principal)
from .encoding import gamma, gamma_digit_inv, rho_word, xi
from .linalg import (AffineSpace, Lattice, VectorSpace, affine_integer_point, dot, frac_vec,
                     gamma0_linear, h_r_inf, is_zero, lattice_index,
                     orthogonal_projection, unit, vsub)
from .polyhedra import Hyperplane
from .semiaffine import (SemiPattern, from_spaces, gamma_inv_pattern, space_included_in_union)


class NotPresburger(Exception):
    """The input automaton does not represent a Presburger-definable set."""

    def __init__(self, stage, detail=""):
        super().__init__(f"{stage}: {detail}" if detail else stage)
        self.stage = stage
        self.detail = detail


@dataclass
class ComponentInfo:
    states: frozenset
    untransient: bool
    terminal: bool
    vgt: VectorSpace = None
    anchors: dict = field(default_factory=dict)


# ---------------------------------------------------------------- components


def _scc_table(a):
    """Components of the parallel graph with their untransient and terminal flags."""
    g = parallel_graph(a)
    reach = set(reachable_principal(a))
    dag = nx.condensation(g)
    members = nx.get_node_attributes(dag, "members")
    # whether some strictly lower component carries final states
    below = {}
    for c in reversed(list(nx.topological_sort(dag))):
        below[c] = any(below[d] or any(a.final[k] for k in members[d]) for d in dag.successors(c))
    out = []
    for c in dag:
        comp = frozenset(members[c])
        q = next(iter(comp))
        untransient = len(comp) > 1 or g.has_edge(q, q)
        terminal = bool(comp & reach) and any(a.final[k] for k in comp) and not below[c]
        out.append(ComponentInfo(comp, untransient, terminal))
    out.sort(key=lambda c: min(c.states))
    return out


def components(a):
    infos = _scc_table(a)
    for c in infos:
        if c.untransient:
            c.vgt, c.anchors = vgt(a, c)
    return infos


def terminal_components(a):
    out = []
    for c in _scc_table(a):
        if c.terminal:
            if not c.untransient:
                raise NotPresburger("components", "terminal component without loops")
            c.vgt, c.anchors = vgt(a, c)
            out.append(c)
    return out


def _digit_component(a, states):
    g = nx.DiGraph()
    for k in range(a.size):
        for k2 in a.delta[k]:
            g.add_edge(k, k2)
    q = next(iter(states))
    fwd = nx.descendants(g, q) | {q}
    bwd = nx.ancestors(g, q) | {q}
    return fwd & bwd


def _level_space(v, level, r):
    """The space Gamma_0^{-level}(v) attached to the states of a given level."""
    x = v
    for _ in range(level):
        x = x.map(lambda y: tuple(y[1:]) + (Fraction(y[0]) / r,))
    return x


def vgt(a, t, loop_words=None):
    """Return (V_G(T), anchors) for an untransient component t.

    loop_words optionally maps each state of the digit component to a loop word
    used in place of the shortest one.
    """
    if not t.untransient:
        raise ValueError("vgt needs an untransient component")
    p = a.params
    k0 = _digit_component(a, t.states)
    fixed = {}

    def fixed_point(k):
        if k not in fixed:
            w = loop_words.get(k) if loop_words else None
            fixed[k] = xi(w if w is not None else _shortest_loop(a, k, k0), p)
        return fixed[k]

    space = VectorSpace.zero(p.m)
    for k in sorted(k0):
        if space.dim == p.m:
            break
        lvl = a.levels[k]
        for b, k2 in enumerate(a.delta[k]):
            if k2 not in k0:
                continue
            x = vsub(gamma_digit_inv(b, fixed_point(k), p.r), fixed_point(k2))
            for _ in range(lvl + 1):
                x = gamma0_linear(x, p.r)
            space = space.add(x)
    orth = space.orth()
    zero = (Fraction(0),) * p.m
    anchors = {q: orthogonal_projection(orth, fixed_point(q)) if orth.dim else zero
               for q in t.states}
    return space, anchors


def _shortest_loop(a, q, inside):
    prev = {}
    queue = deque([q])
    while queue:
        k = queue.popleft()
        for b, k2 in enumerate(a.delta[k]):
            if k2 not in inside:
                continue
            if k2 == q:
                word = [b]
                while k != q:
                    k, bb = prev[k]
                    word.append(bb)
                return tuple(reversed(word))
            if k2 not in prev:
                prev[k2] = (k, b)
                queue.append(k2)
    raise ValueError(f"state {q} has no loop")


def vgt_fixpoint_violations(a, t, space, anchors=None):
    """Transitions k -b-> k' of the digit component breaking the affine inclusion.

    The affine space of a state of level l is xi(sigma_k) + Gamma_0^{-l}(V); it
    must satisfy Gamma_b^{-1}(xi(sigma_k) + V_l) included in xi(sigma_k') + V_{l+1}.
    """
    p = a.params
    k0 = _digit_component(a, t.states)
    fixed = {k: xi(_shortest_loop(a, k, k0), p) for k in k0}
    spaces = [_level_space(space, l, p.r) for l in range(p.m + 1)]
    bad = []
    for k in sorted(k0):
        lvl = a.levels[k]
        for b, k2 in enumerate(a.delta[k]):
            if k2 not in k0:
                continue
            image = spaces[lvl].map(lambda y: gamma_digit_inv(0, y, p.r))
            target = spaces[(lvl + 1) % p.m]
            offset = vsub(gamma_digit_inv(b, fixed[k], p.r), fixed[k2])
            if not (image.subset_of(target) and target.contains(offset)):
                bad.append((k, b, k2))
    if anchors is not None:
        for q, anc in anchors.items():
            if not AffineSpace.make(anc, space).contains(fixed[q]):
                bad.append((q, None, q))
    return bad


@lru_cache(maxsize=16384)
def vec_saff(a):
    """Direction of the semi-affine hull as the union of V_G(T) over terminal components."""
    return from_spaces([c.vgt for c in terminal_components(a)], a.m)


# ---------------------------------------------------------------- degenerate equivalence


class _SaffCache:
    def __init__(self, a):
        self.a = a
        self.memo = {}

    def symdiff(self, q1, q2):
        key = (min(q1, q2), max(q1, q2))
        hit = self.memo.get(key)
        if hit is None:
            hit = self._pair_saff(*key)
            self.memo[key] = hit
        return hit

    def _pair_saff(self, q1, q2):
        # one product of the automaton with itself, minimized once, serves every pair
        if not hasattr(self, "_pairs"):
            a = self.a
            ids = {}
            for i in range(a.size):
                for j in range(i, a.size):
                    if a.levels[i] == a.levels[j]:
                        ids[(i, j)] = len(ids)
            signs = a.params.sign_vectors()
            levels, delta, final = [], [], []
            for (i, j) in ids:
                levels.append(a.levels[i])
                delta.append(tuple(ids[(min(u, v), max(u, v))] for u, v in zip(a.delta[i], a.delta[j])))
                fi, fj = a.final[i], a.final[j]
                final.append(frozenset(s for s in signs if (s in fi) != (s in fj)))
            prod = Fdva(a.params, tuple(levels), tuple(delta), 0, tuple(final))
            self._pairs = (ids, prod, language_classes(prod))
        ids, prod, classes = self._pairs
        c = classes[ids[(q1, q2)]]
        hit = self.memo.get(("class", c))
        if hit is None:
            hit = vec_saff(canonical(move_initial(prod, ids[(q1, q2)]), classes))
            self.memo[("class", c)] = hit
        return hit

    def single(self, q):
        key = ("single", q)
        hit = self.memo.get(key)
        if hit is None:
            hit = vec_saff(minimize(move_initial(self.a, q)))
            self.memo[key] = hit
        return hit


def degenerate_equiv(a, v, q1, q2):
    if q1 == q2:
        return True
    d = combine(move_initial(a, q1), move_initial(a, q2), "symdiff")
    return not space_included_in_union(v, vec_saff(d))


def degenerate_classes(a, v, states, cache=None):
    """Classes of the degenerate equivalence on the given principal states."""
    cache = cache or _SaffCache(a)
    # states with a V-degenerate language form one class: a symmetric
    # difference lies in the union, and a union of V-degenerate sets is one
    flat = [q for q in sorted(states) if not space_included_in_union(v, cache.single(q))]
    reps, classes = [], []
    for q in sorted(states):
        if q in flat:
            continue
        for i, rep in enumerate(reps):
            if not space_included_in_union(v, cache.symdiff(rep, q)):
                classes[i].append(q)
                break
        else:
            reps.append(q)
            classes.append([q])
    if flat:
        classes.insert(0, flat)
    return [frozenset(c) for c in classes]


# ---------------------------------------------------------------- invariant lattice


def _terminal_for(a, v):
    ts = [c for c in terminal_components(a) if c.vgt == v]
    if not ts:
        raise ValueError("v is not the space of a terminal component")
    return ts


def quotient(a, v, cache=None):
    """The automaton of degenerate classes, with its class list and class of each state."""
    cache = cache or _SaffCache(a)
    states = reachable_principal(a)
    classes = degenerate_classes(a, v, states, cache)
    cls = {q: i for i, c in enumerate(classes) for q in c}
    vecs = a.params.digit_vectors()
    for c in classes:
        rep = min(c)
        for vec in vecs:
            target = cls[a.run(rep, vec)]
            if any(cls[a.run(q, vec)] != target for q in c):
                raise NotPresburger("invariant lattice", "degenerate equivalence is not a congruence")
    m = a.m

    def step(key, b, lvl):
        c, partial = key
        partial = partial + (b,)
        if len(partial) < m:
            return (c, partial)
        return (cls[a.run(min(classes[c]), partial)], ())

    g, keys = explore(a.params, (cls[a.initial], ()), step, lambda key: ())
    return g, keys, classes


def invariant_lattice(a, w, v):
    """The lattice of vectors leaving every pattern of the V-decomposition invariant."""
    a = minimize(a)
    p = a.params
    m, r = p.m, p.r
    if a.run(a.initial, w) != a.initial:
        raise ValueError("the automaton is not cyclic along w")
    ts = _terminal_for(a, v)
    s = min(sg for t in ts for q in sorted(t.states) for sg in a.final[q])
    cache = _SaffCache(a)
    g, keys, classes = quotient(a, v, cache)
    principal = [k for k in reachable_principal(g)]
    good = {k for k in principal
            if space_included_in_union(v, cache.single(min(classes[keys[k][0]])))}
    kernels = [ker for _, ker in eyes(g, s, principal) if ker <= good]
    n1 = sum(len(ker) for ker in kernels)
    if n1 == 0:
        raise NotPresburger("invariant lattice", "no s-kernel inside the non-degenerate states")
    n0 = h_r_inf(n1, r)
    n = next(i for i in range(1, n0 + 1) if pow(r, i, n0) == 1 % n0)
    period = m * n
    targets = {k for ker in kernels for k in ker}

    # forward words sigma_u and backward words sigma'_u over (state, length mod period)
    fwd = {(g.initial, 0): ()}
    queue = deque([(g.initial, 0)])
    while queue:
        k, z = queue.popleft()
        for b, k2 in enumerate(g.delta[k]):
            u = (k2, (z + 1) % period)
            if u not in fwd:
                fwd[u] = fwd[(k, z)] + (b,)
                queue.append(u)
    preds = {}
    for (k, z) in fwd:
        for b, k2 in enumerate(g.delta[k]):
            preds.setdefault((k2, (z + 1) % period), []).append(((k, z), b))
    bwd = {(k, 0): () for k in targets if (k, 0) in fwd}
    queue = deque(sorted(bwd))
    while queue:
        u2 = queue.popleft()
        for u1, b in preds.get(u2, ()):
            if u1 not in bwd:
                bwd[u1] = (b,) + bwd[u2]
                queue.append(u1)
    units = {u for u in fwd if u in bwd}

    gens = [b for b in Lattice.integer_points(v).scaled(n0).basis()]
    seen = set()
    for (k1, z1) in sorted(units):
        for b, k2 in enumerate(g.delta[k1]):
            u2 = (k2, (z1 + 1) % period)
            if u2 not in units:
                continue
            w1 = fwd[(k1, z1)] + (b,) + bwd[u2]
            w2 = fwd[u2] + bwd[u2]
            x = vsub(rho_word(w1, s, p), rho_word(w2, s, p))
            if x in seen:
                continue
            seen.add(x)
            if not v.contains(x):
                raise NotPresburger("invariant lattice", "generator outside the hull direction")
            gens.append(x)
    lat = Lattice.from_generators(gens, m)
    index = lattice_index(lat, Lattice.integer_points(v))
    if gcd(index, r) != 1:
        raise NotPresburger("invariant lattice", "lattice is not relatively prime to r")
    if index > len(a.principal()):
        raise NotPresburger("invariant lattice", "index exceeds the number of principal states")
    return lat


# ---------------------------------------------------------------- boundary


def axis_hyperplanes(v):
    out = []
    for j in range(v.m):
        e = unit(v.m, j)
        if not is_zero(orthogonal_projection(v, e)):
            out.append(v.meet(VectorSpace.span([e], v.m).orth()))
    return out


def boundary(a, v):
    """Boundary hyperplanes of the V-part of the set, axis hyperplanes excluded."""
    a = minimize(a)
    cache = _SaffCache(a)
    spaces = []
    for t in _terminal_for(a, v):
        for c in degenerate_classes(a, v, t.states, cache):
            rep = min(c)
            for q in sorted(c - {rep}):
                spaces.extend(d for d in _directions(cache.symdiff(rep, q)))
    union = from_spaces(spaces, a.m)
    axes = set(axis_hyperplanes(v))
    out = []
    for comp in union.components:
        h = comp.space
        if h in axes:
            continue
        if not h.subset_of(v) or h.dim != v.dim - 1:
            raise NotPresburger("boundary", f"component {h.render()} is not a hyperplane of V")
        normal = v.meet(h.orth()).basis[0]
        out.append(Hyperplane.make(v, normal, 0))
    return sorted(set(out), key=lambda hp: hp.normal)


def _directions(s):
    return [c.space for c in s.components]


# ---------------------------------------------------------------- detectable patterns


def _coset_images(m_lat, base, pairs, p):
    """For every word pair, the reduced coset of gamma_w^{-1}(b + M) for each b (or None)."""
    cache = {}

    def image(b, w):
        key = (b, w)
        if key not in cache:
            img = gamma_inv_pattern(SemiPattern.make([b], m_lat), w, p)
            cache[key] = img.base[0] if img.base else None
        return cache[key]

    return [([image(b, w1) for b in base], [image(b, w2) for b in base]) for w1, w2 in pairs]


def detectable_pattern_partition(a, m_lat, b):
    """Partition (B0, [B1..Bn]) of b by representability of B' + M as A^F."""
    p = a.params
    base = sorted({tuple(int(c) for c in x) for x in b})
    pairs = detectability_pairs(a)
    images = _coset_images(m_lat, base, pairs, p)
    g = nx.Graph()
    g.add_nodes_from(range(len(base)))
    for im1, im2 in images:
        by_rep = {}
        for i, x in enumerate(im1):
            if x is not None:
                by_rep.setdefault(x, []).append(i)
        for j, x in enumerate(im2):
            for i in by_rep.get(x, ()):
                g.add_edge(i, j)
    zero, good = [], []
    for comp in nx.connected_components(g):
        idx = sorted(comp)
        ok = all({im1[i] for i in idx} - {None} == {im2[i] for i in idx} - {None}
                 for im1, im2 in images)
        if ok:
            good.append(frozenset(base[i] for i in idx))
        else:
            zero.extend(base[i] for i in idx)
    good.sort(key=min)
    return frozenset(zero), good


def halfspace_detectable(a, p1, p2, h, a0, variant):
    """Whether (P1 & a0+H^#1+V^perp) | (P2 & a0+H^#2+V^perp) is A^F for some F."""
    if variant not in (("<", ">="), ("<=", ">")):
        raise ValueError(f"bad variant {variant!r}")
    p = a.params
    m, r = p.m, p.r
    alpha = h.normal
    level = dot(alpha, a0)
    for wa, wb in detectability_pairs(a):
        z = len(wa) % m
        alpha_z = _pull_back(alpha, z, r)
        ca = _threshold(alpha, level, wa, z, p)
        cb = _threshold(alpha, level, wb, z, p)
        if ca == cb:
            continue
        lo, hi = min(ca, cb), max(ca, cb)
        img1 = gamma_inv_pattern(p1, wa, p)
        img2 = gamma_inv_pattern(p2, wa, p)
        lat = img2.lattice if not p2.is_empty else img1.lattice
        diff = set(img1.base) ^ set(img2.base)
        mu = Fraction(0)
        for g in lat.basis():
            mu = _rat_gcd(mu, dot(alpha_z, g))
        for bvec in diff:
            if _window_hit(dot(alpha_z, bvec), mu, lo, hi, variant):
                return False
    return True


def _pull_back(alpha, z, r):
    """alpha_z with <alpha, gamma_0^z(x)> = <alpha_z, x>."""
    m = len(alpha)
    cols = []
    for j in range(m):
        e = unit(m, j)
        for _ in range(z):
            e = gamma0_linear(e, r)
        cols.append(dot(alpha, e))
    return tuple(cols)


def _threshold(alpha, level, w, z, p):
    k = (len(w) - z) // p.m
    offset = dot(alpha, gamma(w, (0,) * p.m, p))
    return Fraction(level - offset) / p.r ** k


def _rat_gcd(x, y):
    x, y = Fraction(x), Fraction(y)
    if x == 0:
        return abs(y)
    if y == 0:
        return abs(x)
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    return Fraction(gcd(int(x * den), int(y * den)), den)


def _window_hit(value, mu, lo, hi, variant):
    closed_low = variant == ("<", ">=")
    if mu == 0:
        return (lo <= value < hi) if closed_low else (lo < value <= hi)
    # value + t*mu in the window for some integer t
    if closed_low:
        t = -((value - lo) // mu)
        return value + t * mu < hi
    t = (hi - value) // mu
    return value + t * mu > lo


# ---------------------------------------------------------------- final functions


def final_function_from_membership(a, oracle):
    """Positive final function whose set is {x in N^m : oracle(x)}, built eye by eye."""
    p = a.params
    zero = (0,) * p.m
    words = bfs_words(a)
    states = reachable_principal(a)
    final = {}
    for eye, kernel in eyes(a, zero, states):
        q = min(kernel)
        x = rho_word(words[q], zero, p)
        keep = bool(oracle(x))
        for k in eye:
            final[k] = {zero} if keep else set()
    return final


def boolean_combination_solve(target, classes, universe=None):
    """Signatures (tuples of memberships in classes) whose union of kernels is target, or None."""
    target = set(target)
    if universe is None:
        universe = set(target).union(*map(set, classes)) if classes else set(target)
    classes = [set(c) for c in classes]

    def sig(e):
        return tuple(e in c for c in classes)

    wanted = {sig(e) for e in target}
    if any(sig(e) in wanted and e not in target for e in universe):
        return None
    return frozenset(wanted)


def evaluate_signatures(sigs, memberships):
    return tuple(memberships) in sigs


def destruction_check(a_space, w, p):
    """True iff some power of w empties the integer points of the affine space."""
    if a_space.is_empty or affine_integer_point(a_space) is None:
        return True
    return not a_space.contains(xi(w, p))


def integer_anchor(a_space):
    x = affine_integer_point(a_space)
    return None if x is None else frac_vec(x)


__all__ = [
    "ComponentInfo", "NotPresburger", "axis_hyperplanes", "boolean_combination_solve", "boundary",
    "components", "degenerate_classes", "degenerate_equiv", "destruction_check",
    "detectable_pattern_partition", "evaluate_signatures", "final_function_from_membership",
    "halfspace_detectable", "integer_anchor", "invariant_lattice", "quotient",
    "terminal_components", "vec_saff", "vgt", "vgt_fixpoint_violations",
]
