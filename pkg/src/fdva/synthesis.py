"""Deciding Presburger-definability of an FDVA and synthesizing a defining formula.

The pipeline reduces the input to cyclic automata (the initial state lies on
a loop), then to one positive automaton per orthant, and finally peels the
positive set component by component.  Every piece of geometry used along
the way comes from the extraction module, and any failed consistency check
turns into a NotPresburger verdict.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass

import networkx as nx

from .automata import (apply_sign_flip, has_loop, intersect_nonneg, is_empty, isomorphic, loop_word,
                       member, minimize, move_initial, parallel_graph, reachable_principal,
                       replace_final)
from .encoding import gamma, xi
from .extraction import (NotPresburger, _scc_table, boolean_combination_solve, boundary,
                         detectable_pattern_partition, final_function_from_membership,
                         halfspace_detectable, invariant_lattice, terminal_components, vec_saff)
from .formula import (FALSE, conj, disj, emit, evaluate, exists, forall, free_var,
                      is_quantifier_free, linear, modular, neg, substitute, xor)
from .linalg import (AffineSpace, Lattice, affine_integer_point, characteristic_sequence, dot,
                     integer_solve, lattice_index, vadd)
from .semiaffine import SemiPattern, coset_representatives
from .translate import formula_to_fdva

log = logging.getLogger(__name__)


class SynthesisError(RuntimeError):
    """An internal invariant of the synthesis failed (a bug, not a property of the input)."""


@dataclass(frozen=True)
class Verdict:
    presburger: bool
    formula: object = None
    stage: str = ""
    detail: str = ""

    @classmethod
    def of_formula(cls, f):
        return cls(True, f)

    @classmethod
    def rejected(cls, exc):
        return cls(False, None, exc.stage, exc.detail)

    def render(self):
        if self.presburger:
            return f"Presburger: {emit(self.formula)}"
        text = f"NotPresburger({self.stage}"
        return text + (f": {self.detail})" if self.detail else ")")


def formula_eval(f, x):
    if not is_quantifier_free(f):
        raise ValueError("only quantifier-free formulas are evaluated directly")
    return evaluate(f, x)


# ---------------------------------------------------------------- finite sets as boxes


def _boxes(points, m):
    """Cover a finite set of integer vectors exactly by disjoint boxes [(lo, hi)]*m."""
    if m == 0:
        return [()] if points else []
    rest_of = defaultdict(set)
    for x in points:
        rest_of[x[0]].add(x[1:])
    groups = defaultdict(list)
    for x0, rest in rest_of.items():
        groups[frozenset(rest)].append(x0)
    out = []
    for rest, firsts in groups.items():
        tails = _boxes(rest, m - 1)
        firsts.sort()
        lo = prev = firsts[0]
        for x0 in firsts[1:] + [None]:
            if x0 is not None and x0 == prev + 1:
                prev = x0
                continue
            out.extend([(lo, prev)] + list(t) for t in tails)
            if x0 is not None:
                lo = prev = x0
    return [tuple(b) for b in sorted(out)]


def _box_formula(box, exprs):
    parts = []
    for (lo, hi), (coeffs, const) in zip(box, exprs):
        if lo == hi:
            parts.append(linear(coeffs, "=", lo - const))
        else:
            parts.append(linear(coeffs, ">=", lo - const))
            parts.append(linear(coeffs, "<=", hi - const))
    return conj(parts)


def points_formula(points, m, exprs=None):
    exprs = exprs or [({free_var(i): 1}, 0) for i in range(m)]
    return disj([_box_formula(b, exprs) for b in _boxes(set(map(tuple, points)), m)])


def finite_language_formula(words, p):
    """Formula for {rho(w, 0) : w in words}."""
    zero = (0,) * p.m
    pts = {tuple(int(c) for c in gamma(w, zero, p)) for w in words}
    return points_formula(pts, p.m)


# ---------------------------------------------------------------- cyclic reduction


def cyclic_reduction(a):
    """Split a into cyclic automata.

    Returns (subproblems, combine): subproblems lists pairs (q, automaton
    started at q) for looping states q, and combine turns the list of their
    formulas, in the same order, into a formula for the input.
    """
    a = minimize(a)
    p = a.params
    m, r = p.m, p.r
    zero = (0,) * m
    looping = {q for q in reachable_principal(a) if has_loop(a, q)}
    if a.initial in looping:
        return [(a.initial, a)], lambda fs: fs[0]
    vecs = p.digit_vectors()
    step = {v: tuple(int(c) for c in gamma(v, zero, p)) for v in vecs}
    dag = parallel_graph(a, [q for q in reachable_principal(a) if q not in looping])
    dag.remove_nodes_from([q for q in list(dag) if q in looping])
    pts = defaultdict(set)
    pts[a.initial].add((0, zero))
    entries = defaultdict(set)
    for q in nx.topological_sort(dag):
        for k, x in pts.pop(q, ()):
            scale = r ** k
            for v in vecs:
                q2 = a.run(q, v)
                y = tuple(xi_ + scale * d for xi_, d in zip(x, step[v]))
                if q2 in looping:
                    entries[(q2, k + 1)].add(y)
                else:
                    pts[q2].add((k + 1, y))
    order = sorted({q for q, _ in entries})
    subs = [(q, minimize(move_initial(a, q))) for q in order]

    def combine(formulas):
        fs = dict(zip(order, formulas))
        ys = [f"y{i + 1}" for i in range(m)]
        parts = []
        for (q, k), points in sorted(entries.items()):
            body = substitute(fs[q], {free_var(i): ({ys[i]: 1}, 0) for i in range(m)})
            exprs = [({free_var(i): 1, ys[i]: -(r ** k)}, 0) for i in range(m)]
            f = conj([body, points_formula(points, m, exprs)])
            for y in reversed(ys):
                f = exists(y, f)
            parts.append(f)
        return disj(parts)

    return subs, combine


# ---------------------------------------------------------------- orthants


def sign_condition(s, p):
    top = p.r - 1
    return conj([linear({free_var(i): 1}, "<=" if si == top else ">=", -1 if si == top else 0)
                 for i, si in enumerate(s)])


def _flip_back(f, s, p):
    """Rewrite a formula for f_s(X) into one for X: flipped x_i becomes -1 - x_i."""
    top = p.r - 1
    mapping = {free_var(i): ({free_var(i): -1}, -1) for i, si in enumerate(s) if si == top}
    return substitute(f, mapping) if mapping else f


def orthant_subproblems(a):
    """Non-empty positive automata f_s(X) & N^m, keyed by sign vector."""
    out = {}
    for s in a.params.sign_vectors():
        sub = minimize(intersect_nonneg(apply_sign_flip(a, s)))
        if not is_empty(sub):
            out[s] = sub
    return out


def _orthant_synthesize(a, stats):
    p = a.params
    parts = []
    for s, sub in orthant_subproblems(a).items():
        f = synthesize_positive_cyclic(sub, stats)
        parts.append(conj([sign_condition(s, p), _flip_back(f, s, p)]))
    return disj(parts)


# ---------------------------------------------------------------- positive reduction


def _hitting_set(sets):
    sets = [frozenset(x) for x in sets if x]
    chosen = sorted(set().union(*sets)) if sets else []
    for e in list(chosen):
        trial = [c for c in chosen if c != e]
        if all(x & set(trial) for x in sets):
            chosen = trial
    return chosen


def positive_reduction(a):
    """Reduce a cyclic automaton to positive ones.

    Returns (subproblems, combine): subproblems lists pairs (s, positive
    automaton of f_s(X) & N^m) for s in a hitting set of the pairwise
    differences of final sets, and combine turns the list of their formulas,
    in the same order, into a formula for the input.
    """
    a = minimize(a)
    p = a.params
    m, r = p.m, p.r
    top = r - 1
    states = reachable_principal(a)
    diffs = {a.final[q1] ^ a.final[q2] for q1 in states for q2 in states}
    hit = _hitting_set(diffs)
    subs = [(s, minimize(intersect_nonneg(apply_sign_flip(a, s)))) for s in hit]
    by_final = defaultdict(set)
    for q in states:
        by_final[a.final[q]].add(q)
    member_sets = [{q for q in states if s in a.final[q]} for s in hit]
    xs = [free_var(i) for i in range(m)]

    def theta(phi, s, kt):
        kc, k0 = kt
        parts = []
        for t in p.sign_vectors():
            mapping = {}
            for i, x in enumerate(xs):
                d = -1 if s[i] > t[i] else (1 if s[i] < t[i] else 0)
                coeffs = {x: 1}
                for v, c in kc.items():
                    coeffs[v] = coeffs.get(v, 0) + d * c
                const = d * k0
                if s[i] == top:
                    coeffs = {v: -c for v, c in coeffs.items()}
                    const = -1 - const
                mapping[x] = (coeffs, const)
            parts.append(conj([sign_condition(t, p), substitute(phi, mapping)]))
        return disj(parts)

    def periodic(phi, s):
        same = xor(theta(phi, s, ({"k": 1}, 0)), theta(phi, s, ({"k": 1, "n": 1}, 0)))
        body = disj([linear({"k": 1, "u": -1}, "<", 0), neg(same)])
        return conj([linear({"n": 1}, ">=", 1), exists("u", forall("k", body))])

    def combine(formulas):
        fs = dict(zip(hit, formulas))
        ws = conj([periodic(fs[s], s) for s in hit])
        parts = []
        for fin, cls in sorted(by_final.items(), key=lambda e: min(e[1])):
            if not fin:
                continue
            sigs = boolean_combination_solve(cls, member_sets, set(states))
            if sigs is None:
                raise SynthesisError("final-set classes are not separated by the hitting set")
            now = [theta(fs[s], s, ({"n": 1}, 1)) for s in hit]
            pick = disj([conj([f if b else neg(f) for f, b in zip(now, sig)]) for sig in sorted(sigs)])
            inner = exists("n", conj([linear({"n": 1, "t": -1}, ">=", 0), pick, ws]))
            parts.append(conj([disj([sign_condition(t, p) for t in sorted(fin)]), forall("t", inner)]))
        return disj(parts)

    return subs, combine


# ---------------------------------------------------------------- positive cyclic sets


def _choose_space(hull):
    comps = sorted((c.space for c in hull.components), key=lambda v: (-v.dim, v.render()))
    return comps[0]


def pattern_formula(bases, lat, v, stats):
    """x in union of b + lat for integer b in bases (lat of full rank in V)."""
    m = v.m
    xs = [free_var(i) for i in range(m)]
    b0 = next(iter(bases))
    eqs = [linear(dict(zip(xs, n)), "=", dot(n, b0)) for n in v.integer_normals()]
    ns, vs = characteristic_sequence(lat, Lattice.integer_points(v))
    rows = [[int(c) for c in x] for x in vs]
    duals = []
    for i, n in enumerate(ns):
        if n == 1:
            continue
        beta = integer_solve(rows, [1 if j == i else 0 for j in range(len(rows))], m)
        if beta is None:
            raise SynthesisError("no integer dual basis for the invariant lattice")
        duals.append((beta, n))
        stats["moduli"].add(n)
    per_base = [conj([modular(dict(zip(xs, beta)), n, dot(beta, b)) for beta, n in duals])
                for b in sorted(bases)]
    return conj(eqs + [disj(per_base)])


def _atom(h, side, anchor):
    c = dot(h.normal, anchor)
    bound = math.ceil(c) if side == ">=" else math.floor(c) + 1
    coeffs = {free_var(i): int(a) for i, a in enumerate(h.normal)}
    return linear(coeffs, ">=", bound)


def _peel(cur, v, w, stats):
    """Formula and final states for the V-part of the current positive set."""
    p = cur.params
    m = p.m
    zero = (0,) * m
    xw = xi(w, p)
    states = reachable_principal(cur)
    finals = {q for q in states if cur.final[q]}
    tv = set()
    for t in terminal_components(cur):
        if t.vgt == v:
            tv |= t.states
    a0 = affine_integer_point(AffineSpace.make(xw, v))
    if a0 is None:
        raise NotPresburger("synthesis", "no integer point on the anchored hull direction")
    lat = invariant_lattice(cur, w, v)
    stats["lattices"].append(lat)
    base = [vadd(a0, c) for c in coset_representatives(lat, Lattice.integer_points(v))]
    _, classes = detectable_pattern_partition(cur, lat, base)
    pats = [SemiPattern.make(bi, lat) for bi in classes]
    qs = []
    for pat in pats:
        fin = final_function_from_membership(cur, pat.contains)
        qs.append({q for q, f in fin.items() if f})
    g = parallel_graph(cur, states)
    feeds = set(tv)
    for q in tv:
        feeds |= nx.ancestors(g, q)
    for qi in qs:
        if not qi <= feeds:
            raise NotPresburger("synthesis", "a pattern class cannot reach the terminal components")
    chosen = []
    for i, qi in enumerate(qs):
        zi = replace_final(cur, {q: {zero} for q in finals & qi})
        if is_empty(zi):
            continue
        hull = vec_saff(minimize(zi))
        if any(c.space.subset_of(v) and v.subset_of(c.space) for c in hull.components):
            chosen.append(i)
    covered = set().union(*(qs[i] for i in chosen)) if chosen else set()
    if not (finals & tv) <= covered:
        raise NotPresburger("synthesis", "terminal final states escape the detectable patterns")
    empty = SemiPattern((), lat)
    new_finals = set()
    parts = []
    for i in chosen:
        qi, pat = qs[i], pats[i]
        hs = boundary(replace_final(cur, {q: {zero} for q in finals & qi}), v)
        sides = []
        for h in hs:
            if halfspace_detectable(cur, empty, pat, h, xw, ("<", ">=")):
                sides.append(">=")
            elif halfspace_detectable(cur, empty, pat, h, xw, ("<=", ">")):
                sides.append(">")
            else:
                raise NotPresburger("synthesis", f"half-space of {h.render()} is not detectable")
        qh = []
        for h, side in zip(hs, sides):
            c = dot(h.normal, xw)
            if side == ">=":
                test = lambda x, h=h, c=c: pat.contains(x) and dot(h.normal, x) >= c
            else:
                test = lambda x, h=h, c=c: pat.contains(x) and dot(h.normal, x) > c
            fin = final_function_from_membership(cur, test)
            qh.append({q for q, f in fin.items() if f})
        sets = [qi] + qh
        sigs = boolean_combination_solve(finals & qi & tv, [s & tv for s in sets], tv)
        if sigs is None:
            raise NotPresburger("synthesis", "terminal finals are not a boolean combination")
        new_finals |= {q for q in states if tuple(q in s for s in sets) in sigs}
        atoms = [_atom(h, side, xw) for h, side in zip(hs, sides)]
        choice = disj([conj([f if b else neg(f) for f, b in zip(atoms, sig[1:])])
                       for sig in sorted(sigs) if sig[0]])
        nonneg = conj([linear({x: 1}, ">=", 0) for x in map(free_var, range(m))])
        parts.append(conj([nonneg, pattern_formula(pat.base, lat, v, stats), choice]))
    return disj(parts), new_finals


def _balanced_xor(parts):
    if not parts:
        return FALSE
    while len(parts) > 1:
        nxt = [xor(parts[i], parts[i + 1]) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


def synthesize_positive_cyclic(a, stats=None):
    """Formula for a positive cyclic automaton, peeling one hull direction at a time."""
    stats = stats if stats is not None else _new_stats()
    a = minimize(a)
    m = a.m
    zero = (0,) * m
    w = loop_word(a, a.initial)
    if w is None:
        raise ValueError("the automaton is not cyclic")
    states = reachable_principal(a)
    finals = {q for q in states if a.final[q]}
    limit = len(_scc_table(a)) + 1
    pieces = []
    for it in range(limit + 1):
        if not finals:
            return _balanced_xor(pieces)
        if it == limit:
            raise SynthesisError("peeling did not terminate")
        cur = replace_final(a, {q: {zero} for q in finals})
        v = _choose_space(vec_saff(cur))
        f, peeled = _peel(cur, v, w, stats)
        pieces.append(f)
        finals ^= peeled
    raise SynthesisError("peeling did not terminate")


# ---------------------------------------------------------------- top level


def _new_stats():
    return {"lattices": [], "moduli": set()}


def synthesize(a, stats=None):
    """Formula for the set of a; raises NotPresburger when none exists."""
    stats = stats if stats is not None else _new_stats()
    a = minimize(a)
    if is_empty(a):
        return FALSE
    subs, combine = cyclic_reduction(a)
    return combine([_orthant_synthesize(sub, stats) for _, sub in subs])


def decide_and_synthesize(a):
    """Verdict for a: a defining formula, or the stage at which definability failed."""
    a = minimize(a)
    stats = _new_stats()
    try:
        f = synthesize(a, stats)
    except NotPresburger as exc:
        return Verdict.rejected(exc)
    for n in sorted(stats["moduli"]):
        if math.gcd(n, a.params.r) != 1:
            log.warning("modulus %d is not coprime to the base %d", n, a.params.r)
    for lat in stats["lattices"]:
        idx = lattice_index(lat, Lattice.integer_points(lat.space))
        if math.gcd(idx, a.params.r) != 1:
            log.warning("invariant lattice index %d is not coprime to the base", idx)
    back = minimize(formula_to_fdva(f, a.params))
    if not isomorphic(back, a):
        raise SynthesisError("synthesized formula does not define the input set")
    return Verdict.of_formula(f)


# ---------------------------------------------------------------- dimension one oracle


def _membership_table(a, length):
    return [member(a, (x,)) for x in range(length)]


def dim1_periodicity_oracle(a, limit=1 << 14):
    """Whether a subset of N given by a one-dimensional automaton is ultimately periodic.

    Candidates (threshold, period) are read off a prefix of the characteristic
    sequence and then confirmed exactly by comparing automata.
    """
    a = minimize(intersect_nonneg(a))
    p = a.params
    if p.m != 1:
        raise ValueError("the periodicity oracle works in dimension one")
    n = len(a.principal())
    length = min(max(64, 4 * p.r ** (n + 1)), limit)
    chi = _membership_table(a, length)
    half = length // 2
    for period in range(1, half + 1):
        t = _threshold_for(chi, period)
        if t is None or t > half:
            continue
        if minimize(formula_to_fdva(_periodic_formula(chi, t, period), p)).key() == a.key():
            return True
    return False


def _threshold_for(chi, period):
    t = len(chi) - period
    while t > 0 and chi[t - 1] == chi[t - 1 + period]:
        t -= 1
    if len(chi) - period - t < period:
        return None
    return t


def _periodic_formula(chi, t, period):
    x = free_var(0)
    head = points_formula([(i,) for i in range(t) if chi[i]], 1)
    res = sorted({i % period for i in range(t, t + period) if chi[i]})
    tail = conj([linear({x: 1}, ">=", t), disj([modular({x: 1}, period, c) for c in res])])
    return conj([linear({x: 1}, ">=", 0), disj([head, tail])])


__all__ = [
    "SynthesisError", "Verdict", "cyclic_reduction", "decide_and_synthesize",
    "dim1_periodicity_oracle", "finite_language_formula", "formula_eval", "orthant_subproblems",
    "points_formula", "positive_reduction", "synthesize", "synthesize_positive_cyclic",
]
