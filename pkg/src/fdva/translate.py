"""Formula to automaton translation.

A subformula is compiled over a context of variables: the free variables
x1..xm followed by the quantified variables in scope, innermost last.  The
innermost quantified variable is therefore always the last coordinate, and
projecting it away only touches the last digit of every digit vector.
"""

from collections import deque

from .automata import FdvaError, combine, complement, explore, minimize
from .encoding import BasisParams, sign_point
from .formula import (And, Const, Exists, Forall, Linear, Mod, Not, Or, free_var, free_vars)


def formula_to_fdva(f, params):
    m = params.m
    names = [free_var(i) for i in range(m)]
    extra = free_vars(f) - set(names)
    if extra:
        raise FdvaError(f"free variables {sorted(extra)} are not among x1..x{m}")
    return _Compiler(params.r).compile(f, tuple(names))


class _Compiler:
    def __init__(self, r):
        self.r = r
        self.memo = {}

    def compile(self, f, ctx):
        key = (id(f), ctx)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[1]
        a = self._compile(f, ctx)
        self.memo[key] = (f, a)
        return a

    def _compile(self, f, ctx):
        p = BasisParams(self.r, len(ctx))
        if isinstance(f, Const):
            return _constant(p, f.value)
        if isinstance(f, Linear):
            return linear_atom(p, _alpha(f.coeffs, ctx), f.op, f.const)
        if isinstance(f, Mod):
            return modular_atom(p, _alpha(f.coeffs, ctx), f.modulus, f.residue)
        if isinstance(f, Not):
            return complement(self.compile(f.arg, ctx))
        if isinstance(f, (And, Or)):
            op = "intersection" if isinstance(f, And) else "union"
            parts = [self.compile(a, ctx) for a in f.args]
            parts.sort(key=lambda a: a.size)
            acc = parts[0]
            for a in parts[1:]:
                acc = combine(acc, a, op)
            return acc
        if isinstance(f, Exists):
            return project_last(self.compile(f.body, ctx + (f.var,)))
        if isinstance(f, Forall):
            body = complement(self.compile(f.body, ctx + (f.var,)))
            return complement(project_last(body))
        raise TypeError(f"not a formula: {f!r}")


def _alpha(coeffs, ctx):
    alpha = [0] * len(ctx)
    for v, c in coeffs:
        # innermost binding wins
        for i in range(len(ctx) - 1, -1, -1):
            if ctx[i] == v:
                alpha[i] += c
                break
        else:
            raise FdvaError(f"unbound variable {v}")
    return tuple(alpha)


def _constant(p, value):
    signs = p.sign_vectors() if value else []
    a, _ = explore(p, 0, lambda k, b, lvl: 0, lambda k: signs)
    return minimize(a)


def _sign_value(alpha, s, p):
    return sum(a * c for a, c in zip(alpha, sign_point(s, p)))


def linear_atom(p, alpha, op, const):
    """Automaton for <alpha, x> op const."""
    if op == "<":
        alpha, op, const = alpha, "<=", const - 1
    elif op == ">=":
        alpha, op, const = tuple(-a for a in alpha), "<=", -const
    elif op == ">":
        alpha, op, const = tuple(-a for a in alpha), "<=", -const - 1
    m, r = p.m, p.r
    signs = p.sign_vectors()
    sink = ("sink",)

    def step(key, b, lvl):
        if key == sink:
            return sink
        c, partial = key
        partial += alpha[lvl] * b
        if lvl < m - 1:
            return (c, partial)
        num = c - partial
        if op == "=":
            return (num // r, 0) if num % r == 0 else sink
        return (num // r, 0)

    def final_of(key):
        if key == sink:
            return []
        c = key[0]
        if op == "=":
            return [s for s in signs if _sign_value(alpha, s, p) == c]
        return [s for s in signs if _sign_value(alpha, s, p) <= c]

    a, _ = explore(p, (const, 0), step, final_of)
    return minimize(a)


def modular_atom(p, alpha, modulus, residue):
    """Automaton for <alpha, x> = residue (mod modulus)."""
    m, r, n = p.m, p.r, modulus
    signs = p.sign_vectors()

    def step(key, b, lvl):
        mult, c, partial = key
        partial = (partial + alpha[lvl] * b) % n
        if lvl < m - 1:
            return (mult, c, partial)
        return ((mult * r) % n, (c - mult * partial) % n, 0)

    def final_of(key):
        mult, c, _ = key
        return [s for s in signs if (mult * _sign_value(alpha, s, p) - c) % n == 0]

    a, _ = explore(p, (1 % n, residue % n, 0), step, final_of)
    return minimize(a)


def project_last(a):
    """Automaton for {x : exists y, (x, y) in X} where y is the last coordinate."""
    p = a.params
    d = p.m
    if d < 2:
        raise FdvaError("cannot project the only coordinate")
    q = BasisParams(p.r, d - 1)
    last = d - 1
    top = p.r - 1

    # principal states from which some padding with x-part s_x reaches an accepting pair
    good = {}
    principal = a.principal()
    for sx in q.sign_vectors():
        seeds = {k for k in principal
                 if any(sx + (sy,) in a.final[k] for sy in (0, top))}
        # reverse reachability over digit vectors (sx, any)
        preds = {}
        for k in principal:
            for b in range(p.r):
                k2 = a.run(k, sx + (b,))
                preds.setdefault(k2, set()).add(k)
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            k = queue.popleft()
            for k0 in preds.get(k, ()):
                if k0 not in seen:
                    seen.add(k0)
                    queue.append(k0)
        good[sx] = seen

    def step(key, b, lvl):
        nxt = frozenset(a.delta[k][b] for k in key)
        if lvl + 1 == last:
            nxt = frozenset(a.delta[k][c] for k in nxt for c in range(p.r))
        return nxt

    def final_of(key):
        return [sx for sx in q.sign_vectors() if key & good[sx]]

    out, _ = explore(q, frozenset([a.initial]), step, final_of)
    return minimize(out)


__all__ = ["formula_to_fdva", "linear_atom", "modular_atom", "project_last"]
