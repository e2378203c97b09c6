"""Seeded random Presburger formulas for corpora and property tests."""

import random

from .formula import conj, disj, exists, forall, free_var, linear, modular, neg

_OPS = ("<", "<=", "=", ">=", ">")


def random_atom(rng, names, coeff=3, const=6):
    coeffs = {}
    for v in names:
        c = rng.randint(-coeff, coeff)
        if c:
            coeffs[v] = c
    if not coeffs:
        coeffs[rng.choice(names)] = 1
    if rng.random() < 0.3:
        n = rng.randint(2, 6)
        return modular(coeffs, n, rng.randrange(n))
    return linear(coeffs, rng.choice(_OPS), rng.randint(-const, const))


def random_formula(rng, m, depth=2, quantifiers=False):
    """A random formula over x1..xm; with quantifiers it may bind one extra variable."""
    names = [free_var(i) for i in range(m)]
    if quantifiers and rng.random() < 0.5:
        body = _random_tree(rng, names + ["y"], depth)
        return (exists if rng.random() < 0.7 else forall)("y", body)
    return _random_tree(rng, names, depth)


def _random_tree(rng, names, depth):
    if depth == 0 or rng.random() < 0.25:
        return random_atom(rng, names)
    kind = rng.random()
    if kind < 0.15:
        return neg(_random_tree(rng, names, depth - 1))
    parts = [_random_tree(rng, names, depth - 1) for _ in range(2)]
    return conj(parts) if kind < 0.6 else disj(parts)


def corpus(seed, count, m, depth=2, quantifiers=False):
    rng = random.Random(seed)
    return [random_formula(rng, m, depth, quantifiers) for _ in range(count)]


__all__ = ["corpus", "random_atom", "random_formula"]
