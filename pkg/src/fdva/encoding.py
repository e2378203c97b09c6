"""Digits, sign vectors and least-significant-digit-first decompositions.

A word is a flat tuple of digits in {0..r-1}.  When read as a word over
digit vectors, the i-th vector is the block of m consecutive digits
starting at (i-1)*m.  Integer vectors are tuples of ints; rational ones
are tuples of Fractions.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product


@dataclass(frozen=True)
class BasisParams:
    r: int
    m: int

    def __post_init__(self):
        if self.r < 2:
            raise ValueError(f"basis r must be >= 2, got {self.r}")
        if self.m < 1:
            raise ValueError(f"dimension m must be >= 1, got {self.m}")

    @property
    def top(self):
        return self.r - 1

    def sign_vectors(self):
        return [tuple(s) for s in product((0, self.r - 1), repeat=self.m)]

    def digit_vectors(self):
        return [tuple(b) for b in product(range(self.r), repeat=self.m)]


@dataclass(frozen=True)
class Decomposition:
    word: tuple
    sign: tuple
    params: BasisParams

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        object.__setattr__(self, "sign", tuple(self.sign))
        p = self.params
        if len(self.word) % p.m:
            raise ValueError("word length is not a multiple of m")
        if len(self.sign) != p.m or any(d not in (0, p.r - 1) for d in self.sign):
            raise ValueError(f"invalid sign vector {self.sign}")
        if any(not 0 <= d < p.r for d in self.word):
            raise ValueError("digit out of range")


def check_word(w, p, full=True):
    w = tuple(w)
    if any(not 0 <= d < p.r for d in w):
        raise ValueError(f"digit out of range in {w}")
    if full and len(w) % p.m:
        raise ValueError(f"word length {len(w)} is not a multiple of m={p.m}")
    return w


def gamma_digit(b, x, r):
    """Apply the single digit map (x1..xm) -> (r*xm + b, x1..x_{m-1})."""
    return (r * x[-1] + b,) + tuple(x[:-1])


def gamma(w, x, p):
    """Compose the digit maps of w, the first digit applied last."""
    w = check_word(w, p, full=False)
    x = tuple(x)
    for b in reversed(w):
        x = gamma_digit(b, x, p.r)
    return x


def gamma_digit_inv(b, y, r):
    """Inverse of the rational extension of the single digit map."""
    return tuple(y[1:]) + (Fraction(y[0] - b, r),)


def gamma_inv(w, y, p):
    """Inverse of the rational extension of gamma(w, .)."""
    y = tuple(Fraction(c) for c in y)
    for b in w:
        y = gamma_digit_inv(b, y, p.r)
    return y


def gamma_affine(w, p):
    """Return (scale, offset) with gamma(w, x) = scale*x + offset."""
    w = check_word(w, p)
    return p.r ** (len(w) // p.m), gamma(w, (0,) * p.m, p)


def xi(w, p):
    """The unique rational fixed point of the affine extension of gamma(w, .)."""
    w = check_word(w, p, full=False)
    if not w or len(w) % p.m:
        raise ValueError("xi needs a non-empty word of whole digit vectors")
    scale, offset = gamma_affine(w, p)
    return tuple(Fraction(c, 1 - scale) for c in offset)


def sign_point(s, p):
    """The vector s/(1-r), which lies in {0,-1}^m."""
    return tuple(-1 if d else 0 for d in s)


def rho(d):
    p = d.params
    return gamma(d.word, sign_point(d.sign, p), p)


def rho_word(word, sign, p):
    return rho(Decomposition(word, sign, p))


def _pad(word, sign, length):
    reps = (length - len(word)) // len(sign)
    return tuple(word) + tuple(sign) * reps


def same_vector(d1, d2):
    if d1.params != d2.params:
        raise ValueError("decompositions use different bases")
    if d1.sign != d2.sign:
        return False
    n = max(len(d1.word), len(d2.word))
    return _pad(d1.word, d1.sign, n) == _pad(d2.word, d2.sign, n)


def decompose(x, p):
    """Shortest decomposition of the integer vector x."""
    x = tuple(int(c) for c in x)
    if len(x) != p.m:
        raise ValueError(f"expected a vector of dimension {p.m}")
    r = p.r
    word = []
    while any(c not in (0, -1) for c in x):
        # peel the least significant digit of the first coordinate, then rotate
        for _ in range(p.m):
            b = x[0] % r
            word.append(b)
            x = tuple(x[1:]) + ((x[0] - b) // r,)
    sign = tuple(0 if c == 0 else r - 1 for c in x)
    return Decomposition(tuple(word), sign, p)


def flip_signs(s, x, p=None):
    if len(s) != len(x):
        raise ValueError("dimension mismatch")
    return tuple(c if d == 0 else -1 - c for d, c in zip(s, x))


def in_orthant(s, x):
    if len(s) != len(x):
        raise ValueError("dimension mismatch")
    return all((c >= 0) if d == 0 else (c < 0) for d, c in zip(s, x))


def sign_of(x, p):
    return tuple(0 if c >= 0 else p.r - 1 for c in x)
