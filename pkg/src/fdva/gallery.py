"""Small hand-built automata used by the tests, the acceptance suite and the CLI demos."""

from .automata import from_parallel, make_fdva
from .encoding import BasisParams


def integers(r=2, m=1):
    p = BasisParams(r, m)
    return from_parallel(p, 0, lambda q, b: 0, lambda q: p.sign_vectors())


def naturals(r=2, m=1):
    p = BasisParams(r, m)
    return from_parallel(p, 0, lambda q, b: 0, lambda q: [(0,) * m])


def singleton_one(r=2):
    """The set {1} in dimension 1; states are the residual sets {1}, {0} and the empty set."""
    p = BasisParams(r, 1)
    table = {"one": lambda b: "zero" if b == (1,) else "none",
             "zero": lambda b: "zero" if b == (0,) else "none",
             "none": lambda b: "none"}
    return from_parallel(p, "one", lambda q, b: table[q](b),
                         lambda q: [(0,)] if q == "zero" else [])


def union_of_lines():
    """Two interleaved lines, r=2, m=2; its hull direction is two lines."""
    p = BasisParams(2, 2)
    table = {
        "init": {(0, 0): "init", (0, 1): "x1p", (1, 0): "x2p", (1, 1): "none"},
        "x1p": {(1, 1): "x1p", (1, 0): "x1", (0, 0): "none", (0, 1): "none"},
        "x1": {(0, 0): "x1", (0, 1): "x1p", (1, 0): "none", (1, 1): "none"},
        "x2p": {(1, 1): "x2p", (0, 1): "x2", (0, 0): "none", (1, 0): "none"},
        "x2": {(0, 0): "x2", (1, 0): "x2p", (0, 1): "none", (1, 1): "none"},
    }

    def trans(q, b):
        return "none" if q == "none" else table[q][b]

    return from_parallel(p, "init", trans,
                         lambda q: [(0, 0)] if q in ("init", "x1", "x2") else [])


def leq2():
    """{x in N^2 : x1 <= 2 x2}, states tracking the offset c in x1 <= 2 x2 + c."""
    p = BasisParams(2, 2)

    def trans(c, b):
        return (2 * b[1] + c - b[0]) // 2

    return from_parallel(p, 0, trans, lambda c: [(0, 0)] if c >= 0 else [])


def plus(r=2):
    """{x in Z^3 : x1 + x2 = x3}, states tracking the carry."""
    p = BasisParams(r, 3)

    def trans(q, b):
        if q == "bot":
            return "bot"
        t = b[0] + b[1] + q - b[2]
        if t == 0:
            return 0
        if t == r:
            return 1
        return "bot"

    def final_of(q):
        if q == "bot":
            return []
        return [s for s in p.sign_vectors() if s[0] + s[1] + q == s[2] + (r if q else 0)]

    return from_parallel(p, 0, trans, final_of)


def valuation(r=2):
    """{x in Z^2 : x2 is the largest power of r dividing x1}, with x2 = 0 when x1 = 0."""
    p = BasisParams(r, 2)

    def trans(q, b):
        if q == "A":
            if b == (0, 0):
                return "A"
            if b[0] != 0 and b[1] == 1:
                return "B"
            return "bot"
        if q == "B":
            return "B" if b[1] == 0 else "bot"
        return "bot"

    def final_of(q):
        if q == "A":
            return [(0, 0)]
        if q == "B":
            return [(0, 0), (r - 1, 0)]
        return []

    return from_parallel(p, "A", trans, final_of)


def powers_of_two():
    """{2^k : k >= 0} in base 2."""
    p = BasisParams(2, 1)

    def trans(q, b):
        if q == "start":
            return "start" if b == (0,) else "tail"
        if q == "tail":
            return "tail" if b == (0,) else "bot"
        return "bot"

    return from_parallel(p, "start", trans, lambda q: [(0,)] if q == "tail" else [])


# successor edges of the 26-node eye picture: 18 tree nodes feeding an 8-cycle
EYE_EDGES = {
    "n0": "n1", "n2": "n1", "n1": "n3", "n4": "n5", "n6": "n7", "n8": "n9",
    "na": "n8", "nb": "n8", "nc": "n8", "ne": "nc", "nf": "ng", "nh": "nf",
    "ni": "nf", "nj": "nf", "nk": "ni", "nl": "nm", "no": "nl", "np": "nl",
    "n3": "n5", "n5": "n7", "n7": "n9", "n9": "nq", "nq": "ng", "ng": "nm",
    "nm": "nz", "nz": "n3",
}
EYE_KERNEL = {"n3", "n5", "n7", "n9", "nq", "ng", "nm", "nz"}


def eye_picture():
    """Dimension 1, r=2: digit 1 follows the eye picture, digit 0 loops."""
    names = sorted(EYE_EDGES)
    index = {n: i for i, n in enumerate(names)}
    delta = [[index[n], index[EYE_EDGES[n]]] for n in names]
    a = make_fdva(BasisParams(2, 1), [0] * len(names), delta, 0, [()] * len(names))
    return a, names
