"""Digit vector automata over serialized least-significant-digit-first encodings.

States are dense integers.  Every state has a level in Z/mZ; the level-0
states are the principal ones and carry a set of accepted sign vectors.
Reading the m digits of a digit vector from a principal state leads to a
principal state.  The represented set is {rho(sigma, s) : s in final(delta(q0, sigma))}.
"""

from collections import deque
from dataclasses import dataclass

import networkx as nx

from .encoding import BasisParams, decompose


class FdvaError(ValueError):
    pass


@dataclass(frozen=True)
class Fdva:
    params: BasisParams
    levels: tuple
    delta: tuple
    initial: int
    final: tuple

    @property
    def r(self):
        return self.params.r

    @property
    def m(self):
        return self.params.m

    @property
    def size(self):
        return len(self.levels)

    def principal(self):
        return [k for k, l in enumerate(self.levels) if l == 0]

    def step(self, k, b):
        return self.delta[k][b]

    def run(self, k, word):
        for b in word:
            k = self.delta[k][b]
        return k

    def finals(self, q):
        return self.final[q]

    def key(self):
        return (self.params, self.levels, self.delta, self.initial,
                tuple(tuple(sorted(f)) for f in self.final))

    def validate(self):
        p = self.params
        n = self.size
        if len(self.delta) != n or len(self.final) != n:
            raise FdvaError("inconsistent table sizes")
        if not 0 <= self.initial < n or self.levels[self.initial] != 0:
            raise FdvaError("initial state must be a level-0 state")
        signs = set(p.sign_vectors())
        for k in range(n):
            if len(self.delta[k]) != p.r:
                raise FdvaError(f"state {k} does not have {p.r} successors")
            for b, k2 in enumerate(self.delta[k]):
                if not 0 <= k2 < n:
                    raise FdvaError(f"transition {k} {b} leads to unknown state {k2}")
                if self.levels[k2] != (self.levels[k] + 1) % p.m:
                    raise FdvaError(f"transition {k} {b} {k2} breaks the level structure")
            if self.levels[k] != 0 and self.final[k]:
                raise FdvaError(f"non-principal state {k} has final sign vectors")
            if not set(self.final[k]) <= signs:
                raise FdvaError(f"state {k} has invalid sign vectors")
        return self


def make_fdva(params, levels, delta, initial, final):
    final = tuple(frozenset(tuple(s) for s in f) for f in final)
    return Fdva(params, tuple(levels), tuple(tuple(row) for row in delta), initial, final).validate()


def explore(params, init_key, step, final_of):
    """Build an automaton from a deterministic transition function on hashable keys.

    States are identified by (key, level), so a key may recur at several levels.
    """
    ids = {(init_key, 0): 0}
    keys = [init_key]
    levels = [0]
    delta = []
    queue = deque([0])
    while queue:
        k = queue.popleft()
        key, lvl = keys[k], levels[k]
        nxt = (lvl + 1) % params.m
        row = []
        for b in range(params.r):
            key2 = step(key, b, lvl)
            k2 = ids.get((key2, nxt))
            if k2 is None:
                k2 = len(keys)
                ids[(key2, nxt)] = k2
                keys.append(key2)
                levels.append(nxt)
                queue.append(k2)
            row.append(k2)
        delta.append(row)
    final = [frozenset(final_of(key)) if levels[i] == 0 else frozenset()
             for i, key in enumerate(keys)]
    return Fdva(params, tuple(levels), tuple(tuple(r) for r in delta), 0, tuple(final)), keys


def from_parallel(params, init, trans, final_of):
    """Build from a description on digit vectors: trans(q, bvec) -> q', final_of(q) -> signs."""
    m = params.m

    def step(key, b, lvl):
        q, prefix = key
        prefix = prefix + (b,)
        if len(prefix) == m:
            return (trans(q, prefix), ())
        return (q, prefix)

    a, _ = explore(params, (init, ()), step, lambda key: final_of(key[0]))
    return minimize(a)


# ---------------------------------------------------------------- semantics


def parallel_step(a, q, bvec):
    return a.run(q, bvec)


def check_saturated(a):
    p = a.params
    for q in a.principal():
        for s in p.sign_vectors():
            if (s in a.final[q]) != (s in a.final[a.run(q, s)]):
                return False
    return True


def member(a, x):
    x = tuple(x)
    if len(x) != a.m:
        raise FdvaError(f"expected a vector of dimension {a.m}")
    d = decompose(x, a.params)
    return d.sign in a.final[a.run(a.initial, d.word)]


def member_from(a, q, x):
    d = decompose(x, a.params)
    return d.sign in a.final[a.run(q, d.word)]


# ---------------------------------------------------------------- minimization


def _reachable(a):
    seen = {a.initial}
    stack = [a.initial]
    while stack:
        k = stack.pop()
        for k2 in a.delta[k]:
            if k2 not in seen:
                seen.add(k2)
                stack.append(k2)
    return seen


def language_classes(a):
    """Moore refinement: class id per state, equal ids iff equal residual languages."""
    n = a.size
    sig0 = {}
    cls = []
    for k in range(n):
        key = (a.levels[k], tuple(sorted(a.final[k])))
        cls.append(sig0.setdefault(key, len(sig0)))
    count = len(sig0)
    delta = a.delta
    while True:
        sig = {}
        new = []
        for k in range(n):
            key = (cls[k], *map(cls.__getitem__, delta[k]))
            new.append(sig.setdefault(key, len(sig)))
        if len(sig) == count:
            return new
        cls, count = new, len(sig)


def canonical(a, classes=None):
    """Renumber reachable states (or classes) in BFS order from the initial state."""
    if classes is None:
        classes = list(range(a.size))
    rep = {}
    for k in range(a.size):
        rep.setdefault(classes[k], k)
    order = {classes[a.initial]: 0}
    queue = deque([classes[a.initial]])
    seq = [classes[a.initial]]
    while queue:
        c = queue.popleft()
        for k2 in a.delta[rep[c]]:
            c2 = classes[k2]
            if c2 not in order:
                order[c2] = len(seq)
                seq.append(c2)
                queue.append(c2)
    levels = tuple(a.levels[rep[c]] for c in seq)
    delta = tuple(tuple(order[classes[k2]] for k2 in a.delta[rep[c]]) for c in seq)
    final = tuple(a.final[rep[c]] for c in seq)
    return Fdva(a.params, levels, delta, 0, final)


def minimize(a):
    return canonical(a, language_classes(a))


def is_minimal(a):
    return minimize(a) == a


def isomorphic(a1, a2):
    if not (is_minimal(a1) and is_minimal(a2)):
        raise FdvaError("isomorphism is only decided on minimized automata")
    return a1.key() == a2.key()


def equivalent(a1, a2):
    """Same represented set (minimizes both sides)."""
    return a1.params == a2.params and minimize(a1).key() == minimize(a2).key()


# ---------------------------------------------------------------- boolean algebra

_OPS = {
    "union": lambda u, v: u or v,
    "intersection": lambda u, v: u and v,
    "difference": lambda u, v: u and not v,
    "symdiff": lambda u, v: u != v,
}


def combine(a1, a2, op):
    if a1.params != a2.params:
        raise FdvaError("automata use different bases or dimensions")
    if op not in _OPS:
        raise FdvaError(f"unknown operation {op}")
    f = _OPS[op]
    signs = a1.params.sign_vectors()

    def step(key, b, lvl):
        return (a1.delta[key[0]][b], a2.delta[key[1]][b])

    def final_of(key):
        f1, f2 = a1.final[key[0]], a2.final[key[1]]
        return [s for s in signs if f(s in f1, s in f2)]

    a, _ = explore(a1.params, (a1.initial, a2.initial), step, final_of)
    return minimize(a)


def complement(a):
    signs = frozenset(a.params.sign_vectors())
    final = tuple(signs - f if a.levels[k] == 0 else frozenset() for k, f in enumerate(a.final))
    return minimize(Fdva(a.params, a.levels, a.delta, a.initial, final))


def empty_set(params):
    return from_parallel(params, 0, lambda q, b: 0, lambda q: ())


def full_set(params):
    return from_parallel(params, 0, lambda q, b: 0, lambda q: params.sign_vectors())


def nonneg_set(params):
    zero = (0,) * params.m
    return from_parallel(params, 0, lambda q, b: 0, lambda q: [zero])


def is_empty(a):
    return not any(a.final[k] for k in _reachable(a))


# ---------------------------------------------------------------- state moves


def move_initial(a, q):
    if not 0 <= q < a.size or a.levels[q] != 0:
        raise FdvaError(f"state {q} is not principal")
    return Fdva(a.params, a.levels, a.delta, q, a.final)


def replace_final(a, final):
    """A^F: same graph, new final map (dict or sequence indexed by principal states)."""
    if isinstance(final, dict):
        seq = [frozenset(final.get(k, ())) if a.levels[k] == 0 else frozenset()
               for k in range(a.size)]
    else:
        seq = [frozenset(f) for f in final]
    b = Fdva(a.params, a.levels, a.delta, a.initial, tuple(seq)).validate()
    if not check_saturated(b):
        raise FdvaError("final function is not saturated")
    return b


def apply_sign_flip(a, s):
    """Automaton for f_s(X): digits of flipped coordinates are complemented."""
    p = a.params
    s = tuple(s)
    top = p.r - 1
    delta = tuple(tuple(a.delta[k][top - b if s[a.levels[k]] else b] for b in range(p.r))
                  for k in range(a.size))

    def flip(t):
        return tuple(top - d if si else d for d, si in zip(t, s))

    final = tuple(frozenset(flip(t) for t in f) for f in a.final)
    return Fdva(p, a.levels, delta, a.initial, final)


def intersect_nonneg(a):
    zero = (0,) * a.m
    final = tuple(frozenset([zero]) if zero in f else frozenset() for f in a.final)
    return Fdva(a.params, a.levels, a.delta, a.initial, final)


def is_positive(a):
    zero = (0,) * a.m
    return all(f <= {zero} for f in a.final)


# ---------------------------------------------------------------- words and graphs


def bfs_words(a, start=None):
    """Shortest word from start to every reachable state (digit tuples)."""
    start = a.initial if start is None else start
    words = {start: ()}
    queue = deque([start])
    while queue:
        k = queue.popleft()
        for b, k2 in enumerate(a.delta[k]):
            if k2 not in words:
                words[k2] = words[k] + (b,)
                queue.append(k2)
    return words


def reachable_principal(a, start=None):
    return sorted(k for k in bfs_words(a, start) if a.levels[k] == 0)


def digit_graph(a):
    g = nx.DiGraph()
    g.add_nodes_from(range(a.size))
    for k in range(a.size):
        for k2 in a.delta[k]:
            g.add_edge(k, k2)
    return g


def parallel_graph(a, states=None):
    """Graph on principal states with an edge for every digit vector."""
    states = a.principal() if states is None else states
    g = nx.DiGraph()
    g.add_nodes_from(states)
    vecs = a.params.digit_vectors()
    g.add_edges_from({(q, a.run(q, v)) for q in states for v in vecs})
    return g


def parallel_successors(a, q):
    return {a.run(q, v) for v in a.params.digit_vectors()}


def has_loop(a, q):
    """True iff q lies on a cycle of non-empty digit-vector words."""
    seen = set()
    stack = list(parallel_successors(a, q))
    while stack:
        k = stack.pop()
        if k == q:
            return True
        if k in seen:
            continue
        seen.add(k)
        stack.extend(parallel_successors(a, k))
    return False


def is_cyclic(a):
    return has_loop(a, a.initial)


def loop_word(a, q):
    """A shortest non-empty word leading from q back to q, or None.

    Levels make its length a multiple of m whenever q is principal.
    """
    prev = {}
    queue = deque([q])
    while queue:
        k = queue.popleft()
        for b, k2 in enumerate(a.delta[k]):
            if k2 == q:
                word = [b]
                while k != q:
                    k, bb = prev[k]
                    word.append(bb)
                return tuple(reversed(word))
            if k2 not in prev:
                prev[k2] = (k, b)
                queue.append(k2)
    return None


# ---------------------------------------------------------------- detectability and eyes


def detectability_pairs(a):
    """Word pairs (sigma_k . b, sigma_{delta(k,b)}) over the BFS spanning tree.

    A set X' is of the form A^F exactly when the residual gamma^{-1}(X') is the
    same along both words of every pair.
    """
    words = bfs_words(a)
    pairs = []
    for k in sorted(words):
        for b, k2 in enumerate(a.delta[k]):
            w1 = words[k] + (b,)
            if w1 != words[k2]:
                pairs.append((w1, words[k2]))
    return pairs


def eyes(a, s, states=None):
    """Partition of principal states by meeting s-orbits; returns list of (eye, kernel)."""
    s = tuple(s)
    states = a.principal() if states is None else states
    succ = {q: a.run(q, s) for q in states}
    g = nx.Graph()
    g.add_nodes_from(states)
    for q, q2 in succ.items():
        if q2 in succ:
            g.add_edge(q, q2)
    out = []
    for comp in nx.connected_components(g):
        q = min(comp)
        seen = []
        pos = {}
        while q not in pos:
            pos[q] = len(seen)
            seen.append(q)
            q = succ[q]
        kernel = frozenset(seen[pos[q]:])
        out.append((frozenset(comp), kernel))
    out.sort(key=lambda e: min(e[0]))
    return out


# ---------------------------------------------------------------- NDD translation


@dataclass(frozen=True)
class Dfa:
    """Classical complete deterministic automaton over digits 0..r-1."""
    r: int
    delta: tuple
    initial: int
    accepting: frozenset

    def accepts(self, word):
        k = self.initial
        for b in word:
            k = self.delta[k][b]
        return k in self.accepting


def dfa_minimize(d):
    n = len(d.delta)
    cls = [1 if k in d.accepting else 0 for k in range(n)]
    count = len(set(cls))
    while True:
        sig = {}
        new = [sig.setdefault((cls[k],) + tuple(cls[k2] for k2 in d.delta[k]), len(sig))
               for k in range(n)]
        if len(sig) == count:
            break
        cls, count = new, len(sig)
    rep = {}
    for k in range(n):
        rep.setdefault(cls[k], k)
    order = {cls[d.initial]: 0}
    seq = [cls[d.initial]]
    queue = deque(seq)
    while queue:
        c = queue.popleft()
        for k2 in d.delta[rep[c]]:
            if cls[k2] not in order:
                order[cls[k2]] = len(seq)
                seq.append(cls[k2])
                queue.append(cls[k2])
    delta = tuple(tuple(order[cls[k2]] for k2 in d.delta[rep[c]]) for c in seq)
    acc = frozenset(order[c] for c in seq if rep[c] in d.accepting)
    return Dfa(d.r, delta, 0, acc)


def _explore_dfa(r, init_key, step, accepting):
    ids = {init_key: 0}
    keys = [init_key]
    delta = []
    queue = deque([init_key])
    while queue:
        key = queue.popleft()
        row = []
        for b in range(r):
            key2 = step(key, b)
            if key2 not in ids:
                ids[key2] = len(keys)
                keys.append(key2)
                queue.append(key2)
            row.append(ids[key2])
        delta.append(tuple(row))
    acc = frozenset(i for i, key in enumerate(keys) if accepting(key))
    return Dfa(r, tuple(delta), 0, acc), keys


def to_ndd(a):
    """DFA recognizing the words sigma.s with s in final(delta(q0, sigma))."""
    p = a.params
    top = p.r - 1

    def step(key, b):
        k, block = key
        if a.levels[k] == 0:
            block = ()
        if block is not None:
            block = block + (b,) if b in (0, top) else None
        return (a.delta[k][b], block)

    def accepting(key):
        k, block = key
        return a.levels[k] == 0 and block is not None and len(block) == p.m \
            and _unflip_block(a, k, block)

    d, _ = _explore_dfa(p.r, (a.initial, None), step, accepting)
    return dfa_minimize(d)


def _unflip_block(a, k, block):
    # saturation: s in final(q) iff s in final(delta(q, s)), and k = delta(q, s)
    return block in a.final[k]


def from_ndd(d, params):
    """Inverse of to_ndd; rejects languages outside the decomposition shape."""
    p = params
    if d.r != p.r:
        raise FdvaError("basis mismatch")

    def pstep(key, b, lvl):
        return (d.delta[key[0]][b], (key[1] + 1) % p.m)

    def final_of(key):
        return [s for s in p.sign_vectors() if _dfa_run(d, key[0], s) in d.accepting]

    a, _ = explore(p, (d.initial, 0), pstep, final_of)
    a = minimize(a)
    if not check_saturated(a) or dfa_minimize(to_ndd(a)) != dfa_minimize(d):
        raise FdvaError("language is not a saturated set of decompositions")
    return a


def _dfa_run(d, k, word):
    for b in word:
        k = d.delta[k][b]
    return k


# ---------------------------------------------------------------- text format


def dumps(a):
    lines = [f"fdva r={a.r} m={a.m}"]
    for k in range(a.size):
        lines.append(f"state {k} level={a.levels[k]}")
    lines.append(f"initial {a.initial}")
    for k in range(a.size):
        for b, k2 in enumerate(a.delta[k]):
            lines.append(f"trans {k} {b} {k2}")
    for k in range(a.size):
        if a.final[k]:
            signs = " ".join("(" + ",".join(map(str, s)) + ")" for s in sorted(a.final[k]))
            lines.append(f"final {k} : {signs}")
    return "\n".join(lines) + "\n"


def loads(text):
    params = None
    states = {}
    trans = {}
    finals = {}
    initial = None

    def fail(lineno, msg):
        raise FdvaError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "fdva":
                kv = dict(t.split("=", 1) for t in tok[1:])
                params = BasisParams(int(kv["r"]), int(kv["m"]))
            elif params is None:
                fail(lineno, "missing 'fdva r=<int> m=<int>' header")
            elif tok[0] == "state":
                if len(tok) != 3 or not tok[2].startswith("level="):
                    fail(lineno, "expected 'state <id> level=<int>'")
                sid = int(tok[1])
                if sid in states:
                    fail(lineno, f"duplicate state {sid}")
                lvl = int(tok[2][6:])
                if not 0 <= lvl < params.m:
                    fail(lineno, f"level {lvl} out of range")
                states[sid] = lvl
            elif tok[0] == "initial":
                initial = int(tok[1])
            elif tok[0] == "trans":
                if len(tok) != 4:
                    fail(lineno, "expected 'trans <id> <digit> <id>'")
                k, b, k2 = map(int, tok[1:])
                if not 0 <= b < params.r:
                    fail(lineno, f"digit {b} out of range")
                if (k, b) in trans:
                    fail(lineno, f"duplicate transition from {k} on {b}")
                trans[(k, b)] = (k2, lineno)
            elif tok[0] == "final":
                head, _, rest = line.partition(":")
                k = int(head.split()[1])
                signs = []
                for chunk in rest.replace(")", ") ").split():
                    t = tuple(int(c) for c in chunk.strip("()").split(","))
                    if len(t) != params.m or any(c not in (0, params.r - 1) for c in t):
                        fail(lineno, f"invalid sign vector {chunk}")
                    signs.append(t)
                finals.setdefault(k, set()).update(signs)
            else:
                fail(lineno, f"unknown directive {tok[0]!r}")
        except FdvaError:
            raise
        except (ValueError, KeyError, IndexError) as e:
            fail(lineno, f"malformed line ({e})")
    if params is None:
        raise FdvaError("line 1: missing header")
    if initial is None or initial not in states:
        raise FdvaError("missing or unknown initial state")
    ids = sorted(states)
    index = {sid: i for i, sid in enumerate(ids)}
    delta = []
    for sid in ids:
        row = []
        for b in range(params.r):
            if (sid, b) not in trans:
                raise FdvaError(f"state {sid} has no transition on digit {b}")
            k2, lineno = trans[(sid, b)]
            if k2 not in index:
                raise FdvaError(f"line {lineno}: unknown target state {k2}")
            if states[k2] != (states[sid] + 1) % params.m:
                raise FdvaError(f"line {lineno}: transition breaks the level structure")
            row.append(index[k2])
        delta.append(row)
    for k in finals:
        if k not in index:
            raise FdvaError(f"final sets given for unknown state {k}")
        if states[k] != 0:
            raise FdvaError(f"final sets given for non-principal state {k}")
    final = [finals.get(sid, set()) for sid in ids]
    a = make_fdva(params, [states[s] for s in ids], delta, index[initial], final)
    if not check_saturated(a):
        raise FdvaError("final function is not saturated")
    return a


def dumps_ndd(d, m):
    lines = [f"ndd r={d.r} m={m}", f"initial {d.initial}"]
    for k, row in enumerate(d.delta):
        for b, k2 in enumerate(row):
            lines.append(f"trans {k} {b} {k2}")
    for k in sorted(d.accepting):
        lines.append(f"accept {k}")
    return "\n".join(lines) + "\n"


def loads_ndd(text):
    """Return (Dfa, m) from the text format written by dumps_ndd."""
    r = m = initial = None
    trans = {}
    accepting = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "ndd":
                kv = dict(t.split("=", 1) for t in tok[1:])
                r, m = int(kv["r"]), int(kv["m"])
            elif r is None:
                raise FdvaError(f"line {lineno}: missing 'ndd r=<int> m=<int>' header")
            elif tok[0] == "initial":
                initial = int(tok[1])
            elif tok[0] == "trans":
                k, b, k2 = map(int, tok[1:4])
                if not 0 <= b < r:
                    raise FdvaError(f"line {lineno}: digit {b} out of range")
                trans[(k, b)] = k2
            elif tok[0] == "accept":
                accepting.add(int(tok[1]))
            else:
                raise FdvaError(f"line {lineno}: unknown directive {tok[0]!r}")
        except (ValueError, KeyError, IndexError) as e:
            raise FdvaError(f"line {lineno}: malformed line ({e})")
    if r is None:
        raise FdvaError("line 1: missing header")
    n = 1 + max([initial or 0] + [k for k, _ in trans] + list(trans.values()) + list(accepting))
    delta = []
    for k in range(n):
        if any((k, b) not in trans for b in range(r)):
            raise FdvaError(f"state {k} lacks a transition")
        delta.append(tuple(trans[(k, b)] for b in range(r)))
    if initial is None:
        raise FdvaError("missing initial state")
    return Dfa(r, tuple(delta), initial, frozenset(accepting)), m
