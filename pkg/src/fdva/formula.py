"""Presburger formulas: syntax tree, parser, printer and quantifier-free evaluation.

Grammar (lowest precedence first):
    phi  := 'E' var '.' phi | 'A' var '.' phi | disj
    disj := conj ('|' conj)*
    conj := neg ('&' neg)*
    neg  := '!' neg | '(' phi ')' | 'true' | 'false' | atom
    atom := term cmp term | term '%' INT '=' INT
    term := ['-'] item (('+' | '-') item)*
    item := INT | var | INT '*' var | '(' term ')'
"""

import re


def _var_key(v):
    m = re.fullmatch(r"([A-Za-z_]+)(\d*)", v)
    if m:
        return (m.group(1), int(m.group(2) or -1), v)
    return (v, -1, v)


class Formula:
    __slots__ = ("_hash",)
    prec = 9

    def __hash__(self):
        h = getattr(self, "_hash", None)
        if h is None:
            h = hash((type(self).__name__,) + self._fields())
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        return type(self) is type(other) and hash(self) == hash(other) \
            and self._fields() == other._fields()

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __repr__(self):
        return f"Formula({emit(self)})"

    def __and__(self, other):
        return conj([self, other])

    def __or__(self, other):
        return disj([self, other])

    def __invert__(self):
        return neg(self)


def _init(obj, **kw):
    for k, v in kw.items():
        object.__setattr__(obj, k, v)


class Const(Formula):
    __slots__ = ("value",)

    def __init__(self, value):
        _init(self, value=bool(value))

    def _fields(self):
        return (self.value,)


TRUE = Const(True)
FALSE = Const(False)


def _norm_coeffs(coeffs):
    if isinstance(coeffs, dict):
        items = coeffs.items()
    else:
        items = coeffs
    acc = {}
    for v, c in items:
        acc[v] = acc.get(v, 0) + int(c)
    return tuple(sorted(((v, c) for v, c in acc.items() if c), key=lambda t: _var_key(t[0])))


class Linear(Formula):
    """sum(c * v) op const with op in <, <=, =, >=, >."""
    __slots__ = ("coeffs", "op", "const")
    OPS = ("<", "<=", "=", ">=", ">")

    def __init__(self, coeffs, op, const):
        if op not in self.OPS:
            raise ValueError(f"unknown comparison {op}")
        _init(self, coeffs=_norm_coeffs(coeffs), op=op, const=int(const))

    def _fields(self):
        return (self.coeffs, self.op, self.const)


class Mod(Formula):
    """sum(c * v) = residue (mod modulus)."""
    __slots__ = ("coeffs", "modulus", "residue")

    def __init__(self, coeffs, modulus, residue):
        if modulus < 1:
            raise ValueError("modulus must be >= 1")
        _init(self, coeffs=_norm_coeffs(coeffs), modulus=int(modulus),
              residue=int(residue) % int(modulus))

    def _fields(self):
        return (self.coeffs, self.modulus, self.residue)


class Not(Formula):
    __slots__ = ("arg",)
    prec = 3

    def __init__(self, arg):
        _init(self, arg=arg)

    def _fields(self):
        return (self.arg,)


class And(Formula):
    __slots__ = ("args",)
    prec = 2

    def __init__(self, args):
        _init(self, args=tuple(args))

    def _fields(self):
        return self.args


class Or(Formula):
    __slots__ = ("args",)
    prec = 1

    def __init__(self, args):
        _init(self, args=tuple(args))

    def _fields(self):
        return self.args


class Exists(Formula):
    __slots__ = ("var", "body")
    prec = 0

    def __init__(self, var, body):
        _init(self, var=var, body=body)

    def _fields(self):
        return (self.var, self.body)


class Forall(Formula):
    __slots__ = ("var", "body")
    prec = 0

    def __init__(self, var, body):
        _init(self, var=var, body=body)

    def _fields(self):
        return (self.var, self.body)


# ---------------------------------------------------------------- smart constructors


def conj(args):
    out = []
    for a in args:
        if a == TRUE:
            continue
        if a == FALSE:
            return FALSE
        out.extend(a.args if isinstance(a, And) else [a])
    out = list(dict.fromkeys(out))
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(out)


def disj(args):
    out = []
    for a in args:
        if a == FALSE:
            continue
        if a == TRUE:
            return TRUE
        out.extend(a.args if isinstance(a, Or) else [a])
    out = list(dict.fromkeys(out))
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(out)


def neg(a):
    if isinstance(a, Const):
        return Const(not a.value)
    if isinstance(a, Not):
        return a.arg
    return Not(a)


def xor(a, b):
    return disj([conj([a, neg(b)]), conj([neg(a), b])])


def exists(var, body):
    return body if isinstance(body, Const) else Exists(var, body)


def forall(var, body):
    return body if isinstance(body, Const) else Forall(var, body)


def linear(coeffs, op, const):
    atom = Linear(coeffs, op, const)
    if not atom.coeffs:
        return Const(_compare(0, op, atom.const))
    return atom


def modular(coeffs, modulus, residue):
    atom = Mod(coeffs, modulus, residue)
    if atom.modulus == 1:
        return TRUE
    if not atom.coeffs:
        return Const(atom.residue == 0)
    return atom


def free_var(i):
    return f"x{i + 1}"


def vector_coeffs(alpha, names=None):
    names = names or [free_var(i) for i in range(len(alpha))]
    return {n: c for n, c in zip(names, alpha)}


def equals_point(x):
    return conj([linear({free_var(i): 1}, "=", c) for i, c in enumerate(x)])


# ---------------------------------------------------------------- printing


def _fmt_terms(coeffs):
    out = []
    for i, (v, c) in enumerate(coeffs):
        mag = abs(c)
        item = v if mag == 1 else f"{mag}*{v}"
        if i == 0:
            out.append(item if c > 0 else f"-{item}")
        else:
            out.append(f"+ {item}" if c > 0 else f"- {item}")
    return " ".join(out) if out else "0"


def emit(f):
    """Deterministic text rendering that the parser reads back to an equal tree."""
    return _emit(f, 0)


def _emit(f, ctx):
    if isinstance(f, Const):
        s = "true" if f.value else "false"
    elif isinstance(f, Linear):
        s = f"{_fmt_terms(f.coeffs)} {f.op} {f.const}"
    elif isinstance(f, Mod):
        s = f"{_fmt_terms(f.coeffs)} % {f.modulus} = {f.residue}"
    elif isinstance(f, Not):
        s = "!" + _emit(f.arg, 3)
    elif isinstance(f, And):
        s = " & ".join(_emit(a, 3) for a in f.args)
    elif isinstance(f, Or):
        s = " | ".join(_emit(a, 2) for a in f.args)
    elif isinstance(f, (Exists, Forall)):
        q = "E" if isinstance(f, Exists) else "A"
        s = f"{q} {f.var}. {_emit(f.body, 0)}"
    else:
        raise TypeError(f"not a formula: {f!r}")
    if f.prec < ctx:
        return f"({s})"
    return s


# ---------------------------------------------------------------- parsing


class ParseError(ValueError):
    def __init__(self, msg, pos, text):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"line {line}, column {col}: {msg}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(<=|>=|[<>=&|!().%*+-]))")


def _tokenize(text):
    toks = []
    pos = 0
    text_len = len(text)
    while pos < text_len:
        if text[pos:].strip() == "":
            break
        if text[pos] == "#":
            nl = text.find("\n", pos)
            pos = text_len if nl < 0 else nl
            continue
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             pos + len(text[pos:]) - len(text[pos:].lstrip()), text)
        start = mt.start(mt.lastindex)
        if mt.group(1) is not None:
            toks.append(("int", int(mt.group(1)), start))
        elif mt.group(2) is not None:
            toks.append(("name", mt.group(2), start))
        else:
            toks.append(("op", mt.group(3), start))
        pos = mt.end()
    toks.append(("eof", None, text_len))
    return toks


_TERM_FOLLOW = ("<", "<=", "=", ">=", ">", "%", "+", "-")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect(self, kind, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            self.error(f"expected {value or kind}", t)
        return t

    def formula(self):
        t = self.peek()
        if t[0] == "name" and t[1] in ("E", "A") and self.peek(1)[0] == "name" \
                and self.peek(2)[:2] == ("op", "."):
            self.next()
            var = self.next()[1]
            self.next()
            body = self.formula()
            return Exists(var, body) if t[1] == "E" else Forall(var, body)
        return self.disjunction()

    def disjunction(self):
        args = [self.conjunction()]
        while self.peek()[:2] == ("op", "|"):
            self.next()
            args.append(self.conjunction())
        return _flat(Or, args)

    def conjunction(self):
        args = [self.negation()]
        while self.peek()[:2] == ("op", "&"):
            self.next()
            args.append(self.negation())
        return _flat(And, args)

    def negation(self):
        t = self.peek()
        if t[:2] == ("op", "!"):
            self.next()
            return Not(self.negation())
        if t[0] == "name" and t[1] in ("E", "A") and self.peek(2)[:2] == ("op", "."):
            return self.formula()
        if t[0] == "name" and t[1] in ("true", "false"):
            self.next()
            return TRUE if t[1] == "true" else FALSE
        if t[:2] == ("op", "("):
            save = self.i
            self.next()
            try:
                inner = self.formula()
                closes = self.peek()[:2] == ("op", ")")
                after = self.peek(1)
                if closes and not (after[0] == "op" and after[1] in _TERM_FOLLOW):
                    self.next()
                    return inner
            except ParseError:
                pass
            self.i = save
        return self.atom()

    def atom(self):
        lhs, lconst = self.term()
        t = self.next()
        if t[:2] == ("op", "%"):
            n = self.expect("int")[1]
            self.expect("op", "=")
            c = self.signed_int()
            if n < 1:
                self.error("modulus must be positive", t)
            return Mod(lhs, n, c - lconst)
        if t[0] != "op" or t[1] not in Linear.OPS:
            self.error("expected a comparison", t)
        rhs, rconst = self.term()
        coeffs = dict(lhs)
        for v, c in rhs.items():
            coeffs[v] = coeffs.get(v, 0) - c
        return Linear(coeffs, t[1], rconst - lconst)

    def signed_int(self):
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.next()
            sign = -1
        return sign * self.expect("int")[1]

    def term(self):
        coeffs = {}
        const = 0
        sign = 1
        if self.peek()[:2] == ("op", "-"):
            self.next()
            sign = -1
        while True:
            c, k = self.item()
            for v, a in c.items():
                coeffs[v] = coeffs.get(v, 0) + sign * a
            const += sign * k
            t = self.peek()
            if t[:2] == ("op", "+"):
                sign = 1
            elif t[:2] == ("op", "-"):
                sign = -1
            else:
                return coeffs, const
            self.next()
            if self.peek()[:2] == ("op", "-"):
                self.next()
                sign = -sign

    def item(self):
        t = self.next()
        if t[0] == "int":
            if self.peek()[:2] == ("op", "*"):
                self.next()
                v = self.expect("name")[1]
                return {v: t[1]}, 0
            return {}, t[1]
        if t[0] == "name":
            if t[1] in ("E", "A", "true", "false"):
                self.error(f"reserved word {t[1]!r} used as a variable", t)
            return {t[1]: 1}, 0
        if t[:2] == ("op", "("):
            c, k = self.term()
            self.expect("op", ")")
            return c, k
        if t[:2] == ("op", "-"):
            c, k = self.item()
            return {v: -a for v, a in c.items()}, -k
        self.error("expected a term", t)


def _flat(cls, args):
    if len(args) == 1:
        return args[0]
    out = []
    for a in args:
        out.extend(a.args if isinstance(a, cls) else [a])
    return cls(out)


def parse(text):
    p = _Parser(text)
    if p.peek()[0] == "eof":
        raise ParseError("empty formula", 0, text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.error("unexpected trailing input")
    return f


# ---------------------------------------------------------------- evaluation


def _compare(lhs, op, rhs):
    return {"<": lhs < rhs, "<=": lhs <= rhs, "=": lhs == rhs,
            ">=": lhs >= rhs, ">": lhs > rhs}[op]


def free_vars(f, bound=frozenset()):
    if isinstance(f, Const):
        return set()
    if isinstance(f, (Linear, Mod)):
        return {v for v, _ in f.coeffs} - bound
    if isinstance(f, Not):
        return free_vars(f.arg, bound)
    if isinstance(f, (And, Or)):
        out = set()
        for a in f.args:
            out |= free_vars(a, bound)
        return out
    return free_vars(f.body, bound | {f.var})


def substitute(f, mapping):
    """Replace free variables by affine terms: mapping[v] = (coeffs dict, constant)."""
    if not mapping:
        return f
    if isinstance(f, Const):
        return f
    if isinstance(f, (Linear, Mod)):
        acc, shift = {}, 0
        for v, c in f.coeffs:
            if v in mapping:
                terms, k = mapping[v]
                for u, d in terms.items():
                    acc[u] = acc.get(u, 0) + c * d
                shift += c * k
            else:
                acc[v] = acc.get(v, 0) + c
        if isinstance(f, Linear):
            return linear(acc, f.op, f.const - shift)
        return modular(acc, f.modulus, f.residue - shift)
    if isinstance(f, Not):
        return neg(substitute(f.arg, mapping))
    if isinstance(f, (And, Or)):
        parts = [substitute(a, mapping) for a in f.args]
        return conj(parts) if isinstance(f, And) else disj(parts)
    inner = {v: t for v, t in mapping.items() if v != f.var}
    var, body = f.var, f.body
    used = {u for terms, _ in inner.values() for u in terms}
    if var in used:
        taken = used | free_vars(body) | set(inner)
        fresh = next(f"{var}_{i}" for i in range(1, len(taken) + 2) if f"{var}_{i}" not in taken)
        body = substitute(body, {var: ({fresh: 1}, 0)})
        var = fresh
    body = substitute(body, inner)
    return exists(var, body) if isinstance(f, Exists) else forall(var, body)


def rename(f, names):
    return substitute(f, {v: ({u: 1}, 0) for v, u in names.items()})


def is_quantifier_free(f):
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    return True


def evaluate(f, x, env=None):
    """Evaluate a quantifier-free formula at the integer vector x (bound to x1..xm)."""
    values = {free_var(i): int(c) for i, c in enumerate(x)}
    if env:
        values.update(env)
    return _eval(f, values)


def _eval(f, values):
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Linear):
        return _compare(sum(c * values[v] for v, c in f.coeffs), f.op, f.const)
    if isinstance(f, Mod):
        return (sum(c * values[v] for v, c in f.coeffs) - f.residue) % f.modulus == 0
    if isinstance(f, Not):
        return not _eval(f.arg, values)
    if isinstance(f, And):
        return all(_eval(a, values) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, values) for a in f.args)
    raise ValueError("quantified formulas are evaluated through their automaton")


def size(f, seen=None):
    """Number of distinct nodes (shared subformulas counted once)."""
    seen = set() if seen is None else seen
    if id(f) in seen:
        return 0
    seen.add(id(f))
    if isinstance(f, Not):
        return 1 + size(f.arg, seen)
    if isinstance(f, (And, Or)):
        return 1 + sum(size(a, seen) for a in f.args)
    if isinstance(f, (Exists, Forall)):
        return 1 + size(f.body, seen)
    return 1
