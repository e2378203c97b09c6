"""Command-line driver.

Exit codes: 0 success (member: in the set), 1 member: not in the set,
2 usage, input or internal errors, 3 some input is not Presburger-definable.
"""

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from .automata import (FdvaError, apply_sign_flip, combine, complement, dumps, dumps_ndd,
                       from_ndd, intersect_nonneg, is_cyclic, loads, loads_ndd, loop_word, member,
                       minimize, to_ndd)
from .encoding import BasisParams
from .extraction import (NotPresburger, boundary, components, invariant_lattice, terminal_components,
                         vec_saff)
from .formula import ParseError, emit, free_vars, linear, parse
from .linalg import fmt_vec
from .sampling import corpus
from .synthesis import SynthesisError, decide_and_synthesize
from .translate import formula_to_fdva

EXIT_ERROR = 2
EXIT_NOT_PRESBURGER = 3

_BINARY = ("union", "intersection", "difference", "symdiff")
_UNARY = ("complement", "nonneg", "flip")


class _Fail(click.ClickException):
    exit_code = EXIT_ERROR


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Fail(f"{path}: {e.strerror}")


def _load(path):
    try:
        return loads(_read(path))
    except FdvaError as e:
        raise _Fail(f"{path}: {e}")


def _write(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log pipeline progress to stderr.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for random corpora.")
@click.pass_context
def main(ctx, verbose, seed):
    """Automata for integer vector sets and Presburger-definability decisions."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    ctx.obj = {"seed": seed}


@main.command()
@click.argument("formula_file")
@click.option("--r", "r", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--m", "m", type=click.IntRange(min=1), default=None,
              help="Dimension (default: highest free variable index).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def build(formula_file, r, m, out):
    """Build the minimal automaton of a formula."""
    text = _read(formula_file)
    if not text.strip():
        raise click.UsageError(f"{formula_file} contains no formula")
    try:
        f = parse(text)
    except ParseError as e:
        raise _Fail(f"{formula_file}: {e}")
    if m is None:
        m = max([int(v[1:]) for v in free_vars(f) if v[1:].isdigit()] or [1])
    try:
        a = formula_to_fdva(f, BasisParams(r, m))
    except FdvaError as e:
        raise _Fail(str(e))
    _write(dumps(a), out)


@main.command()
@click.argument("op", type=click.Choice(_BINARY + _UNARY))
@click.argument("inputs", nargs=-1, required=True)
@click.option("--sign", default=None, help="Sign vector for flip, e.g. 0,1.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def apply(op, inputs, sign, out):
    """Apply a set operation to automata files."""
    autos = [_load(p) for p in inputs]
    need = 2 if op in _BINARY else 1
    if len(autos) != need:
        raise click.UsageError(f"{op} takes {need} automaton file(s)")
    try:
        if op in _BINARY:
            a = combine(autos[0], autos[1], op)
        elif op == "complement":
            a = complement(autos[0])
        elif op == "nonneg":
            a = minimize(intersect_nonneg(autos[0]))
        else:
            if sign is None:
                raise click.UsageError("flip needs --sign")
            s = tuple(int(c) for c in sign.split(","))
            if len(s) != autos[0].m or any(c not in (0, autos[0].r - 1) for c in s):
                raise click.UsageError(f"bad sign vector {sign}")
            a = minimize(apply_sign_flip(autos[0], s))
    except FdvaError as e:
        raise _Fail(str(e))
    _write(dumps(a), out)


@main.command("member")
@click.argument("automaton")
@click.argument("x", nargs=-1, required=True, type=int)
def member_cmd(automaton, x):
    """Test membership of an integer vector; exit 0 if it belongs, 1 otherwise."""
    a = _load(automaton)
    try:
        ok = member(a, x)
    except FdvaError as e:
        raise _Fail(str(e))
    click.echo("member" if ok else "not a member")
    sys.exit(0 if ok else 1)


@main.command("minimize")
@click.argument("automaton")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def minimize_cmd(automaton, out):
    """Write the minimal automaton."""
    _write(dumps(minimize(_load(automaton))), out)


@main.command()
@click.argument("input_file")
@click.option("--to", "target", type=click.Choice(["ndd", "fdva"]), required=True)
@click.option("--m", "m", type=click.IntRange(min=1), default=None,
              help="Dimension override when reading an NDD.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def translate(input_file, target, m, out):
    """Convert between the FDVA format and the serial NDD format."""
    try:
        if target == "ndd":
            a = _load(input_file)
            _write(dumps_ndd(to_ndd(a), a.m), out)
        else:
            d, m0 = loads_ndd(_read(input_file))
            _write(dumps(from_ndd(d, BasisParams(d.r, m or m0))), out)
    except FdvaError as e:
        raise _Fail(f"{input_file}: {e}")


# ---------------------------------------------------------------- reports


def render_space(v):
    if v.dim == v.m:
        return f"Q^{v.m}"
    if v.dim == 0:
        return "{0}"
    return "span{ " + " ".join(fmt_vec(b) for b in v.basis) + " }"


def _hyperplane_text(h):
    coeffs = {f"x{i + 1}": int(c) for i, c in enumerate(h.normal) if c}
    return emit(linear(coeffs, "=", int(h.constant)))


def analysis_report(a):
    a = minimize(a)
    lines = [f"automaton r={a.r} m={a.m} states={a.size} principal={len(a.principal())}"]
    try:
        infos = components(a)
    except NotPresburger as e:
        return "\n".join(lines + [f"components: not available ({e})"]) + "\n"
    lines.append(f"components: {len(infos)}")
    for i, c in enumerate(infos):
        flags = ("untransient" if c.untransient else "transient") + (" terminal" if c.terminal else "")
        lines.append(f"  C{i} states={{{','.join(map(str, sorted(c.states)))}}} {flags}")
        if c.untransient:
            lines.append(f"    V_G = {render_space(c.vgt)}  [{c.vgt.render()}]")
            for q in sorted(c.anchors):
                lines.append(f"    anchor {q}: {fmt_vec(c.anchors[q])}")
    try:
        terms = terminal_components(a)
        hull = vec_saff(a)
    except NotPresburger as e:
        lines.append(f"terminal components: not available ({e})")
        return "\n".join(lines) + "\n"
    lines.append(f"terminal components: {len(terms)}")
    spaces = sorted({c.space for c in hull.components}, key=lambda v: (-v.dim, v.render()))
    lines.append("vec_saff = " + (" | ".join(render_space(v) for v in spaces) if spaces else "empty"))
    cyclic = is_cyclic(a)
    w = loop_word(a, a.initial) if cyclic else None
    for v in spaces:
        try:
            hs = boundary(a, v)
            text = ", ".join(_hyperplane_text(h) for h in hs)
            lines.append(f"boundary(V={render_space(v)}) \\ axes = {{ {text} }}" if hs
                         else f"boundary(V={render_space(v)}) \\ axes = {{ }}")
        except NotPresburger as e:
            lines.append(f"boundary(V={render_space(v)}): not available ({e})")
        if not cyclic:
            continue
        try:
            lat = invariant_lattice(a, w, v)
            rows = " ".join("[" + " ".join(str(int(c)) for c in b) + "]" for b in lat.basis())
            lines.append(f"inv(V={render_space(v)}) = L{{ {rows} }}")
        except NotPresburger as e:
            lines.append(f"inv(V={render_space(v)}): not available ({e})")
    return "\n".join(lines) + "\n"


def _analyze_one(path):
    return analysis_report(loads(Path(path).read_text(encoding="utf-8")))


def _decide_one(path):
    a = loads(Path(path).read_text(encoding="utf-8"))
    v = decide_and_synthesize(a)
    return v.presburger, (emit(v.formula) if v.presburger else f"{v.stage}: {v.detail}")


def _run_all(fn, paths, jobs):
    for p in paths:
        _load(p)
    if jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, paths))
    return [fn(p) for p in paths]


@main.command()
@click.argument("automata", nargs=-1, required=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
def analyze(automata, jobs):
    """Report components, hull directions, boundaries and invariant lattices."""
    for path, report in zip(automata, _run_all(_analyze_one, automata, jobs)):
        if len(automata) > 1:
            click.echo(f"== {path}")
        click.echo(report, nl=False)


@main.command()
@click.argument("automata", nargs=-1, required=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the formula here (single input only).")
def decide(automata, jobs, out):
    """Decide Presburger-definability and print a defining formula."""
    if out and len(automata) != 1:
        raise click.UsageError("--out needs exactly one input")
    try:
        results = _run_all(_decide_one, automata, jobs)
    except SynthesisError as e:
        raise _Fail(f"internal error: {e}")
    code = 0
    for path, (ok, text) in zip(automata, results):
        prefix = f"{path}: " if len(automata) > 1 else ""
        if ok:
            click.echo(f"{prefix}Presburger")
            click.echo(text)
            click.echo("verified: the formula's automaton is isomorphic to the input")
            if out:
                Path(out).write_text(text + "\n", encoding="utf-8")
        else:
            click.echo(f"{prefix}NotPresburger ({text})")
            code = EXIT_NOT_PRESBURGER
    sys.exit(code)


@main.command("corpus")
@click.option("--m", "m", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--count", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--depth", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--quantifiers", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def corpus_cmd(ctx, m, count, depth, quantifiers, out):
    """Print a seeded random corpus of formulas, one per line."""
    fs = corpus(ctx.obj["seed"], count, m, depth, quantifiers)
    _write("".join(emit(f) + "\n" for f in fs), out)


def run():
    try:
        main(standalone_mode=True)
    except (FdvaError, ParseError) as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_ERROR)


__all__ = ["analysis_report", "main", "render_space", "run"]
