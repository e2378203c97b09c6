"""Finite digit vector automata for subsets of Z^m and Presburger-definability.

A set of integer vectors is represented by a deterministic automaton reading
the base-r digits of all coordinates, least significant digit first.  The
package builds such automata from Presburger formulas, combines them,
extracts their geometry and decides whether a given automaton denotes a
Presburger-definable set, returning a defining formula when it does.
"""

from .automata import (Fdva, FdvaError, combine, complement, dumps, from_ndd, intersect_nonneg,
                       isomorphic, loads, member, minimize, move_initial, apply_sign_flip, to_ndd)
from .encoding import BasisParams, decompose, rho, xi
from .extraction import NotPresburger, boundary, components, invariant_lattice, vec_saff, vgt
from .formula import emit, parse
from .synthesis import SynthesisError, Verdict, decide_and_synthesize, formula_eval
from .translate import formula_to_fdva

__version__ = "0.1.0"

__all__ = [
    "BasisParams", "Fdva", "FdvaError", "NotPresburger", "SynthesisError", "Verdict",
    "apply_sign_flip", "boundary", "combine", "complement", "components", "decide_and_synthesize",
    "decompose", "dumps", "emit", "formula_eval", "formula_to_fdva", "from_ndd", "intersect_nonneg",
    "invariant_lattice", "isomorphic", "loads", "member", "minimize", "move_initial", "parse", "rho",
    "to_ndd", "vec_saff", "vgt", "xi",
]
