"""Compile target unitaries into gate-index words by exhaustive search.

Words are searched by increasing length and, within a length, in
lexicographic order of gate indices, so the returned word is the shortest
one within ``epsilon`` and the lexicographically smallest of that length.
The idle gate is padding, never a search move.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gateset import GateSet
from .linalg import (
    identity,
    phase_invariant_distance,
    raw_phase_distance,
    require_unitary,
    unitary_root,
)

DEFAULT_MAX_LENGTH = 12
_GRID = 1e6


@dataclass(frozen=True)
class SynthesisResult:
    program: tuple[int, ...]
    distance: float
    nodes_expanded: int
    achieved: bool

    def names(self, gs: GateSet) -> list[str]:
        return [gs.names[w] for w in self.program]


@dataclass(frozen=True)
class Verification:
    ok: bool
    distance: float


@dataclass(frozen=True)
class RootSynthesis:
    root_program: tuple[int, ...]
    j: int
    root: np.ndarray
    result: SynthesisResult


def program_product(program: Sequence, gs: GateSet) -> np.ndarray:
    """``U_{P_l} ... U_{P_1}``: the first word is the rightmost factor."""
    out = identity(gs.N)
    for w in program:
        out = gs[gs.resolve(w)] @ out
    return out


def _phase_key(m: np.ndarray) -> bytes:
    # Divide out the phase of the first sizeable entry, then snap to a grid.
    flat = m.reshape(-1)
    cut = 0.5 / np.sqrt(m.shape[0])
    lead = flat[np.argmax(np.abs(flat) > cut)]
    canon = flat * (abs(lead) / lead)
    grid = np.round(np.concatenate([canon.real, canon.imag]) * _GRID).astype(np.int64)
    grid[grid == 0] = 0
    return grid.tobytes()


def compile(target, gs: GateSet, epsilon: float, max_length: int = DEFAULT_MAX_LENGTH,
            prune: bool = True) -> SynthesisResult:
    """Breadth-first search for a word whose product is within ``epsilon`` of ``target``.

    With ``prune`` on, a word whose product (up to phase, on a 1e-6 grid)
    was already reached by an earlier word is not extended: any completion
    of it has an earlier equivalent, so the returned word is unchanged.

    When nothing within ``max_length`` reaches ``epsilon`` the closest word
    seen is returned with ``achieved=False``.
    """
    target = require_unitary(target, 1e-10, "target")
    if target.shape != (gs.N, gs.N):
        raise ValueError(f"target is {target.shape}, gate set acts on {gs.N} levels")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if max_length < 0:
        raise ValueError("max_length must be >= 0")

    start = identity(gs.N)
    best_word, best_d = (), raw_phase_distance(start, target)
    nodes = 1
    if best_d <= epsilon:
        return SynthesisResult((), best_d, nodes, True)

    moves = [(g, gs[g]) for g in range(1, gs.M)]
    seen = {_phase_key(start)} if prune else None
    frontier = [((), start)]
    for _ in range(max_length):
        level = []
        for word, mat in frontier:
            for g, u in moves:
                prod = u @ mat
                nodes += 1
                if seen is not None:
                    key = _phase_key(prod)
                    if key in seen:
                        continue
                    seen.add(key)
                cand = word + (g,)
                d = raw_phase_distance(prod, target)
                if d <= epsilon:
                    return SynthesisResult(cand, d, nodes, True)
                if d < best_d:
                    best_word, best_d = cand, d
                level.append((cand, prod))
        if not level:
            break
        frontier = level
    return SynthesisResult(best_word, best_d, nodes, False)


def verify_program(program: Sequence, gs: GateSet, target, epsilon: float) -> Verification:
    """Recompute the program's product and its distance to ``target``."""
    d = phase_invariant_distance(program_product(program, gs), target)
    return Verification(d <= epsilon, d)


def compile_via_root(target, gs: GateSet, epsilon: float, j: int,
                     max_length: int = DEFAULT_MAX_LENGTH) -> RootSynthesis:
    """Compile the ``j``-th root of ``target``; replaying it ``j`` times lands within ``j * epsilon``."""
    root = unitary_root(target, j)
    result = compile(root, gs, epsilon, max_length)
    return RootSynthesis(result.program, j, root, result)
