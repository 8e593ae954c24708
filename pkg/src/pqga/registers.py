"""Program/data register layout.

The composite space is ``program (x) data`` with the program first.  A
program of ``k`` slots over ``M`` words is stored as a mixed-radix number
whose least significant digit is the first word executed (slot ``P_1``),
so the idle padding of a short program sits in the high-order slots.
Amplitude index of ``|P; d>`` is ``P * N + d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NotNormalized, ProgramTooLong

IDLE = 0
NORM_TOL = 1e-10


def _check_words(words: Sequence[int], M: int) -> tuple[int, ...]:
    out = tuple(int(w) for w in words)
    for w in out:
        if not 0 <= w < M:
            raise IndexOutOfRange(f"word {w} outside gate range [0, {M})")
    return out


def encode_program(words: Sequence[int], k: int, M: int) -> int:
    """Basis index of ``words`` (execution order) padded to ``k`` slots."""
    words = _check_words(words, M)
    if len(words) > k:
        raise ProgramTooLong(f"program has {len(words)} words, capacity is {k}")
    index = 0
    for w in reversed(words):
        index = index * M + w
    return index


def pad_program(words: Sequence[int], k: int) -> tuple[int, ...]:
    """Execution-ordered slot contents ``(P_1, ..., P_k)``."""
    words = tuple(words)
    if len(words) > k:
        raise ProgramTooLong(f"program has {len(words)} words, capacity is {k}")
    return words + (IDLE,) * (k - len(words))


def slot_contents(index: int, k: int, M: int) -> tuple[int, ...]:
    if not 0 <= index < M**k:
        raise IndexOutOfRange(f"program index {index} outside [0, {M ** k})")
    digits = []
    for _ in range(k):
        index, d = divmod(index, M)
        digits.append(d)
    return tuple(digits)


def decode_program(index: int, k: int, M: int) -> tuple[int, ...]:
    """Inverse of :func:`encode_program`; trailing idle padding is dropped."""
    words = list(slot_contents(index, k, M))
    while words and words[-1] == IDLE:
        words.pop()
    return tuple(words)


@dataclass(frozen=True)
class StateVector:
    """Amplitudes over ``M**k`` program indices times ``N`` data levels."""

    amplitudes: np.ndarray
    k: int
    M: int
    N: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.M**self.k * self.N:
            raise DimensionMismatch(
                f"state has {amps.size} amplitudes, expected {self.M ** self.k * self.N}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def program_dim(self) -> int:
        return self.M**self.k

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``(program_dim, N)``."""
        return self.amplitudes.reshape(self.program_dim, self.N)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _normalized(v, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise NotNormalized(f"{what} has norm {np.linalg.norm(v):.12g}")
    return v


def make_product_state(program_index: int, data, k: int, M: int) -> StateVector:
    data = _normalized(data, "data vector")
    if not 0 <= program_index < M**k:
        raise IndexOutOfRange(f"program index {program_index} outside [0, {M ** k})")
    program = np.zeros(M**k, dtype=complex)
    program[program_index] = 1.0
    return StateVector(np.kron(program, data), k, M, data.size)


def make_superposed_state(program_amplitudes, data, k: int, M: int) -> StateVector:
    """``|p> (x) |d>`` for an arbitrary normalized program state ``p``."""
    p = _normalized(program_amplitudes, "program state")
    d = _normalized(data, "data vector")
    if p.size != M**k:
        raise DimensionMismatch(f"program state has {p.size} amplitudes, expected {M ** k}")
    return StateVector(np.kron(p, d), k, M, d.size)


@dataclass(frozen=True)
class SchmidtResult:
    product: bool
    program_part: np.ndarray | None
    data_part: np.ndarray | None
    singular_values: np.ndarray

    @property
    def second_singular_value(self) -> float:
        sv = self.singular_values
        return float(sv[1]) if sv.size > 1 else 0.0


def _fix_phase(v: np.ndarray, cutoff: float = 1e-12) -> tuple[np.ndarray, complex]:
    nz = np.flatnonzero(np.abs(v) > cutoff)
    if nz.size == 0:
        return v, 1.0
    phase = v[nz[0]] / abs(v[nz[0]])
    return v / phase, phase


def schmidt_split(amplitudes, program_dim: int, data_dim: int, tol: float = 1e-10) -> SchmidtResult:
    """Product test across the program/data cut by SVD of the reshaped amplitudes."""
    mat = np.asarray(amplitudes, dtype=complex).reshape(program_dim, data_dim)
    u, s, vh = np.linalg.svd(mat)
    second = s[1] if s.size > 1 else 0.0
    if second > tol:
        return SchmidtResult(False, None, None, s)
    program, phase = _fix_phase(u[:, 0])
    # absorb the removed phase and the weight into the data factor, then normalize
    data = vh[0] * phase
    data = data / np.linalg.norm(data)
    return SchmidtResult(True, program, data, s)


def schmidt_check(state: StateVector, tol: float = 1e-10) -> SchmidtResult:
    """Rank-1 test of ``state`` across the program/data cut.

    When the state is a product, ``program_part (x) data_part`` equals the
    state up to a global phase; the program part's first nonzero amplitude
    is real and positive.
    """
    return schmidt_split(state.amplitudes, state.program_dim, state.N, tol)
