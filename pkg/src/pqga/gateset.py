"""Finite gate sets with the idle gate reserved at index 0."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NotUnitary, ParseError
from .linalg import as_matrix, identity, require_unitary

GATE_TOL = 1e-10

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
T = np.diag([1, np.exp(1j * np.pi / 4)])
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
S = np.diag([1, 1j])
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


@dataclass(frozen=True)
class GateSet:
    """Ordered gates ``U_0 = I, U_1, ..., U_{M-1}`` acting on ``N = 2**n`` levels."""

    n: int
    gates: tuple[np.ndarray, ...]
    names: tuple[str, ...]
    label: str = "custom"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("gate set needs at least one data qubit")
        if len(self.gates) != len(self.names):
            raise ValueError("gates and names differ in length")
        if len(self.gates) < 2:
            raise ValueError("gate set needs the idle gate plus at least one gate")
        if len(set(self.names)) != len(self.names):
            raise ValueError("gate names must be unique")
        N = 2**self.n
        gates = []
        for name, g in zip(self.names, self.gates):
            g = as_matrix(g)
            if g.shape != (N, N):
                raise DimensionMismatch(f"gate {name!r} is {g.shape}, expected {(N, N)}")
            require_unitary(g, GATE_TOL, f"gate {name!r}")
            g = g.copy()
            g.setflags(write=False)
            gates.append(g)
        if not np.array_equal(gates[0], np.eye(N)):
            raise ValueError("gate 0 must be exactly the identity")
        object.__setattr__(self, "gates", tuple(gates))
        object.__setattr__(self, "names", tuple(self.names))

    @classmethod
    def from_gates(cls, gates: Sequence, names: Sequence[str] | None = None, label="custom"):
        """Build a set from the non-idle gates; the identity is prepended."""
        gates = [as_matrix(g) for g in gates]
        if not gates:
            raise ValueError("need at least one gate")
        N = gates[0].shape[0]
        n = int(round(np.log2(N)))
        if 2**n != N:
            raise DimensionMismatch(f"data dimension {N} is not a power of two")
        if names is None:
            names = [f"U{i}" for i in range(1, len(gates) + 1)]
        return cls(n, (identity(N), *gates), ("I", *names), label)

    @property
    def M(self) -> int:
        return len(self.gates)

    @property
    def N(self) -> int:
        return 2**self.n

    def __len__(self):
        return len(self.gates)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.gates[i]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise IndexOutOfRange(f"no gate named {name!r} in {self.label}") from None

    def resolve(self, word) -> int:
        """Gate index for an integer index or a gate name."""
        if isinstance(word, str):
            if word.lstrip("-").isdigit():
                word = int(word)
            else:
                return self.index(word)
        if not 0 <= int(word) < self.M:
            raise IndexOutOfRange(f"gate index {word} outside [0, {self.M})")
        return int(word)


def embed_single_qubit(u, target: int, n: int) -> np.ndarray:
    """``I (x) ... (x) u (x) ... (x) I`` with qubit 0 the most significant factor."""
    u = require_unitary(u, GATE_TOL, "single-qubit gate")
    if u.shape != (2, 2):
        raise DimensionMismatch("single-qubit gate must be 2x2")
    if not 0 <= target < n:
        raise IndexOutOfRange(f"qubit {target} outside [0, {n})")
    return np.kron(np.kron(identity(2**target), u), identity(2 ** (n - target - 1)))


def embed_neighbor_pair(u, first: int, n: int) -> np.ndarray:
    u = require_unitary(u, GATE_TOL, "two-qubit gate")
    if not 0 <= first < n - 1:
        raise IndexOutOfRange(f"qubit pair ({first}, {first + 1}) outside [0, {n})")
    return np.kron(np.kron(identity(2**first), u), identity(2 ** (n - first - 2)))


def standard_universal_set(n: int) -> GateSet:
    """Idle, then H on each qubit, T on each qubit, CNOT on each neighbor pair.

    For ``n = 1`` the names are plain ``H`` and ``T``; otherwise they carry
    qubit suffixes (``H0``, ``T1``, ``CNOT01``).
    """
    if n < 1:
        raise ValueError("need at least one qubit")
    if n == 1:
        return GateSet(1, (identity(2), H, T), ("I", "H", "T"), "std-1q")
    gates, names = [identity(2**n)], ["I"]
    for q in range(n):
        gates.append(embed_single_qubit(H, q, n))
        names.append(f"H{q}")
    for q in range(n):
        gates.append(embed_single_qubit(T, q, n))
        names.append(f"T{q}")
    for q in range(n - 1):
        gates.append(embed_neighbor_pair(CNOT, q, n))
        names.append(f"CNOT{q}{q + 1}")
    return GateSet(n, tuple(gates), tuple(names), f"std-{n}q")


def program_register_width(M: int) -> int:
    """Qubits needed to hold one binary-encoded word: ``ceil(log2 M)``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    return (M - 1).bit_length()


def onehot_register_width(M: int) -> int:
    """Control qubits of the one-hot array: one per non-idle gate.

    Counting a line for the idle gate as well gives ``M``.
    """
    if M < 2:
        raise ValueError("M must be >= 2")
    return M - 1


# manifest serialization


def matrix_to_pairs(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def pairs_to_matrix(rows, dim: int | None = None) -> np.ndarray:
    try:
        m = np.array([[complex(float(re), float(im)) for re, im in row] for row in rows])
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix entries: {exc}") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ParseError(f"matrix is not square: shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise ParseError(f"matrix has dim {m.shape[0]}, header says {dim}")
    if not np.all(np.isfinite(m)):
        raise ParseError("matrix has non-finite entries")
    return m


def gateset_to_manifest(gs: GateSet) -> dict:
    return {
        "name": gs.label,
        "n": gs.n,
        "M": gs.M,
        "gates": [
            {"name": name, "matrix": matrix_to_pairs(g)} for name, g in zip(gs.names, gs.gates)
        ],
    }


def gateset_from_manifest(doc: dict) -> GateSet:
    try:
        n, M, entries = int(doc["n"]), int(doc["M"]), doc["gates"]
        names = [str(e["name"]) for e in entries]
        gates = [pairs_to_matrix(e["matrix"], 2**n) for e in entries]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed gate-set manifest: {exc!r}") from None
    if len(gates) != M:
        raise ParseError(f"manifest declares M={M} but lists {len(gates)} gates")
    try:
        return GateSet(n, tuple(gates), tuple(names), str(doc.get("name", "custom")))
    except NotUnitary:
        raise
    except ValueError as exc:
        raise ParseError(f"invalid gate-set manifest: {exc}") from None


def load_gateset(spec: str) -> GateSet:
    """Resolve a builtin name (``std-1q``, ``std-2q``, ``std-<n>q``) or a manifest path."""
    if spec.startswith("std-") and spec.endswith("q") and spec[4:-1].isdigit():
        return standard_universal_set(int(spec[4:-1]))
    path = Path(spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read gate set {spec!r}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{spec}: {exc}") from None
    gs = gateset_from_manifest(doc)
    return GateSet(gs.n, gs.gates, gs.names, str(path))


def save_gateset(gs: GateSet, path) -> None:
    Path(path).write_text(json.dumps(gateset_to_manifest(gs), indent=1) + "\n", encoding="utf-8")
