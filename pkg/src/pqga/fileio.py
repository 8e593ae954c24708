"""JSON file formats: matrices, data vectors, and program files.

Complex numbers are always written as explicit ``[re, im]`` pairs.

Matrix file::

    {"dim": 2, "rows": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}

Vector file::

    {"dim": 2, "amplitudes": [[1, 0], [0, 0]]}

Program file (words may be gate names or indices)::

    {"gateset": "std-1q", "k": 6, "words": ["H", "T", "T", "T", "T", "H"]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .gateset import GateSet, load_gateset, matrix_to_pairs, pairs_to_matrix


def _load_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return doc


def _dump_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")


def write_matrix(m, path) -> None:
    m = np.asarray(m, dtype=complex)
    _dump_json({"dim": int(m.shape[0]), "rows": matrix_to_pairs(m)}, path)


def read_matrix(path) -> np.ndarray:
    doc = _load_json(path)
    try:
        dim, rows = int(doc["dim"]), doc["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed matrix file ({exc!r})") from None
    return pairs_to_matrix(rows, dim)


def write_vector(v, path) -> None:
    v = np.asarray(v, dtype=complex).reshape(-1)
    _dump_json({"dim": int(v.size), "amplitudes": [[float(z.real), float(z.imag)] for z in v]}, path)


def read_vector(path) -> np.ndarray:
    doc = _load_json(path)
    try:
        dim = int(doc["dim"])
        v = np.array([complex(float(re), float(im)) for re, im in doc["amplitudes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed vector file ({exc!r})") from None
    if v.size != dim or not np.all(np.isfinite(v)):
        raise ParseError(f"{path}: expected {dim} finite amplitudes")
    return v


@dataclass(frozen=True)
class ProgramFile:
    gateset: str
    k: int
    words: tuple

    def resolve(self, gs: GateSet | None = None) -> tuple[GateSet, tuple[int, ...]]:
        """Load the named gate set and map every word to its index."""
        gs = gs or load_gateset(self.gateset)
        try:
            return gs, tuple(gs.resolve(w) for w in self.words)
        except IndexError as exc:
            raise ParseError(str(exc)) from None


def write_program(prog: ProgramFile, path) -> None:
    _dump_json({"gateset": prog.gateset, "k": prog.k, "words": list(prog.words)}, path)


def read_program(path) -> ProgramFile:
    doc = _load_json(path)
    try:
        gateset, k, words = str(doc["gateset"]), int(doc["k"]), doc["words"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed program file ({exc!r})") from None
    if not isinstance(words, list) or not all(isinstance(w, (str, int)) for w in words):
        raise ParseError(f"{path}: words must be a list of gate names or indices")
    if k < 1:
        raise ParseError(f"{path}: capacity k must be >= 1")
    return ProgramFile(gateset, k, tuple(words))
