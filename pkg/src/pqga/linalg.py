"""Dense complex linear algebra on square numpy arrays.

Matrices are plain ``np.ndarray`` objects of complex dtype. Every function
here is pure and never mutates its arguments.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg as sla

from .errors import DimensionMismatch, NotUnitary

DEFAULT_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatch(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=complex)


def mat_mul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Tensor product; entry ``[i*nb + k, j*nb + l] = a[i, j] * b[k, l]``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def unitarity_error(a) -> float:
    a = as_matrix(a)
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))))


def is_unitary(a, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return unitarity_error(a) <= tol


def require_unitary(a, tol: float = 1e-8, what: str = "matrix") -> np.ndarray:
    m = as_matrix(a)
    err = unitarity_error(m)
    if err > tol:
        raise NotUnitary(f"{what} is not unitary (max |A^dag A - I| = {err:.3g})")
    return m


def raw_phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    # Evaluated as ||u - phi v||_F with the optimal phase rather than the
    # closed form sqrt(2N - 2|tr(u^dag v)|), which loses ~8 digits near 0.
    overlap = np.vdot(v, u)  # tr(v^dag u)
    mag = abs(overlap)
    phase = overlap / mag if mag > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def phase_invariant_distance(u, v, tol: float = 1e-8) -> float:
    """Frobenius distance between ``u`` and ``v`` minimized over a global phase.

    Equals ``sqrt(2N - 2|tr(u^dag v)|)`` and lies in ``[0, 2 sqrt(N)]``.
    """
    u, v = as_matrix(u), as_matrix(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"shapes differ: {u.shape} vs {v.shape}")
    require_unitary(u, tol, "u")
    require_unitary(v, tol, "v")
    return raw_phase_distance(u, v)


def unitary_root(u, j: int) -> np.ndarray:
    """Principal ``j``-th root of a unitary via its spectral decomposition.

    Degenerate eigenvalues are handled by the complex Schur form, which is
    diagonal with a unitary basis for any normal matrix.
    """
    if j < 1:
        raise ValueError("root order must be >= 1")
    u = require_unitary(u)
    if j == 1:
        return u.copy()
    t, z = sla.schur(u, output="complex")
    angles = np.angle(np.diag(t))
    # keep the branch cut on the (-pi, pi] side so that -1 maps to +i
    angles = np.where(angles <= -np.pi + 1e-12, np.pi, angles)
    roots = np.exp(1j * angles / j)
    return (z * roots) @ z.conj().T


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``n x n`` unitary (QR of a complex Ginibre matrix)."""
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)
