"""The programmable gate array machine.

One computational step applies the gate selected by slot ``P_1`` to the
data (the block-diagonal step operator) and then rotates the program slots
right by one, ``(P_k, ..., P_2, P_1) -> (P_1, P_k, ..., P_2)``.  After
``k`` steps the program register is back where it started and the data
has seen ``U_{P_k} ... U_{P_1}``.

Steps act directly on state vectors; ``*_matrix`` helpers materialize the
full operators for cross-checks at tiny dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import ContractViolation, DimensionMismatch, NotBijective
from .gateset import GateSet
from .linalg import as_matrix, identity, require_unitary
from .registers import (
    IDLE,
    StateVector,
    encode_program,
    make_product_state,
    pad_program,
    schmidt_check,
    slot_contents,
)

CONTRACT_TOL = 1e-10


@dataclass(frozen=True)
class MachineConfig:
    k: int
    M: int
    N: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one program slot")
        if self.M < 2:
            raise ValueError("need the idle gate plus at least one gate")
        if self.N < 2:
            raise ValueError("data dimension must be >= 2")

    @classmethod
    def for_gateset(cls, gs: GateSet, k: int) -> "MachineConfig":
        return cls(k, gs.M, gs.N)


@dataclass(frozen=True)
class StepOperator:
    """Block-diagonal operator whose block ``b`` is gate ``b``."""

    gates: tuple[np.ndarray, ...]

    @property
    def M(self) -> int:
        return len(self.gates)

    @property
    def N(self) -> int:
        return self.gates[0].shape[0]

    def matrix(self) -> np.ndarray:
        M, N = self.M, self.N
        out = np.zeros((M * N, M * N), dtype=complex)
        for b, g in enumerate(self.gates):
            out[b * N : (b + 1) * N, b * N : (b + 1) * N] = g
        return out

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """Act on the last word slot and the data of a flat amplitude vector."""
        M, N = self.M, self.N
        psi = np.asarray(amplitudes, dtype=complex).reshape(-1, M, N)
        out = np.empty_like(psi)
        for b, g in enumerate(self.gates):
            out[:, b, :] = psi[:, b, :] @ g.T
        return out.reshape(-1)


def build_step_operator(gs: GateSet | Sequence) -> StepOperator:
    gates = gs.gates if isinstance(gs, GateSet) else tuple(as_matrix(g) for g in gs)
    if not gates:
        raise ValueError("empty gate set")
    N = gates[0].shape[0]
    for i, g in enumerate(gates):
        if g.shape != (N, N):
            raise DimensionMismatch(f"gate {i} is {g.shape}, expected {(N, N)}")
        require_unitary(g, 1e-10, f"gate {i}")
    return StepOperator(tuple(gates))


@dataclass(frozen=True)
class ProgramPermutation:
    """A bijection on the ``M**k`` program basis indices.

    ``images[i]`` is where index ``i`` is sent.  It acts as the identity on
    the data factor.
    """

    images: np.ndarray
    M: int
    k: int

    def __post_init__(self):
        images = np.asarray(self.images, dtype=np.int64).reshape(-1)
        size = self.M**self.k
        if images.size != size:
            raise NotBijective(f"permutation has {images.size} images, expected {size}")
        if images.size and (images.min() < 0 or images.max() >= size):
            raise NotBijective("image outside the program index range")
        if np.unique(images).size != size:
            raise NotBijective("duplicate image: map is not a bijection")
        images.setflags(write=False)
        object.__setattr__(self, "images", images)

    def __call__(self, index: int) -> int:
        return int(self.images[index])

    def matrix(self) -> np.ndarray:
        size = self.images.size
        out = np.zeros((size, size))
        out[self.images, np.arange(size)] = 1.0
        return out

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        psi = np.asarray(amplitudes, dtype=complex).reshape(self.images.size, -1)
        out = np.empty_like(psi)
        out[self.images] = psi
        return out.reshape(-1)

    def power(self, t: int) -> "ProgramPermutation":
        images = np.arange(self.images.size)
        for _ in range(t):
            images = self.images[images]
        return ProgramPermutation(images, self.M, self.k)


def cyclic_shift(M: int, k: int) -> ProgramPermutation:
    idx = np.arange(M**k)
    return ProgramPermutation((idx % M) * M ** (k - 1) + idx // M, M, k)


def build_shift_operator(cfg: MachineConfig) -> ProgramPermutation:
    """Right cyclic shift of the ``k`` word slots."""
    return cyclic_shift(cfg.M, cfg.k)


def build_permutation_controller(perm, M: int, k: int) -> ProgramPermutation:
    """Wrap an arbitrary bijection on program indices for use in place of the shift.

    ``perm`` may be a sequence of images or a callable on indices.
    """
    if callable(perm):
        perm = [perm(i) for i in range(M**k)]
    return ProgramPermutation(perm, M, k)


def build_controlled_gate(u) -> np.ndarray:
    """``[[I, 0], [0, u]]``: apply ``u`` when the leading control qubit is 1."""
    u = require_unitary(u, 1e-10, "controlled gate")
    N = u.shape[0]
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return np.kron(p0, identity(N)) + np.kron(p1, u)


def onehot_control_index(gate: int, M: int) -> int:
    """Control basis index with only the line of ``gate`` (``>= 1``) set."""
    if not 1 <= gate < M:
        raise ValueError(f"gate {gate} has no control line (valid: 1..{M - 1})")
    return 1 << (M - 1 - gate)


def build_onehot_array(gs: GateSet | Sequence) -> np.ndarray:
    """Product of controlled gates, one control qubit per non-idle gate.

    Control qubit ``i`` (most significant first) controls gate ``i + 1``.
    The factors are applied in ascending gate order, so a control word with
    several bits set applies the selected gates lowest index first.
    """
    gates = gs.gates if isinstance(gs, GateSet) else tuple(as_matrix(g) for g in gs)
    c = len(gates) - 1
    N = gates[0].shape[0]
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    total = identity(2**c * N)
    for i in range(c):
        u = require_unitary(gates[i + 1], 1e-10, f"gate {i + 1}")
        before, after = identity(2**i), identity(2 ** (c - i - 1))
        ctl = np.kron(np.kron(np.kron(before, p0), after), identity(N)) + np.kron(
            np.kron(np.kron(before, p1), after), u
        )
        total = ctl @ total
    return total


def step_matrix(step: StepOperator, k: int) -> np.ndarray:
    """The step operator on the full space (identity on slots ``P_k..P_2``)."""
    return np.kron(identity(step.M ** (k - 1)), step.matrix())


def machine_matrix(gs: GateSet | Sequence, k: int, shift: ProgramPermutation | None = None):
    """Materialized one-step operator ``R S``; ``S`` acts first."""
    step = build_step_operator(gs)
    if shift is None:
        shift = cyclic_shift(step.M, k)
    return np.kron(shift.matrix(), identity(step.N)) @ step_matrix(step, k)


def apply_step(step: StepOperator, shift: ProgramPermutation, state: StateVector) -> StateVector:
    if (state.M, state.N, state.k) != (step.M, step.N, shift.k) or shift.M != step.M:
        raise DimensionMismatch(
            f"state (k={state.k}, M={state.M}, N={state.N}) does not fit "
            f"step (M={step.M}, N={step.N}) / shift (k={shift.k}, M={shift.M})"
        )
    out = shift.apply(step.apply(state.amplitudes))
    return StateVector(out, state.k, state.M, state.N)


def iter_steps(step, shift, state: StateVector, steps: int) -> Iterator[StateVector]:
    for _ in range(steps):
        state = apply_step(step, shift, state)
        yield state


def word_schedule(shift: ProgramPermutation, start_index: int, steps: int) -> list[int]:
    """The active word (slot ``P_1``) at each step, following the program orbit."""
    out, idx = [], start_index
    for _ in range(steps):
        out.append(idx % shift.M)
        idx = shift(idx)
    return out


def detect_halt(schedule: Sequence[int]) -> int | None:
    """First step from which every scheduled word is idle.

    ``None`` when the last scheduled word does real work.
    """
    t = len(schedule)
    while t > 0 and schedule[t - 1] == IDLE:
        t -= 1
    return t if t < len(schedule) else None


@dataclass
class RunResult:
    final_state: StateVector
    data_state: np.ndarray
    program_restored: bool
    halt_step: int | None
    schedule: list[int] = field(default_factory=list)
    trace: list[tuple[int, ...]] = field(default_factory=list)


def execute(step, shift, program_index: int, data, steps: int, check_product=True):
    """Run ``steps`` machine steps from ``|program_index> (x) |data>``.

    Returns the final state and the classical slot contents after each
    step, read off the product factors.  Raises :class:`ContractViolation`
    if any intermediate state is entangled or its program factor is not a
    basis state.
    """
    k, M = shift.k, step.M
    state = make_product_state(program_index, data, k, M)
    trace = [slot_contents(program_index, k, M)]
    for state in iter_steps(step, shift, state, steps):
        if check_product:
            split = schmidt_check(state, CONTRACT_TOL)
            if not split.product:
                raise ContractViolation(
                    f"program and data entangled (second singular value "
                    f"{split.second_singular_value:.3g})"
                )
            peak = int(np.argmax(np.abs(split.program_part)))
            if abs(split.program_part[peak]) < 1 - CONTRACT_TOL:
                raise ContractViolation("program register left the computational basis")
            trace.append(slot_contents(peak, k, M))
    return state, trace


def _finish(state, start, schedule, trace) -> RunResult:
    rows = state.as_matrix()
    data = rows[start].copy()
    restored = abs(np.linalg.norm(data) - 1.0) <= CONTRACT_TOL
    if not restored:
        raise ContractViolation("program register not restored after a full cycle")
    return RunResult(state, data, restored, detect_halt(schedule), schedule, trace)


def run(cfg: MachineConfig, gs: GateSet, program: Sequence[int], data) -> RunResult:
    """Execute ``program`` (first word first) for exactly ``k`` steps."""
    return run_loop(cfg, gs, program, data, 1)


def run_loop(cfg: MachineConfig, gs: GateSet, program: Sequence[int], data, j: int) -> RunResult:
    """Execute the ``k``-step cycle ``j`` times, applying the program ``j`` times."""
    if j < 1:
        raise ValueError("loop count must be >= 1")
    if (cfg.M, cfg.N) != (gs.M, gs.N):
        raise DimensionMismatch(f"config M={cfg.M}, N={cfg.N} vs gate set M={gs.M}, N={gs.N}")
    start = encode_program(program, cfg.k, cfg.M)
    step = build_step_operator(gs)
    shift = build_shift_operator(cfg)
    state, trace = execute(step, shift, start, data, cfg.k * j)
    schedule = list(pad_program(program, cfg.k))
    return _finish(state, start, schedule, trace)
