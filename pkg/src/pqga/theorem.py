"""Executable checks of the programmability contract and the orthogonality no-go.

The machine is programmable for a program state ``p`` when, for every data
input ``d``, the output of the big unitary is ``|p'> (x) U_p |d>`` with the
same ``p'`` for all ``d``.  Two such programs with phase-inequivalent data
maps must be orthogonal; consequently nothing is lost by restricting
programs to classical basis words, which is what the dispatch oracle does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .gateset import GateSet
from .linalg import (
    random_state,
    random_unitary,
    raw_phase_distance,
    require_unitary,
    unitarity_error,
)
from .registers import (
    NORM_TOL,
    encode_program,
    make_product_state,
    make_superposed_state,
    schmidt_check,
    schmidt_split,
)
from .vm import (
    MachineConfig,
    apply_step,
    build_step_operator,
    cyclic_shift,
    iter_steps,
    machine_matrix,
    run,
)

EXTRACT_TOL = 1e-8


def classical_dispatch_oracle(program: Sequence, gs: GateSet, data) -> np.ndarray:
    """Apply the program's gates to ``data`` one after another, no program register."""
    out = np.asarray(data, dtype=complex).copy()
    for w in program:
        out = gs[gs.resolve(w)] @ out
    return out


@dataclass(frozen=True)
class ExtractionResult:
    implemented: bool
    u_p: np.ndarray | None
    p_out: np.ndarray | None
    residual: float


def extract_effective_operator(big_u, program_state, data_dim: int,
                               tol: float = EXTRACT_TOL) -> ExtractionResult:
    """Recover the data map ``U_p`` that ``big_u`` implements for program state ``p``.

    Each ``big_u (p (x) e_i)`` must split as a product with one shared
    program factor ``p'``; the columns of ``U_p`` are then ``(<p'| (x) I)``
    applied to those outputs, which fixes their relative phases.
    """
    big_u = require_unitary(big_u, tol, "big_u")
    p = np.asarray(program_state, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(p) - 1.0) > NORM_TOL:
        raise ValueError("program state is not normalized")
    P, N = p.size, data_dim
    if big_u.shape[0] != P * N:
        raise DimensionMismatch(f"big_u has dim {big_u.shape[0]}, expected {P}*{N}")

    residual = 0.0
    outputs, factors = [], []
    for i in range(N):
        e = np.zeros(N, dtype=complex)
        e[i] = 1.0
        out = big_u @ np.kron(p, e)
        split = schmidt_split(out, P, N, tol)
        residual = max(residual, split.second_singular_value)
        if not split.product:
            return ExtractionResult(False, None, None, residual)
        outputs.append(out.reshape(P, N))
        factors.append(split.program_part)

    shared = factors[0]
    for f in factors[1:]:
        residual = max(residual, 1.0 - abs(np.vdot(shared, f)))
    if residual > tol:
        return ExtractionResult(False, None, None, residual)

    u_p = np.column_stack([shared.conj() @ out for out in outputs])
    residual = max(residual, unitarity_error(u_p))
    if residual > tol:
        return ExtractionResult(False, None, None, residual)
    return ExtractionResult(True, u_p, shared, residual)


@dataclass(frozen=True)
class NoGoVerdict:
    constrained: bool
    consistent_with_theorem: bool
    overlap: float
    gate_distance: float | None


def check_orthogonality_no_go(big_u, p, q, data_dim: int, tol: float = EXTRACT_TOL) -> NoGoVerdict:
    """Test one program pair against the no-go: inequivalent implemented maps need ``<p|q> = 0``.

    If either program is not implemented, or both implement the same map up
    to phase, the pair is unconstrained and trivially consistent.
    """
    p = np.asarray(p, dtype=complex).reshape(-1)
    q = np.asarray(q, dtype=complex).reshape(-1)
    overlap = float(abs(np.vdot(p, q)))
    ep = extract_effective_operator(big_u, p, data_dim, tol)
    eq = extract_effective_operator(big_u, q, data_dim, tol)
    if not (ep.implemented and eq.implemented):
        return NoGoVerdict(False, True, overlap, None)
    gap = raw_phase_distance(ep.u_p, eq.u_p)
    if gap <= 10 * tol:
        return NoGoVerdict(False, True, overlap, gap)
    return NoGoVerdict(True, overlap <= tol, overlap, gap)


@dataclass
class CampaignReport:
    trials: int = 0
    nonorthogonal_pairs: int = 0
    both_implemented: int = 0
    constrained: int = 0
    inconsistent: int = 0
    violations: int = 0
    max_constrained_overlap: float = 0.0
    examples: list = field(default_factory=list)


def _random_gates(rng, M: int, N: int) -> list[np.ndarray]:
    gates = [np.eye(N, dtype=complex)]
    for _ in range(M - 1):
        if len(gates) > 1 and rng.random() < 0.4:
            # phase copy of an earlier gate (idle included): makes superposed
            # programs over the copies genuinely implementable
            src = gates[rng.integers(len(gates))]
            gates.append(np.exp(1j * rng.uniform(0, 2 * np.pi)) * src)
        else:
            gates.append(random_unitary(N, rng))
    return gates


def _random_program_state(rng, size: int, anchor: np.ndarray | None = None) -> np.ndarray:
    """Random state on a small support, sharing an index with ``anchor`` when given."""
    support = set(rng.choice(size, size=rng.integers(1, min(3, size) + 1), replace=False).tolist())
    if anchor is not None and rng.random() < 0.8:
        support.add(int(rng.choice(np.flatnonzero(np.abs(anchor) > 0))))
    amps = np.zeros(size, dtype=complex)
    idx = sorted(support)
    amps[idx] = random_state(len(idx), rng)
    return amps


def falsification_campaign(trials: int = 10_000, seed: int = 0, violation_overlap: float = 1e-6,
                           tol: float = EXTRACT_TOL) -> CampaignReport:
    """Search randomized machines and program pairs for a counterexample to the no-go.

    Machines are one step (or one full cycle) of ``R S`` over random gate
    sets; fully random unitaries would almost never be programmable at all.
    Trial ``t`` draws from ``default_rng([seed, t])`` so any hit is replayable.
    """
    report = CampaignReport()
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        M = int(rng.integers(2, 5))
        k = 1 if M > 3 else int(rng.integers(1, 3))
        N = 2
        gates = _random_gates(rng, M, N)
        big_u = machine_matrix(gates, k)
        if k > 1 and rng.random() < 0.5:
            big_u = np.linalg.matrix_power(big_u, k)
        p = _random_program_state(rng, M**k)
        q = _random_program_state(rng, M**k, anchor=p)
        verdict = check_orthogonality_no_go(big_u, p, q, N, tol)
        report.trials += 1
        if verdict.overlap > violation_overlap:
            report.nonorthogonal_pairs += 1
        if verdict.gate_distance is not None:
            report.both_implemented += 1
        if verdict.constrained:
            report.constrained += 1
            report.max_constrained_overlap = max(report.max_constrained_overlap, verdict.overlap)
            if not verdict.consistent_with_theorem:
                report.inconsistent += 1
            if verdict.overlap > violation_overlap:
                report.violations += 1
                report.examples.append((seed, t))
    return report


@dataclass
class EntanglementReport:
    cases: int = 0
    entangled: int = 0
    min_second_singular_value: float = np.inf


def superposition_entanglement_cases(cases: int = 100, seed: int = 0) -> EntanglementReport:
    """Feed superposed programs over two inequivalent gates through one step.

    Every case should leave program and data entangled.
    """
    report = EntanglementReport()
    for c in range(cases):
        rng = np.random.default_rng([seed, c])
        M = int(rng.integers(2, 5))
        k = 1 if M > 3 else int(rng.integers(1, 3))
        gates = [np.eye(2, dtype=complex)] + [random_unitary(2, rng) for _ in range(M - 1)]
        words = rng.choice(M, size=2, replace=False)
        if raw_phase_distance(gates[words[0]], gates[words[1]]) < 1e-6:
            continue
        # program indices whose active slot holds the two chosen words
        p_idx = int(words[0]) + M * int(rng.integers(M ** (k - 1)))
        q_idx = int(words[1]) + M * int(rng.integers(M ** (k - 1)))
        amps = np.zeros(M**k, dtype=complex)
        amps[[p_idx, q_idx]] = random_state(2, rng)
        state = make_superposed_state(amps, random_state(2, rng), k, M)
        out = apply_step(build_step_operator(gates), cyclic_shift(M, k), state)
        split = schmidt_check(out, 1e-10)
        report.cases += 1
        report.entangled += not split.product
        report.min_second_singular_value = min(
            report.min_second_singular_value, split.second_singular_value
        )
    return report


@dataclass
class WitnessReport:
    trials: int = 0
    max_data_deviation: float = 0.0
    min_program_peak: float = 1.0
    max_second_singular_value: float = 0.0


def classicality_witness(cfg: MachineConfig, gs: GateSet, trials: int, seed: int = 0) -> WitnessReport:
    """Random programs and data: the machine must agree with classical dispatch
    and its program register must stay a basis state at every step."""
    report = WitnessReport()
    step = build_step_operator(gs)
    shift = cyclic_shift(cfg.M, cfg.k)
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        length = int(rng.integers(0, cfg.k + 1))
        program = rng.integers(0, cfg.M, size=length).tolist()
        data = random_state(cfg.N, rng)
        result = run(cfg, gs, program, data)
        expected = classical_dispatch_oracle(program, gs, data)
        report.max_data_deviation = max(
            report.max_data_deviation, float(np.max(np.abs(result.data_state - expected)))
        )
        state = make_product_state(encode_program(program, cfg.k, cfg.M), data, cfg.k, cfg.M)
        for state in iter_steps(step, shift, state, cfg.k):
            split = schmidt_check(state, 1e-10)
            report.max_second_singular_value = max(
                report.max_second_singular_value, split.second_singular_value
            )
            peak = float(np.max(np.abs(split.program_part))) if split.product else 0.0
            report.min_program_peak = min(report.min_program_peak, peak)
        report.trials += 1
    return report
