import itertools

import numpy as np
import pytest

from pqga.errors import IndexOutOfRange
from pqga.gateset import H, S, T, X, Z
from pqga.linalg import phase_invariant_distance, random_unitary
from pqga.synth import compile, compile_via_root, program_product, verify_program
from pqga.vm import MachineConfig, run_loop


def brute_force(target, gs, epsilon, max_length):
    """Shortest, then lexicographically smallest, word within epsilon, by enumeration."""
    for length in range(max_length + 1):
        for word in itertools.product(range(1, gs.M), repeat=length):
            prod = np.eye(gs.N, dtype=complex)
            for w in word:
                prod = gs[w] @ prod
            tr = np.trace(prod.conj().T @ target)
            phase = tr / abs(tr) if abs(tr) > 0 else 1.0
            if np.linalg.norm(target - phase * prod) <= epsilon:
                return word
    return None


def test_program_product_examples(std1):
    assert np.array_equal(program_product([], std1), np.eye(2))
    assert np.allclose(program_product([1, 2], std1), T @ H)
    assert np.max(np.abs(program_product([2, 2, 2, 2], std1) - Z)) <= 1e-12
    assert np.allclose(program_product(["H", "T"], std1), T @ H)
    with pytest.raises(IndexOutOfRange):
        program_product([3], std1)


def test_compile_identity(std1):
    r = compile(np.eye(2), std1, 1e-9)
    assert r.program == () and r.distance == 0 and r.achieved


def test_compile_s_gate(std1):
    r = compile(S, std1, 1e-9)
    assert r.program == (2, 2)
    assert r.program == brute_force(S, std1, 1e-9, 2)


def test_compile_x(std1):
    r = compile(X, std1, 1e-9)
    assert r.names(std1) == ["H", "T", "T", "T", "T", "H"]
    assert r.program == brute_force(X, std1, 1e-9, 6)
    assert r.achieved and r.distance <= 1e-9


def test_compile_not_achieved_returns_best(std1):
    r = compile(X, std1, 1e-9, max_length=1)
    assert not r.achieved
    assert len(r.program) <= 1
    best = min(phase_invariant_distance(g, X) for g in std1.gates)
    assert r.distance == pytest.approx(best)


def test_compile_is_deterministic_and_idle_free(std2, rng):
    target = random_unitary(4, rng)
    a = compile(target, std2, 0.5, max_length=4)
    b = compile(target, std2, 0.5, max_length=4)
    assert a == b
    assert 0 not in a.program


def test_pruning_does_not_change_result(std1, std2, rng):
    targets = [X, Z, S, H @ T, random_unitary(2, rng)]
    for t in targets:
        for eps in (1e-9, 0.3, 0.8):
            assert compile(t, std1, eps, 7).program == compile(t, std1, eps, 7, prune=False).program
    for _ in range(3):
        t = random_unitary(4, rng)
        assert compile(t, std2, 1.5, 3).program == compile(t, std2, 1.5, 3, prune=False).program


def test_minimality_battery(std1):
    products = set()
    for length in range(5):
        for word in itertools.product((1, 2), repeat=length):
            products.add(word)
    for word in sorted(products):
        target = program_product(word, std1)
        r = compile(target, std1, 1e-9, max_length=4)
        assert r.achieved and len(r.program) <= 4 and r.distance <= 1e-9
        assert r.program == brute_force(target, std1, 1e-9, 4)


@pytest.mark.parametrize("theta", [0.3, 1.1])
def test_phase_robustness(std1, theta):
    for t in (X, S, Z, H @ T @ H):
        assert compile(np.exp(1j * theta) * t, std1, 1e-9).program == compile(t, std1, 1e-9).program


def test_verify_program(std1):
    ok = verify_program([1, 1], std1, np.eye(2), 1e-9)
    assert ok.ok and ok.distance == pytest.approx(0, abs=1e-15)
    bad = verify_program([1], std1, T, 1e-9)
    expected = np.sqrt(4 - 2 * abs(np.trace(H.conj().T @ T)))
    assert not bad.ok
    assert bad.distance == pytest.approx(expected, abs=1e-12)


def test_compile_output_verifies(std1, rng):
    for _ in range(5):
        t = random_unitary(2, rng)
        r = compile(t, std1, 0.6, 8)
        if r.achieved:
            assert verify_program(r.program, std1, t, 0.6).ok


def test_compile_via_root_j1_equals_compile(std1):
    assert compile_via_root(X, std1, 1e-9, 1).root_program == compile(X, std1, 1e-9).program


def test_compile_via_root_of_z(std1):
    res = compile_via_root(Z, std1, 1e-9, 2)
    assert res.root_program == (2, 2)
    for d in np.eye(2):
        out = run_loop(MachineConfig(2, 3, 2), std1, res.root_program, d, 2).data_state
        assert np.max(np.abs(out - Z @ d)) <= 2e-9


@pytest.mark.parametrize("j", [2, 3])
def test_root_error_bound(std1, rng, j):
    for _ in range(3):
        t = random_unitary(2, rng)
        eps = 0.4
        res = compile_via_root(t, std1, eps, j, max_length=12)
        assert res.result.achieved
        replay = np.linalg.matrix_power(program_product(res.root_program, std1), j)
        measured = phase_invariant_distance(replay, t)
        assert measured <= j * res.result.distance + 1e-12
        assert measured <= j * eps


def test_error_composition(rng):
    for _ in range(50):
        a, a2, b, b2 = (random_unitary(2, rng) for _ in range(4))
        lhs = phase_invariant_distance(a @ b, a2 @ b2)
        assert lhs <= phase_invariant_distance(a, a2) + phase_invariant_distance(b, b2) + 1e-12


def test_two_qubit_target(std2):
    target = std2[5] @ std2[1]  # H0 then CNOT01
    r = compile(target, std2, 1e-9, max_length=3)
    assert r.program == brute_force(target, std2, 1e-9, 2)
    assert r.program == (1, 5)
