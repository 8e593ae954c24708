import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pqga.errors import IndexOutOfRange, NotNormalized, ProgramTooLong
from pqga.linalg import random_state
from pqga.registers import (
    StateVector,
    decode_program,
    encode_program,
    make_product_state,
    make_superposed_state,
    schmidt_check,
)


def test_encode_examples():
    assert encode_program([], 2, 3) == 0
    assert encode_program([2], 2, 3) == 2
    assert encode_program([1, 2], 2, 3) == 2 * 3 + 1


def test_encode_too_long():
    with pytest.raises(ProgramTooLong):
        encode_program([1, 1, 1], 2, 3)


def test_encode_rejects_bad_word():
    with pytest.raises(IndexOutOfRange):
        encode_program([3], 2, 3)


def test_decode_examples():
    assert decode_program(0, 3, 4) == ()
    assert decode_program(7, 2, 3) == (1, 2)
    with pytest.raises(IndexOutOfRange):
        decode_program(9, 2, 3)


@pytest.mark.parametrize("M", [2, 3, 4])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_encode_decode_bijection(M, k):
    images = set()
    for idx in range(M**k):
        words = decode_program(idx, k, M)
        assert encode_program(words, k, M) == idx
        images.add(idx)
    assert len(images) == M**k


@given(st.integers(2, 5), st.integers(1, 4), st.data())
def test_encode_matches_digit_sum(M, k, data):
    words = data.draw(st.lists(st.integers(0, M - 1), max_size=k))
    assert encode_program(words, k, M) == sum(w * M**i for i, w in enumerate(words))


def test_make_product_state_examples():
    s = make_product_state(0, [1, 0], 2, 3)
    assert np.array_equal(s.amplitudes, np.eye(18)[0])
    s = make_product_state(7, [0, 1], 2, 3)
    assert np.array_equal(s.amplitudes, np.eye(18)[15])
    s = make_product_state(0, np.array([1, 1]) / np.sqrt(2), 2, 3)
    assert np.allclose(s.amplitudes[:2], 1 / np.sqrt(2))
    assert np.allclose(s.amplitudes[2:], 0)


def test_make_product_state_requires_normalized():
    with pytest.raises(NotNormalized):
        make_product_state(0, [1, 1], 1, 2)


def test_product_states_pass_schmidt(rng):
    for M, k, N in itertools.product([2, 3], [1, 2], [2, 4]):
        for _ in range(5):
            idx = int(rng.integers(M**k))
            d = random_state(N, rng)
            s = make_product_state(idx, d, k, M)
            assert abs(s.norm() - 1) < 1e-10
            res = schmidt_check(s, 1e-10)
            assert res.product
            assert abs(res.program_part[idx] - 1) < 1e-12
            # recovered data factor equals d up to a global phase
            assert abs(abs(np.vdot(res.data_part, d)) - 1) < 1e-12
            assert np.allclose(np.kron(res.program_part, res.data_part), s.amplitudes, atol=1e-12)


def test_schmidt_bell_like_state_is_entangled():
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1 / np.sqrt(2)  # |0>e0 + |1>e1 with M=2, k=1, N=2
    res = schmidt_check(StateVector(amps, 1, 2, 2))
    assert not res.product
    assert np.allclose(res.singular_values, [1 / np.sqrt(2)] * 2)


def test_schmidt_invariant_under_global_phase(rng):
    s = make_superposed_state(random_state(3, rng), random_state(2, rng), 1, 3)
    base = schmidt_check(s)
    rotated = schmidt_check(StateVector(np.exp(0.9j) * s.amplitudes, 1, 3, 2))
    assert base.product and rotated.product
    # phase convention makes the program factor identical
    assert np.allclose(base.program_part, rotated.program_part, atol=1e-12)
