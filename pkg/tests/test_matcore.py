import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varbounds import matcore as mc
from varbounds.matcore import (
    DimensionMismatchError,
    InvariantError,
    Observable,
    State,
)

SX, SY, SZ = mc.PAULI_1, mc.PAULI_2, mc.PAULI_3
KET0 = mc.basis_state(2, 0)


def test_commutator_pauli():
    c = mc.commutator(Observable(SX), Observable(SY))
    np.testing.assert_allclose(c, 2j * SZ, atol=1e-15)


def test_commutator_self_is_zero():
    a = mc.random_observable(3, 7)
    np.testing.assert_allclose(mc.commutator(a, a), 0, atol=1e-15)


def test_commutator_diagonals_commute():
    a = Observable(np.diag([1.0, 2.0]).astype(complex))
    b = Observable(np.diag([3.0, 4.0]).astype(complex))
    np.testing.assert_allclose(mc.commutator(a, b), 0, atol=0)


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        mc.commutator(Observable(SX), mc.random_observable(3, 0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**63), st.integers(2, 6))
def test_commutator_anti_hermitian(seed, dim):
    a = mc.random_observable(dim, [seed, 0])
    b = mc.random_observable(dim, [seed, 1])
    c = mc.commutator(a, b)
    assert np.abs(c + c.conj().T).max() <= 1e-12 * max(1.0, np.abs(c).max())


def test_expectation_examples():
    assert mc.expectation(SZ, KET0) == pytest.approx(1.0)
    s = mc.random_state(4, False, 3)
    assert mc.expectation(np.eye(4), s) == pytest.approx(1.0)
    c = mc.commutator(Observable(SX), Observable(SY))
    assert mc.expectation(c, KET0) == pytest.approx(2j)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**63), st.integers(2, 6))
def test_expectation_real_for_hermitian(seed, dim):
    h = mc.random_observable(dim, seed)
    s = mc.random_state(dim, False, seed)
    e = mc.expectation(h.matrix, s)
    assert abs(e.imag) <= 1e-10 * (1 + abs(e.real))


def test_variance_examples():
    assert mc.variance(Observable(SZ), KET0) == pytest.approx(0.0, abs=1e-12)
    assert mc.variance(Observable(SX), KET0) == pytest.approx(1.0)
    assert mc.variance(Observable(SZ), State.maximally_mixed(2)) == pytest.approx(1.0)


def test_variance_nonnegative_random():
    for seed in range(50):
        h = mc.random_observable(5, [seed, 0])
        s = mc.random_state(5, bool(seed % 2), [seed, 1])
        assert mc.variance(h, s) >= 0.0


def test_center_examples():
    centered = mc.center(Observable(SZ), KET0)
    np.testing.assert_allclose(centered.matrix, SZ - np.eye(2), atol=1e-14)
    # zero-mean observable is untouched
    same = mc.center(Observable(SX), KET0)
    np.testing.assert_allclose(same.matrix, SX, atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**63), st.integers(2, 6))
def test_center_preserves_variance(seed, dim):
    h = mc.random_observable(dim, [seed, 0])
    s = mc.random_state(dim, False, [seed, 1])
    c = mc.center(h, s)
    assert abs(mc.expectation(c.matrix, s).real) <= 1e-10
    assert mc.variance(c, s) == pytest.approx(mc.variance(h, s), abs=1e-10)


def test_tensor_examples():
    nu = mc.random_state(3, False, 1).matrix
    np.testing.assert_array_equal(mc.tensor(np.eye(2), nu)[:3, :3], nu)
    np.testing.assert_array_equal(mc.tensor(np.eye(2), nu)[3:, 3:], nu)
    proj = mc.tensor(KET0.matrix, nu)
    np.testing.assert_array_equal(proj[:3, :3], nu)
    np.testing.assert_array_equal(proj[3:, :], 0)
    h = mc.random_observable(2, 2).matrix
    flipped = mc.tensor(SZ, h)
    np.testing.assert_array_equal(flipped[:2, :2], h)
    np.testing.assert_array_equal(flipped[2:, 2:], -h)


def test_tensor_associative_and_identity():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1], [1, 0]], dtype=complex)
    c = np.array([[2, 0], [0, 5]], dtype=complex)
    np.testing.assert_array_equal(mc.tensor(mc.tensor(a, b), c),
                                  mc.tensor(a, mc.tensor(b, c)))
    np.testing.assert_array_equal(mc.tensor(np.eye(2), np.eye(3)), np.eye(6))


def test_random_observable_reproducible():
    a = mc.random_observable(4, 42)
    b = mc.random_observable(4, 42)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    c = mc.random_observable(4, 43)
    assert np.all(a.matrix != c.matrix)


def test_random_observable_rejects_dim_zero():
    with pytest.raises(ValueError):
        mc.random_observable(0, 1)
    with pytest.raises(ValueError):
        mc.random_state(0, True, 1)


def test_random_state_pure():
    s = mc.random_state(2, True, 5)
    eigs = np.sort(np.linalg.eigvalsh(s.matrix))
    np.testing.assert_allclose(eigs, [0.0, 1.0], atol=1e-12)


def test_random_state_mixed():
    s = mc.random_state(5, False, 6)
    assert np.linalg.eigvalsh(s.matrix).min() >= -1e-12
    assert np.trace(s.matrix).real == pytest.approx(1.0)
    np.testing.assert_array_equal(s.matrix, mc.random_state(5, False, 6).matrix)


def test_observable_rejects_non_hermitian():
    with pytest.raises(InvariantError) as exc:
        Observable(np.array([[0, 1], [0, 0]], dtype=complex))
    assert exc.value.invariant == "hermiticity"


def test_state_rejects_bad_trace():
    with pytest.raises(InvariantError) as exc:
        State(np.eye(2, dtype=complex))
    assert exc.value.invariant == "trace"


def test_state_rejects_negative_eigenvalue():
    with pytest.raises(InvariantError) as exc:
        State(np.diag([1.5, -0.5]).astype(complex))
    assert exc.value.invariant == "psd"


def test_json_round_trip():
    h = mc.random_observable(3, 9)
    s = mc.random_state(3, False, 9)
    np.testing.assert_array_equal(
        mc.observable_from_json(mc.observable_to_json(h)).matrix, h.matrix)
    np.testing.assert_array_equal(
        mc.state_from_json(mc.state_to_json(s)).matrix, s.matrix)


def test_json_schema_fields():
    obj = mc.observable_to_json(Observable(SY))
    assert obj["kind"] == "observable"
    assert obj["dim"] == 2
    assert obj["entries"][0][1] == [0.0, -1.0]


def test_json_kind_mismatch():
    with pytest.raises(ValueError):
        mc.state_from_json(mc.observable_to_json(Observable(SX)))
