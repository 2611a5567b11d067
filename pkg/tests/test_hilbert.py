import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from succmeas.errors import ValidationError, ZeroProbabilityError
from succmeas.hilbert import (
    DensityOperator,
    Projector,
    SpectralObservable,
    StateVector,
    commutator_expectation,
    expectation,
    pure_density,
    sandwich,
    variance,
)

from conftest import random_density, random_observable, random_state

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)
R2 = 1 / np.sqrt(2)


def test_state_vector_requires_unit_norm():
    with pytest.raises(ValidationError):
        StateVector([1.0, 1.0])
    psi = StateVector.normalized([3.0, 4.0j])
    assert np.isclose(np.linalg.norm(psi.amplitudes), 1.0, atol=1e-12)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0.0


def test_density_operator_checks():
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([0.5, 0.6]))
    with pytest.raises(ValidationError):
        DensityOperator(np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(ZeroProbabilityError):
        DensityOperator.from_unnormalized(np.zeros((2, 2)))


def test_spectral_observable_rejects_degenerate_and_non_orthonormal():
    with pytest.raises(ValidationError, match="degenerate"):
        SpectralObservable.diagonal([1.0, 1.0])
    with pytest.raises(ValidationError):
        SpectralObservable([0.0, 1.0], np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_projector_checks():
    Projector(np.diag([1.0, 0.0]), 1)
    with pytest.raises(ValidationError):
        Projector(np.diag([1.0, 0.5]), 1)
    with pytest.raises(ValidationError):
        Projector(np.diag([1.0, 0.0]), 2)


def test_pure_density_examples():
    assert np.allclose(pure_density(StateVector([1, 0])).matrix, [[1, 0], [0, 0]])
    assert np.allclose(pure_density(StateVector([R2, R2])).matrix, 0.5)
    m = pure_density(StateVector([R2, 1j * R2])).matrix
    assert np.allclose(m, [[0.5, -0.5j], [0.5j, 0.5]])


def test_expectation_examples():
    rho = pure_density(StateVector([R2, R2]))
    assert np.isclose(expectation(np.eye(2), random_density(2, np.random.default_rng(1))), 1.0)
    assert np.isclose(expectation(SZ, rho), 0.0, atol=1e-15)
    assert np.isclose(expectation(SX, rho), 1.0)


def test_commutator_examples():
    rng = np.random.default_rng(7)
    rho = random_density(3, rng)
    a = random_observable(3, rng).matrix()
    assert abs(commutator_expectation(a, a, rho)) < 1e-12
    assert abs(commutator_expectation(np.diag([1, 2, 3]), np.diag([4, 5, 6]), rho)) < 1e-15
    psi = pure_density(StateVector([np.cos(np.pi / 8), np.sin(np.pi / 8)]))
    val = commutator_expectation(SZ, SX, psi)
    # [sz, sx] = 2i sy; <sy> vanishes for real amplitudes, so compute against the
    # explicit matrix product rather than assume
    sy = np.array([[0, -1j], [1j, 0]])
    assert np.isclose(val, 2j * expectation(sy, psi), atol=1e-12)


def test_commutator_hand_value_for_complex_state():
    # (cos(pi/8), i sin(pi/8)): <sy> = sin(pi/4), so <[sz, sx]> = 2i sin(pi/4)
    rho = pure_density(StateVector([np.cos(np.pi / 8), 1j * np.sin(np.pi / 8)]))
    assert np.isclose(commutator_expectation(SZ, SX, rho), 1.41421356237j, atol=1e-10)


def test_sandwich_examples():
    rho = pure_density(StateVector([R2, R2]))
    out, w = sandwich(rho, Projector(np.eye(2), 2))
    assert w == pytest.approx(1.0) and np.allclose(out, rho.matrix)
    out, w = sandwich(rho, Projector(np.diag([1.0, 0.0]), 1))
    assert w == pytest.approx(0.5)
    assert np.allclose(out / w, [[1, 0], [0, 0]])
    out, w = sandwich(DensityOperator(np.diag([0.25, 0.75])), Projector(np.diag([0.0, 1.0]), 1))
    assert w == pytest.approx(0.75)
    assert np.allclose(out / w, [[0, 0], [0, 1]])
    with pytest.raises(ZeroProbabilityError):
        sandwich(DensityOperator(np.diag([1.0, 0.0])), Projector(np.diag([0.0, 1.0]), 1))


def test_variance_nonnegative_for_eigenstate():
    rho = pure_density(StateVector([1.0, 0.0]))
    assert variance(SZ, rho) == 0.0
    assert variance(SX, rho) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1),
       alpha=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       beta=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_expectation_linear(seed, alpha, beta):
    rng = np.random.default_rng(seed)
    rho = random_density(4, rng)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    lhs = expectation(alpha * a + beta * b, rho)
    rhs = alpha * expectation(a, rho) + beta * expectation(b, rho)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(2, 8))
def test_projector_properties_and_born_range(seed, n):
    rng = np.random.default_rng(seed)
    obs = random_observable(n, rng)
    k = int(rng.integers(1, n + 1))
    p = obs.span_projector(rng.choice(n, size=k, replace=False)).matrix
    assert np.max(np.abs(p @ p - p)) < 1e-10
    assert np.max(np.abs(p - p.conj().T)) < 1e-12
    w = expectation(p, random_density(n, rng)).real
    assert -1e-10 <= w <= 1 + 1e-10


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(2, 6))
def test_sandwich_idempotent(seed, n):
    rng = np.random.default_rng(seed)
    obs = random_observable(n, rng)
    proj = obs.span_projector(range(max(1, n // 2)))
    rho = random_density(n, rng)
    once, w = sandwich(rho, proj)
    rho1 = DensityOperator.from_unnormalized(once / w)
    twice, w2 = sandwich(rho1, proj)
    assert w2 == pytest.approx(1.0, abs=1e-10)
    assert np.max(np.abs(twice - rho1.matrix)) < 1e-10


def test_pure_density_expectation_matches_braket():
    rng = np.random.default_rng(3)
    psi = random_state(5, rng)
    op = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    direct = psi.amplitudes.conj() @ op @ psi.amplitudes
    assert np.isclose(expectation(op, pure_density(psi)), direct, atol=1e-12)
