import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from succmeas.coarse import build_partition, coarse_projector
from succmeas.errors import DegenerateBoundError, ValidationError, ZeroProbabilityError
from succmeas.hilbert import (
    DensityOperator,
    SpectralObservable,
    StateVector,
    expectation,
    pure_density,
    variance,
)
from succmeas.schwinger import SchwingerSpace, flat_interval_state, momentum_partition, sine_observables
from succmeas.wigner import (
    ConditionalDistribution,
    WidthEstimate,
    commuting_case_moments,
    conditional_wigner,
    joint_wigner,
    max_weight_interval,
    perturbed_state,
    pure_state_conditional,
    robertson_check,
    ur_function,
    width_count,
    width_stddev,
)

from conftest import random_density, random_observable, random_state

R2 = 1 / np.sqrt(2)
SIGMA_Z = SpectralObservable.diagonal([1.0, -1.0], name="sz")
SIGMA_X = SpectralObservable([-1.0, 1.0], np.array([[R2, R2], [-R2, R2]]), name="sx")
PLUS_X = pure_density(StateVector([R2, R2]))


def qubit_graining():
    cg = build_partition(SIGMA_Z, 0)
    plus_branch = cg.centers.index(1.0)
    return cg, plus_branch


def test_joint_wigner_qubit_quarter():
    cg, n0 = qubit_graining()
    assert joint_wigner(PLUS_X, cg, n0, SIGMA_X, m=1) == pytest.approx(0.25)
    assert joint_wigner(PLUS_X, cg, n0, SIGMA_X).sum() == pytest.approx(0.5)


def test_joint_wigner_reduces_to_overlap_for_eigenstate():
    rng = np.random.default_rng(11)
    a = random_observable(4, rng)
    b = random_observable(4, rng)
    cg = build_partition(a, 0)
    rho = pure_density(a.eigenvector(2))
    expected = np.abs(b.eigenvectors.conj().T @ a.eigenvectors[:, 2]) ** 2
    assert np.allclose(joint_wigner(rho, cg, cg.interval_of(2), b), expected, atol=1e-12)


def test_conditional_wigner_examples():
    cg, n0 = qubit_graining()
    assert np.allclose(conditional_wigner(PLUS_X, cg, n0, SIGMA_X).weights, [0.5, 0.5])
    rng = np.random.default_rng(5)
    a = random_observable(3, rng)
    rho = random_density(3, rng)
    cg = build_partition(a, 0)
    dist = conditional_wigner(rho, cg, 1, a)
    assert np.allclose(dist.weights, [0, 1, 0], atol=1e-12)


def test_conditional_wigner_full_cover_is_born_rule():
    rng = np.random.default_rng(8)
    a = random_observable(5, rng)
    b = random_observable(5, rng)
    psi = random_state(5, rng)
    cg = build_partition(a, 4)
    born = np.abs(b.eigenvectors.conj().T @ psi.amplitudes) ** 2
    assert np.allclose(conditional_wigner(pure_density(psi), cg, 0, b).weights, born, atol=1e-12)


def test_zero_probability_branch():
    cg, n0 = qubit_graining()
    rho = pure_density(StateVector([0.0, 1.0]))
    with pytest.raises(ZeroProbabilityError):
        conditional_wigner(rho, cg, n0, SIGMA_X)
    with pytest.raises(ZeroProbabilityError):
        perturbed_state(rho, cg, n0)


def test_perturbed_state_examples():
    cg, n0 = qubit_graining()
    assert np.allclose(perturbed_state(PLUS_X, cg, n0).matrix, [[1, 0], [0, 0]])
    obs = SpectralObservable.diagonal(np.arange(6.0))
    rho = DensityOperator(np.diag([0.5, 0.5, 0, 0, 0, 0]))
    assert np.allclose(perturbed_state(rho, build_partition(obs, 2), 0).matrix, rho.matrix)
    flat = pure_density(StateVector(np.ones(6) / np.sqrt(6)))
    out = perturbed_state(flat, build_partition(obs, 2), 1).matrix
    v = np.r_[0, 0, 0, 1, 1, 1] / np.sqrt(3)
    assert np.allclose(out, np.outer(v, v))


def test_pure_state_conditional_flat_interval():
    rng = np.random.default_rng(2)
    a = random_observable(6, rng)
    b = random_observable(6, rng)
    cg = build_partition(a, 2)
    members = list(cg.member_indices[1])
    psi = StateVector(a.eigenvectors[:, members].sum(axis=1) / np.sqrt(3))
    dist = pure_state_conditional(psi, cg, 1, b)
    overlaps = b.eigenvectors.conj().T @ a.eigenvectors[:, members]
    assert np.allclose(dist.weights, np.abs(overlaps.sum(axis=1)) ** 2 / 3, atol=1e-12)


@pytest.mark.parametrize("d", [0, 2, 4])
def test_repeated_measurement_gives_block_uniform(d):
    a = SpectralObservable.diagonal(np.arange(1.0, 16.0))
    cg = build_partition(a, d)
    psi = StateVector(np.ones(15) / np.sqrt(15))
    for b in (a, a.function(np.square)):
        dist = pure_state_conditional(psi, cg, 1, b)
        inside = np.zeros(15)
        inside[list(cg.member_indices[1])] = 1.0 / (d + 1)
        assert np.allclose(dist.weights, inside, atol=1e-14)
        assert width_count(dist).value == d


@pytest.mark.parametrize("f, mean, second, var", [
    (None, 1.0, 5 / 3, 2 / 3),
    (lambda x: np.full_like(x, 4.2), 4.2, 4.2 ** 2, 0.0),
    (np.square, 5 / 3, 17 / 3, 26 / 9),
])
def test_commuting_case_moments(f, mean, second, var):
    cg = build_partition(SpectralObservable.diagonal(np.arange(6.0)), 2)
    m, s, v = commuting_case_moments(cg, 0, f)
    assert (m, s, v) == pytest.approx((mean, second, var), abs=1e-12)


def test_width_count_examples():
    uniform = ConditionalDistribution(np.arange(5.0), np.full(5, 0.2))
    for thr in (0.05, 0.5, 0.99):
        assert width_count(uniform, thr).value == 4
    assert width_count(ConditionalDistribution([3.0], [1.0])).value == 0
    d = ConditionalDistribution([0.0, 1.0, 2.0, 3.0], [0.5, 0.3, 0.15, 0.05])
    est = width_count(d, 0.2)
    assert est.value == 2 and est.method == "count_threshold"
    with pytest.raises(ValidationError):
        width_count(d, 1.0)


def test_width_stddev_examples():
    assert width_stddev(ConditionalDistribution([2.0], [1.0])).value == 0.0
    assert width_stddev(ConditionalDistribution([-1.0, 1.0], [0.5, 0.5])).value == pytest.approx(1.0)
    u = ConditionalDistribution([0.0, 1.0, 2.0], np.full(3, 1 / 3))
    assert width_stddev(u).value == pytest.approx(0.8165, abs=1e-4)


def test_distribution_and_estimate_validation():
    with pytest.raises(ValidationError):
        ConditionalDistribution([0.0, 1.0], [0.7, 0.7])
    with pytest.raises(ValidationError):
        ConditionalDistribution([0.0, 1.0], [1.1, -0.1])
    with pytest.raises(ValidationError):
        WidthEstimate("median", 1.0)
    with pytest.raises(ValidationError):
        WidthEstimate("stddev", -1.0)


def test_ur_function_examples():
    a = SpectralObservable.diagonal(np.arange(9.0))
    weights = np.exp(-0.5 * ((np.arange(9) - 4) / 3.0) ** 2)
    psi = StateVector.normalized(np.sqrt(weights))
    rho = pure_density(psi)
    out = ur_function(rho, a, a, [2])
    assert out[0][0] == 2
    # the perturbed state is not flat, so compare with its own variance of A
    cg = build_partition(a, 2)
    assert out[0][1] == pytest.approx(variance(a.matrix(), perturbed_state(rho, cg, 1)))
    rng = np.random.default_rng(4)
    b = random_observable(9, rng)
    (_, full), = ur_function(rho, a, b, [8])
    assert full == pytest.approx(variance(b.matrix(), rho), abs=1e-10)
    (_, f0), = ur_function(PLUS_X, SIGMA_Z, SIGMA_X, [0],
                           centering=lambda r, cg: cg.centers.index(1.0))
    assert f0 == pytest.approx(1.0)


def test_ur_function_flat_state_matches_commuting_moments():
    a = SpectralObservable.diagonal(np.arange(15.0))
    cg = build_partition(a, 4)
    psi = StateVector(np.ones(15) / np.sqrt(15))
    (_, f), = ur_function(pure_density(psi), a, a, [4], centering=lambda r, g: 1)
    assert f == pytest.approx(commuting_case_moments(cg, 1)[2], abs=1e-12)


def test_max_weight_interval_tie_is_error():
    a = SpectralObservable.diagonal(np.arange(6.0))
    flat = pure_density(StateVector(np.ones(6) / np.sqrt(6)))
    with pytest.raises(ValidationError, match="ties"):
        max_weight_interval(flat, build_partition(a, 2))


def test_robertson_examples():
    rng = np.random.default_rng(9)
    a = random_observable(4, rng)
    rho = random_density(4, rng)
    l, r, holds = robertson_check(rho, a.matrix(), a.function(np.exp).matrix())
    assert r == pytest.approx(0.0, abs=1e-12) and holds
    for n, dp, lr in [(6, 2, (0.3333, 0.1667)), (22, 10, (0.0909, 0.0162))]:
        space = SchwingerSpace(n)
        a_m, b_m = sine_observables(space)
        rho = pure_density(flat_interval_state(space, dp))
        l, r, holds = robertson_check(rho, a_m, b_m)
        assert (l, r) == pytest.approx(lr, abs=5e-5)
        assert holds


def test_robertson_degenerate_with_coarse_a():
    space = SchwingerSpace(6)
    cg = momentum_partition(space, 2)
    rho = perturbed_state(pure_density(flat_interval_state(space, 2, p_center=1)), cg, 0)
    from succmeas.coarse import coarse_observable
    with pytest.raises(DegenerateBoundError):
        robertson_check(rho, coarse_observable(cg), sine_observables(space)[1])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), d=st.sampled_from([0, 2]))
def test_pure_and_density_routes_agree(seed, d):
    rng = np.random.default_rng(seed)
    a, b = random_observable(6, rng), random_observable(6, rng)
    psi = random_state(6, rng)
    cg = build_partition(a, d)
    for n0 in range(cg.n_max):
        w1 = conditional_wigner(pure_density(psi), cg, n0, b).weights
        w2 = pure_state_conditional(psi, cg, n0, b).weights
        assert np.max(np.abs(w1 - w2)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 32 - 1), d=st.sampled_from([0, 2, 4]))
def test_robertson_holds_on_random_perturbed_states(seed, d):
    rng = np.random.default_rng(seed)
    n = 2 * (d + 1)
    a, b = random_observable(n, rng), random_observable(n, rng)
    rho = random_density(n, rng)
    cg = build_partition(a, d)
    joint = joint_wigner(rho, cg, 0, b)
    assert joint.sum() == pytest.approx(expectation(coarse_projector(cg, 0).matrix, rho).real, abs=1e-10)
    pert = perturbed_state(rho, cg, 0)
    if variance(a.matrix(), pert) > 1e-10:
        assert robertson_check(pert, a.matrix(), b.matrix())[2]


@settings(max_examples=20, deadline=None)
@given(d=st.sampled_from([0, 2, 4, 6]), blocks=st.integers(1, 3), shift=st.floats(0.5, 5.0))
def test_same_observable_width_equals_resolution(d, blocks, shift):
    n = blocks * (d + 1)
    a = SpectralObservable.diagonal(np.arange(n) + shift)
    psi = StateVector(np.ones(n) / np.sqrt(n))
    cg = build_partition(a, d)
    for n0 in range(cg.n_max):
        assert width_count(conditional_wigner(pure_density(psi), cg, n0, a)).value == d
