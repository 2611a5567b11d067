"""
Two Gaussian probes coupled in succession to the system.

The first probe reads the low-resolution observable, the second the
full-resolution observable B.  All densities are evaluated from their closed
forms as sums of Gaussians; the switching profiles only enter through their
unit time integrals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .coarse import CoarseGraining, coarse_projector
from .errors import ValidationError, ZeroProbabilityError
from .hilbert import DensityOperator, SpectralObservable
from .wigner import ConditionalDistribution, conditional_wigner, perturbed_state

__all__ = [
    "ProbeCoupling",
    "ExperimentSpec",
    "GridDensity",
    "gaussian",
    "g_factor",
    "default_q2_grid",
    "joint_distribution",
    "marginal_q1",
    "conditional_q2_given_q1",
    "conditional_strong_limit",
    "conditional_weak_limit",
    "characteristic_function",
    "deconvolve_wigner",
    "conditional_moments",
]

GRID_POINTS = 4096
GRID_HALF_WIDTH = 8.0   # in units of sigma_q


@dataclass(frozen=True)
class ProbeCoupling:
    """Coupling strength and initial position spread of one probe."""

    epsilon: float
    sigma_q: float

    def __post_init__(self):
        if not np.isfinite(self.epsilon):
            raise ValidationError("coupling must be finite")
        if not self.sigma_q > 0:
            raise ValidationError("probe width must be positive")

    @property
    def ratio(self) -> float:
        """epsilon / sigma_q, the coupling strength in units of the probe width."""
        return self.epsilon / self.sigma_q

    def wavefunction(self, q):
        """Initial probe amplitude chi(Q), real Gaussian of spread sigma_q."""
        s2 = self.sigma_q ** 2
        return np.exp(-np.square(q) / (4 * s2)) / (2 * np.pi * s2) ** 0.25


@dataclass(frozen=True)
class ExperimentSpec:
    rho: DensityOperator
    observable_a: SpectralObservable
    graining: CoarseGraining
    observable_b: SpectralObservable
    probe1: ProbeCoupling
    probe2: ProbeCoupling

    def __post_init__(self):
        dims = {self.rho.dim, self.observable_a.dim, self.graining.dim, self.observable_b.dim}
        if len(dims) != 1:
            raise ValidationError(f"dimension mismatch: {sorted(dims)}")
        if self.graining.observable is not self.observable_a and not (
            np.array_equal(self.graining.observable.eigenvalues, self.observable_a.eigenvalues)
            and np.allclose(self.graining.observable.eigenvectors, self.observable_a.eigenvectors)
        ):
            raise ValidationError("graining was built for a different observable")

    @property
    def dim(self) -> int:
        return self.rho.dim


@dataclass(frozen=True)
class GridDensity:
    """Probability density sampled on a uniform grid."""

    axis: np.ndarray
    density: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.axis, dtype=float)
        p = np.asarray(self.density, dtype=float)
        if x.ndim != 1 or x.shape != p.shape or x.size < 2:
            raise ValidationError("axis and density must be 1-d of equal length")
        steps = np.diff(x)
        if steps.min() <= 0 or np.ptp(steps) > 1e-9 * abs(steps.mean()):
            raise ValidationError("axis must be a uniform increasing grid")
        if p.min() < -1e-12:
            raise ValidationError("density must be nonnegative")
        p = np.clip(p, 0.0, None)
        if abs(np.trapezoid(p, x) - 1.0) > 1e-6:
            raise ValidationError("density is not normalized on its grid")
        for name, arr in (("axis", x), ("density", p)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def step(self) -> float:
        return float(self.axis[1] - self.axis[0])

    def integral(self) -> float:
        return float(np.trapezoid(self.density, self.axis))

    def moment(self, order: int) -> float:
        return float(np.trapezoid(self.density * self.axis ** order, self.axis))


def gaussian(x, mean, sigma):
    """Normal density."""
    return np.exp(-0.5 * np.square((x - mean) / sigma)) / (np.sqrt(2 * np.pi) * sigma)


def g_factor(probe1: ProbeCoupling, a_center: float, a_center_prime: float) -> float:
    """Interference suppression between two first-probe branches.

    ``exp(-eps^2 (a - a')^2 / (2 sigma^2))``.  It is 1 for equal centers and
    collapses to a Kronecker delta as eps / sigma grows.

    Notes
    -----
    Multiplying the two displaced Gaussian probe amplitudes directly gives
    the same structure with ``8 sigma^2`` in the denominator;
    :func:`joint_distribution` uses that product.
    """
    return float(np.exp(-probe1.ratio ** 2 * (a_center - a_center_prime) ** 2 / 2.0))


def default_q2_grid(spec: ExperimentSpec, points: int = GRID_POINTS) -> np.ndarray:
    """Uniform Q2 grid covering every displaced Gaussian by 8 widths."""
    shifts = spec.probe2.epsilon * spec.observable_b.eigenvalues
    pad = GRID_HALF_WIDTH * spec.probe2.sigma_q
    return np.linspace(shifts.min() - pad, shifts.max() + pad, points)


def _block_overlaps(spec: ExperimentSpec) -> np.ndarray:
    """T[n, n', m] = Tr(rho P_n' P_bm P_n) = <b_m| P_n rho P_n' |b_m>."""
    cg = spec.graining
    projs = [coarse_projector(cg, n).matrix for n in range(cg.n_max)]
    vb = spec.observable_b.eigenvectors
    rows = [vb.conj().T @ p for p in projs]          # <b_m| P_n
    cols = [rho_p @ vb for rho_p in (spec.rho.matrix @ p for p in projs)]   # rho P_n' |b_m>
    out = np.empty((cg.n_max, cg.n_max, spec.dim), dtype=complex)
    for n, r in enumerate(rows):
        for k, c in enumerate(cols):
            out[n, k] = np.einsum("mi,im->m", r, c)
    return out


def _branch_weights(spec: ExperimentSpec) -> np.ndarray:
    cg = spec.graining
    return np.array([np.real(np.trace(spec.rho.matrix @ coarse_projector(cg, n).matrix))
                     for n in range(cg.n_max)])


def _q1_amplitudes(spec: ExperimentSpec, q1) -> np.ndarray:
    """chi1(Q1 - eps1 a^(n)) for every block, shape (n_max,) + shape(q1)."""
    centers = np.asarray(spec.graining.centers)
    q1 = np.asarray(q1, dtype=float)
    shifts = spec.probe1.epsilon * centers.reshape((-1,) + (1,) * q1.ndim)
    return spec.probe1.wavefunction(q1[None, ...] - shifts)


def _q2_gaussians(spec: ExperimentSpec, q2) -> np.ndarray:
    shifts = spec.probe2.epsilon * spec.observable_b.eigenvalues
    q2 = np.asarray(q2, dtype=float)
    return gaussian(q2[None, ...], shifts.reshape((-1,) + (1,) * q2.ndim), spec.probe2.sigma_q)


def joint_distribution(spec: ExperimentSpec, q1, q2):
    """Final joint density p(Q1, Q2) of the two probe positions.

    Evaluates ``sum_{n,n',m} Tr(rho P_n' P_bm P_n) chi1(Q1 - e1 a_n)
    chi1(Q1 - e1 a_n') |chi2(Q2 - e2 b_m)|^2`` where ``q1`` and ``q2``
    broadcast against each other.
    """
    q1, q2 = np.broadcast_arrays(np.asarray(q1, float), np.asarray(q2, float))
    t = _block_overlaps(spec)
    chi = _q1_amplitudes(spec, q1)               # (n, ...)
    g2 = _q2_gaussians(spec, q2)                 # (m, ...)
    # sum over n, n' first: c[m, ...] = sum_nn' T[n,n',m] chi_n chi_n'
    c = np.einsum("nkm,n...,k...->m...", t, chi, chi)
    val = np.einsum("m...,m...->...", c.real, g2)
    return np.clip(val, 0.0, None) if np.ndim(val) else max(float(val), 0.0)


def marginal_q1(spec: ExperimentSpec, q1):
    """p(Q1) = sum_n Tr(rho P_n) N(Q1; e1 a^(n), sigma1)."""
    w = _branch_weights(spec)
    centers = np.asarray(spec.graining.centers)
    q1 = np.asarray(q1, dtype=float)
    shape = (-1,) + (1,) * q1.ndim
    g = gaussian(q1[None, ...], spec.probe1.epsilon * centers.reshape(shape), spec.probe1.sigma_q)
    val = np.tensordot(w, g, axes=1)
    return val if np.ndim(val) else float(val)


def conditional_q2_given_q1(spec: ExperimentSpec, q1: float,
                            grid: Optional[np.ndarray] = None) -> GridDensity:
    """p(Q2 | Q1 = q1) from the full joint / marginal ratio."""
    grid = default_q2_grid(spec) if grid is None else np.asarray(grid, float)
    marg = marginal_q1(spec, q1)
    if not marg > 1e-300:
        raise ZeroProbabilityError("conditioning on impossible outcome")
    t = _block_overlaps(spec)
    chi = _q1_amplitudes(spec, q1)
    coef = np.einsum("nkm,n,k->m", t, chi, chi).real / marg
    dens = coef @ _q2_gaussians(spec, grid)
    return GridDensity(grid, np.clip(dens, 0.0, None))


def _mixture(spec: ExperimentSpec, weights: np.ndarray, grid) -> GridDensity:
    grid = default_q2_grid(spec) if grid is None else np.asarray(grid, float)
    return GridDensity(grid, np.asarray(weights) @ _q2_gaussians(spec, grid))


def conditional_strong_limit(spec: ExperimentSpec, n0: int,
                             grid: Optional[np.ndarray] = None) -> GridDensity:
    """Strong-coupling form: Wigner weights convolved with the Q2 probe density."""
    dist = conditional_wigner(spec.rho, spec.graining, n0, spec.observable_b)
    return _mixture(spec, dist.weights, grid)


def conditional_weak_limit(spec: ExperimentSpec,
                           grid: Optional[np.ndarray] = None) -> GridDensity:
    """Weak-coupling form: Born weights of B in the original state, convolved."""
    vb = spec.observable_b.eigenvectors
    born = np.einsum("im,ij,jm->m", vb.conj(), spec.rho.matrix, vb).real
    return _mixture(spec, born, grid)


def characteristic_function(dist: GridDensity, k):
    """Trapezoid estimate of  integral exp(i k Q) p(Q) dQ."""
    k = np.asarray(k, dtype=float)
    phase = np.exp(1j * np.multiply.outer(k, dist.axis))
    val = np.trapezoid(phase * dist.density, dist.axis, axis=-1)
    return val if np.ndim(val) else complex(val)


def deconvolve_wigner(spec: ExperimentSpec, dist: GridDensity,
                      n_k: Optional[int] = None, floor: float = 1e-4,
                      max_condition: float = 1e8) -> ConditionalDistribution:
    """Recover the weights on the spectrum of B from a measured Q2 density.

    The characteristic function is divided by the Gaussian probe factor on a
    grid of wavenumbers where that factor stays above ``floor``, then the
    linear system ``sum_m w_m exp(i k e2 b_m)`` is solved by least squares.

    Raises
    ------
    ValidationError
        ``"spectrum too dense for deconvolution"`` when the sampled system
        has condition number above ``max_condition``.
    """
    if not 0 < floor < 1:
        raise ValidationError("floor must lie in (0, 1)")
    sigma, eps = spec.probe2.sigma_q, spec.probe2.epsilon
    b = spec.observable_b.eigenvalues
    k_max = np.sqrt(-2.0 * np.log(floor)) / sigma
    n_k = max(8 * b.size, 64) if n_k is None else int(n_k)
    k = np.linspace(0.0, k_max, n_k)
    rhs = characteristic_function(dist, k) / np.exp(-0.5 * (k * sigma) ** 2)
    design = np.exp(1j * np.outer(k, eps * b))
    if np.linalg.cond(design) > max_condition:
        raise ValidationError("spectrum too dense for deconvolution")
    a = np.vstack([design.real, design.imag])
    y = np.concatenate([rhs.real, rhs.imag])
    w, *_ = np.linalg.lstsq(a, y, rcond=None)
    w = np.where(np.abs(w) < 1e-12, 0.0, w)
    return ConditionalDistribution(b, w)


def conditional_moments(spec: ExperimentSpec, n0: int, grid: Optional[np.ndarray] = None):
    """Moments of Q2 given Q1 = e1 a^(n0) in the strong limit, scaled by e2.

    Integrates the strong-limit density numerically and returns
    ``(E[Q2]/e2, E[Q2^2]/e2^2, var(Q2)/e2^2)``.
    """
    if spec.probe2.epsilon == 0:
        raise ValidationError("second probe is not coupled")
    perturbed_state(spec.rho, spec.graining, n0)   # raises on a zero-probability branch
    dens = conditional_strong_limit(spec, n0, grid)
    eps = spec.probe2.epsilon
    mean = dens.moment(1) / eps
    second = dens.moment(2) / eps ** 2
    return mean, second, second - mean * mean
