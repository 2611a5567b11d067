"""
Wigner's formula for a low-resolution first measurement followed by a
full-resolution one, the post-measurement state, width measures of the
conditional distribution and the Robertson check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .coarse import CoarseGraining, build_partition, coarse_projector
from .errors import DegenerateBoundError, ValidationError, ZeroProbabilityError
from .hilbert import (
    DensityOperator,
    SpectralObservable,
    StateVector,
    commutator_expectation,
    expectation,
    sandwich,
    variance,
)

__all__ = [
    "ConditionalDistribution",
    "WidthEstimate",
    "joint_wigner",
    "conditional_wigner",
    "perturbed_state",
    "pure_state_conditional",
    "commuting_case_moments",
    "width_count",
    "width_stddev",
    "max_weight_interval",
    "ur_function",
    "robertson_check",
]

DEFAULT_THRESHOLD = 0.2
WIDTH_METHODS = ("count_threshold", "stddev", "first_zero", "one_over_e")


@dataclass(frozen=True)
class ConditionalDistribution:
    """Probability weights over a discrete support."""

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.support, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if s.shape != w.shape or s.ndim != 1:
            raise ValidationError("support and weights must be 1-d and equally long")
        if w.min() < -1e-12:
            raise ValidationError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-10:
            raise ValidationError(f"weights sum to {w.sum()!r}, expected 1")
        w = np.clip(w, 0.0, None)
        for name, arr in (("support", s), ("weights", w)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def mean(self) -> float:
        return float(self.weights @ self.support)

    def as_dict(self) -> dict:
        return {float(b): float(w) for b, w in zip(self.support, self.weights)}


@dataclass(frozen=True)
class WidthEstimate:
    method: str
    value: float
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in WIDTH_METHODS:
            raise ValidationError(f"unknown width method {self.method!r}")
        if self.value < 0:
            raise ValidationError("width must be nonnegative")


def _branch_weight(rho: DensityOperator, cg: CoarseGraining, n0: int) -> float:
    w = expectation(coarse_projector(cg, n0).matrix, rho).real
    if w <= 1e-14:
        raise ZeroProbabilityError(f"interval {n0} has zero probability")
    return w


def _b_probabilities(op: np.ndarray, b: SpectralObservable) -> np.ndarray:
    # <b_m| op |b_m> for every m
    v = b.eigenvectors
    return np.einsum("im,ij,jm->m", v.conj(), op, v).real


def joint_wigner(rho: DensityOperator, cg: CoarseGraining, n0: int,
                 b: SpectralObservable, m: Optional[int] = None):
    """Tr(rho P_n0 P_bm P_n0).

    Returns the value for eigen-index ``m`` of ``b``, or the full array over
    ``m`` when ``m`` is None.
    """
    if b.dim != cg.dim or rho.dim != cg.dim:
        raise ValidationError("dimension mismatch")
    p = coarse_projector(cg, n0).matrix
    joint = np.clip(_b_probabilities(p @ rho.matrix @ p, b), 0.0, 1.0)
    if m is None:
        return joint
    if not 0 <= m < b.dim:
        raise ValidationError(f"eigen-index {m} out of range")
    return float(joint[m])


def conditional_wigner(rho: DensityOperator, cg: CoarseGraining, n0: int,
                       b: SpectralObservable) -> ConditionalDistribution:
    """Distribution of ``b`` given that the first outcome fell in block ``n0``."""
    weight = _branch_weight(rho, cg, n0)
    joint = joint_wigner(rho, cg, n0, b)
    return ConditionalDistribution(b.eigenvalues, joint / weight)


def perturbed_state(rho: DensityOperator, cg: CoarseGraining, n0: int) -> DensityOperator:
    """P rho P / Tr(rho P) for the block projector P."""
    unnormalized, weight = sandwich(rho, coarse_projector(cg, n0))
    return DensityOperator.from_unnormalized(unnormalized / weight)


def pure_state_conditional(psi: StateVector, cg: CoarseGraining, n0: int,
                           b: SpectralObservable) -> ConditionalDistribution:
    """Conditional distribution for a pure state, as N(b_m) / D.

    ``N(b_m) = |sum_n <b_m|a_n><a_n|psi>|^2`` and ``D = sum_n |<a_n|psi>|^2``
    with ``n`` running over block ``n0``.
    """
    cg._check_interval(n0)
    if psi.dim != cg.dim or b.dim != cg.dim:
        raise ValidationError("dimension mismatch")
    va = cg.observable.eigenvectors[:, list(cg.member_indices[n0])]
    comps = va.conj().T @ psi.amplitudes          # <a_n|psi>
    denom = float(np.sum(np.abs(comps) ** 2))
    if denom <= 1e-14:
        raise ZeroProbabilityError(f"interval {n0} has zero probability")
    overlaps = b.eigenvectors.conj().T @ va        # <b_m|a_n>
    numer = np.abs(overlaps @ comps) ** 2
    return ConditionalDistribution(b.eigenvalues, numer / denom)


def commuting_case_moments(cg: CoarseGraining, n0: int, f: Callable = None):
    """Mean, second moment and variance of ``f(a_n)`` averaged over block ``n0``.

    These are the moments of the conditional distribution when ``B = f(A)``
    and the state is flat across the block.
    """
    cg._check_interval(n0)
    a = cg.observable.eigenvalues[list(cg.member_indices[n0])]
    fa = np.asarray(a if f is None else f(a), dtype=float)
    mean = float(fa.mean())
    second = float((fa * fa).mean())
    return mean, second, max(second - mean * mean, 0.0)


def width_count(dist: ConditionalDistribution,
                threshold_fraction: float = DEFAULT_THRESHOLD) -> WidthEstimate:
    """Number of support points carrying appreciable weight, minus one.

    A point counts when its weight is at least ``threshold_fraction`` times
    the largest weight.
    """
    if not 0 < threshold_fraction < 1:
        raise ValidationError("threshold fraction must lie in (0, 1)")
    w = dist.weights
    cut = threshold_fraction * w.max()
    count = int(np.count_nonzero(w >= cut * (1 - 1e-12)))
    return WidthEstimate("count_threshold", float(count - 1),
                         {"threshold_fraction": threshold_fraction})


def width_stddev(dist: ConditionalDistribution) -> WidthEstimate:
    w, b = dist.weights, dist.support
    mean = w @ b
    var = w @ (b * b) - mean * mean
    return WidthEstimate("stddev", float(np.sqrt(max(var, 0.0))))


def max_weight_interval(rho: DensityOperator, cg: CoarseGraining, rtol: float = 1e-12) -> int:
    """Block with the largest Born weight; ties are an error."""
    weights = np.array([expectation(coarse_projector(cg, n).matrix, rho).real
                        for n in range(cg.n_max)])
    best = int(np.argmax(weights))
    ties = np.flatnonzero(weights >= weights[best] * (1 - rtol) - 1e-15)
    if ties.size > 1:
        raise ValidationError(f"state is not centered on a single interval (ties: {ties.tolist()})")
    return best


def ur_function(rho: DensityOperator, observable_a: SpectralObservable,
                b: SpectralObservable, delta_a_values: Iterable[int],
                centering: Optional[Callable] = None):
    """F(delta_a): variance of B in the post-measurement state.

    Parameters
    ----------
    centering : callable(rho, cg) -> int, optional
        Picks the conditioning block; defaults to the block of largest Born
        weight.

    Returns
    -------
    list of (delta_a, F) tuples.
    """
    pick = centering or (lambda r, cg: max_weight_interval(r, cg))
    bm = b.matrix()
    out = []
    for da in delta_a_values:
        cg = build_partition(observable_a, da)
        n0 = pick(rho, cg)
        out.append((int(da), variance(bm, perturbed_state(rho, cg, n0))))
    return out


def robertson_check(rho_pert: DensityOperator, a_matrix, b_matrix, tol: float = 1e-10):
    """Compare var(B) with |<[A, B]>|^2 / (4 var(A)).

    ``a_matrix`` must be the full-resolution observable; its coarse version
    has zero variance in any post-measurement state.

    Returns
    -------
    (L, R, holds)
    """
    var_a = variance(a_matrix, rho_pert)
    if var_a <= 1e-14:
        raise DegenerateBoundError("Robertson bound degenerate: var(A) vanishes")
    lhs = variance(b_matrix, rho_pert)
    comm = commutator_expectation(a_matrix, b_matrix, rho_pert)
    rhs = abs(comm) ** 2 / (4.0 * var_a)
    return lhs, rhs, bool(lhs >= rhs - tol)
