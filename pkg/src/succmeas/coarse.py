"""
Low-resolution version of an observable.

The sorted spectrum is cut into consecutive blocks of ``delta_a + 1`` levels.
Each block is represented by the eigenvalue at its middle index, and its
projector is the sum of the fine eigenprojectors it contains.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .hilbert import Projector, SpectralObservable

__all__ = [
    "CoarseGraining",
    "build_partition",
    "coarse_projector",
    "coarse_observable",
    "physical_width",
]


@dataclass(frozen=True)
class CoarseGraining:
    """Partition of a spectrum into equal disjoint blocks.

    Attributes
    ----------
    delta_a : int
        Number of levels in a block besides its center (even).
    n_max : int
        Number of blocks.
    centers : tuple of float
        Block centers, ascending.
    member_indices : tuple of tuple of int
        Eigen-indices (into ``observable.eigenvalues``) of each block, sorted
        by eigenvalue.
    observable : SpectralObservable
        The observable that was partitioned.
    """

    delta_a: int
    n_max: int
    centers: tuple
    member_indices: tuple
    observable: SpectralObservable

    def __post_init__(self):
        if self.delta_a < 0 or self.delta_a % 2:
            raise ValidationError("resolution must be even")
        if len(self.centers) != self.n_max or len(self.member_indices) != self.n_max:
            raise ValidationError("centers and blocks must have n_max entries")
        flat = [i for block in self.member_indices for i in block]
        if sorted(flat) != list(range(self.observable.dim)):
            raise ValidationError("blocks must cover every eigen-index exactly once")
        if any(len(block) != self.delta_a + 1 for block in self.member_indices):
            raise ValidationError("every block must hold delta_a + 1 levels")

    @property
    def dim(self) -> int:
        return self.observable.dim

    def interval_of(self, index: int) -> int:
        """Block number containing eigen-index ``index``."""
        for n, block in enumerate(self.member_indices):
            if index in block:
                return n
        raise ValidationError(f"eigen-index {index} out of range")

    def _check_interval(self, n: int) -> None:
        if not 0 <= n < self.n_max:
            raise ValidationError(f"interval index {n} outside 0..{self.n_max - 1}")


def build_partition(observable: SpectralObservable, delta_a: int) -> CoarseGraining:
    """Group the sorted spectrum into blocks of ``delta_a + 1`` levels.

    Raises
    ------
    ValidationError
        ``"resolution must be even"`` for odd or negative ``delta_a``;
        ``"dimension incompatible with resolution"`` when ``delta_a + 1``
        does not divide the dimension.
    """
    if int(delta_a) != delta_a or delta_a < 0 or delta_a % 2:
        raise ValidationError("resolution must be even")
    delta_a = int(delta_a)
    size = delta_a + 1
    dim = observable.dim
    if dim % size:
        raise ValidationError("dimension incompatible with resolution")
    order = np.argsort(observable.eigenvalues, kind="stable")
    blocks = tuple(tuple(int(i) for i in order[k:k + size]) for k in range(0, dim, size))
    centers = tuple(float(observable.eigenvalues[b[delta_a // 2]]) for b in blocks)
    return CoarseGraining(delta_a, len(blocks), centers, blocks, observable)


def coarse_projector(cg: CoarseGraining, n: int,
                     observable: Optional[SpectralObservable] = None) -> Projector:
    """Rank-(delta_a + 1) projector onto block ``n``."""
    cg._check_interval(n)
    obs = cg.observable if observable is None else observable
    if obs.dim != cg.dim:
        raise ValidationError("observable does not match the partition")
    return obs.span_projector(cg.member_indices[n])


def coarse_observable(cg: CoarseGraining,
                      observable: Optional[SpectralObservable] = None) -> np.ndarray:
    """Matrix of the low-resolution observable, sum_n a^(n) P_n."""
    obs = cg.observable if observable is None else observable
    v = obs.eigenvectors
    diag = np.empty(cg.dim)
    for center, block in zip(cg.centers, cg.member_indices):
        diag[list(block)] = center
    return (v * diag) @ v.conj().T


def physical_width(cg: CoarseGraining, level_density: float) -> float:
    """Extent of a block in units of the observable, delta_a / level_density."""
    if not level_density > 0:
        raise ValidationError("level density must be positive")
    return cg.delta_a / level_density
