"""
Schwinger's N-dimensional periodic space.

Position states ``|q>`` form the reference basis, momentum states are
``|p> = sum_q w^(pq) |q> / sqrt(N)`` with ``w = exp(2 pi i / N)``.  The shift
``X|q> = |q+1>`` and clock ``Z|q> = w^q |q>`` satisfy ``Z X = w X Z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coarse import build_partition
from .errors import DegenerateBoundError, ValidationError
from .hilbert import SpectralObservable, StateVector, expectation, pure_density
from .wigner import ConditionalDistribution

__all__ = [
    "SchwingerSpace",
    "xz_operators",
    "momentum_basis",
    "momentum_partition",
    "position_basis",
    "kernel_sum",
    "kernel_sum_closed",
    "conditional_w_q",
    "first_zero_width",
    "sine_observables",
    "flat_interval_state",
    "robertson_moments",
    "robertson_table",
    "PAPER_TABLE",
]

# (N, delta_p) -> (L, R) as reported to four decimals
PAPER_TABLE = {
    (6, 2): (0.3333, 0.1667),
    (9, 2): (0.3333, 0.1667),
    (12, 2): (0.3333, 0.1667),
    (15, 4): (0.2, 0.0770),
    (20, 4): (0.2, 0.0784),
    (22, 10): (0.0909, 0.0162),
}


@dataclass(frozen=True)
class SchwingerSpace:
    n_dim: int

    def __post_init__(self):
        if int(self.n_dim) != self.n_dim or self.n_dim < 2:
            raise ValidationError("dimension must be an integer >= 2")

    @property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.n_dim))

    def fourier_matrix(self) -> np.ndarray:
        """Overlaps <q|p>, rows indexed by q and columns by p."""
        q = np.arange(self.n_dim)
        return np.exp(2j * np.pi * np.outer(q, q) / self.n_dim) / np.sqrt(self.n_dim)


def _check_resolution(space: SchwingerSpace, delta_p: int) -> None:
    if int(delta_p) != delta_p or delta_p < 0 or delta_p % 2:
        raise ValidationError("resolution must be even")
    if space.n_dim % (delta_p + 1):
        raise ValidationError("dimension incompatible with resolution")


def xz_operators(space: SchwingerSpace):
    """Return the shift X and clock Z matrices."""
    n = space.n_dim
    x = np.roll(np.eye(n, dtype=complex), 1, axis=0)       # column q -> row q+1
    z = np.diag(space.omega ** np.arange(n))
    return x, z


def momentum_basis(space: SchwingerSpace) -> SpectralObservable:
    """Momentum-like observable with eigenvalues 0..N-1."""
    return SpectralObservable(np.arange(space.n_dim, dtype=float), space.fourier_matrix(), name="p")


def position_basis(space: SchwingerSpace) -> SpectralObservable:
    return SpectralObservable.diagonal(np.arange(space.n_dim, dtype=float), name="q")


def _dirichlet(q, n: int, delta_p: int):
    """sin(pi q (dp+1)/N) / sin(pi q/N), equal to dp+1 at multiples of N."""
    q = np.asarray(q, dtype=float)
    s = np.sin(np.pi * q / n)
    at_pole = np.isclose(np.mod(q, n), 0.0) | np.isclose(np.mod(q, n), n)
    safe = np.where(at_pole, 1.0, s)
    val = np.where(at_pole, delta_p + 1.0, np.sin(np.pi * q * (delta_p + 1) / n) / safe)
    return val if val.ndim else float(val)


def kernel_sum(space: SchwingerSpace, p_center: int, delta_p: int, q: int) -> complex:
    """Direct sum of <q|p> over the momentum block centered at ``p_center``."""
    half = delta_p // 2
    if delta_p % 2 or p_center - half < 0 or p_center + half > space.n_dim - 1:
        raise ValidationError("interval out of range")
    p = np.arange(p_center - half, p_center + half + 1)
    return complex(np.sum(np.exp(2j * np.pi * p * q / space.n_dim)) / np.sqrt(space.n_dim))


def kernel_sum_closed(space: SchwingerSpace, p_center: int, delta_p: int, q: int) -> complex:
    """Closed form w^(q p_center) sin(pi q (dp+1)/N) / (sqrt(N) sin(pi q/N))."""
    n = space.n_dim
    return complex(space.omega ** (q * p_center) * _dirichlet(q, n, delta_p) / np.sqrt(n))


def conditional_w_q(space: SchwingerSpace, delta_p: int, n0: int = 0) -> ConditionalDistribution:
    """Position distribution after a flat momentum block was selected.

    Weights ``(sin(pi q (dp+1)/N) / sin(pi q/N))^2 / (N (dp+1))``; they do not
    depend on which block ``n0`` was found.
    """
    _check_resolution(space, delta_p)
    n = space.n_dim
    if not 0 <= n0 < n // (delta_p + 1):
        raise ValidationError(f"interval index {n0} out of range")
    q = np.arange(n)
    w = _dirichlet(q, n, delta_p) ** 2 / (n * (delta_p + 1))
    return ConditionalDistribution(q.astype(float), w)


def first_zero_width(space: SchwingerSpace, delta_p: int) -> Fraction:
    """Width (N-1)/(dp+1) tied to the first zero q0 = N/(dp+1).

    Exact rational, so ``width * (dp + 1) == N - 1`` holds identically.
    """
    _check_resolution(space, delta_p)
    q0 = Fraction(space.n_dim, delta_p + 1)
    return q0 * Fraction(space.n_dim - 1, space.n_dim)


def sine_observables(space: SchwingerSpace):
    """A = sin(2 pi p/N) = -(X - X^+)/(2i) and B = sin(2 pi q/N) = (Z - Z^+)/(2i)."""
    n = space.n_dim
    f = space.fourier_matrix()
    s = np.sin(2 * np.pi * np.arange(n) / n)
    a = (f * s) @ f.conj().T
    b = np.diag(s).astype(complex)
    return 0.5 * (a + a.conj().T), b


def flat_interval_state(space: SchwingerSpace, delta_p: int, p_center: int = 0) -> StateVector:
    """Equal-amplitude superposition of |p> for p within delta_p/2 of p_center (mod N)."""
    if delta_p % 2 or delta_p < 0 or delta_p >= space.n_dim:
        raise ValidationError("resolution must be even and below N")
    p = np.mod(np.arange(-(delta_p // 2), delta_p // 2 + 1) + p_center, space.n_dim)
    amp = space.fourier_matrix()[:, p].sum(axis=1) / np.sqrt(delta_p + 1)
    return StateVector(amp, basis_label="q")


def robertson_moments(space: SchwingerSpace, delta_p: int, method: str = "closed") -> dict:
    """Moments of the sine observables in the flat state centered at p = 0.

    ``method="closed"`` evaluates the explicit trigonometric sums;
    ``method="matrix"`` takes traces against the density matrix.

    Returns
    -------
    dict with keys ``A``, ``A2``, ``B``, ``B2`` (floats) and ``comm``
    (complex ``<[A, B]>``).
    """
    _check_resolution(space, delta_p)
    n, dp = space.n_dim, delta_p
    if method == "matrix":
        rho = pure_density(flat_interval_state(space, dp))
        a, b = sine_observables(space)
        return {
            "A": expectation(a, rho).real,
            "A2": expectation(a @ a, rho).real,
            "B": expectation(b, rho).real,
            "B2": expectation(b @ b, rho).real,
            "comm": expectation(a @ b - b @ a, rho),
        }
    if method != "closed":
        raise ValidationError(f"unknown method {method!r}")
    q = np.arange(n)
    p = np.arange(-(dp // 2), dp // 2 + 1)
    sq = np.sin(2 * np.pi * q / n)
    d = _dirichlet(q, n, dp)
    norm = n * (dp + 1)
    return {
        "A": float(np.sin(2 * np.pi * p / n).sum() / (dp + 1)),
        "A2": 0.5 * (1.0 - _dirichlet(2.0, n, dp) / (dp + 1)),
        "B": float(np.sum(sq * d * d) / norm),
        "B2": float(np.sum(sq * sq * d * d) / norm),
        "comm": complex(-1j * np.sum(sq * d * (_dirichlet(q - 1, n, dp) - _dirichlet(q + 1, n, dp))) / norm),
    }


def robertson_table(space: SchwingerSpace, delta_p: int, method: str = "closed"):
    """(L, R) = (var B, |<[A,B]>|^2 / (4 var A)) for the flat state at p = 0."""
    m = robertson_moments(space, delta_p, method)
    var_a = m["A2"] - m["A"] ** 2
    if var_a < 1e-14:
        raise DegenerateBoundError("Robertson bound degenerate: var(A) vanishes")
    lhs = m["B2"] - m["B"] ** 2
    rhs = abs(m["comm"]) ** 2 / (4.0 * var_a)
    return float(lhs), float(rhs)


def momentum_partition(space: SchwingerSpace, delta_p: int):
    """Blocks of delta_p + 1 consecutive momenta, centered at dp/2, dp/2 + dp + 1, ..."""
    return build_partition(momentum_basis(space), delta_p)
