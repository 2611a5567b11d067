"""
Finite-dimensional state space: kets, density operators, spectral observables
and projectors, plus the handful of trace operations the rest of the package
is built on.

All containers are frozen dataclasses holding numpy arrays; the arrays are
marked read-only at construction so values can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, ZeroProbabilityError

__all__ = [
    "StateVector",
    "DensityOperator",
    "SpectralObservable",
    "Projector",
    "pure_density",
    "expectation",
    "variance",
    "commutator_expectation",
    "sandwich",
]

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
PROJECTOR_TOL = 1e-10
ZERO_WEIGHT_TOL = 1e-14


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


def _square(matrix, name: str) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {m.shape}")
    return m


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class StateVector:
    """Normalized ket in an N-dimensional space.

    Parameters
    ----------
    amplitudes : array_like of complex
        Components in the basis named by ``basis_label``.
    basis_label : str
        Free-form tag naming the basis.
    """

    amplitudes: np.ndarray
    basis_label: str = "reference"

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size == 0:
            raise ValidationError("amplitudes must be a non-empty 1-d array")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state vector is not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", _frozen(amp))

    @classmethod
    def normalized(cls, amplitudes, basis_label: str = "reference") -> "StateVector":
        """Build a state from unnormalized amplitudes."""
        amp = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amp)
        if norm == 0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(amp / norm, basis_label)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite N x N matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _square(self.matrix, "density matrix")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(_hermitian_part(m)).min() < -PSD_TOL:
            raise ValidationError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", _frozen(m))

    @classmethod
    def from_unnormalized(cls, matrix) -> "DensityOperator":
        """Hermitize and trace-normalize ``matrix``."""
        m = _hermitian_part(_square(matrix, "density matrix"))
        tr = np.trace(m).real
        if tr <= ZERO_WEIGHT_TOL:
            raise ZeroProbabilityError("zero-probability branch")
        return cls(m / tr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class SpectralObservable:
    """Non-degenerate observable given by its spectral data.

    Parameters
    ----------
    eigenvalues : array_like of float, shape (N,)
    eigenvectors : array_like of complex, shape (N, N)
        Column ``k`` is the eigenvector belonging to ``eigenvalues[k]``.
    name : str
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    name: str = ""

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float)
        vecs = _square(self.eigenvectors, "eigenvector matrix")
        if vals.ndim != 1 or vals.size != vecs.shape[0]:
            raise ValidationError("need one eigenvalue per eigenvector")
        if vals.size > 1:
            gaps = np.diff(np.sort(vals))
            scale = max(1.0, float(np.max(np.abs(vals))))
            if gaps.min() <= 1e-12 * scale:
                raise ValidationError("spectrum is degenerate")
        gram = vecs.conj().T @ vecs
        if np.max(np.abs(gram - np.eye(vals.size))) > NORM_TOL:
            raise ValidationError("eigenvectors are not orthonormal")
        object.__setattr__(self, "eigenvalues", _frozen(vals))
        object.__setattr__(self, "eigenvectors", _frozen(vecs))

    @classmethod
    def diagonal(cls, eigenvalues, name: str = "") -> "SpectralObservable":
        """Observable diagonal in the reference basis."""
        vals = np.asarray(eigenvalues, dtype=float)
        return cls(vals, np.eye(vals.size, dtype=complex), name)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def eigenvector(self, k: int) -> StateVector:
        return StateVector(self.eigenvectors[:, k], basis_label=self.name or "eigenbasis")

    def matrix(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def function(self, f) -> "SpectralObservable":
        """``f(A)`` with the same eigenvectors; ``f`` must keep the spectrum non-degenerate."""
        return SpectralObservable(np.asarray(f(self.eigenvalues), dtype=float),
                                  self.eigenvectors, name=f"f({self.name})")

    def eigenprojector(self, k: int) -> "Projector":
        v = self.eigenvectors[:, k]
        return Projector(np.outer(v, v.conj()), 1)

    def span_projector(self, indices) -> "Projector":
        """Sum of eigenprojectors over ``indices``."""
        idx = np.asarray(list(indices), dtype=int)
        v = self.eigenvectors[:, idx]
        return Projector(v @ v.conj().T, idx.size)


@dataclass(frozen=True)
class Projector:
    """Orthogonal projector of a given rank."""

    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        m = _square(self.matrix, "projector")
        if self.rank < 0:
            raise ValidationError("rank must be nonnegative")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("projector is not Hermitian")
        if np.max(np.abs(m @ m - m)) > PROJECTOR_TOL:
            raise ValidationError("projector is not idempotent")
        if abs(np.trace(m).real - self.rank) > PROJECTOR_TOL:
            raise ValidationError("projector trace does not match its rank")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _check_dims(*dims: int) -> None:
    if len(set(dims)) != 1:
        raise ValidationError(f"dimension mismatch: {dims}")


def pure_density(psi: StateVector) -> DensityOperator:
    """Return |psi><psi|."""
    if not isinstance(psi, StateVector):
        psi = StateVector(psi)
    a = psi.amplitudes
    return DensityOperator(np.outer(a, a.conj()))


def expectation(op_matrix, rho: DensityOperator) -> complex:
    """Tr(rho @ op)."""
    op = _square(op_matrix, "operator")
    _check_dims(op.shape[0], rho.dim)
    # Tr(rho op) without forming the product
    return complex(np.sum(rho.matrix * op.T))


def variance(op_matrix, rho: DensityOperator) -> float:
    """<op^2> - <op>^2 for a Hermitian operator, clamped at zero."""
    op = _square(op_matrix, "operator")
    mean = expectation(op, rho).real
    second = expectation(op @ op, rho).real
    return max(second - mean * mean, 0.0)


def commutator_expectation(a_matrix, b_matrix, rho: DensityOperator) -> complex:
    """Tr(rho [A, B])."""
    a = _square(a_matrix, "A")
    b = _square(b_matrix, "B")
    _check_dims(a.shape[0], b.shape[0], rho.dim)
    return expectation(a @ b - b @ a, rho)


def sandwich(rho: DensityOperator, projector: Projector):
    """Return ``(P rho P, Tr(rho P))``.

    Raises
    ------
    ZeroProbabilityError
        If the branch weight is below 1e-14.
    """
    _check_dims(rho.dim, projector.dim)
    p = projector.matrix
    weight = expectation(p, rho).real
    if weight <= ZERO_WEIGHT_TOL:
        raise ZeroProbabilityError("zero-probability branch")
    return _hermitian_part(p @ rho.matrix @ p), weight
