"""
Panelled Gauss-Legendre quadrature for smooth oscillatory integrands.

The interval is first cut into panels no longer than a quarter period of the
fastest phase; each panel is then bisected until a low-order and a
high-order rule agree to within its share of ``abs_tol``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, ValidationError

__all__ = ["QuadratureConfig", "integrate"]

_LOW = np.polynomial.legendre.leggauss(10)
_HIGH = np.polynomial.legendre.leggauss(20)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    max_subdivisions: int = 2 ** 20

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValidationError("max_subdivisions must be positive")


def _rule(f, a, b, nodes_weights):
    x, w = nodes_weights
    half = 0.5 * (b - a)
    pts = 0.5 * (a + b)[:, None] + half[:, None] * x[None, :]
    return half * (f(pts) @ w)


def integrate(f, a: float, b: float, phase_rate: float = 0.0,
              config: QuadratureConfig = QuadratureConfig()) -> complex:
    """Integrate a vectorized ``f`` over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Maps an array of abscissae to an array of (complex) values.
    phase_rate : float
        Upper bound on |d(phase)/dx| of the integrand's oscillating factor.
        Sets the initial panel length to at most a quarter period.

    Raises
    ------
    AccuracyError
        When the number of panels would exceed ``config.max_subdivisions``.
    """
    if b == a:
        return 0.0 + 0.0j
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    length = b - a
    n0 = 1
    if phase_rate > 0:
        n0 = int(np.ceil(length * phase_rate / (0.5 * np.pi)))
    if n0 > config.max_subdivisions:
        raise AccuracyError("oscillation too fast for the subdivision budget")
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    total = 0.0 + 0.0j
    panels = n0
    while lo.size:
        coarse = _rule(f, lo, hi, _LOW)
        fine = _rule(f, lo, hi, _HIGH)
        err = np.abs(fine - coarse)
        share = config.abs_tol * (hi - lo) / length
        done = err <= share
        total += np.sum(fine[done])
        lo, hi = lo[~done], hi[~done]
        if lo.size:
            panels += lo.size
            if panels > config.max_subdivisions:
                raise AccuracyError("quadrature did not converge within max_subdivisions")
            mid = 0.5 * (lo + hi)
            lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    return sign * complex(total)
