"""
Continuous-variable cases.

* Momentum measured with resolution ``delta_p`` on a Gaussian wavepacket,
  followed by position: the position density is the squared Fourier
  transform of the wavepacket chopped to the momentum window.
* The rotated-quadrature model: first observable ``X_theta = cos(theta) x +
  sin(theta) p`` with resolution ``delta_xprime``, second observable ``x``.
  ``theta`` interpolates between commuting (0) and conjugate (pi/2) pairs.
* Small-``delta_p`` expansions of the window integrals, paired with direct
  quadrature.

Oscillatory integrals go through :func:`succmeas.quadrature.integrate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import AccuracyError, ValidationError, ZeroProbabilityError
from .quadrature import QuadratureConfig, integrate
from .wigner import WidthEstimate

__all__ = [
    "GaussianWavepacket",
    "RotatedQuadrature",
    "denominator_d",
    "numerator_n",
    "window_amplitude",
    "conditional_w_x",
    "first_zero",
    "SincWidth",
    "sinc_width_product",
    "rotated_kernel",
    "s_integral",
    "s_density",
    "theta_width",
    "s_model",
    "s_model_quadrature",
    "ModelWidthRelation",
    "model_width_relation",
    "AppendixC",
    "appendix_c_series",
]

DEFAULT_QUAD = QuadratureConfig()
SINGULAR_SIN = 1e-12


@dataclass(frozen=True)
class GaussianWavepacket:
    """Real Gaussian momentum wavefunction centered at ``p_center``."""

    p_center: float = 0.0
    sigma_p: float = 1.0

    def __post_init__(self):
        if not self.sigma_p > 0:
            raise ValidationError("sigma_p must be positive")

    def amplitude(self, p):
        s2 = self.sigma_p ** 2
        return np.exp(-np.square(np.asarray(p) - self.p_center) / (4 * s2)) / (2 * np.pi * s2) ** 0.25

    def position_density(self, x):
        """|psi(x)|^2, a Gaussian of standard deviation 1/(2 sigma_p)."""
        sx = 0.5 / self.sigma_p
        return np.exp(-0.5 * np.square(np.asarray(x) / sx)) / (np.sqrt(2 * np.pi) * sx)


@dataclass(frozen=True)
class RotatedQuadrature:
    """First observable X_theta measured with resolution ``delta_xprime``.

    ``c`` sets the Gaussian window used by the elementary model.
    """

    theta: float
    delta_xprime: float
    c: float = 2.0

    def __post_init__(self):
        if not 0 < self.theta < np.pi:
            raise ValidationError("theta must lie in the open interval (0, pi)")
        if not self.delta_xprime > 0:
            raise ValidationError("delta_xprime must be positive")
        if not self.c > 0:
            raise ValidationError("window parameter c must be positive")

    @property
    def commutator(self) -> float:
        """|[X_theta, x]| = |sin theta|."""
        return abs(math.sin(self.theta))


def _check_dp(delta_p: float) -> None:
    if not delta_p > 0:
        raise ValidationError("delta_p must be positive")


def denominator_d(pkt: GaussianWavepacket, delta_p: float) -> float:
    """Probability that the momentum falls in the window of width delta_p around p_center."""
    _check_dp(delta_p)
    return math.erf(delta_p / (2.0 * math.sqrt(2.0) * pkt.sigma_p))


def window_amplitude(pkt: GaussianWavepacket, delta_p: float, x: float,
                     config: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """(2 pi)^-1/2 times the windowed Fourier integral, with the global phase exp(i p_center x) removed."""
    _check_dp(delta_p)
    half = 0.5 * delta_p
    s2 = pkt.sigma_p ** 2
    norm = (2 * np.pi * s2) ** 0.25
    val = integrate(lambda u: np.exp(-u * u / (4 * s2) + 1j * u * x) / norm,
                    -half, half, phase_rate=abs(x), config=config)
    return val / math.sqrt(2 * math.pi)


def numerator_n(pkt: GaussianWavepacket, delta_p: float, x,
                config: QuadratureConfig = DEFAULT_QUAD):
    """N(x) = |window_amplitude|^2; ``x`` may be an array."""
    xs = np.asarray(x, dtype=float)
    vals = np.array([abs(window_amplitude(pkt, delta_p, xi, config)) ** 2 for xi in xs.ravel()])
    return vals.reshape(xs.shape) if xs.ndim else float(vals[0])


def conditional_w_x(pkt: GaussianWavepacket, delta_p: float, x,
                    config: QuadratureConfig = DEFAULT_QUAD):
    """Position density N(x)/D given the momentum window was found."""
    d = denominator_d(pkt, delta_p)
    if not d > 1e-300:
        raise ZeroProbabilityError("momentum window has zero probability")
    return numerator_n(pkt, delta_p, x, config) / d


def first_zero(pkt: GaussianWavepacket, delta_p: float,
               config: QuadratureConfig = DEFAULT_QUAD, search_factor: float = 4.0) -> float:
    """Smallest x > 0 where the conditional position density vanishes.

    The windowed transform of a symmetric window is real, so the zero is
    bracketed by a sign change and refined with Brent's method.

    Raises
    ------
    AccuracyError
        If no sign change occurs below ``search_factor * 2 pi / delta_p``.
    """
    def amp(x):
        return window_amplitude(pkt, delta_p, x, config).real

    guess = 2 * np.pi / delta_p
    step = guess / 64
    x_lo, f_lo = 0.0, amp(0.0)
    while x_lo < search_factor * guess:
        x_hi = x_lo + step
        f_hi = amp(x_hi)
        if np.sign(f_hi) != np.sign(f_lo):
            return brentq(amp, x_lo, x_hi, xtol=1e-12 * guess, rtol=1e-15)
        x_lo, f_lo = x_hi, f_hi
    raise AccuracyError("no zero of the conditional density in the search range")


@dataclass(frozen=True)
class SincWidth:
    delta_p: float
    delta_x: float
    product: float
    numeric_first_zero: float
    predicted_first_zero: float
    relative_deviation: float
    verified: bool


def sinc_width_product(delta_p: float, pkt: GaussianWavepacket = GaussianWavepacket(),
                       rtol: float = 1e-6,
                       config: QuadratureConfig = DEFAULT_QUAD) -> SincWidth:
    """Full width 4 pi / delta_p between the symmetric first zeros.

    The numeric first zero is compared with ``(2/dp)(pi + r^2/(8 pi))``,
    ``r = dp/sigma_p``, which includes the leading Gaussian-window correction
    to the bare sinc zero ``2 pi/dp``.
    """
    _check_dp(delta_p)
    delta_x = 4 * np.pi / delta_p
    x0 = first_zero(pkt, delta_p, config)
    r = delta_p / pkt.sigma_p
    predicted = (2.0 / delta_p) * (np.pi + r * r / (8 * np.pi))
    dev = abs(x0 / predicted - 1.0)
    return SincWidth(delta_p, delta_x, delta_x * delta_p, x0, predicted, dev, bool(dev <= rtol))


def _check_theta(rq: RotatedQuadrature) -> None:
    if abs(math.sin(rq.theta)) <= SINGULAR_SIN:
        raise ValidationError("kernel singular at commuting limit")


def _prefactor(theta: float) -> complex:
    return np.exp(1j * (np.pi / 4 - theta / 2)) / np.sqrt(2 * np.pi * abs(np.sin(theta)))


def rotated_kernel(rq: RotatedQuadrature, x, xprime):
    """Overlap <x | x', theta> between position and rotated-quadrature eigenstates."""
    _check_theta(rq)
    s, c = np.sin(rq.theta), np.cos(rq.theta)
    x, xp = np.asarray(x, float), np.asarray(xprime, float)
    val = _prefactor(rq.theta) * np.exp(-1j * ((x * x + xp * xp) * c - 2 * x * xp) / (2 * s))
    return val if val.ndim else complex(val)


def s_integral(rq: RotatedQuadrature, x: float, config: QuadratureConfig = DEFAULT_QUAD) -> complex:
    """Integral of the kernel over x' in [-delta_xprime/2, delta_xprime/2]."""
    _check_theta(rq)
    s, c = math.sin(rq.theta), math.cos(rq.theta)
    half = 0.5 * rq.delta_xprime
    rate = (half * abs(c) + abs(x)) / abs(s)
    integral = integrate(lambda xp: np.exp(-1j * (xp * xp * c - 2 * x * xp) / (2 * s)),
                         -half, half, phase_rate=rate, config=config)
    return complex(_prefactor(rq.theta) * np.exp(-1j * x * x * c / (2 * s)) * integral)


def s_density(rq: RotatedQuadrature, x, config: QuadratureConfig = DEFAULT_QUAD):
    """Conditional position density |S(x)|^2 / delta_xprime."""
    xs = np.asarray(x, dtype=float)
    vals = np.array([abs(s_integral(rq, xi, config)) ** 2 for xi in xs.ravel()]) / rq.delta_xprime
    return vals.reshape(xs.shape) if xs.ndim else float(vals[0])


def theta_width(rq: RotatedQuadrature, config: QuadratureConfig = DEFAULT_QUAD,
                zero_fraction: float = 0.05, max_factor: float = 20.0) -> WidthEstimate:
    """Full width of the conditional position density.

    Scanning outward from x = 0, the first local minimum is taken as the first
    zero when it dips below ``zero_fraction`` of the central density and lies
    within ``max_factor`` 1/e half-widths; the width is then twice its
    position.  Otherwise (ripples without zeros, the near-commuting regime)
    the full width at 1/e of the central density is returned.
    """
    _check_theta(rq)
    s = abs(math.sin(rq.theta))
    dxp = rq.delta_xprime
    scale = min(0.5 * dxp, 2 * np.pi * s / dxp, math.sqrt(2 * np.pi * s))
    step = scale / 40

    def dens(x):
        return s_density(rq, x, config)

    d0 = dens(0.0)
    level = d0 / math.e

    # 1/e crossing, coarse scan then Brent refinement
    coarse = 10 * step
    x_lo = 0.0
    while True:
        x_hi = x_lo + coarse
        if dens(x_hi) < level:
            break
        x_lo = x_hi
        if x_lo > 1e3 * (dxp + 1 / dxp):
            raise AccuracyError("width search did not converge")
    half_e = brentq(lambda x: dens(x) - level, x_lo, x_hi, xtol=1e-10 * scale)

    # first local minimum
    limit = max_factor * half_e
    prev2, prev1 = d0, dens(step)
    x = step
    minimum = None
    while x < limit:
        cur = dens(x + step)
        if prev1 <= prev2 and prev1 <= cur:
            minimum = x
            break
        prev2, prev1, x = prev1, cur, x + step
    if minimum is not None:
        res = minimize_scalar(dens, bounds=(minimum - step, minimum + step), method="bounded",
                              options={"xatol": 1e-9 * scale})
        if res.fun <= zero_fraction * d0:
            return WidthEstimate("first_zero", 2.0 * float(res.x),
                                 {"zero_fraction": zero_fraction, "depth": float(res.fun / d0),
                                  "one_over_e": 2.0 * half_e})
    return WidthEstimate("one_over_e", 2.0 * half_e,
                         {"zero_fraction": zero_fraction, "first_minimum": minimum})


def _model_terms(rq: RotatedQuadrature):
    h2 = (0.5 * rq.delta_xprime) ** 2
    s = math.sin(rq.theta)
    cot = math.cos(rq.theta) / s
    den = 1.0 + (rq.c / 2) ** 2 * h2 * h2 * cot * cot
    return h2, s, den


def s_model(rq: RotatedQuadrature, x):
    """|S_model(x)|^2 for the Gaussian-window replacement of the sharp interval."""
    _check_theta(rq)
    h2, s, den = _model_terms(rq)
    pref = (rq.c / abs(s)) * (0.5 * h2) / math.sqrt(den)
    x = np.asarray(x, dtype=float)
    val = pref * np.exp(-(x * x / (s * s)) * (0.5 * rq.c * h2) / den)
    return val if val.ndim else float(val)


def s_model_quadrature(rq: RotatedQuadrature, x: float,
                       config: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Direct quadrature of the Gaussian-windowed kernel integral, squared."""
    _check_theta(rq)
    s, c = math.sin(rq.theta), math.cos(rq.theta)
    width2 = rq.c * (0.5 * rq.delta_xprime) ** 2
    cut = math.sqrt(width2 * 50 * math.log(10))      # window below 1e-50
    rate = (cut * abs(c) + abs(x)) / abs(s)
    val = integrate(lambda xp: np.exp(-xp * xp / width2 - 1j * (xp * xp * c - 2 * x * xp) / (2 * s)),
                    -cut, cut, phase_rate=rate, config=config)
    return abs(val) ** 2 / (2 * np.pi * abs(s))


@dataclass(frozen=True)
class ModelWidthRelation:
    delta_x: float
    lhs: float
    rhs: float
    holds: bool
    commutator_bound: bool
    cosine_bound: bool


def model_width_relation(rq: RotatedQuadrature, rtol: float = 1e-10) -> ModelWidthRelation:
    """Check the width identity of the Gaussian-window model.

    With ``delta_x / 2`` the 1/e point of :func:`s_model`,
    ``(c/2) dx'^2 dx^2 = 16 sin^2(theta) + (c/2)^2 cos^2(theta) dx'^4``;
    for ``c = 2`` this is ``dx'^2 dx^2 = 16 sin^2 + cos^2 dx'^4``.  Also
    reports the two implied bounds ``(c/2) dx'^2 dx^2 >= 16 sin^2`` and
    ``dx^2 >= (c/2) cos^2 dx'^2``.
    """
    _check_theta(rq)
    peak = s_model(rq, 0.0)
    target = peak / math.e
    hi = rq.delta_xprime + 1.0
    while s_model(rq, hi) > target:
        hi *= 2.0
    half = brentq(lambda x: s_model(rq, x) - target, 0.0, hi, xtol=1e-15, rtol=1e-15)
    dx = 2.0 * half
    dxp = rq.delta_xprime
    k = rq.c / 2.0
    sin2 = math.sin(rq.theta) ** 2
    cos2 = math.cos(rq.theta) ** 2
    lhs = k * dxp ** 2 * dx ** 2
    rhs = 16.0 * sin2 + k * k * cos2 * dxp ** 4
    slack = 1e-12 * max(lhs, 1e-300)
    return ModelWidthRelation(
        delta_x=dx,
        lhs=lhs,
        rhs=rhs,
        holds=bool(abs(lhs - rhs) <= rtol * abs(rhs)),
        commutator_bound=bool(lhs >= 16.0 * sin2 - slack),
        cosine_bound=bool(dx ** 2 >= k * cos2 * dxp ** 2 * (1 - 1e-12)),
    )


@dataclass(frozen=True)
class AppendixC:
    delta_p: float
    z: float
    d_series: float
    d_quadrature: float
    d_erf: float
    n_leading: float
    n_series: float
    n_quadrature: float


def appendix_c_series(delta_p: float, z: float,
                      config: QuadratureConfig = DEFAULT_QUAD) -> AppendixC:
    """Small-window expansions of D' and N' against direct quadrature (sigma_p = 1).

    ``D'(dp) = int_{-dp/2}^{dp/2} exp(-p^2/2) dp ~ dp - (dp/2)^3 / 3`` and
    ``N'(z, dp) = int exp(-p^2/4) exp(i p x) dp`` with ``z = x dp / 2``,
    ``N' ~ dp [sinc(z)(1 - dp^2/16) + (sinc(z) - cos z) dp^2 / (8 z^2)]``.
    """
    if not 0 < delta_p <= 0.5:
        raise ValidationError("delta_p outside the series regime (0, 0.5]")
    half = 0.5 * delta_p
    d_series = delta_p - half ** 3 / 3.0
    d_quad = integrate(lambda p: np.exp(-p * p / 2), -half, half, config=config).real
    d_erf = math.sqrt(2 * math.pi) * math.erf(delta_p / (2 * math.sqrt(2)))
    dp2 = delta_p ** 2
    if abs(z) < 1e-4:
        sinc = 1.0 - z * z / 6.0
        bracket = dp2 / 24.0 * (1.0 - z * z / 10.0)     # (sinc - cos)/z^2 -> 1/3 - z^2/30
    else:
        sinc = math.sin(z) / z
        bracket = (sinc - math.cos(z)) * dp2 / (8 * z * z)
    n_leading = delta_p * sinc
    n_series = delta_p * (sinc * (1 - dp2 / 16.0) + bracket)
    x = 2.0 * z / delta_p
    n_quad = integrate(lambda p: np.exp(-p * p / 4 + 1j * p * x), -half, half,
                       phase_rate=abs(x), config=config).real
    return AppendixC(delta_p, z, d_series, d_quad, d_erf, n_leading, n_series, n_quad)
