"""
Continuous variables.

First: a Gaussian momentum wavepacket is filtered through a momentum window
of width dp and then located.  The position profile is close to sinc^2 with
its first zeros at +-2 pi/dp, so dx dp ~ 4 pi.

Second: the first measurement is a rotated quadrature cos(t) x + sin(t) p
with resolution dx'.  The width of the position profile interpolates
between dx' (t -> 0) and 4 pi/dx' (t = pi/2).
"""

import math

import numpy as np

from succmeas.continuum import (
    GaussianWavepacket,
    RotatedQuadrature,
    appendix_c_series,
    model_width_relation,
    sinc_width_product,
    theta_width,
)

# %% Momentum window then position
pkt = GaussianWavepacket(0.0, 1.0)
print("  dp      first zero   2 pi/dp     dx*dp")
for dp in (0.02, 0.05, 0.1, 0.5):
    r = sinc_width_product(dp, pkt)
    print(f"{dp:5.2f}  {r.numeric_first_zero:12.5f}  {2 * math.pi / dp:9.5f}  "
          f"{2 * r.numeric_first_zero * dp:.6f}")

# The zero moves out by a relative dp^2/(8 pi^2) because the window is not flat.
r = appendix_c_series(0.2, math.pi)
print(f"\nN'(z=pi): series {r.n_series:.6e}, quadrature {r.n_quadrature:.6e}")

# %% Rotated quadrature, sharp window
print("\n theta    dx'   width    method")
for theta in (1e-3, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2):
    for dxp in (1.0, 2.0):
        w = theta_width(RotatedQuadrature(theta, dxp))
        print(f"{theta:6.4f}  {dxp:4.1f}  {w.value:7.3f}  {w.method}")

# %% Gaussian window: widths satisfy an exact identity
print("\n theta   dx'   dx'^2 dx^2   16 sin^2 + cos^2 dx'^4")
for theta in (1e-3, math.pi / 4, math.pi / 2):
    for dxp in (0.5, 2.0):
        m = model_width_relation(RotatedQuadrature(theta, dxp))
        print(f"{theta:6.4f}  {dxp:4.1f}  {m.lhs:11.6f}  {m.rhs:11.6f}")
