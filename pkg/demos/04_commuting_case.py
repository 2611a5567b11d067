"""
Measuring the same observable twice.

With a state spread evenly over many levels, a first measurement of A with
resolution da leaves da + 1 levels equally populated.  Measuring A again,
or any one-to-one function of A, shows exactly da + 1 outcomes.  A
non-commuting B is shown for contrast.
"""

import numpy as np

from succmeas.coarse import build_partition
from succmeas.hilbert import SpectralObservable, StateVector, pure_density
from succmeas.schwinger import SchwingerSpace, momentum_basis
from succmeas.wigner import commuting_case_moments, conditional_wigner, ur_function, width_count

n = 15
a = SpectralObservable.diagonal(np.arange(1.0, n + 1), name="A")
psi = StateVector(np.ones(n) / np.sqrt(n))
rho = pure_density(psi)
middle = n // 2

# %% Widths of the second distribution
fourier = momentum_basis(SchwingerSpace(n))
print("da   db(B=A)  db(B=A^2)  db(B=Fourier)")
for da in (0, 2, 4, 14):
    cg = build_partition(a, da)
    n0 = cg.interval_of(middle)
    row = [width_count(conditional_wigner(rho, cg, n0, b)).value
           for b in (a, a.function(np.square), fourier)]
    print(f"{da:2d}   {row[0]:7.0f}  {row[1]:9.0f}  {row[2]:13.0f}")

# %% F(da), the variance of B after the first measurement
center = lambda r, cg: cg.interval_of(middle)
for da, f in ur_function(rho, a, a, [0, 2, 4], centering=center):
    cg = build_partition(a, da)
    print(f"da={da}: F={f:.4f}, block variance {commuting_case_moments(cg, cg.interval_of(middle))[2]:.4f}")
