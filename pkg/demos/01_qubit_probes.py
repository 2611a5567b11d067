"""
Two probes on a qubit.

A has levels {0, 1}; B = sigma_x; the state is |+x>.  The first probe reads
A, the second reads B.  We condition on the first pointer sitting at the
a = 0 position and watch the second pointer's distribution change as the
first coupling is turned up.
"""

import numpy as np

from succmeas.coarse import build_partition
from succmeas.hilbert import SpectralObservable, StateVector, pure_density
from succmeas.probe import (
    ExperimentSpec,
    ProbeCoupling,
    conditional_moments,
    conditional_q2_given_q1,
    conditional_strong_limit,
    conditional_weak_limit,
    deconvolve_wigner,
)

r2 = 1 / np.sqrt(2)
a = SpectralObservable.diagonal([0.0, 1.0], name="A")
b = SpectralObservable([-1.0, 1.0], np.array([[r2, r2], [-r2, r2]]), name="sigma_x")
rho = pure_density(StateVector([r2, r2]))
cg = build_partition(a, 0)
n0 = cg.centers.index(0.0)

# %% Strong and weak first couplings
print("ratio   sup|full - strong|   sup|full - weak|")
for ratio in (1e-3, 0.5, 2, 5, 10, 20):
    spec = ExperimentSpec(rho, a, cg, b, ProbeCoupling(ratio, 1.0), ProbeCoupling(1.0, 0.5))
    full = conditional_q2_given_q1(spec, 0.0)
    strong = conditional_strong_limit(spec, n0, full.axis)
    weak = conditional_weak_limit(spec, full.axis)
    print(f"{ratio:6g}  {np.max(np.abs(full.density - strong.density)):18.3e}"
          f"  {np.max(np.abs(full.density - weak.density)):17.3e}")

# With a weak first probe the second pointer sits at +1 (the state is a sigma_x
# eigenstate); with a strong one the state collapses onto |0> and the second
# pointer splits evenly between -1 and +1.

# %% Recovering the Wigner weights from the second pointer
spec = ExperimentSpec(rho, a, cg, b, ProbeCoupling(20.0, 1.0), ProbeCoupling(1.0, 0.5))
w = deconvolve_wigner(spec, conditional_strong_limit(spec, n0))
print("\nweights from the pointer's characteristic function:", w.as_dict())

mean, second, var = conditional_moments(spec, n0)
print(f"moments of Q2/eps2: mean {mean:.6f}, variance {var:.6f} "
      f"(= var sigma_x + (sigma/eps)^2 = 1 + 0.25)")
