"""
Schwinger's periodic space.

A flat superposition of dp + 1 neighboring momenta is measured for
position.  The distribution is a Fejer kernel whose first zero sits at
N/(dp + 1); with the sine observables the Robertson inequality is checked
row by row.
"""

import numpy as np

from succmeas.schwinger import (
    PAPER_TABLE,
    SchwingerSpace,
    conditional_w_q,
    first_zero_width,
    robertson_table,
)

# %% The position distribution for N = 12, dp = 2
space = SchwingerSpace(12)
dist = conditional_w_q(space, 2)
for q, w in zip(dist.support.astype(int), dist.weights):
    print(f"q={q:2d}  {w:.6f}  " + "#" * int(round(60 * w)))
print("sum of weights:", dist.weights.sum())
print("first-zero width:", first_zero_width(space, 2), "-> times (dp+1):",
      first_zero_width(space, 2) * 3)

# %% L = var B and R = |<[A,B]>|^2 / (4 var A)
print("\n N  dp        L          R   tabulated R   L > R")
for (n, dp), (_, r_tab) in sorted(PAPER_TABLE.items()):
    lhs, rhs = robertson_table(SchwingerSpace(n), dp)
    print(f"{n:2d} {dp:3d}  {lhs:.6f}  {rhs:.6f}   {r_tab:.4f}       {lhs > rhs}")

# L is always 1/(dp+1).  The tabulated R for (15, 4) and (20, 4) sit about
# 5e-5 above the computed values; see the project notes.
print("\n1/(dp+1):", [round(1 / (dp + 1), 6) for dp in (2, 4, 10)])
