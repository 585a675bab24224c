"""Truncated-entropy roofs E_F^n for a two-qutrit state, compared with E_F.

For n at or above the reduced rank the two coincide; below it E_F^n is smaller.
"""

import math

from choquet_roof import RoofOptions, efn, eof
from choquet_roof.states import sample_state

dims = (3, 3)
omega = sample_state(9, 2, seed=7)
opts = RoofOptions(restarts=8)
ef = eof(omega, dims, opts).value
print(f"E_F = {ef:.6f}")
for n in (2, 3, 4):
    v = efn(omega, n, dims, opts).value
    print(f"n = {n}: E_F^n = {v:.6f}  (log2 n = {math.log2(n):.4f})")
