"""Concave hull of the purity-gap function at the maximally mixed qubit.

The function is Tr(rho^2) on mixed states and 0 on pure ones.  Mixing the
eigen-decomposition of I/2 toward I/2 by a small lambda gives ensembles whose
average approaches 1, yet every member is mixed so no ensemble reaches it.
"""

from choquet_roof import RoofOptions, concave_hull, purity_gap
from choquet_roof.functionals import purity_gap_functional
from choquet_roof.states import maximally_mixed

rho = maximally_mixed(2)
f = purity_gap_functional(2)
print(f"f(I/2) = {purity_gap(rho):.6f}")
print(f"{'lambda':>8} {'hull value':>14} {'1 - l + l^2/2':>14}")
for lam in (0.5, 0.1, 0.01, 0.001, 1e-4):
    res = concave_hull(f, rho, RoofOptions(restarts=4, mix=lam))
    print(f"{lam:8.0e} {res.value:14.10f} {1 - lam + lam * lam / 2:14.10f}")

free = concave_hull(f, rho, RoofOptions(restarts=8))
print(f"searched lambda = {free.mix:.1e}, value = {free.value:.10f} (still below 1)")
