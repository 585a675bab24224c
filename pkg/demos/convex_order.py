"""Refinement, the convex order and barycenter steering on a small qutrit ensemble."""

import numpy as np

from choquet_roof import (
    barycenter,
    check_dominates,
    ensemble_distance,
    mass_on,
    refine_to_pure,
    sample_ensemble,
    sample_state,
    steer_barycenter,
)
from choquet_roof.choquet import RankAtMost

E = sample_ensemble(3, 2, seed=1, rank=3)
R = refine_to_pure(E)
print(f"ensemble: {len(E)} mixed atoms -> refinement: {len(R)} pure atoms")

fwd = check_dominates(R, E)
print(f"refinement dominates original: {fwd.status}")
print("transition plan (rows: refined atoms, columns: original atoms)")
print(np.array2string(fwd.plan.t, precision=3, suppress_small=True))

back = check_dominates(E, R)
print(f"original dominates refinement: {back.status}, witness gap {back.violation.gap(E, R):.3e}")
print(f"pure mass: refined {mass_on(R, RankAtMost(1)):.3f}, original {mass_on(E, RankAtMost(1)):.3f}")

rho0 = barycenter(E)
sigma = sample_state(3, seed=2)
for t in (1e-1, 1e-2, 1e-3):
    target = (1 - t) * rho0 + t * sigma
    out, eps = steer_barycenter(E, target)
    err = np.max(np.abs(barycenter(out) - target))
    print(f"steer by {t:.0e}: eps = {eps:.3e}, moved {ensemble_distance(out, E):.3e}, barycenter error {err:.1e}")
