"""Independent reference values used to check the optimizers.

``wootters_eof`` is the closed-form two-qubit entanglement of formation via
the concurrence.  ``brute_force_roof`` scans a uniform grid of decomposition
angles for qubit states and reports the smallest ensemble average seen.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedInputError, ValidationError
from .functionals import DEFAULT_BASE, StateFunctional, _check_base
from .states import PURE_TOL, as_density

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
MAX_GRID_POINTS = 20_000_000
EIG_FLOOR = 1e-14  # eigenvalues below this (relative) are rounding noise
_CHUNK = 200_000


@dataclass(frozen=True)
class OracleReport:
    value: float
    method: str
    params: dict = field(default_factory=dict)


def concurrence(omega) -> float:
    """Two-qubit concurrence with the conjugate taken in the computational basis.

    The square roots of the eigenvalues of ``rho (Y x Y) rho^* (Y x Y)`` are
    the singular values of ``tau_ij = sqrt(l_i l_j) <e_i| Y x Y |e_j^*>`` built
    from the eigen-decomposition ``rho = sum l_i |e_i><e_i|``; taking them as
    singular values avoids square-rooting rounding noise near zero.
    """
    W = as_density(omega)
    if W.shape != (4, 4):
        raise ValidationError(f"concurrence needs a 2x2 two-qubit state, got dimension {W.shape[0]}")
    lam, E = np.linalg.eigh(W)
    keep = lam > EIG_FLOOR * max(lam[-1], 1.0)
    F = E[:, keep] * np.sqrt(lam[keep])
    tau = F.T @ np.kron(SIGMA_Y, SIGMA_Y) @ F
    s = np.zeros(4)
    sv = np.linalg.svd(tau, compute_uv=False)
    s[: len(sv)] = sv
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def _binary_entropy(x: float, base: float) -> float:
    h = 0.0
    for p in (x, 1.0 - x):
        if p > 0:
            h -= p * math.log(p)
    return h / math.log(base)


def wootters_eof(omega, base=DEFAULT_BASE) -> float:
    """``h((1 + sqrt(1 - C^2)) / 2)`` with ``C`` the concurrence."""
    base = _check_base(base)
    C = min(concurrence(omega), 1.0)
    return _binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - C * C))), base)


# -- grid search over qubit decompositions -------------------------------------


def _angle_axes(resolution: int, n_theta: int, n_phi: int):
    # theta includes both ends of [0, pi/2]; phases are periodic so 2*pi is left out
    theta = np.arange(resolution + 1) * (0.5 * math.pi / resolution)
    phi = np.arange(resolution) * (2.0 * math.pi / resolution)
    return [theta] * n_theta + [phi] * n_phi


def _givens(m, i, j, theta, phi):
    # theta, phi: (N,) -> (N, m, m)
    G = np.broadcast_to(np.eye(m, dtype=complex), (len(theta), m, m)).copy()
    c, s, e = np.cos(theta), np.sin(theta), np.exp(1j * phi)
    G[:, i, i] = c
    G[:, i, j] = s * e
    G[:, j, i] = -s * np.conj(e)
    G[:, j, j] = c
    return G


def _isometries(m: int, r: int, params):
    """Isometries ``(N, m, r)`` from angle tuples; rows are defined up to phase."""
    if m == 1:
        return np.ones((1, 1, 1), dtype=complex)
    if m == 2:
        th, ph = params
        return _givens(2, 0, 1, th, ph)[:, :, :r]
    # m == 3: product of three two-row rotations applied to the identity
    t01, t02, t12, p01, p02, p12 = params
    U = _givens(3, 0, 1, t01, p01) @ _givens(3, 0, 2, t02, p02) @ _givens(3, 1, 2, t12, p12)
    return U[:, :, :r]


def brute_force_roof(f: StateFunctional, rho, m: int = 2, resolution: int = 200) -> OracleReport:
    """Grid minimum of ``sum p_i f(psi_i)`` over ``m``-member pure decompositions of a qubit state.

    Angles are sampled at ``k * span / resolution``, so doubling the
    resolution visits a superset of points and can only lower the value.
    """
    R = as_density(rho)
    d = R.shape[0]
    if d > 2:
        raise UnsupportedInputError(f"brute-force roof is limited to dimension <= 2, got {d}")
    if not 1 <= m <= 3:
        raise UnsupportedInputError(f"brute-force roof supports 1 <= m <= 3 members, got {m}")
    if resolution < 1:
        raise ValidationError("resolution must be >= 1")
    lam, E = np.linalg.eigh(R)
    lam, E = lam[::-1], E[:, ::-1]
    r = int(np.sum(lam > PURE_TOL))
    if m < r:
        raise ValidationError(f"m={m} is below rank {r}")
    lam, E = lam[:r], E[:, :r]
    params = {"m": m, "resolution": resolution}

    if r == 1 or m == 1:
        # a pure state has only the trivial decomposition
        value = float(f.on_vectors(E.T[:1])[0])
        return OracleReport(value, "brute-force-grid", params)

    n_ang = 1 if m == 2 else 3
    axes = _angle_axes(resolution, n_ang, n_ang)
    total = math.prod(len(a) for a in axes)
    if total > MAX_GRID_POINTS:
        raise UnsupportedInputError(
            f"grid of {total} points exceeds the limit of {MAX_GRID_POINTS}; lower the resolution"
        )
    best = np.inf
    scale = np.sqrt(lam)
    flat = itertools.product(*[range(len(a)) for a in axes])
    while True:
        idx = np.array(list(itertools.islice(flat, _CHUNK)))
        if idx.size == 0:
            break
        angles = [axes[k][idx[:, k]] for k in range(len(axes))]
        V = _isometries(m, r, angles)  # (N, m, r)
        Psi = (V * scale) @ E.T  # (N, m, d)
        w = np.sum(np.abs(Psi) ** 2, axis=2)
        safe = np.where(w > 1e-300, w, 1.0)
        vecs = Psi / np.sqrt(safe)[..., None]
        vals = f.on_vectors(vecs.reshape(-1, d)).reshape(w.shape)
        totals = np.sum(np.where(w > 1e-300, w * vals, 0.0), axis=1)
        best = min(best, float(totals.min()))
    return OracleReport(best, "brute-force-grid", params)
