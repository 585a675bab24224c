"""Density matrices and finitely supported ensembles of states.

An :class:`Ensemble` is the finite atomic probability measure
``{p_i, rho_i}``.  The operations here build, refine and deform ensembles
while keeping track of their barycenter ``sum_i p_i rho_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import UnsupportedInputError, ValidationError
from .linalg import as_hermitian, eigh, psd_power, trace_norms

PSD_TOL = 1e-9
TRACE_TOL = 1e-9
PURE_TOL = 1e-9
WEIGHT_SUM_TOL = 1e-10
DROP_WEIGHT = 1e-12
FULL_RANK_TOL = 1e-8


def as_density(rho, *, clip: bool = True) -> np.ndarray:
    """Validate a density matrix and return a Hermitian copy.

    Eigenvalues in ``(-PSD_TOL, 0)`` are clipped to zero and the trace
    renormalised; anything more negative is rejected.
    """
    R = as_hermitian(rho)
    tr = float(np.trace(R).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"trace is {tr!r}, expected 1")
    w = np.linalg.eigvalsh(R)
    if w[0] < -PSD_TOL:
        raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    if clip and w[0] < 0:
        w, V = np.linalg.eigh(R)
        w = np.clip(w, 0.0, None)
        w /= w.sum()
        R = (V * w) @ V.conj().T
        R = 0.5 * (R + R.conj().T)
    return R


def pure_density(vec) -> np.ndarray:
    """``|v><v|`` for a (normalised on the fly) state vector."""
    v = np.asarray(vec, dtype=complex).ravel()
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValidationError("zero vector is not a state")
    v = v / nrm
    return np.outer(v, v.conj())


def is_pure(rho, tol: float = PURE_TOL) -> bool:
    """Rank-1 test: second largest eigenvalue at most ``tol``."""
    R = np.asarray(rho, dtype=complex)
    if R.shape[0] == 1:
        return True
    w = np.linalg.eigvalsh(0.5 * (R + R.conj().T))
    return bool(w[-2] <= tol)


def rank(rho, tol: float = PURE_TOL) -> int:
    R = np.asarray(rho, dtype=complex)
    w = np.linalg.eigvalsh(0.5 * (R + R.conj().T))
    return int(np.sum(w > tol))


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Finite ensemble ``{weights[i], states[i]}``.

    ``states`` has shape ``(n, d, d)``.  ``dims`` optionally records a
    bipartite split ``(dA, dB)`` with ``dA * dB == d``.
    """

    weights: np.ndarray
    states: np.ndarray
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        try:
            S = np.asarray(self.states, dtype=complex)
        except (TypeError, ValueError):
            raise ValidationError("ensemble states must be square matrices of one common size") from None
        if S.ndim == 2:
            S = S[None]
        if S.ndim != 3 or S.shape[1] != S.shape[2]:
            raise ValidationError(f"states must have shape (n, d, d), got {S.shape}")
        if len(w) < 1 or len(w) != S.shape[0]:
            raise ValidationError(f"{len(w)} weights for {S.shape[0]} states")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValidationError("ensemble weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"ensemble weights sum to {w.sum()!r}, expected 1")
        S = np.array([as_density(s) for s in S])
        dims = self.dims
        if dims is not None:
            dims = (int(dims[0]), int(dims[1]))
            if dims[0] * dims[1] != S.shape[1]:
                raise ValidationError(f"dims {dims} do not match state dimension {S.shape[1]}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "states", S)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def point_mass(cls, rho, dims=None) -> "Ensemble":
        return cls(np.ones(1), np.asarray(rho)[None], dims)

    @classmethod
    def from_vectors(cls, weights, vectors, dims=None) -> "Ensemble":
        V = np.asarray(vectors, dtype=complex)
        V = V / np.linalg.norm(V, axis=1, keepdims=True)
        return cls(weights, np.einsum("ni,nj->nij", V, V.conj()), dims)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def __len__(self) -> int:
        return len(self.weights)

    def is_pure(self) -> bool:
        return all(is_pure(s) for s in self.states)

    def average(self, values) -> float:
        """Weighted average of per-atom values."""
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))


def barycenter(E: Ensemble) -> np.ndarray:
    R = np.einsum("n,nij->ij", E.weights, E.states)
    return 0.5 * (R + R.conj().T)


def _renormalised(weights, states, dims) -> Ensemble:
    weights = np.asarray(weights, dtype=float)
    keep = weights >= DROP_WEIGHT
    weights = weights[keep]
    return Ensemble(weights / weights.sum(), np.asarray(states)[keep], dims)


def refine_to_pure(E: Ensemble) -> Ensemble:
    """Split every atom into its eigen-decomposition.

    Atom ``rho_i = sum_k l_ik |e_ik><e_ik|`` contributes pure atoms with weights
    ``p_i * l_ik``.  The barycenter is unchanged and the result dominates ``E``
    in the convex order.
    """
    weights, states = [], []
    for p, rho in zip(E.weights, E.states):
        lam, V = eigh(rho)
        for l, v in zip(lam, V.T):
            if p * l >= DROP_WEIGHT:
                weights.append(p * l)
                states.append(np.outer(v, v.conj()))
    return _renormalised(weights, states, E.dims)


def steer_barycenter(E: Ensemble, target) -> tuple[Ensemble, float]:
    """Move the barycenter of ``E`` to ``target`` by mixing every atom with one state.

    With ``rho0`` the barycenter and ``D = target - rho0`` the atoms become
    ``(1 - eps) rho_i + eps tau`` where ``tau = rho0 + D / eps`` and
    ``eps = lambda_max(-rho0^{-1/2} D rho0^{-1/2})`` clamped to ``[1e-12, 1]``.
    This is the smallest mixing fraction that keeps ``tau`` positive, so atom
    displacements shrink linearly as the target approaches ``rho0``.

    Raises :class:`UnsupportedInputError` when ``rho0`` is rank deficient.
    """
    rho0 = barycenter(E)
    tgt = as_density(target)
    if tgt.shape != rho0.shape:
        raise ValidationError(f"target dimension {tgt.shape[0]} != ensemble dimension {rho0.shape[0]}")
    lam = eigh(rho0).eigenvalues
    if lam[-1] <= FULL_RANK_TOL:
        raise UnsupportedInputError(
            f"barycenter is rank deficient (min eigenvalue {lam[-1]:.3e}); steering needs full rank"
        )
    delta = tgt - rho0
    inv_sqrt = psd_power(rho0, -0.5)
    X = inv_sqrt @ delta @ inv_sqrt
    eps = float(np.clip(eigh(-0.5 * (X + X.conj().T)).eigenvalues[0], 1e-12, 1.0))
    tau = as_density(rho0 + delta / eps)
    states = (1.0 - eps) * E.states + eps * tau[None]
    return Ensemble(E.weights, states, E.dims), eps


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def sample_vector(dim: int, seed=None) -> np.ndarray:
    """Haar-random unit vector."""
    rng = _rng(seed)
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def sample_state(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Random density matrix of the requested rank (Ginibre ensemble)."""
    if rank is None:
        rank = dim
    if dim < 1 or not 1 <= rank <= dim:
        raise ValidationError(f"need 1 <= rank <= dim, got dim={dim}, rank={rank}")
    rng = _rng(seed)
    G = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    R = G @ G.conj().T
    R = R / np.trace(R).real
    return 0.5 * (R + R.conj().T)


def sample_ensemble(dim: int, atoms: int, seed=None, rank: int | None = None, dims=None) -> Ensemble:
    """Random ensemble with Dirichlet(1) weights; atom ranks default to uniform on 1..dim."""
    if atoms < 1:
        raise ValidationError("an ensemble needs at least one atom")
    rng = _rng(seed)
    w = rng.dirichlet(np.ones(atoms))
    # keep every weight comfortably above the drop threshold
    w = (w + 0.01) / (1.0 + 0.01 * atoms)
    states = []
    for _ in range(atoms):
        r = rank if rank is not None else int(rng.integers(1, dim + 1))
        states.append(sample_state(dim, r, rng))
    return Ensemble(w, np.array(states), dims)


def ensemble_distance(E1: Ensemble, E2: Ensemble) -> float:
    """Matching distance between two finite ensembles.

    Both ensembles are padded with zero-weight atoms to equal length; the cost
    of matching atoms ``i`` and ``j`` is
    ``|p_i - q_j| + min(p_i, q_j) * ||rho_i - sigma_j||_1`` and the optimal
    assignment cost is returned.
    """
    if E1.dim != E2.dim:
        raise ValidationError(f"dimension mismatch: {E1.dim} vs {E2.dim}")
    return float(_matching_costs(E1, E2)[0])


def _cost_matrix(E1: Ensemble, E2: Ensemble) -> np.ndarray:
    n = max(len(E1), len(E2))
    p = np.zeros(n)
    q = np.zeros(n)
    p[: len(E1)] = E1.weights
    q[: len(E2)] = E2.weights
    C = np.abs(p[:, None] - q[None, :])
    diffs = E1.states[:, None] - E2.states[None, :]
    dist = trace_norms(diffs)
    C[: len(E1), : len(E2)] += np.minimum(p[: len(E1), None], q[None, : len(E2)]) * dist
    return C


def _matching_costs(E1: Ensemble, E2: Ensemble):
    C = _cost_matrix(E1, E2)
    rows, cols = linear_sum_assignment(C)
    return C[rows, cols].sum(), cols


def ensemble_distance_bruteforce(E1: Ensemble, E2: Ensemble) -> float:
    """Exhaustive-permutation version of :func:`ensemble_distance` (small inputs only)."""
    C = _cost_matrix(E1, E2)
    n = C.shape[0]
    return float(min(C[np.arange(n), list(perm)].sum() for perm in permutations(range(n))))


# common named states

def bell_state(kind: str = "phi+") -> np.ndarray:
    r = 1.0 / np.sqrt(2.0)
    vecs = {
        "phi+": [r, 0, 0, r],
        "phi-": [r, 0, 0, -r],
        "psi+": [0, r, r, 0],
        "psi-": [0, r, -r, 0],
    }
    return pure_density(vecs[kind])


def werner_state(p: float) -> np.ndarray:
    """``p |psi-><psi-| + (1 - p) I/4`` on two qubits."""
    return p * bell_state("psi-") + (1.0 - p) * np.eye(4) / 4.0


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim
