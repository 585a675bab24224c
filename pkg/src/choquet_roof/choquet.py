"""Convex (Choquet) order between finite ensembles.

``mu`` dominates ``nu`` when ``sum p_j f(sigma_j) >= sum q_i f(rho_i)`` for every
continuous convex ``f``.  For finite supports this is decided by looking for a
transition plan ``t[i, j] >= 0`` that splits each atom ``rho_i`` of ``nu`` into
``mu``-atoms with barycenter ``rho_i`` and pushes ``nu`` forward onto ``mu``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import hermitian_coords
from .simplex import phase_one
from .states import PURE_TOL, Ensemble, barycenter

BARYCENTER_TOL = 1e-7
ROW_TOL = 1e-8
MASS_TOL = 1e-8
SPLIT_TOL = 1e-7

DOMINATES = "dominates"
NOT_DOMINATES = "not-dominates"
AMBIGUOUS = "numerically-ambiguous"


@dataclass(frozen=True)
class ConvexWitness:
    """Max-affine function ``f(rho) = max_k (Tr A_k rho + b_k)``."""

    pieces: np.ndarray  # (k, d, d) Hermitian
    offsets: np.ndarray  # (k,)
    label: str = "max-affine"

    def __call__(self, rho) -> float:
        return float(self.evaluate(np.asarray(rho)[None])[0])

    def evaluate(self, states) -> np.ndarray:
        vals = np.einsum("kij,nji->nk", self.pieces, states).real + self.offsets[None]
        return vals.max(axis=1)

    def gap(self, mu: Ensemble, nu: Ensemble) -> float:
        """``int f dmu - int f dnu``; negative means ``mu`` does not dominate ``nu``."""
        return mu.average(self.evaluate(mu.states)) - nu.average(self.evaluate(nu.states))


@dataclass
class TransitionPlan:
    """Row-stochastic plan: row ``i`` is an atom of ``nu``, column ``j`` an atom of ``mu``."""

    t: np.ndarray

    def residuals(self, mu: Ensemble, nu: Ensemble) -> dict[str, float]:
        t = self.t
        rows = float(np.max(np.abs(t.sum(axis=1) - 1.0)))
        mass = float(np.max(np.abs(nu.weights @ t - mu.weights)))
        split = np.einsum("ij,jab->iab", t, mu.states) - nu.states
        return {
            "row_sum": rows,
            "mass": mass,
            "barycenter": float(np.max(np.abs(split))),
            "negativity": float(max(0.0, -t.min())),
        }

    def is_valid(self, mu: Ensemble, nu: Ensemble) -> bool:
        r = self.residuals(mu, nu)
        return (
            r["negativity"] == 0.0
            and r["row_sum"] <= ROW_TOL
            and r["mass"] <= MASS_TOL
            and r["barycenter"] <= SPLIT_TOL
        )


@dataclass
class OrderVerdict:
    status: str
    plan: TransitionPlan | None = None
    violation: ConvexWitness | None = None
    iterations: int = 0
    infeasibility: float = 0.0

    @property
    def dominates(self) -> bool:
        return self.status == DOMINATES


def _check_dims(mu: Ensemble, nu: Ensemble):
    if mu.dim != nu.dim:
        raise ValidationError(f"dimension mismatch: {mu.dim} vs {nu.dim}")


def plan_constraints(mu: Ensemble, nu: Ensemble) -> tuple[np.ndarray, np.ndarray]:
    """Equality system ``A vec(t) = b`` over row-major ``t`` of shape ``(len(nu), len(mu))``."""
    n_nu, n_mu = len(nu), len(mu)
    d2 = mu.dim**2
    sig = hermitian_coords(mu.states)  # (n_mu, d2)
    rho = hermitian_coords(nu.states)  # (n_nu, d2)
    n_var = n_nu * n_mu
    blocks, rhs = [], []

    rows = np.zeros((n_nu, n_var))
    for i in range(n_nu):
        rows[i, i * n_mu : (i + 1) * n_mu] = 1.0
    blocks.append(rows)
    rhs.append(np.ones(n_nu))

    mass = np.zeros((n_mu, n_var))
    for i in range(n_nu):
        for j in range(n_mu):
            mass[j, i * n_mu + j] = nu.weights[i]
    blocks.append(mass)
    rhs.append(mu.weights)

    split = np.zeros((n_nu * d2, n_var))
    for i in range(n_nu):
        split[i * d2 : (i + 1) * d2, i * n_mu : (i + 1) * n_mu] = sig.T
    blocks.append(split)
    rhs.append(rho.ravel())
    return np.vstack(blocks), np.concatenate(rhs)


def check_dominates(mu: Ensemble, nu: Ensemble, max_iter: int | None = None) -> OrderVerdict:
    """Decide ``mu`` dominates ``nu`` in the convex order via LP feasibility."""
    _check_dims(mu, nu)
    diff = barycenter(mu) - barycenter(nu)
    if np.max(np.abs(diff)) > BARYCENTER_TOL:
        # an affine test function already separates them
        H = 0.5 * (diff + diff.conj().T)
        witness = ConvexWitness(-H[None], np.zeros(1), "affine")
        return OrderVerdict(NOT_DOMINATES, violation=witness)

    A, b = plan_constraints(mu, nu)
    res = phase_one(A, b, max_iter=max_iter)
    if res.status == "iteration_limit":
        return OrderVerdict(AMBIGUOUS, iterations=res.iterations, infeasibility=res.infeasibility)
    if res.status == "infeasible":
        witness = order_necessary_test(mu, nu, trials=200, seed=0).witness
        return OrderVerdict(
            NOT_DOMINATES, violation=witness, iterations=res.iterations, infeasibility=res.infeasibility
        )
    plan = TransitionPlan(res.x.reshape(len(nu), len(mu)))
    if not plan.is_valid(mu, nu):
        return OrderVerdict(AMBIGUOUS, plan=plan, iterations=res.iterations)
    return OrderVerdict(DOMINATES, plan=plan, iterations=res.iterations)


# -- mass functionals ---------------------------------------------------------


@dataclass(frozen=True)
class RankAtMost:
    n: int

    def __call__(self, rho) -> bool:
        w = np.linalg.eigvalsh(rho)
        return int(np.sum(w > PURE_TOL)) <= self.n


@dataclass(frozen=True)
class SupportedIn:
    """Atoms supported in the range of ``projector``."""

    projector: np.ndarray

    def __call__(self, rho) -> bool:
        comp = np.eye(self.projector.shape[0]) - self.projector
        return float(np.trace(comp @ rho).real) <= PURE_TOL


@dataclass(frozen=True)
class InPureList:
    """Atoms equal (as projectors) to one of the given unit vectors."""

    vectors: np.ndarray  # (k, d)

    def __call__(self, rho) -> bool:
        V = np.asarray(self.vectors, dtype=complex)
        V = V / np.linalg.norm(V, axis=1, keepdims=True)
        fid = np.einsum("ki,ij,kj->k", V.conj(), rho, V).real
        return bool(fid.max() >= 1.0 - PURE_TOL)


def mass_on(E: Ensemble, predicate) -> float:
    """Total weight of the atoms satisfying ``predicate``."""
    return float(sum(w for w, s in zip(E.weights, E.states) if predicate(s)))


def projector_onto(vectors) -> np.ndarray:
    """Orthogonal projector onto the span of the given rows."""
    V = np.atleast_2d(np.asarray(vectors, dtype=complex))
    Q, R = np.linalg.qr(V.T)
    keep = np.abs(np.diag(R)) > 1e-12
    Q = Q[:, keep]
    return Q @ Q.conj().T


# -- sampled falsifier --------------------------------------------------------


@dataclass
class NecessaryTestResult:
    consistent: bool
    witness: ConvexWitness | None
    trials: int
    gap: float


def random_witness(dim: int, rng: np.random.Generator) -> ConvexWitness:
    k = int(rng.integers(1, 6))
    G = rng.normal(size=(k, dim, dim)) + 1j * rng.normal(size=(k, dim, dim))
    A = 0.5 * (G + np.swapaxes(G.conj(), 1, 2))
    return ConvexWitness(A, rng.normal(size=k))


def order_necessary_test(mu: Ensemble, nu: Ensemble, trials: int = 1000, seed=0) -> NecessaryTestResult:
    """Search for a max-affine convex function with ``int f dmu < int f dnu``.

    A violation certifies that ``mu`` does not dominate ``nu``; passing all
    trials is only consistent with domination.
    """
    _check_dims(mu, nu)
    rng = np.random.default_rng(seed)
    worst_gap = np.inf
    for t in range(trials):
        w = random_witness(mu.dim, rng)
        gap = w.gap(mu, nu)
        worst_gap = min(worst_gap, gap)
        if gap < -1e-9:
            return NecessaryTestResult(False, w, t + 1, gap)
    return NecessaryTestResult(True, None, trials, float(worst_gap))
