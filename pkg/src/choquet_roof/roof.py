"""Convex roofs and concave hulls over finite decompositions.

Every ``m``-member pure-state decomposition of a rank-``r`` state ``rho`` comes
from an ``m x r`` isometry ``V``: with ``rho = sum_k l_k |e_k><e_k|`` the
unnormalised atoms are ``psi_i = sum_k V[i, k] sqrt(l_k) |e_k>`` and the
weights are ``||psi_i||^2``.  Left-multiplying ``V`` by a unitary moves
through all such decompositions, so the optimizers below act on the rows of
the atom matrix by two-row complex Givens rotations.

Roof values are upper bounds on the true infimum (``bound="upper"``); hull
values are lower bounds on the true supremum (``bound="lower"``).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from scipy.optimize import minimize

from .errors import UnsupportedInputError, ValidationError
from .functionals import (
    DEFAULT_BASE,
    StateFunctional,
    reduced_entropy_functional,
    truncated_entropy_functional,
)
from .linalg import eigh
from .states import PURE_TOL, Ensemble, as_density

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
BLOCK = 32
THREADS_ENV = "CHOQUET_ROOF_THREADS"
LAMBDA_GRID = np.array(
    [0.0, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
)


@dataclass
class RoofOptions:
    members: int | None = None  # default rank(rho)**2
    restarts: int = 32
    tol: float = 1e-9
    seed: int = 0
    max_sweeps: int = 200
    theta_grid: int = 4
    phi_grid: int = 2
    angle_tol: float = 1e-5
    mix: float | None = None  # hull only: fix the mixing parameter instead of searching it
    polish_after: int | None = 2  # roof only: sweeps before a slow restart gets a quasi-Newton polish
    polish_iter: int = 500


@dataclass
class RoofResult:
    value: float
    ensemble: Ensemble
    bound: str  # "upper" for roofs, "lower" for hulls
    restarts: int
    trace: list[float]
    converged: bool
    members: int
    seed: int
    sweeps: int = 0
    mix: float | None = None
    isometry: np.ndarray | None = field(default=None, repr=False)


@dataclass
class DecompositionPoint:
    isometry: np.ndarray
    weights: np.ndarray
    vectors: np.ndarray  # normalised atoms, one per row


def _eigen_frame(rho):
    lam, E = eigh(rho)
    r = int(np.sum(lam > PURE_TOL))
    if r == 0:
        raise ValidationError("state has no eigenvalue above the rank threshold")
    return lam[:r], E[:, :r]


def _check_isometry(V, r):
    V = np.asarray(V, dtype=complex)
    if V.ndim != 2 or V.shape[1] != r or V.shape[0] < r:
        raise ValidationError(f"isometry must have shape (m >= {r}, {r}), got {V.shape}")
    err = float(np.max(np.abs(V.conj().T @ V - np.eye(r))))
    if err > 1e-9:
        raise ValidationError(f"columns are not orthonormal (deviation {err:.3e})")
    return V


def decomposition_point(rho, V) -> DecompositionPoint:
    R = as_density(rho)
    lam, E = _eigen_frame(R)
    V = _check_isometry(V, len(lam))
    Psi = (V * np.sqrt(lam)) @ E.T
    w = np.sum(np.abs(Psi) ** 2, axis=1)
    keep = w >= 1e-12
    vecs = Psi[keep] / np.sqrt(w[keep])[:, None]
    return DecompositionPoint(V, w[keep] / w[keep].sum(), vecs)


def decomposition_from_isometry(rho, V, dims=None) -> Ensemble:
    """Pure ensemble induced by an ``m x rank(rho)`` isometry in the eigenbasis of ``rho``."""
    p = decomposition_point(rho, V)
    return Ensemble.from_vectors(p.weights, p.vectors, dims)


def random_isometry(m: int, r: int, rng: np.random.Generator) -> np.ndarray:
    G = rng.normal(size=(m, r)) + 1j * rng.normal(size=(m, r))
    Q, R = np.linalg.qr(G)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def round_robin(m: int) -> list[list[tuple[int, int]]]:
    """Circle-method schedule: every pair once, disjoint pairs within a round."""
    players = list(range(m)) + ([-1] if m % 2 else [])
    n = len(players)
    rounds = []
    for _ in range(n - 1):
        pairs = [(players[k], players[n - 1 - k]) for k in range(n // 2)]
        rounds.append([(min(a, b), max(a, b)) for a, b in pairs if a >= 0 and b >= 0])
        players = [players[0], players[-1]] + players[1:-1]
    return [r for r in rounds if r]


class _Objective:
    """Sign-adjusted per-atom terms ``||psi||^2 f(...)`` for a block of restarts.

    ``mix`` has shape ``(B,)``; ``None`` means pure atoms (roof mode).
    """

    def __init__(self, f: StateFunctional, rho, sign: float):
        self.f = f
        self.rho = rho
        self.sign = sign

    def _values(self, vecs, lam):
        if lam is None:
            v = self.f.on_vectors(vecs)
        else:
            proj = np.einsum("ni,nj->nij", vecs, vecs.conj())
            states = (1.0 - lam)[:, None, None] * proj + lam[:, None, None] * self.rho[None]
            v = self.f.on_states(states)
        if not np.all(np.isfinite(v)):
            raise ValidationError(f"functional {self.f.name!r} returned a non-finite value")
        return v

    def terms_columns(self, X, lam=None):
        """Terms for the columns of ``X`` (shape ``(d, N)``); ``lam`` is ``(N,)`` or ``None``."""
        w = np.sum(X.real**2 + X.imag**2, axis=0)
        zero = w <= 1e-300
        V = X / np.sqrt(np.where(zero, 1.0, w))
        if zero.any():
            # zero-weight atoms contribute nothing; any unit vector will do
            V[:, zero] = 0.0
            V[0, zero] = 1.0
        return self.sign * w * self._values(V.T, lam)

    def terms(self, Psi, mix=None):
        # Psi: (B, ..., d); mix: (B,) or None
        shape = Psi.shape[:-1]
        lam = None
        if mix is not None:
            lam = np.broadcast_to(mix.reshape((-1,) + (1,) * (len(shape) - 1)), shape).reshape(-1)
        X = Psi.reshape(-1, Psi.shape[-1]).T
        return self.terms_columns(X, lam).reshape(shape)


def _rotate(pi, pj, theta, phi):
    c = np.cos(theta)[..., None]
    se = (np.sin(theta) * np.exp(1j * phi))[..., None]
    return c * pi + se * pj, c * pj - se.conj() * pi


def _golden_min(fun, a, b, tol):
    """Golden-section on ``[a, b]`` (elementwise); returns argmin and value."""
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    while np.max(b - a) > tol:
        left = f1 < f2
        new_a = np.where(left, a, x1)
        new_b = np.where(left, x2, b)
        new_x1 = np.where(left, new_b - GOLDEN * (new_b - new_a), x2)
        new_x2 = np.where(left, x1, new_a + GOLDEN * (new_b - new_a))
        probe = np.where(left, new_x1, new_x2)
        fp = fun(probe)
        f1, f2 = np.where(left, fp, f2), np.where(left, f1, fp)
        a, b, x1, x2 = new_a, new_b, new_x1, new_x2
    use1 = f1 <= f2
    return np.where(use1, x1, x2), np.where(use1, f1, f2)


def _bracket_min(fun, a, x, b, fa, fx, fb, tol, max_iter=8):
    """Elementwise safeguarded parabolic search inside ``[a, b]``.

    Parabolic steps through the current three points, falling back to a
    golden-section step when the vertex leaves the bracket or stalls.
    Returns the best abscissa and value seen.
    """
    a, x, b = a.copy(), x.copy(), b.copy()
    fa, fx, fb = fa.copy(), fx.copy(), fb.copy()
    done = (b - a) <= tol
    for _ in range(max_iter):
        if done.all():
            break
        da, db = x - a, x - b
        pa, pb = da * (fx - fb), db * (fx - fa)
        den = pa - pb
        with np.errstate(divide="ignore", invalid="ignore"):
            u = x - 0.5 * (da * pa - db * pb) / den
        bad = ~((u > a + 0.5 * tol) & (u < b - 0.5 * tol) & (np.abs(u - x) >= 0.5 * tol))
        gold = np.where(da > -db, x - (1.0 - GOLDEN) * da, x - (1.0 - GOLDEN) * db)
        np.copyto(u, gold, where=bad)
        np.copyto(u, x, where=done)
        fu = fun(u)
        better = fu < fx
        left = u < x
        moved = np.abs(u - x)
        # improvement: the old centre becomes a bracket end
        m = better & left
        np.copyto(b, x, where=m)
        np.copyto(fb, fx, where=m)
        m = better & ~left
        np.copyto(a, x, where=m)
        np.copyto(fa, fx, where=m)
        np.copyto(x, u, where=better)
        np.copyto(fx, fu, where=better)
        # no improvement: the probe becomes a bracket end
        worse = ~better & ~done
        m = worse & left
        np.copyto(a, u, where=m)
        np.copyto(fa, fu, where=m)
        m = worse & ~left
        np.copyto(b, u, where=m)
        np.copyto(fb, fu, where=m)
        done |= ((b - a) <= tol) | (better & (moved < tol))
    return x, fx


class _Polish:
    """L-BFGS on an unconstrained ``X`` with ``V = X (X^dag X)^(-1/2)``, one restart at a time.

    Coordinate descent creeps along shallow valleys; this jumps to the bottom
    when ``f`` is smooth there and is simply rejected when it does not help.
    The objective is a sum of per-atom terms, so its gradient in the atoms is
    taken by central differences atom by atom and pulled back through the
    polar map analytically.
    """

    STEP = 1e-6

    def __init__(self, obj: _Objective, lam, E, max_iter: int):
        self.obj, self.lam, self.E, self.max_iter = obj, lam, E, max_iter
        self.DEt = np.sqrt(lam)[:, None] * E.T  # (r, d)
        d = E.shape[0]
        self.probe = np.concatenate([np.eye(d), 1j * np.eye(d)]) * self.STEP  # (2d, d)

    def _value_grad(self, X):
        m, r = X.shape
        G = X.conj().T @ X
        p, U = np.linalg.eigh(G)
        p = np.sqrt(np.maximum(p, 1e-300))
        V = X @ ((U / p) @ U.conj().T)
        Psi = V @ self.DEt  # (m, d)
        d = Psi.shape[1]
        # columns: base atoms, then +/- probes per atom
        shifted = Psi[:, None, :] + np.stack([self.probe, -self.probe])[:, None]  # (2, m, 2d, d)
        cols = np.concatenate([Psi, shifted.reshape(-1, d)]).T
        t = self.obj.terms_columns(cols)
        value = t[:m].sum()
        diff = (t[m:].reshape(2, m, 2 * d)[0] - t[m:].reshape(2, m, 2 * d)[1]) / (2 * self.STEP)
        g_psi = diff[:, :d] + 1j * diff[:, d:]
        g_v = g_psi @ self.DEt.conj().T  # (m, r)
        A = V.conj().T @ g_v
        At = U.conj().T @ A @ U
        Bm = U @ (At / (p[:, None] + p[None, :])) @ U.conj().T
        g_x = (g_v - V @ (V.conj().T @ g_v)) @ ((U / p) @ U.conj().T) + V @ (Bm - Bm.conj().T)
        return value, g_x, V

    def __call__(self, Psi):
        m, r = Psi.shape[0], len(self.lam)
        V0 = (Psi @ self.E.conj()) / np.sqrt(self.lam)

        def fun(x):
            X = (x[: m * r] + 1j * x[m * r :]).reshape(m, r)
            value, g, _ = self._value_grad(X)
            return value, np.concatenate([g.real.ravel(), g.imag.ravel()])

        x0 = np.concatenate([V0.real.ravel(), V0.imag.ravel()])
        res = minimize(
            fun, x0, jac=True, method="L-BFGS-B",
            options={"maxiter": self.max_iter, "ftol": 1e-15, "gtol": 1e-10},
        )
        _, _, V = self._value_grad((res.x[: m * r] + 1j * res.x[m * r :]).reshape(m, r))
        new = V @ self.DEt
        before = self.obj.terms(Psi[None]).sum()
        after = self.obj.terms(new[None]).sum()
        return new if after < before else Psi


class _Block:
    """Local descent for one fixed-size block of restarts."""

    def __init__(self, obj: _Objective, Psi, mix, opts: RoofOptions, search_mix: bool, polish=None):
        self.obj = obj
        self.polish = polish
        self.Psi = Psi  # (B, m, d)
        self.mix = mix  # (B,) or None
        self.opts = opts
        self.search_mix = search_mix
        self.schedule = round_robin(Psi.shape[1])

    def total(self):
        return self.obj.terms(self.Psi, self.mix).sum(axis=1)

    def _pair_round(self, pairs, active):
        opts = self.opts
        I = np.array([p[0] for p in pairs])
        J = np.array([p[1] for p in pairs])
        pi = self.Psi[:, I]  # (B, P, d)
        pj = self.Psi[:, J]
        current = self.obj.terms(pi, self.mix) + self.obj.terms(pj, self.mix)  # (B, P)

        B, P = current.shape
        d = pi.shape[-1]
        # component-major copies keep the batch axis innermost for fast broadcasting
        cols_i = np.ascontiguousarray(pi.transpose(2, 0, 1))[..., None]
        cols_j = np.ascontiguousarray(pj.transpose(2, 0, 1))[..., None]
        cache = {}

        def pair_value(theta, phi):
            # theta, phi: (B, P, K) -> (B, P, K)
            K = theta.shape[-1]
            if K not in cache:
                lam = None
                if self.mix is not None:
                    lam = np.broadcast_to(self.mix[:, None, None], (B, P, K)).reshape(-1)
                    lam = np.concatenate([lam, lam])
                cache[K] = (np.repeat(cols_i, K, axis=-1), np.repeat(cols_j, K, axis=-1), lam)
            ci, cj, lam = cache[K]
            c = np.cos(theta)
            s = np.sin(theta)
            se = np.empty(theta.shape, dtype=complex)
            se.real = s * np.cos(phi)
            se.imag = s * np.sin(phi)
            X = np.empty((d, 2, B, P, K), dtype=complex)
            X[:, 0] = c * ci + se * cj
            X[:, 1] = c * cj - se.conj() * ci
            t = self.obj.terms_columns(X.reshape(d, -1), lam).reshape(2, B, P, K)
            return t[0] + t[1]

        Kt, Kp = opts.theta_grid, opts.phi_grid
        tg = np.repeat(np.arange(Kt) * (math.pi / Kt), Kp)
        pg = np.tile(np.arange(Kp) * (2 * math.pi / Kp), Kt)
        grid = pair_value(np.broadcast_to(tg, (B, P, Kt * Kp)), np.broadcast_to(pg, (B, P, Kt * Kp)))
        k = np.argmin(grid, axis=2)
        theta0, phi0 = tg[k], pg[k]

        grid_best = np.take_along_axis(grid, k[..., None], axis=2)[..., 0]
        # theta neighbours on the grid; theta has period pi
        g3 = grid.reshape(B, P, Kt, Kp)
        kt, kp = k // Kp, k % Kp
        idx_b, idx_p = np.ogrid[:B, :P]
        f_lo = g3[idx_b, idx_p, (kt - 1) % Kt, kp]
        f_hi = g3[idx_b, idx_p, (kt + 1) % Kt, kp]
        ht = math.pi / Kt
        theta, ft = _bracket_min(
            lambda t: pair_value(t[..., None], phi0[..., None])[..., 0],
            theta0 - ht, theta0, theta0 + ht, f_lo, grid_best, f_hi, opts.angle_tol,
        )
        hp = math.pi / Kp
        ends = pair_value(
            np.stack([theta, theta], axis=-1), np.stack([phi0 - hp, phi0 + hp], axis=-1)
        )
        phi, best = _bracket_min(
            lambda p: pair_value(theta[..., None], p[..., None])[..., 0],
            phi0 - hp, phi0, phi0 + hp, ends[..., 0], ft, ends[..., 1], opts.angle_tol,
        )

        accept = (best < current) & active[:, None]
        a, b = _rotate(pi, pj, theta, phi)
        self.Psi[:, I] = np.where(accept[..., None], a, pi)
        self.Psi[:, J] = np.where(accept[..., None], b, pj)

    def _mix_search(self, active):
        def full(lams):
            # lams: (B, K) -> (B, K)
            B, K = lams.shape
            out = np.empty((B, K))
            for c in range(K):
                out[:, c] = self.obj.terms(self.Psi, lams[:, c]).sum(axis=1)
            return out

        B = self.Psi.shape[0]
        grid = np.broadcast_to(LAMBDA_GRID, (B, len(LAMBDA_GRID)))
        vals = full(grid)
        k = np.argmin(vals, axis=1)
        lo = LAMBDA_GRID[np.maximum(k - 1, 0)]
        hi = LAMBDA_GRID[np.minimum(k + 1, len(LAMBDA_GRID) - 1)]
        x, fx = _golden_min(lambda l: full(l[:, None])[:, 0], lo, hi, 1e-10)
        gbest = vals[np.arange(B), k]
        # refinement must beat the grid by more than tol to leave a grid point
        use_grid = gbest <= fx + self.opts.tol
        lam = np.where(use_grid, LAMBDA_GRID[k], x)
        best = np.where(use_grid, gbest, fx)
        current = self.total()
        accept = (best < current) & active
        self.mix = np.where(accept, lam, self.mix)

    def run(self):
        opts = self.opts
        B = self.Psi.shape[0]
        active = np.ones(B, dtype=bool)
        value = self.total()
        sweeps = np.zeros(B, dtype=int)
        for it in range(opts.max_sweeps):
            for pairs in self.schedule:
                self._pair_round(pairs, active)
            if self.search_mix:
                self._mix_search(active)
            new = self.total()
            improved = value - new
            sweeps[active] += 1
            value = np.where(active, new, value)
            active &= improved >= opts.tol
            if not active.any():
                break
            if self.polish is not None and it + 1 == opts.polish_after:
                # restarts still creeping after polish_after sweeps; each is treated on its own
                for b in np.flatnonzero(active):
                    self.Psi[b] = self.polish(self.Psi[b])
                value = np.where(active, self.total(), value)
        return value, ~active, sweeps


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV} must be an integer >= 1, got {raw!r}")
    if n < 1:
        raise ValidationError(f"{THREADS_ENV} must be an integer >= 1, got {raw!r}")
    return n


def _optimize(f: StateFunctional, rho, opts: RoofOptions, sign: float, hull: bool, dims):
    R = as_density(rho)
    d = R.shape[0]
    if f.dim is not None and f.dim != d:
        raise ValidationError(f"functional {f.name!r} acts on dimension {f.dim}, state has {d}")
    if opts.restarts < 1:
        raise ValidationError("restarts must be >= 1")
    lam, E = _eigen_frame(R)
    r = len(lam)
    m = opts.members if opts.members is not None else r * r
    if m < r:
        raise ValidationError(f"members m={m} is below rank {r}")
    if hull and opts.mix is not None and not 0.0 <= opts.mix <= 1.0:
        raise ValidationError(f"mix must lie in [0, 1], got {opts.mix}")

    obj = _Objective(f, R, sign)
    n_blocks = -(-opts.restarts // BLOCK)
    search_mix = hull and opts.mix is None

    def run_block(b):
        # restart k always uses seed (seed, k) and evolves independently of its block-mates
        first = b * BLOCK
        size = min(BLOCK, opts.restarts - first)
        Vs = [random_isometry(m, r, np.random.default_rng((opts.seed, first + k))) for k in range(size)]
        Psi = np.array([(V * np.sqrt(lam)) @ E.T for V in Vs])
        mix = None
        if hull:
            mix = np.full(size, 0.5 if opts.mix is None else float(opts.mix))
        polish = None
        if not hull and opts.polish_after is not None:
            polish = _Polish(obj, lam, E, opts.polish_iter)
        blk = _Block(obj, Psi, mix, opts, search_mix, polish)
        value, conv, sweeps = blk.run()
        return blk.Psi, blk.mix, value, conv, sweeps

    workers = min(_threads(), n_blocks)
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            outs = list(ex.map(run_block, range(n_blocks)))
    else:
        outs = [run_block(b) for b in range(n_blocks)]

    Psi = np.concatenate([o[0] for o in outs])
    mix = np.concatenate([o[1] for o in outs]) if hull else None
    value = np.concatenate([o[2] for o in outs])
    conv = np.concatenate([o[3] for o in outs])
    sweeps = np.concatenate([o[4] for o in outs])
    best = int(np.argmin(value))  # first index among ties
    trace = list(np.minimum.accumulate(value) * sign)
    return R, E, lam, Psi[best], (None if mix is None else float(mix[best])), trace, bool(conv[best]), int(sweeps[best]), m


def _pure_ensemble(Psi, dims):
    w = np.sum(np.abs(Psi) ** 2, axis=1)
    keep = w >= 1e-12
    vecs = Psi[keep] / np.sqrt(w[keep])[:, None]
    return Ensemble.from_vectors(w[keep] / w[keep].sum(), vecs, dims), vecs


def convex_roof(f: StateFunctional, rho, opts: RoofOptions | None = None, dims=None) -> RoofResult:
    """Smallest ensemble average ``sum p_i f(psi_i)`` over pure decompositions of ``rho`` found.

    Seeded random isometries are improved by cyclic Givens descent, with a
    quasi-Newton polish for restarts still moving after ``opts.polish_after``
    sweeps; the best restart is returned.  The value is an upper bound on the true roof.
    """
    opts = opts or RoofOptions()
    R, E, lam, Psi, _, trace, conv, sweeps, m = _optimize(f, rho, opts, +1.0, False, dims)
    ens, vecs = _pure_ensemble(Psi, dims)
    value = ens.average(f.on_vectors(vecs))
    V = (Psi @ E.conj()) / np.sqrt(lam)
    return RoofResult(value, ens, "upper", opts.restarts, trace, conv, m, opts.seed, sweeps, None, V)


def concave_hull(f: StateFunctional, rho, opts: RoofOptions | None = None, dims=None) -> RoofResult:
    """Largest ensemble average found over ``{(1 - t) psi_i + t rho}`` with ``{psi_i}`` a
    pure decomposition of ``rho`` and a shared ``t`` in ``[0, 1]``.

    Every member of this family has barycenter ``rho``.  The value is a lower
    bound on the concave hull; ``opts.mix`` pins ``t`` instead of searching.
    """
    if f.pure_only:
        raise UnsupportedInputError(f"functional {f.name!r} is only defined on pure states")
    opts = opts or RoofOptions()
    R, E, lam, Psi, t, trace, conv, sweeps, m = _optimize(f, rho, opts, -1.0, True, dims)
    if t >= 1.0:
        ens = Ensemble.point_mass(R, dims)
    else:
        w = np.sum(np.abs(Psi) ** 2, axis=1)
        keep = w >= 1e-12
        vecs = Psi[keep] / np.sqrt(w[keep])[:, None]
        proj = np.einsum("ni,nj->nij", vecs, vecs.conj())
        ens = Ensemble(w[keep] / w[keep].sum(), (1.0 - t) * proj + t * R[None], dims)
    value = ens.average(f.on_states(ens.states))
    V = (Psi @ E.conj()) / np.sqrt(lam)
    return RoofResult(value, ens, "lower", opts.restarts, trace, conv, m, opts.seed, sweeps, t, V)


def _bipartite(omega, dims):
    if dims is None or len(dims) != 2:
        raise ValidationError("bipartite dims (dA, dB) are required")
    W = as_density(omega)
    if W.shape[0] != dims[0] * dims[1]:
        raise ValidationError(f"state dimension {W.shape[0]} does not match dims {tuple(dims)}")
    return W, (int(dims[0]), int(dims[1]))


def eof(omega, dims=(2, 2), opts: RoofOptions | None = None, base=DEFAULT_BASE) -> RoofResult:
    """Entanglement of formation: convex roof of the reduced-state entropy."""
    W, dims = _bipartite(omega, dims)
    return convex_roof(reduced_entropy_functional(dims, base), W, opts, dims)


def efn(omega, n: int, dims=(2, 2), opts: RoofOptions | None = None, base=DEFAULT_BASE) -> RoofResult:
    """Convex roof of the truncated entropy ``H_n`` of the reduced state (``n >= 2``)."""
    if n < 2:
        raise ValidationError(f"efn needs n >= 2, got {n}")
    W, dims = _bipartite(omega, dims)
    return convex_roof(truncated_entropy_functional(dims, n, base), W, opts, dims)
