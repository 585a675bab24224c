"""Scalar functions on quantum states.

Every functional is exposed two ways: a plain function of one density matrix
(``entropy(rho)``) and a :class:`StateFunctional` wrapper whose ``batch``
method evaluates a whole stack ``(N, d, d)`` at once.  The optimizers in
:mod:`choquet_roof.roof` only ever call the batched form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ValidationError
from .linalg import eigvalsh
from .states import PURE_TOL, as_density

DEFAULT_BASE = 2.0
G_SNAP = 1e-10


def _check_base(base):
    if base == "e":
        return math.e
    if isinstance(base, str):
        try:
            base = float(base)
        except ValueError:
            raise ValidationError(f"log base must be 2 or e, got {base!r}") from None
    if base not in (2, math.e):
        raise ValidationError(f"log base must be 2 or e, got {base!r}")
    return float(base)


def _xlogx(x) -> np.ndarray:
    x = np.clip(np.asarray(x, dtype=float), 0.0, None)
    return x * np.log(np.where(x > 0, x, 1.0))


def shannon(probs, base=DEFAULT_BASE, axis=-1) -> np.ndarray:
    """``-sum p log p`` along ``axis`` with ``0 log 0 = 0``."""
    # every term is >= 0 for p <= 1; rounding can push p a hair above 1
    return np.maximum(-_xlogx(probs).sum(axis=axis) / np.log(base), 0.0)


def _spectra(stack) -> np.ndarray:
    """Descending spectra of a stack of Hermitian matrices."""
    S = np.asarray(stack, dtype=complex)
    S = 0.5 * (S + np.swapaxes(S.conj(), -1, -2))
    return np.linalg.eigvalsh(S)[..., ::-1]


def _reduced_stack(stack, dims, keep="A") -> np.ndarray:
    dA, dB = dims
    T = np.asarray(stack).reshape(-1, dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("nijkj->nik", T)
    return np.einsum("nijil->njl", T)


def _reduced_from_vectors(vecs, dims, keep="A") -> np.ndarray:
    dA, dB = dims
    M = np.asarray(vecs).reshape(-1, dA, dB)
    if keep == "A":
        return M @ np.swapaxes(M.conj(), 1, 2)
    return np.swapaxes(M, 1, 2) @ M.conj()


def _schmidt_spectra(vecs, dims) -> np.ndarray:
    """Descending spectra of the reduced states of pure bipartite vectors.

    Both marginals of a pure state share their nonzero spectrum, so the smaller
    factor is used; qubit marginals go through the closed 2x2 formula.
    """
    dA, dB = dims
    if dA == dB == 2:
        # eigenvalues from trace and determinant of the 2x2 coefficient matrix
        v = np.asarray(vecs)
        w = np.sum(v.real**2 + v.imag**2, axis=-1)
        det = v[:, 0] * v[:, 3] - v[:, 1] * v[:, 2]
        rad = np.sqrt(np.clip(0.25 * w * w - (det.real**2 + det.imag**2), 0.0, None))
        return np.stack([0.5 * w + rad, np.clip(0.5 * w - rad, 0.0, None)], axis=1)
    M = np.asarray(vecs).reshape(-1, dA, dB)
    if dB < dA:
        M = np.swapaxes(M, 1, 2)
    k = min(dA, dB)
    if k == 1:
        return np.ones((M.shape[0], 1))
    if k == 2:
        a = np.sum(M[:, 0].real ** 2 + M[:, 0].imag ** 2, axis=1)
        b = np.sum(M[:, 1].real ** 2 + M[:, 1].imag ** 2, axis=1)
        c = np.sum(M[:, 0] * M[:, 1].conj(), axis=1)
        mid = 0.5 * (a + b)
        rad = np.sqrt(0.25 * (a - b) ** 2 + c.real**2 + c.imag**2)
        return np.stack([mid + rad, np.clip(mid - rad, 0.0, None)], axis=1)
    return _spectra(M @ np.swapaxes(M.conj(), 1, 2))


# -- plain functions ----------------------------------------------------------


def entropy(rho, base=DEFAULT_BASE) -> float:
    """Von Neumann entropy ``-Tr rho log rho``."""
    base = _check_base(base)
    lam = eigvalsh(as_density(rho))
    return max(0.0, float(shannon(lam, base)))


def truncated_spectrum_entropy(lam, n: int, base=DEFAULT_BASE) -> np.ndarray:
    """``-sum_{i<=n} l_i log l_i + s log s`` with ``s = sum_{i<=n} l_i``.

    ``lam`` holds descending spectra along the last axis.
    """
    top = np.clip(np.asarray(lam, dtype=float)[..., :n], 0.0, None)
    s_log_s = _xlogx(top.sum(axis=-1)) / np.log(base)
    return np.clip(shannon(top, base) + s_log_s, 0.0, None)


def truncated_entropy(omega, dims, n: int, base=DEFAULT_BASE) -> float:
    """Entropy of the ``n`` largest eigenvalues of the reduced state, renormalised as
    ``-sum_{i<=n} l_i log l_i + (sum l_i) log(sum l_i)``.

    Lies in ``[0, log n]`` and equals the reduced entropy once ``n`` reaches the
    reduced rank.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    base = _check_base(base)
    W = as_density(omega)
    lam = _spectra(_reduced_stack(W[None], _dims(dims, W.shape[0])))[0]
    return float(truncated_spectrum_entropy(lam, n, base))


def ky_fan(rho, n: int) -> float:
    """Sum of the ``n`` largest eigenvalues."""
    R = as_density(rho)
    if not 1 <= n <= R.shape[0]:
        raise ValidationError(f"need 1 <= n <= {R.shape[0]}, got {n}")
    return float(eigvalsh(R)[:n].sum())


def purity_gap(rho) -> float:
    """``Tr rho^2`` for mixed states and ``0`` for pure ones (rank-1 by ``lambda_2 <= 1e-9``)."""
    return float(purity_gap_stack(as_density(rho)[None])[0])


def purity_gap_stack(stack) -> np.ndarray:
    lam = _spectra(stack)
    pure = lam[:, 1] <= PURE_TOL if lam.shape[1] > 1 else np.ones(len(lam), dtype=bool)
    return np.where(pure, 0.0, np.sum(lam**2, axis=1))


# -- approximators of characteristic functions ---------------------------------


def _g_values(case: str, params: dict, stack) -> np.ndarray:
    S = np.asarray(stack, dtype=complex)
    if case == "set":
        V = np.asarray(params["vectors"], dtype=complex)
        V = V / np.linalg.norm(V, axis=1, keepdims=True)
        fid = np.einsum("ki,nij,kj->nk", V.conj(), S, V).real
        return fid.max(axis=1)
    if case == "face":
        P = np.asarray(params["projector"], dtype=complex)
        return np.einsum("ij,nji->n", P, S).real
    if case == "rank":
        k = int(params.get("k", 1))
        return _spectra(S)[:, :k].sum(axis=1)
    raise ValidationError(f"unknown case {case!r}; expected 'set', 'face' or 'rank'")


def validate_char_params(case: str, params: dict | None, dim: int) -> dict:
    params = dict(params or {})
    if case == "set":
        if "vectors" not in params:
            raise ValidationError("case 'set' needs params['vectors']")
        V = np.atleast_2d(np.asarray(params["vectors"], dtype=complex))
        if V.shape[1] != dim or np.any(np.linalg.norm(V, axis=1) == 0):
            raise ValidationError(f"set vectors must be nonzero rows of length {dim}")
        params["vectors"] = V
    elif case == "face":
        if "projector" not in params:
            raise ValidationError("case 'face' needs params['projector']")
        P = np.asarray(params["projector"], dtype=complex)
        if P.shape != (dim, dim) or np.max(np.abs(P @ P - P)) > 1e-9 or np.max(np.abs(P - P.conj().T)) > 1e-9:
            raise ValidationError("face projector must be an orthogonal projector of matching size")
        params["projector"] = P
    elif case == "rank":
        k = int(params.get("k", 1))
        if not 1 <= k <= dim:
            raise ValidationError(f"rank case needs 1 <= k <= {dim}, got {k}")
        params["k"] = k
    else:
        raise ValidationError(f"unknown case {case!r}; expected 'set', 'face' or 'rank'")
    return params


def approx_char_stack(case: str, params: dict, n: int, stack) -> np.ndarray:
    g = np.clip(_g_values(case, params, stack), 0.0, 1.0)
    g = np.where(g >= 1.0 - G_SNAP, 1.0, g)
    return 1.0 - (1.0 - g) ** (1.0 / n)


def approx_char_fn(case: str, params: dict | None, n: int, rho) -> float:
    """``1 - (1 - g(rho))^(1/n)``, decreasing in ``n`` towards the indicator of ``{g = 1}``.

    ``g`` is the best overlap with a finite list of pure states (``"set"``),
    ``Tr P rho`` for a projector ``P`` (``"face"``) or the Ky Fan ``k``-sum
    (``"rank"``).  Values of ``g`` within ``1e-10`` of one count as one.
    """
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    R = as_density(rho)
    params = validate_char_params(case, params, R.shape[0])
    return float(approx_char_stack(case, params, n, R[None])[0])


# -- channels -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """CPTP map ``rho -> sum_m K_m rho K_m^dag``; ``kraus`` has shape ``(M, d_out, d_in)``."""

    kraus: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.kraus, dtype=complex)
        if K.ndim == 2:
            K = K[None]
        if K.ndim != 3:
            raise ValidationError(f"Kraus operators must have shape (M, d_out, d_in), got {K.shape}")
        tp = np.einsum("mki,mkj->ij", K.conj(), K)
        err = float(np.max(np.abs(tp - np.eye(K.shape[2]))))
        if err > 1e-9:
            raise ValidationError(f"Kraus operators are not trace preserving (deviation {err:.3e})")
        object.__setattr__(self, "kraus", K)

    @property
    def input_dim(self) -> int:
        return self.kraus.shape[2]

    @property
    def output_dim(self) -> int:
        return self.kraus.shape[1]

    def apply_stack(self, stack) -> np.ndarray:
        K = self.kraus
        return np.einsum("mai,nij,mbj->nab", K, stack, K.conj())

    @classmethod
    def identity(cls, d: int) -> "KrausChannel":
        return cls(np.eye(d)[None])

    @classmethod
    def partial_trace(cls, dims, keep="A") -> "KrausChannel":
        """Kraus form of ``Tr_B`` (``keep="A"``) or ``Tr_A``."""
        dA, dB = dims
        ops = []
        if keep == "A":
            for k in range(dB):
                ops.append(np.kron(np.eye(dA), np.eye(dB)[k][None, :]))
        else:
            for k in range(dA):
                ops.append(np.kron(np.eye(dA)[k][None, :], np.eye(dB)))
        return cls(np.array(ops))

    @classmethod
    def depolarizing(cls, d: int, p: float = 1.0) -> "KrausChannel":
        """``rho -> (1 - p) rho + p I/d`` via the generalized Pauli (Weyl) operators."""
        w = np.exp(2j * np.pi / d)
        X = np.roll(np.eye(d), 1, axis=0)
        Z = np.diag(w ** np.arange(d))
        ops = [np.sqrt(1 - p + p / d**2) * np.eye(d)]
        for a in range(d):
            for b in range(d):
                if a == 0 and b == 0:
                    continue
                ops.append(np.sqrt(p) / d * np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b))
        return cls(np.array(ops))


def apply_channel(channel: KrausChannel, rho) -> np.ndarray:
    R = as_density(rho)
    if R.shape[0] != channel.input_dim:
        raise ValidationError(f"state dimension {R.shape[0]} != channel input dimension {channel.input_dim}")
    out = channel.apply_stack(R[None])[0]
    return as_density(out)


def output_entropy(channel: KrausChannel, rho, base=DEFAULT_BASE) -> float:
    return entropy(apply_channel(channel, rho), base)


# -- functional wrapper -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StateFunctional:
    """A scalar function on states with declared traits.

    ``batch`` maps a stack ``(N, d, d)`` of density matrices to ``(N,)``;
    ``batch_pure`` (optional) maps unit vectors ``(N, d)`` to ``(N,)`` and is
    used by the convex-roof optimizer when present.
    """

    name: str
    batch: Callable[[np.ndarray], np.ndarray]
    dim: int | None = None
    pure_only: bool = False
    convexity: str = "neither"  # "convex" | "concave" | "neither"
    bound: tuple[float, float] | None = None
    batch_pure: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __call__(self, rho) -> float:
        R = np.asarray(rho, dtype=complex)
        return float(self.batch(R[None])[0])

    def on_states(self, stack) -> np.ndarray:
        return np.asarray(self.batch(np.asarray(stack, dtype=complex)), dtype=float)

    def on_vectors(self, vecs) -> np.ndarray:
        V = np.asarray(vecs, dtype=complex)
        if self.batch_pure is not None:
            return np.asarray(self.batch_pure(V), dtype=float)
        return self.on_states(np.einsum("ni,nj->nij", V, V.conj()))


def _dims(dims, d=None):
    if dims is None:
        raise ValidationError("bipartite functional needs dims (dA, dB)")
    dA, dB = int(dims[0]), int(dims[1])
    if dA < 1 or dB < 1 or (d is not None and dA * dB != d):
        raise ValidationError(f"dims {dims} do not match dimension {d}")
    return dA, dB


def reduced_entropy_functional(dims, base=DEFAULT_BASE) -> StateFunctional:
    """Entropy of ``Tr_B``; on pure states this is the entanglement entropy."""
    dims = _dims(dims)
    base = _check_base(base)
    return StateFunctional(
        name="entropyA",
        batch=lambda S: shannon(_spectra(_reduced_stack(S, dims)), base),
        dim=dims[0] * dims[1],
        convexity="concave",
        bound=(0.0, math.log(min(dims)) / math.log(base)),
        batch_pure=lambda V: shannon(_schmidt_spectra(V, dims), base),
    )


def truncated_entropy_functional(dims, n: int, base=DEFAULT_BASE) -> StateFunctional:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    dims = _dims(dims)
    base = _check_base(base)
    return StateFunctional(
        name=f"hn:{n}",
        batch=lambda S: truncated_spectrum_entropy(_spectra(_reduced_stack(S, dims)), n, base),
        dim=dims[0] * dims[1],
        bound=(0.0, math.log(n) / math.log(base)),
        batch_pure=lambda V: truncated_spectrum_entropy(_schmidt_spectra(V, dims), n, base),
    )


def entropy_functional(dim: int | None = None, base=DEFAULT_BASE) -> StateFunctional:
    base = _check_base(base)
    return StateFunctional(
        name="entropy",
        batch=lambda S: shannon(_spectra(S), base),
        dim=dim,
        convexity="concave",
        batch_pure=lambda V: np.zeros(len(V)),
    )


def ky_fan_functional(n: int, dim: int | None = None) -> StateFunctional:
    if n < 1 or (dim is not None and n > dim):
        raise ValidationError(f"need 1 <= n <= dim, got n={n}")
    return StateFunctional(
        name=f"kyfan:{n}",
        batch=lambda S: _spectra(S)[:, :n].sum(axis=1),
        dim=dim,
        convexity="convex",
        bound=(0.0, 1.0),
    )


def purity_gap_functional(dim: int | None = None) -> StateFunctional:
    return StateFunctional(
        name="purity-gap",
        batch=purity_gap_stack,
        dim=dim,
        bound=(0.0, 1.0),
        batch_pure=lambda V: np.zeros(len(V)),
    )


def char_fn_functional(case: str, params: dict | None, n: int, dim: int) -> StateFunctional:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    params = validate_char_params(case, params, dim)
    return StateFunctional(
        name=f"charfn:{case}:{n}",
        batch=lambda S: approx_char_stack(case, params, n, S),
        dim=dim,
        convexity="convex",
        bound=(0.0, 1.0),
    )


def output_entropy_functional(channel: KrausChannel, base=DEFAULT_BASE) -> StateFunctional:
    base = _check_base(base)
    return StateFunctional(
        name="channel",
        batch=lambda S: shannon(_spectra(channel.apply_stack(S)), base),
        dim=channel.input_dim,
        convexity="concave",
        bound=(0.0, math.log(channel.output_dim) / math.log(base)),
    )


def affine_functional(A) -> StateFunctional:
    """``rho -> Tr A rho`` for Hermitian ``A``."""
    A = np.asarray(A, dtype=complex)
    return StateFunctional(
        name="affine",
        batch=lambda S: np.einsum("ij,nji->n", A, S).real,
        dim=A.shape[0],
        convexity="convex",
        batch_pure=lambda V: np.einsum("ni,ij,nj->n", V.conj(), A, V).real,
    )


def quartic_functional(A) -> StateFunctional:
    """Pure-state functional ``psi -> <psi|A|psi>^2`` (``(Tr A rho)^2`` off the pure states)."""
    A = np.asarray(A, dtype=complex)
    return StateFunctional(
        name="quartic",
        batch=lambda S: np.einsum("ij,nji->n", A, S).real ** 2,
        dim=A.shape[0],
        pure_only=True,
        batch_pure=lambda V: np.einsum("ni,ij,nj->n", V.conj(), A, V).real ** 2,
    )
