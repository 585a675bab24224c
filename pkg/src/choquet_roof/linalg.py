"""Dense Hermitian linear algebra on small complex matrices.

Everything here works on plain ``numpy`` arrays.  A "Hermitian matrix" is any
square complex array equal to its conjugate transpose up to ``HERM_TOL``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, ValidationError

HERM_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


class Spectrum(NamedTuple):
    """Eigenvalues sorted descending with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_hermitian(H, tol: float = HERM_TOL) -> np.ndarray:
    """Validate ``H`` as Hermitian and return an exactly Hermitian copy."""
    A = np.asarray(H, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A))))
    asym = float(np.max(np.abs(A - A.conj().T)))
    if asym > tol * scale:
        raise ValidationError(f"matrix is not Hermitian (max |H - H^dag| = {asym:.3e})")
    return 0.5 * (A + A.conj().T)


def _fix_phases(V: np.ndarray) -> np.ndarray:
    # largest-modulus entry of each column made real nonnegative; earliest index wins near-ties
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        mags = np.abs(col)
        idx = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
        if mags[idx] > 0:
            V[:, k] = col * (np.conj(col[idx]) / mags[idx])
    return V


def _sorted_spectrum(w: np.ndarray, V: np.ndarray) -> Spectrum:
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], _fix_phases(V[:, order]))


def jacobi_eigh(H, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS) -> Spectrum:
    """Cyclic complex Jacobi eigensolver.

    Each 2x2 pivot is first made real by a diagonal phase, then annihilated by
    a plane rotation.  Sweeps stop once the largest off-diagonal modulus falls
    below ``tol`` times the matrix scale.
    """
    A = as_hermitian(H)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(A))))
    for _ in range(max_sweeps):
        off = np.abs(A - np.diag(np.diag(A)))
        if off.max(initial=0.0) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                mag = abs(b)
                if mag <= 1e-300:
                    continue
                phase = b / mag
                theta = 0.5 * np.arctan2(2.0 * mag, A[q, q].real - A[p, p].real)
                c, s = np.cos(theta), np.sin(theta)
                # columns of U: rotated basis vectors for the (p, q) plane
                U = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                idx = [p, q]
                A[:, idx] = A[:, idx] @ U
                A[idx, :] = U.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                V[:, idx] = V[:, idx] @ U
    else:
        off = np.abs(A - np.diag(np.diag(A)))
        if off.max(initial=0.0) > tol * scale:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    return _sorted_spectrum(np.diag(A).real.copy(), V)


def lapack_eigh(H) -> Spectrum:
    """Same contract as :func:`jacobi_eigh`, backed by LAPACK."""
    A = as_hermitian(H)
    w, V = np.linalg.eigh(A)
    return _sorted_spectrum(w, V)


def eigh(H, method: str = "jacobi") -> Spectrum:
    """Eigendecomposition with descending eigenvalues and pinned eigenvector phases.

    ``method`` is ``"jacobi"`` (self-contained, default) or ``"lapack"``.
    """
    if method == "jacobi":
        return jacobi_eigh(H)
    if method == "lapack":
        return lapack_eigh(H)
    raise ValidationError(f"unknown eigensolver {method!r}")


def eigvalsh(H) -> np.ndarray:
    """Descending eigenvalues only (LAPACK, used on hot paths)."""
    return np.linalg.eigvalsh(as_hermitian(H))[::-1]


def trace_norm(A) -> float:
    return float(np.sum(np.abs(eigh(A).eigenvalues)))


def op_norm(A) -> float:
    return float(np.max(np.abs(eigh(A).eigenvalues)))


def psd_power(A, power: float, floor: float = 0.0) -> np.ndarray:
    """Matrix power of a PSD matrix through its spectrum; eigenvalues <= floor map to 0."""
    w, V = eigh(A)
    out = np.zeros_like(w)
    keep = w > floor
    out[keep] = w[keep] ** power
    M = (V * out) @ V.conj().T
    return 0.5 * (M + M.conj().T)


def partial_trace(W, dims, keep: str = "A") -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``C^dA (x) C^dB``.

    ``keep`` names the surviving factor, ``"A"`` or ``"B"``.
    """
    dA, dB = (int(x) for x in dims)
    M = np.asarray(W, dtype=complex)
    if M.shape != (dA * dB, dA * dB):
        raise ValidationError(f"operator of shape {M.shape} does not match dims {dA}x{dB}")
    T = M.reshape(dA, dB, dA, dB)
    if keep == "A":
        return np.einsum("ijkj->ik", T)
    if keep == "B":
        return np.einsum("ijil->jl", T)
    raise ValidationError(f"keep must be 'A' or 'B', got {keep!r}")


def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal basis of d x d Hermitian matrices under <X, Y> = Tr X^dag Y.

    Ordering: all E_kk, then (E_kl + E_lk)/sqrt2 for k < l, then
    i(E_kl - E_lk)/sqrt2 for k < l.  Shape ``(d*d, d, d)``.
    """
    basis = []
    for k in range(d):
        E = np.zeros((d, d), dtype=complex)
        E[k, k] = 1.0
        basis.append(E)
    pairs = [(k, l) for k in range(d) for l in range(k + 1, d)]
    r = 1.0 / np.sqrt(2.0)
    for k, l in pairs:
        E = np.zeros((d, d), dtype=complex)
        E[k, l] = E[l, k] = r
        basis.append(E)
    for k, l in pairs:
        E = np.zeros((d, d), dtype=complex)
        E[k, l] = 1j * r
        E[l, k] = -1j * r
        basis.append(E)
    return np.array(basis)


def hermitian_coords(H) -> np.ndarray:
    """Real coordinates of Hermitian ``H`` (or a stack of them) in :func:`hermitian_basis`."""
    H = np.asarray(H, dtype=complex)
    d = H.shape[-1]
    B = hermitian_basis(d)
    return np.einsum("bij,...ij->...b", B.conj(), H).real


def trace_norms(stack) -> np.ndarray:
    """Vectorised trace norms of a stack of Hermitian matrices, shape ``(..., d, d)``."""
    S = np.asarray(stack, dtype=complex)
    S = 0.5 * (S + np.swapaxes(S.conj(), -1, -2))
    return np.abs(np.linalg.eigvalsh(S)).sum(axis=-1)
