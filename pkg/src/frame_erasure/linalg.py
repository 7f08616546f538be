"""Dense symmetric linear algebra: rank-one sums, eigenvalues, spectral and
Schatten norms.

Vectors are plain 1-D float64 numpy arrays. Symmetric operators are wrapped in
:class:`SymOperator`, which symmetrizes on construction so floating-point
asymmetry can never reach the eigensolver.

The eigensolver is a cyclic Jacobi iteration (all pairs swept in a fixed
order) run until the off-diagonal Frobenius mass drops below 1e-14 times the
diagonal scale, with a hard cap of 50 sweeps. Batched entry points are
provided because the Monte Carlo experiments need eigenvalues of thousands of
small operators per parameter point; the kernels are JIT-compiled and the
batch loop parallelizes across matrices. The worker count is capped by the
``FRAME_ERASURE_THREADS`` environment variable (0 or unset means automatic).
"""

from __future__ import annotations

import math
import os

os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

import numba
import numpy as np
from numba import njit, prange

JACOBI_SWEEP_CAP = 50
JACOBI_OFF_DIAGONAL_TOL = 1e-14


class JacobiConvergenceError(RuntimeError):
    """Raised when the Jacobi sweep budget is exhausted before convergence."""


def worker_threads() -> int:
    """Worker count for batched kernels, capped by FRAME_ERASURE_THREADS."""
    raw = os.environ.get("FRAME_ERASURE_THREADS", "").strip()
    limit = numba.config.NUMBA_NUM_THREADS
    try:
        requested = int(raw) if raw else 0
    except ValueError:
        requested = 0
    if requested <= 0:
        return limit
    return max(1, min(requested, limit))


def as_vector(x) -> np.ndarray:
    """Validate and convert ``x`` to a 1-D finite float64 vector."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("vector must be one-dimensional")
    if v.shape[0] < 1:
        raise ValueError("vector must have length ≥ 1")
    if not np.isfinite(v).all():
        raise ValueError("vector entries must be finite")
    return v


class SymOperator:
    """A dense symmetric operator on R^dim.

    Construction symmetrizes the input as (A + Aᵀ)/2, which is exactly
    symmetric in floating point, and freezes the storage.
    """

    __slots__ = ("entries",)

    def __init__(self, entries) -> None:
        a = np.asarray(entries, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("entries must be a square matrix")
        if a.shape[0] < 1:
            raise ValueError("dimension must be ≥ 1")
        if not np.isfinite(a).all():
            raise ValueError("entries must be finite")
        sym = 0.5 * (a + a.T)
        sym.flags.writeable = False
        self.entries = sym

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __repr__(self) -> str:
        return f"SymOperator(dim={self.dim})"


def rank_one_sum(vectors, weights) -> SymOperator:
    """Accumulate the symmetric operator Σ_i w_i v_i ⊗ v_i.

    Args:
        vectors: sequence of 1-D arrays sharing one dimension n.
        weights: sequence of finite reals, one per vector.

    Returns:
        SymOperator of dimension n.
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        mat = np.asarray(vectors, dtype=np.float64)
    else:
        rows = list(vectors)
        if len(rows) == 0:
            raise ValueError("empty vector list: dimension unspecified")
        dims = {np.asarray(r).shape for r in rows}
        if len(dims) != 1 or len(next(iter(dims))) != 1:
            raise ValueError("dimension mismatch")
        mat = np.asarray(rows, dtype=np.float64)
    if mat.shape[0] == 0:
        raise ValueError("empty vector list: dimension unspecified")
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.shape[0] != mat.shape[0]:
        raise ValueError("dimension mismatch")
    if not np.isfinite(w).all():
        raise ValueError("weights must be finite")
    if not np.isfinite(mat).all():
        raise ValueError("vector entries must be finite")
    return SymOperator((mat * w[:, None]).T @ mat)


@njit(cache=True)
def _jacobi_cycle(a, tol, max_sweeps):  # pragma: no cover - compiled
    """Cyclic Jacobi on one symmetric matrix, in place.

    Returns (relative off-diagonal residual, converged flag).
    """
    n = a.shape[0]
    if n == 1:
        return 0.0, True
    for _ in range(max_sweeps):
        off = 0.0
        diag = 0.0
        for i in range(n):
            diag += a[i, i] * a[i, i]
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        if off <= tol * tol * diag:
            return 0.0, True
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    off = 0.0
    diag = 0.0
    for i in range(n):
        diag += a[i, i] * a[i, i]
        for j in range(i + 1, n):
            off += 2.0 * a[i, j] * a[i, j]
    if off <= tol * tol * diag:
        return 0.0, True
    scale = np.sqrt(diag)
    if scale == 0.0:
        scale = 1e-300
    return np.sqrt(off) / scale, False


@njit(cache=True, parallel=True)
def _jacobi_batch(mats, tol, max_sweeps):  # pragma: no cover - compiled
    b, n, _ = mats.shape
    eigs = np.empty((b, n))
    residuals = np.zeros(b)
    for i in prange(b):
        a = mats[i].copy()
        residual, converged = _jacobi_cycle(a, tol, max_sweeps)
        if not converged:
            residuals[i] = residual
        d = np.empty(n)
        for k in range(n):
            d[k] = a[k, k]
        eigs[i] = np.sort(d)[::-1]
    return eigs, residuals


def eigenvalues_sym_batch(mats: np.ndarray) -> np.ndarray:
    """Eigenvalues (descending per row) for a stack of symmetric matrices.

    Args:
        mats: array of shape (batch, dim, dim); each slice must be symmetric.

    Returns:
        Array of shape (batch, dim), every row sorted descending.
    """
    a = np.ascontiguousarray(mats, dtype=np.float64)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected a (batch, dim, dim) array")
    if a.shape[0] == 0:
        return np.empty((0, a.shape[1]))
    numba.set_num_threads(worker_threads())
    eigs, residuals = _jacobi_batch(a, JACOBI_OFF_DIAGONAL_TOL, JACOBI_SWEEP_CAP)
    worst = float(residuals.max())
    if worst > 0.0:
        raise JacobiConvergenceError(
            f"no convergence after {JACOBI_SWEEP_CAP} sweeps; "
            f"relative off-diagonal residual {worst:.3e}"
        )
    return eigs


def spectral_norm_batch(mats: np.ndarray) -> np.ndarray:
    """Spectral norms (max |eigenvalue|) for a stack of symmetric matrices."""
    eigs = eigenvalues_sym_batch(mats)
    return np.abs(eigs).max(axis=1)


def eigenvalues_sym(op: SymOperator) -> np.ndarray:
    """All eigenvalues of ``op``, sorted descending, via cyclic Jacobi."""
    if not isinstance(op, SymOperator):
        op = SymOperator(op)
    return eigenvalues_sym_batch(op.entries[None, :, :])[0]


def spectral_norm(op: SymOperator) -> float:
    """Operator norm: the largest absolute eigenvalue."""
    return float(np.abs(eigenvalues_sym(op)).max())


def schatten_norm(op: SymOperator, p: float) -> float:
    """Schatten p-norm (Σ |λ_i|^p)^{1/p}; p = inf means the spectral norm.

    For symmetric operators the s-numbers equal |eigenvalues|.
    """
    if math.isinf(p):
        return spectral_norm(op)
    p = float(p)
    if not p >= 1.0:
        raise ValueError("p must be ≥ 1")
    lam = np.abs(eigenvalues_sym(op))
    top = lam.max()
    if top == 0.0:
        return 0.0
    # factor out the largest eigenvalue so large p cannot overflow
    return float(top * np.power(np.power(lam / top, p).sum(), 1.0 / p))


def apply(op: SymOperator, x) -> np.ndarray:
    """Matrix-vector product op · x."""
    v = as_vector(x)
    if not isinstance(op, SymOperator):
        op = SymOperator(op)
    if v.shape[0] != op.dim:
        raise ValueError("dimension mismatch")
    return op.entries @ v
