"""Encode, erase, reconstruct.

Coefficients are the inner products y(i) = <x_i, x>. After erasure leaves
the index set σ, the linear estimate is

    x_hat = (n / |σ|) Σ_{i in σ} y(i) x_i

and the error operator Δ = id − (n/|σ|) Σ_{i in σ} x_i ⊗ x_i satisfies
x − x_hat = Δx exactly, so ‖Δ‖ is the worst-case relative error over all
sources. Empty σ is legal input (Bernoulli selection can produce it) and
gets the degenerate convention x_hat = 0, deviation_norm = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .channel import ErasurePattern
from .frames import Frame


@dataclass(frozen=True)
class Coefficients:
    """Frame coefficients of one source vector."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("coefficients must form a nonempty 1-D array")
        if not np.isfinite(arr).all():
            raise ValueError("coefficients must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class ReconstructionOutcome:
    x_hat: np.ndarray = field(repr=False)
    received_count: int = 0
    deviation_norm: float = 0.0
    degenerate: bool = False


def encode(f: Frame, x) -> Coefficients:
    """Inner products of the source against every frame vector."""
    vec = linalg.as_vector(x)
    if vec.shape[0] != f.n:
        raise ValueError("dimension mismatch")
    return Coefficients(values=f.vectors @ vec)


def deviation_operator(f: Frame, p: ErasurePattern) -> linalg.SymOperator:
    """id − (n/|σ|) Σ_{i∈σ} x_i⊗x_i. Undefined (error) for empty σ."""
    if p.m != f.m:
        raise ValueError("dimension mismatch")
    if p.size == 0:
        raise ValueError("empty pattern: deviation operator undefined")
    sub = f.vectors[p.indices()]
    scaled = linalg.rank_one_sum(sub, np.full(p.size, f.n / p.size))
    return linalg.SymOperator(np.eye(f.n) - scaled.entries)


def reconstruct(f: Frame, c: Coefficients, p: ErasurePattern) -> ReconstructionOutcome:
    """Linear reconstruction from the received coefficients."""
    if len(c) != f.m or p.m != f.m:
        raise ValueError("dimension mismatch")
    if p.size == 0:
        x_hat = np.zeros(f.n)
        x_hat.flags.writeable = False
        return ReconstructionOutcome(
            x_hat=x_hat, received_count=0, deviation_norm=1.0, degenerate=True
        )
    idx = p.indices()
    x_hat = (f.n / p.size) * (c.values[idx] @ f.vectors[idx])
    x_hat.flags.writeable = False
    dev = linalg.spectral_norm(deviation_operator(f, p))
    return ReconstructionOutcome(
        x_hat=x_hat, received_count=p.size, deviation_norm=dev, degenerate=False
    )


def reconstruction_error(x, outcome: ReconstructionOutcome) -> float:
    """Euclidean distance between the source and its reconstruction."""
    vec = linalg.as_vector(x)
    if vec.shape[0] != outcome.x_hat.shape[0]:
        raise ValueError("dimension mismatch")
    return float(np.linalg.norm(vec - outcome.x_hat))
