"""Frame-expansion coding over lossy channels.

Encode a vector as its inner products against a uniform tight frame, lose
coefficients at random, reconstruct linearly from whatever arrived, and
measure how the worst-case error concentrates. The package provides the
frame constructions, the erasure channel, the codec, batched symmetric
eigenvalue machinery, and the Monte Carlo experiments that verify the
reconstruction guarantees and the operator inequalities behind them.
"""

from .channel import (
    ErasurePattern,
    PatternStats,
    RngSpec,
    bernoulli_select,
    fixed_select,
    pattern_stats,
)
from .codec import (
    Coefficients,
    ReconstructionOutcome,
    deviation_operator,
    encode,
    reconstruct,
    reconstruction_error,
)
from .frames import (
    Frame,
    FrameBounds,
    frame_bounds,
    harmonic_frame,
    load_frame,
    random_sphere_frame,
    repeated_basis_frame,
    save_frame,
    tightness_defect,
)
from .linalg import (
    JacobiConvergenceError,
    SymOperator,
    apply,
    as_vector,
    eigenvalues_sym,
    eigenvalues_sym_batch,
    rank_one_sum,
    schatten_norm,
    spectral_norm,
    spectral_norm_batch,
    worker_threads,
)

__version__ = "0.1.0"

__all__ = [
    "Coefficients",
    "ErasurePattern",
    "Frame",
    "FrameBounds",
    "JacobiConvergenceError",
    "PatternStats",
    "ReconstructionOutcome",
    "RngSpec",
    "SymOperator",
    "apply",
    "as_vector",
    "bernoulli_select",
    "deviation_operator",
    "eigenvalues_sym",
    "eigenvalues_sym_batch",
    "encode",
    "fixed_select",
    "frame_bounds",
    "harmonic_frame",
    "load_frame",
    "pattern_stats",
    "random_sphere_frame",
    "rank_one_sum",
    "reconstruct",
    "reconstruction_error",
    "repeated_basis_frame",
    "save_frame",
    "schatten_norm",
    "spectral_norm",
    "spectral_norm_batch",
    "tightness_defect",
    "worker_threads",
    "__version__",
]
