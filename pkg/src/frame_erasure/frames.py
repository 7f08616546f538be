"""Construction, validation, and serialization of uniform frames.

A frame here is a finite collection of m unit vectors spanning R^n, m ≥ n.
Two operator conventions coexist and are kept explicit to avoid a factor of
m/n slipping in:

* ``frame_bounds`` uses the unnormalized frame operator Σ x_i ⊗ x_i, whose
  extreme eigenvalues are the frame bounds (A, B).
* ``tightness_defect`` uses the (n/m)-normalized operator, so a frame is
  tight exactly when id − (n/m) Σ x_i ⊗ x_i vanishes.

File format (UTF-8 text): line 1 is ``frame v1 n=<n> m=<m> kind=<tag>``,
followed by m lines of n space-separated reals printed at 17 significant
digits, which round-trips float64 bit-exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channel import FRAME_STREAM, RngSpec

UNIT_NORM_TOL = 1e-10
TIGHTNESS_TOL = 1e-10
SPAN_TOL = 1e-10

FRAME_KINDS = ("harmonic", "random_sphere", "repeated_basis", "custom")


@dataclass(frozen=True)
class FrameBounds:
    """Extreme eigenvalues (lower=A, upper=B) of the unnormalized frame operator."""

    lower: float
    upper: float


class Frame:
    """An ordered collection of m unit vectors in R^n, m ≥ n.

    Vectors are stored as a read-only (m, n) array. Unit norms are enforced
    at construction; spanning is checked by ``frame_bounds`` (constructors in
    this module always produce spanning sets, custom input may not).
    """

    __slots__ = ("n", "m", "vectors", "kind", "_bounds")

    def __init__(self, vectors, kind: str = "custom") -> None:
        arr = np.asarray(vectors, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("vectors must form a 2-D (m, n) array")
        m, n = arr.shape
        if n < 1:
            raise ValueError("n must be ≥ 1")
        if m < n:
            raise ValueError("frame needs m ≥ n vectors")
        if not np.isfinite(arr).all():
            raise ValueError("vector entries must be finite")
        norms = np.sqrt(np.einsum("ij,ij->i", arr, arr))
        if np.abs(norms - 1.0).max() > UNIT_NORM_TOL:
            worst = int(np.abs(norms - 1.0).argmax())
            raise ValueError(
                f"unit-norm violation: vector {worst} has norm {norms[worst]:.12g}"
            )
        if kind not in FRAME_KINDS:
            raise ValueError(f"unknown frame kind {kind!r}")
        arr = arr.copy()
        arr.flags.writeable = False
        self.n = n
        self.m = m
        self.vectors = arr
        self.kind = kind
        self._bounds = None

    def __repr__(self) -> str:
        return f"Frame(n={self.n}, m={self.m}, kind={self.kind!r})"


def harmonic_frame(n: int, m: int) -> Frame:
    """The deterministic tight family: rows of scaled trigonometric moments.

    For even n = 2p, vector i has the p coordinate pairs
    sqrt(2/n) (cos(2π i j / m), sin(2π i j / m)), j = 1..p. For odd
    n = 2p + 1 a constant coordinate 1/sqrt(n) is prepended and the pairs
    keep the sqrt(2/n) scale. Tightness is verified at construction rather
    than assumed.
    """
    n = _as_int(n, "n")
    m = _as_int(m, "m")
    if n < 1:
        raise ValueError("n must be ≥ 1")
    if m <= n:
        raise ValueError("m must be > n for the harmonic family")
    p = n // 2
    i = np.arange(m, dtype=np.float64)[:, None]
    j = np.arange(1, p + 1, dtype=np.float64)[None, :]
    angles = (2.0 * math.pi / m) * i * j
    vecs = np.empty((m, n))
    scale = math.sqrt(2.0 / n)
    if n % 2 == 0:
        vecs[:, 0::2] = scale * np.cos(angles)
        vecs[:, 1::2] = scale * np.sin(angles)
    else:
        vecs[:, 0] = 1.0 / math.sqrt(n)
        vecs[:, 1::2] = scale * np.cos(angles)
        vecs[:, 2::2] = scale * np.sin(angles)
    f = Frame(vecs, kind="harmonic")
    norms = np.sqrt(np.einsum("ij,ij->i", f.vectors, f.vectors))
    if np.abs(norms - 1.0).max() > 1e-12:
        raise ValueError("harmonic construction failed the unit-norm check")
    defect = tightness_defect(f)
    if defect > TIGHTNESS_TOL:
        raise ValueError(
            f"harmonic construction failed the tightness check: defect {defect:.3e}"
        )
    return f


def random_sphere_frame(n: int, m: int, seed: int) -> Frame:
    """m independent uniform unit vectors in R^n from the seeded stream."""
    n = _as_int(n, "n")
    m = _as_int(m, "m")
    if n < 1:
        raise ValueError("n must be ≥ 1")
    if m < n:
        raise ValueError("frame needs m ≥ n vectors")
    # Reserved stream id: trial loops use stream ids counted from 0, so the
    # frame draw can share a base seed with them without stream collision.
    gen = RngSpec(int(seed), FRAME_STREAM).generator()
    vecs = gen.standard_normal((m, n))
    norms = np.sqrt(np.einsum("ij,ij->i", vecs, vecs))
    if norms.min() <= 0.0:
        raise ValueError("degenerate Gaussian draw: zero-length vector")
    return Frame(vecs / norms[:, None], kind="random_sphere")


def repeated_basis_frame(n: int, s: int) -> Frame:
    """The trivial frame: each standard basis vector repeated s times.

    Vector index i holds e_{i mod n}, so the s copies are interleaved.
    """
    n = _as_int(n, "n")
    s = _as_int(s, "s")
    if n < 1:
        raise ValueError("n must be ≥ 1")
    if s < 1:
        raise ValueError("s must be ≥ 1")
    return Frame(np.tile(np.eye(n), (s, 1)), kind="repeated_basis")


def frame_bounds(f: Frame) -> FrameBounds:
    """Frame bounds (A, B): extreme eigenvalues of Σ x_i ⊗ x_i (unnormalized)."""
    if f._bounds is not None:
        return f._bounds
    eigs = linalg.eigenvalues_sym(
        linalg.rank_one_sum(f.vectors, np.ones(f.m))
    )
    lower = float(eigs[-1])
    upper = float(eigs[0])
    if lower <= SPAN_TOL:
        raise ValueError("not a frame: vectors do not span")
    bounds = FrameBounds(lower=lower, upper=upper)
    f._bounds = bounds
    return bounds


def tightness_defect(f: Frame) -> float:
    """Spectral norm of id − (n/m) Σ x_i ⊗ x_i; zero exactly for tight frames."""
    op = linalg.rank_one_sum(f.vectors, np.full(f.m, f.n / f.m))
    return linalg.spectral_norm(linalg.SymOperator(np.eye(op.dim) - op.entries))


def save_frame(f: Frame, path) -> None:
    """Write ``f`` in the v1 text format (17 significant digits per entry)."""
    lines = [f"frame v1 n={f.n} m={f.m} kind={f.kind}"]
    for row in f.vectors:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def load_frame(path) -> Frame:
    """Read a frame from the v1 text format, validating norms and span."""
    with open(path, "r", encoding="utf-8") as handle:
        raw = handle.read()
    lines = raw.splitlines()
    if not lines:
        raise ValueError("line 1: empty file, expected frame header")
    header = lines[0].split()
    if (
        len(header) != 5
        or header[0] != "frame"
        or header[1] != "v1"
        or not header[2].startswith("n=")
        or not header[3].startswith("m=")
        or not header[4].startswith("kind=")
    ):
        raise ValueError("line 1: malformed header, expected 'frame v1 n=<n> m=<m> kind=<tag>'")
    try:
        n = int(header[2][2:])
        m = int(header[3][2:])
    except ValueError as exc:
        raise ValueError("line 1: n and m must be integers") from exc
    kind = header[4][5:]
    if kind not in FRAME_KINDS:
        raise ValueError(f"line 1: unknown kind {kind!r}")
    if n < 1:
        raise ValueError("line 1: n must be ≥ 1")
    if m < n:
        raise ValueError("line 1: m < n is not a frame")
    body = [line for line in lines[1:] if line.strip() != ""]
    if len(body) != m:
        raise ValueError(f"expected {m} vector lines, found {len(body)}")
    vecs = np.empty((m, n))
    for i, line in enumerate(body):
        fields = line.split()
        if len(fields) != n:
            raise ValueError(f"line {i + 2}: expected {n} fields, got {len(fields)}")
        for j, field in enumerate(fields):
            try:
                vecs[i, j] = float(field)
            except ValueError as exc:
                raise ValueError(f"line {i + 2}, field {j + 1}: not a number: {field!r}") from exc
    f = Frame(vecs, kind=kind)
    frame_bounds(f)  # raises "not a frame: vectors do not span" when degenerate
    return f


def _as_int(value, name: str) -> int:
    if isinstance(value, bool) or int(value) != value:
        raise ValueError(f"{name} must be an integer")
    return int(value)
