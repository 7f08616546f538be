"""Monte Carlo verification of the reconstruction guarantees.

The quantitative story being checked: encode with a uniform tight frame,
lose coefficients at random, reconstruct linearly. The deviation operator
Δ = id − (n/|σ|) Σ_{i∈σ} x_i⊗x_i controls the worst-case error, its norm
concentrates once the expected received count k passes ~n log n, and the
trivial frame (repeated basis) shows the n log n cannot be improved because
it is already a coupon-collector coverage requirement.

Also here: the two operator-norm inequalities the theory rests on
(a Rademacher-sign moment bound for rank-one sums and the noncommutative
Khinchine sandwich), checked empirically with measured constants, and the
Bernstein concentration of the received count.

Conventions shared by every estimator:
  trial t of an experiment seeded with ``seed`` draws from the stream
  (seed, offset + t); probability estimates carry 95% Wilson intervals;
  degenerate trials (empty σ) count as failures/exceedances.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channel import RngSpec, bernoulli_select, fixed_select
from .frames import (
    Frame,
    harmonic_frame,
    random_sphere_frame,
    repeated_basis_frame,
    tightness_defect,
)

Z95 = 1.959963984540054

TIGHTNESS_WARN_TOL = 1e-8

# Bisection stops when the bracketing k-interval is within this relative
# width; success at a grid point means the Wilson lower bound on the success
# probability clears the target minus this slack.
THRESHOLD_RELATIVE_WIDTH = 0.05
THRESHOLD_CI_SLACK = 0.02


def wilson_interval(successes: int, trials: int) -> tuple:
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be ≥ 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    z2 = Z95 * Z95
    phat = successes / trials
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2.0 * trials)) / denom
    half = (Z95 / denom) * math.sqrt(
        phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials)
    )
    # the score interval always contains phat (equality at counts 0 and
    # trials); the min/max repair rounding at those boundaries
    return (
        max(0.0, min(center - half, phat)),
        min(1.0, max(center + half, phat)),
    )


@dataclass(frozen=True)
class TailEstimate:
    """Empirical P{deviation_norm > epsilon * t} at one grid point."""

    k: float
    epsilon: float
    t: float
    trials: int
    empirical_prob: float
    ci_low: float
    ci_high: float
    mean_deviation_norm: float

    def __post_init__(self):
        ok = (
            0.0 <= self.ci_low <= self.empirical_prob <= self.ci_high <= 1.0
        )
        if not ok:
            raise ValueError("confidence interval must bracket the estimate")


@dataclass(frozen=True)
class ThresholdResult:
    """Smallest k meeting a success-probability target, with grid evidence.

    search_grid holds one TailEstimate per evaluated k, at t = 1, so
    empirical_prob is the failure rate P{deviation_norm > epsilon} and the
    success rate is its complement.
    """

    n: int
    epsilon: float
    success_prob: float
    k_star: float
    trials: int
    seed: int
    search_grid: tuple


@dataclass(frozen=True)
class ScalingRow:
    n: int
    k_star: float
    n_log_n: float
    ratio: float


@dataclass(frozen=True)
class ScalingResult:
    """k_star versus n log n across dimensions, with a through-origin fit."""

    rows: tuple
    slope: float
    epsilon: float
    success_prob: float
    trials: int
    seed: int


@dataclass(frozen=True)
class RudelsonCheckResult:
    """Measured constant for the rank-one Rademacher moment inequality."""

    d: int
    p: float
    trials: int
    lhs: float
    rhs_factor: float
    ratio: float


@dataclass(frozen=True)
class KhinchineCheckResult:
    """Both sides of the noncommutative Khinchine sandwich.

    middle is (E ‖Σ ε_i Z_i‖_{C_p}^p)^{1/p}; r_value is the square-function
    term ‖(Σ Z_i²)^{1/2}‖_{C_p}. exact is set when all sign patterns were
    enumerated, making middle an expectation rather than an estimate.
    """

    d: int
    p: float
    operator_count: int
    trials: int
    exact: bool
    middle: float
    r_value: float
    lower_ratio: float
    upper_ratio: float
    rel_se: float


@dataclass(frozen=True)
class BernsteinPoint:
    s: float
    empirical_prob: float
    bound: float
    std_error: float


@dataclass(frozen=True)
class BernsteinResult:
    m: int
    k: float
    trials: int
    seed: int
    points: tuple


@dataclass(frozen=True)
class CoverageCheck:
    """Fraction of random patterns hitting every basis direction."""

    n: int
    s: int
    k: float
    trials: int
    empirical: float
    ci_low: float
    ci_high: float
    closed_form: float


@dataclass(frozen=True)
class EncodeDecodeResult:
    """Aggregates of full encode/erase/reconstruct trials on unit sources."""

    k: float
    trials: int
    mode: str
    seed: int
    mean_error: float
    max_error: float
    mean_deviation_norm: float
    max_deviation_norm: float
    degenerate_trials: int
    bound_violations: int


def moment_estimate(samples, p: float) -> float:
    """(mean of s^p)^(1/p) over a nonempty nonnegative sample set."""
    arr = np.asarray(samples, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] == 0:
        raise ValueError("empty sample list")
    if not np.isfinite(arr).all():
        raise ValueError("samples must be finite")
    if arr.min() < 0.0:
        raise ValueError("samples must be nonnegative")
    p = float(p)
    if not p >= 1.0:
        raise ValueError("p must be ≥ 1")
    top = float(arr.max())
    if top == 0.0:
        return 0.0
    # scale by the max so large p cannot overflow
    return float(top * np.power(np.power(arr / top, p).mean(), 1.0 / p))


def resolve_frame_family(family, n: int, seed: int) -> Frame:
    """Turn a family designator into a concrete frame of dimension n.

    Accepts a Frame (dimension must match), a callable n -> Frame, or a
    name: "harmonic" (m = 64n), "repeated-basis" (s = 100), or "sphere"
    (m = 64n, drawn from the experiment seed's reserved stream).
    """
    if isinstance(family, Frame):
        if family.n != n:
            raise ValueError("frame dimension does not match n")
        return family
    if callable(family):
        f = family(n)
        if not isinstance(f, Frame):
            raise ValueError("frame family callable must return a Frame")
        if f.n != n:
            raise ValueError("frame dimension does not match n")
        return f
    if isinstance(family, str):
        name = family.strip().lower().replace("_", "-")
        if name == "harmonic":
            return harmonic_frame(n, 64 * n)
        if name in ("repeated-basis", "trivial"):
            return repeated_basis_frame(n, 100)
        if name in ("sphere", "random-sphere"):
            return random_sphere_frame(n, 64 * n, seed)
        raise ValueError(f"unknown frame family {family!r}")
    raise ValueError("frame family must be a Frame, a callable, or a name")


def _select(f: Frame, k: float, mode: str, rng: RngSpec):
    if mode == "bernoulli":
        return bernoulli_select(f.m, k, rng)
    if mode == "fixed":
        return fixed_select(f.m, k, rng)
    raise ValueError(f"unknown sampling mode {mode!r}")


def _deviation_norms(
    f: Frame, k: float, trials: int, seed: int, mode: str, stream_offset: int = 0
) -> np.ndarray:
    """Per-trial ‖Δ‖ for independent random patterns; degenerate trials → 1.

    Builds all deviation matrices first and eigensolves them as one batch,
    which is where the wall-clock goes for every tail/threshold estimate.
    """
    n = f.n
    mats = np.empty((trials, n, n))
    devs = np.empty(trials)
    eye = np.eye(n)
    live = []
    for t in range(trials):
        pattern = _select(f, k, mode, RngSpec(seed, stream_offset + t))
        if pattern.size == 0:
            devs[t] = 1.0
            continue
        sub = f.vectors[pattern.indices()]
        gram = sub.T @ sub
        # exact symmetry before the eigensolver
        mats[len(live)] = eye - (n / pattern.size) * (0.5 * (gram + gram.T))
        live.append(t)
    if live:
        devs[np.asarray(live)] = linalg.spectral_norm_batch(mats[: len(live)])
    return devs


def tail_estimate(
    f: Frame,
    k: float,
    epsilon: float,
    t_grid,
    trials: int,
    seed: int,
    mode: str = "bernoulli",
) -> list:
    """Empirical exceedance probabilities P{‖Δ‖ > ε·t} over a t grid.

    One Monte Carlo pass is shared by all grid points. Values t ≥ 1/ε fall
    outside the regime the tail guarantee speaks about; they are estimated
    and reported all the same.
    """
    if not isinstance(f, Frame):
        raise ValueError("f must be a Frame")
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be in (0, 1)")
    trials = int(trials)
    if trials < 100:
        raise ValueError("trials must be ≥ 100")
    grid = [float(t) for t in t_grid]
    if not grid:
        raise ValueError("empty t grid")
    if any(not math.isfinite(t) or t <= 0.0 for t in grid):
        raise ValueError("t values must be positive and finite")
    k = float(k)
    if mode == "bernoulli" and not 0.0 < k < f.m:
        raise ValueError("k must lie in (0, m) for bernoulli selection")
    if mode == "fixed" and not (int(k) == k and 1 <= k <= f.m):
        raise ValueError("k must lie in [1, m] for fixed selection")
    defect = tightness_defect(f)
    if defect > TIGHTNESS_WARN_TOL:
        warnings.warn(
            f"frame is not tight (defect {defect:.3e}); "
            "tail guarantees do not apply",
            stacklevel=2,
        )
    devs = _deviation_norms(f, k, trials, seed, mode)
    mean_dev = float(devs.mean())
    out = []
    for t in grid:
        exceed = int((devs > epsilon * t).sum())
        lo, hi = wilson_interval(exceed, trials)
        out.append(
            TailEstimate(
                k=float(k),
                epsilon=epsilon,
                t=t,
                trials=trials,
                empirical_prob=exceed / trials,
                ci_low=lo,
                ci_high=hi,
                mean_deviation_norm=mean_dev,
            )
        )
    return out


def threshold_search(
    frame_family, n: int, epsilon: float, success_prob: float, trials: int, seed: int
) -> ThresholdResult:
    """Smallest Bernoulli k whose success rate P{‖Δ‖ ≤ ε} meets the target.

    Doubling until the first success, then bisection; a grid point succeeds
    when the Wilson lower bound on its success rate reaches
    success_prob − 0.02. Each evaluated k consumes its own block of trial
    streams, so re-running with one seed reproduces the whole search.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be ≥ 1")
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be in (0, 1)")
    success_prob = float(success_prob)
    if not 0.0 < success_prob < 1.0:
        raise ValueError("success_prob must be in (0, 1)")
    trials = int(trials)
    if trials < 100:
        raise ValueError("trials must be ≥ 100")
    f = resolve_frame_family(frame_family, n, seed)
    if f.m < 2:
        raise ValueError("frame too small for target")

    grid = []

    def evaluate(k: float) -> bool:
        point = len(grid)
        devs = _deviation_norms(f, k, trials, seed, "bernoulli", point * trials)
        exceed = int((devs > epsilon).sum())
        lo, hi = wilson_interval(exceed, trials)
        grid.append(
            TailEstimate(
                k=float(k),
                epsilon=epsilon,
                t=1.0,
                trials=trials,
                empirical_prob=exceed / trials,
                ci_low=lo,
                ci_high=hi,
                mean_deviation_norm=float(devs.mean()),
            )
        )
        # success rate CI lower bound = 1 - failure rate CI upper bound
        return (1.0 - hi) >= success_prob - THRESHOLD_CI_SLACK

    k_cap = float(f.m - 1)
    k_lo = 0.0
    k = min(float(max(1, n)), k_cap)
    while True:
        if evaluate(k):
            k_hi = k
            break
        k_lo = k
        if k >= k_cap:
            raise ValueError("frame too small for target")
        k = min(2.0 * k, k_cap)
    while (k_hi - k_lo) > THRESHOLD_RELATIVE_WIDTH * k_hi:
        mid = 0.5 * (k_lo + k_hi)
        if evaluate(mid):
            k_hi = mid
        else:
            k_lo = mid

    by_k = sorted(grid, key=lambda est: est.k)
    for a, b in zip(by_k, by_k[1:]):
        # success rate must be non-decreasing in k up to CI overlap
        if (1.0 - a.ci_high) > (1.0 - b.ci_low):
            raise RuntimeError(
                "success rate not monotone in k beyond confidence intervals"
            )
    return ThresholdResult(
        n=n,
        epsilon=epsilon,
        success_prob=success_prob,
        k_star=float(k_hi),
        trials=trials,
        seed=int(seed),
        search_grid=tuple(grid),
    )


def scaling_study(
    frame_family, n_list, epsilon: float, success_prob: float, trials: int, seed: int
) -> ScalingResult:
    """k_star across dimensions, fitted against n·ln n through the origin."""
    ns = [int(v) for v in n_list]
    if not ns:
        raise ValueError("n_list must be nonempty")
    if any(a >= b for a, b in zip(ns, ns[1:])):
        raise ValueError("n_list must be strictly ascending")
    if ns[0] < 2:
        raise ValueError("n must be ≥ 2 for the n·ln n ratio")
    rows = []
    for index, n in enumerate(ns):
        res = threshold_search(
            frame_family, n, epsilon, success_prob, trials, seed + index
        )
        n_log_n = n * math.log(n)
        rows.append(
            ScalingRow(
                n=n,
                k_star=res.k_star,
                n_log_n=n_log_n,
                ratio=res.k_star / n_log_n,
            )
        )
    x = np.array([r.n_log_n for r in rows])
    y = np.array([r.k_star for r in rows])
    slope = float((x * y).sum() / (x * x).sum())
    return ScalingResult(
        rows=tuple(rows),
        slope=slope,
        epsilon=float(epsilon),
        success_prob=float(success_prob),
        trials=int(trials),
        seed=int(seed),
    )


def _sign_matrix(count: int, width: int, seed: int) -> np.ndarray:
    """count rows of i.i.d. ±1 signs, row t from stream (seed, t)."""
    signs = np.empty((count, width))
    for t in range(count):
        gen = RngSpec(seed, t).generator()
        signs[t] = gen.integers(0, 2, size=width) * 2.0 - 1.0
    return signs


def _all_sign_patterns(width: int) -> np.ndarray:
    codes = np.arange(2**width, dtype=np.int64)[:, None]
    bits = (codes >> np.arange(width, dtype=np.int64)[None, :]) & 1
    return bits * 2.0 - 1.0


def rudelson_check(vectors, p: float, trials: int, seed: int) -> RudelsonCheckResult:
    """Measure the constant in the Rademacher moment bound for rank-one sums.

    lhs = (E ‖Σ ε_i z_i⊗z_i‖^p)^{1/p} estimated over random signs;
    rhs_factor = sqrt(p + log d) · max‖z_i‖ · ‖Σ z_i⊗z_i‖^{1/2}. The claim
    under test is lhs ≤ C · rhs_factor with C absolute; ratio reports the
    measured C.
    """
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        z = np.asarray(vectors, dtype=np.float64)
    else:
        rows = [linalg.as_vector(v) for v in vectors]
        if not rows:
            raise ValueError("empty vector list")
        if len({r.shape[0] for r in rows}) != 1:
            raise ValueError("dimension mismatch")
        z = np.asarray(rows)
    if z.shape[0] == 0:
        raise ValueError("empty vector list")
    if not np.isfinite(z).all():
        raise ValueError("vector entries must be finite")
    p = float(p)
    if not p >= 2.0:
        raise ValueError("p must be ≥ 2")
    trials = int(trials)
    if trials < 1000:
        raise ValueError("trials must be ≥ 1000")
    count, d = z.shape
    outers = np.einsum("nd,ne->nde", z, z)
    total = linalg.SymOperator(outers.sum(axis=0))
    max_norm = float(np.sqrt(np.einsum("ij,ij->i", z, z)).max())
    rhs_factor = (
        math.sqrt(p + math.log(d)) * max_norm * math.sqrt(linalg.spectral_norm(total))
    )
    if rhs_factor == 0.0:
        raise ValueError("vectors are all zero")
    signs = _sign_matrix(trials, count, seed)
    signed_sums = np.tensordot(signs, outers, axes=(1, 0))
    norms = linalg.spectral_norm_batch(signed_sums)
    lhs = moment_estimate(norms, p)
    return RudelsonCheckResult(
        d=d,
        p=p,
        trials=trials,
        lhs=lhs,
        rhs_factor=rhs_factor,
        ratio=lhs / rhs_factor,
    )


def khinchine_check(operators, p: float, trials: int, seed: int) -> KhinchineCheckResult:
    """Check the noncommutative Khinchine sandwich on a family of operators.

    Computes the square-function term R = ‖(Σ Z_i²)^{1/2}‖_{C_p} exactly and
    the middle term (E ‖Σ ε_i Z_i‖_{C_p}^p)^{1/p} over random signs; when
    2^count ≤ trials the sign patterns are enumerated instead, making the
    middle term exact. The lower inequality middle ≥ R (up to Monte Carlo
    error) is asserted here; the upper constant is only measured.
    """
    ops = list(operators)
    if not ops:
        raise ValueError("empty operator list")
    for op in ops:
        if not isinstance(op, linalg.SymOperator):
            raise ValueError("operators must be SymOperator instances")
    if len({op.dim for op in ops}) != 1:
        raise ValueError("dimension mismatch")
    p = float(p)
    if not p >= 2.0:
        raise ValueError("p must be ≥ 2")
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be ≥ 1")
    count = len(ops)
    d = ops[0].dim
    stack = np.stack([op.entries for op in ops])

    square_sum = linalg.SymOperator(np.einsum("nij,njk->ik", stack, stack))
    lam = linalg.eigenvalues_sym(square_sum)
    lam = np.clip(lam, 0.0, None)
    top = float(lam.max())
    if top == 0.0:
        raise ValueError("operators are all zero")
    r_value = float(math.sqrt(top) * np.power(np.power(lam / top, p / 2.0).sum(), 1.0 / p))

    exact = count <= 20 and 2**count <= trials
    if exact:
        signs = _all_sign_patterns(count)
    else:
        if trials < 100:
            raise ValueError("trials must be ≥ 100 for the sign Monte Carlo")
        signs = _sign_matrix(trials, count, seed)
    signed_sums = np.tensordot(signs, stack, axes=(1, 0))
    eigs = linalg.eigenvalues_sym_batch(signed_sums)
    mags = np.abs(eigs)
    scale = float(mags.max())
    if scale == 0.0:
        raise ValueError("operators are all zero")
    powers = np.power(mags / scale, p).sum(axis=1)
    mean_power = float(powers.mean())
    middle = float(scale * math.pow(mean_power, 1.0 / p))
    if exact:
        rel_se = 0.0
    else:
        se_mean = float(powers.std(ddof=1)) / math.sqrt(signs.shape[0])
        rel_se = se_mean / (mean_power * p)
    if middle < r_value * (1.0 - 3.0 * rel_se) - 1e-12:
        raise RuntimeError(
            f"Khinchine lower bound violated: middle {middle:.6g} "
            f"below square-function term {r_value:.6g}"
        )
    return KhinchineCheckResult(
        d=d,
        p=p,
        operator_count=count,
        trials=int(signs.shape[0]),
        exact=exact,
        middle=middle,
        r_value=r_value,
        lower_ratio=middle / r_value,
        upper_ratio=middle / (math.sqrt(p) * r_value),
        rel_se=rel_se,
    )


def bernstein_check(m: int, k: float, s_grid, trials: int, seed: int) -> BernsteinResult:
    """Concentration of the received count around its mean.

    Empirical P{||σ| − k| > s} against the analytic bound 2·exp(−s²/8k),
    valid for 0 < s ≤ 2k.
    """
    m = int(m)
    if m < 1:
        raise ValueError("m must be ≥ 1")
    k = float(k)
    if not 0.0 < k < m:
        raise ValueError("k must lie in (0, m) for bernoulli selection")
    trials = int(trials)
    if trials < 10**4:
        raise ValueError("trials must be ≥ 10000")
    grid = [float(s) for s in s_grid]
    if not grid:
        raise ValueError("empty s grid")
    for s in grid:
        if not math.isfinite(s) or s <= 0.0:
            raise ValueError("s values must be positive and finite")
        if s > 2.0 * k:
            raise ValueError("s must be ≤ 2k")
    sizes = np.empty(trials)
    for t in range(trials):
        sizes[t] = bernoulli_select(m, k, RngSpec(seed, t)).size
    points = []
    for s in grid:
        emp = float((np.abs(sizes - k) > s).mean())
        bound = 2.0 * math.exp(-s * s / (8.0 * k))
        se = math.sqrt(emp * (1.0 - emp) / trials)
        points.append(
            BernsteinPoint(s=s, empirical_prob=emp, bound=bound, std_error=se)
        )
    return BernsteinResult(
        m=m, k=k, trials=trials, seed=int(seed), points=tuple(points)
    )


def coverage_probability(n: int, s: int, k: float) -> float:
    """Closed-form P{every direction of the repeated basis is received}.

    With m = n·s coefficients kept independently with probability k/m, each
    direction has s copies, so coverage is (1 − (1 − k/m)^s)^n.
    """
    n = int(n)
    s = int(s)
    if n < 1:
        raise ValueError("n must be ≥ 1")
    if s < 1:
        raise ValueError("s must be ≥ 1")
    m = n * s
    k = float(k)
    if not 0.0 < k < m:
        raise ValueError("k must lie in (0, m) for bernoulli selection")
    return float((1.0 - (1.0 - k / m) ** s) ** n)


def coverage_threshold(n: int, s: int, success_prob: float) -> float:
    """Smallest k whose closed-form coverage probability meets the target."""
    success_prob = float(success_prob)
    if not 0.0 < success_prob < 1.0:
        raise ValueError("success_prob must be in (0, 1)")
    n = int(n)
    s = int(s)
    if n < 1 or s < 1:
        raise ValueError("n and s must be ≥ 1")
    m = n * s
    lo, hi = 0.0, float(m)
    # closed form is increasing in k; plain bisection to fixed resolution
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or mid >= m:
            break
        if coverage_probability(n, s, mid) >= success_prob:
            hi = mid
        else:
            lo = mid
    return hi


def coverage_check(n: int, s: int, k: float, trials: int, seed: int) -> CoverageCheck:
    """Monte Carlo coverage of the repeated basis versus the closed form."""
    closed = coverage_probability(n, s, k)  # validates n, s, k
    trials = int(trials)
    if trials < 100:
        raise ValueError("trials must be ≥ 100")
    n = int(n)
    s = int(s)
    m = n * s
    hits = 0
    for t in range(trials):
        pattern = bernoulli_select(m, k, RngSpec(seed, t))
        if pattern.size < n:
            continue
        directions = np.unique(pattern.indices() % n)
        if directions.shape[0] == n:
            hits += 1
    lo, hi = wilson_interval(hits, trials)
    return CoverageCheck(
        n=n,
        s=s,
        k=float(k),
        trials=trials,
        empirical=hits / trials,
        ci_low=lo,
        ci_high=hi,
        closed_form=closed,
    )


def encode_decode_trials(
    f: Frame, k: float, trials: int, seed: int, mode: str = "bernoulli"
) -> EncodeDecodeResult:
    """Full pipeline on random unit sources: encode, erase, reconstruct.

    Trial t draws its pattern from stream 2t and its source from 2t+1.
    Verifies ‖x − x̂‖ ≤ ‖Δ‖·‖x‖ (with 1e-10 slack) on every trial and
    reports how often it failed, which should be never.
    """
    from . import codec

    if not isinstance(f, Frame):
        raise ValueError("f must be a Frame")
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be ≥ 1")
    errors = np.empty(trials)
    devs = np.empty(trials)
    degenerate = 0
    violations = 0
    for t in range(trials):
        pattern = _select(f, k, mode, RngSpec(seed, 2 * t))
        gen = RngSpec(seed, 2 * t + 1).generator()
        x = gen.standard_normal(f.n)
        norm = float(np.linalg.norm(x))
        if norm == 0.0:
            x = np.zeros(f.n)
            x[0] = 1.0
        else:
            x = x / norm
        outcome = codec.reconstruct(f, codec.encode(f, x), pattern)
        err = codec.reconstruction_error(x, outcome)
        errors[t] = err
        devs[t] = outcome.deviation_norm
        if outcome.degenerate:
            degenerate += 1
        if err > outcome.deviation_norm * (1.0 + 1e-10) + 1e-12:
            violations += 1
    return EncodeDecodeResult(
        k=float(k),
        trials=trials,
        mode=mode,
        seed=int(seed),
        mean_error=float(errors.mean()),
        max_error=float(errors.max()),
        mean_deviation_norm=float(devs.mean()),
        max_deviation_norm=float(devs.max()),
        degenerate_trials=degenerate,
        bound_violations=violations,
    )
