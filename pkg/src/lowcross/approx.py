"""Epsilon-approximations by iterated halving along low-discrepancy
colorings.

Halving j times keeps ceil(n/2^j) elements; the per-round error of keeping
half the elements along a coloring with discrepancy D on the survivor
system is at most 2D/n, and errors of nested approximations add.  The
round count

    j = floor( log2 n + min{ 2/(2-gamma) * log2( eps sqrt(gamma) / (30 sqrt(a ln m)) ),
                             log2( eps / (12 sqrt((b/2 + 12 ln m) ln m log2 n)) ) } )

balances the two error regimes; when it is not positive the requested eps
is unreachable for this n and the whole ground set is returned unchanged.

For systems of bounded VC dimension a uniform presample of
ceil(4 C_apx d_vc / eps^2) elements brings the expected error to eps/2 and
the halving pipeline runs on the sample with target eps/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AssumptionParams, SetSystem
from .discrepancy import Coloring, low_disc_color
from .matching import DEFAULT_CONFIG, MwuConfig, _member_cols

__all__ = [
    "ApproxResult",
    "DEFAULT_C_APX",
    "eps_error",
    "larger_color_class",
    "positive_class_half",
    "halving_rounds",
    "approx_size_bound",
    "approximate",
    "uniform_sample_size",
    "vc_bootstrap_approximate",
    "calibrate_c_apx",
]

DEFAULT_C_APX = 0.5


@dataclass
class ApproxResult:
    subset: np.ndarray
    eps_measured: float
    rounds: int
    noop: bool = False

    def __post_init__(self):
        self.subset = np.asarray(self.subset, dtype=np.int64)


def eps_error(subset: np.ndarray, system: SetSystem, chunk: int = 256) -> float:
    """max over ranges S of | |S|/n - |A cap S| / |A| |."""
    subset = np.asarray(subset, dtype=np.int64)
    if subset.size == 0:
        raise ValueError("approximation subset must be nonempty")
    if subset.min() < 0 or subset.max() >= system.n:
        raise ValueError("subset indices out of bounds")
    system.calls.membership += system.m * (system.n + subset.size)
    n = system.n
    a = subset.size
    worst = 0.0
    for lo in range(0, system.m, chunk):
        ss = np.arange(lo, min(lo + chunk, system.m))
        cols = _member_cols(system, ss)
        full = cols.sum(axis=0) / n
        part = cols[subset].sum(axis=0) / a
        if full.size:
            worst = max(worst, float(np.abs(full - part).max()))
    return worst


def larger_color_class(coloring: Coloring) -> np.ndarray:
    """ceil(n/2) indices from the larger sign class (ties favor +1),
    padded with the lowest-index elements of the other class if short."""
    pos = np.flatnonzero(coloring.signs > 0)
    neg = np.flatnonzero(coloring.signs < 0)
    if neg.size > pos.size:
        pos, neg = neg, pos
    return _pad_to_half(pos, neg, coloring.n)


def positive_class_half(coloring: Coloring) -> np.ndarray:
    """ceil(n/2) indices biased to the +1 class, padded deterministically
    from the lowest-index -1 elements when the +1 class is short."""
    pos = np.flatnonzero(coloring.signs > 0)
    neg = np.flatnonzero(coloring.signs < 0)
    return _pad_to_half(pos, neg, coloring.n)


def _pad_to_half(take: np.ndarray, other: np.ndarray, n: int) -> np.ndarray:
    target = (n + 1) // 2
    if take.size >= target:
        return take[:target]
    return np.sort(np.concatenate([take, other[: target - take.size]]))


def halving_rounds(n: int, params: AssumptionParams, eps: float, m: int) -> int:
    """Round count for the halving pipeline; nonpositive means eps is
    unreachable at this n."""
    a, b, gamma = params.a, params.b, params.gamma
    lm = math.log(m)
    log2n = math.log2(n)
    branch_poly = (2.0 / (2.0 - gamma)) * math.log2(
        eps * math.sqrt(gamma) / (30.0 * math.sqrt(a * lm))
    )
    branch_log = math.log2(eps / (12.0 * math.sqrt((b / 2.0 + 12.0 * lm) * lm * log2n)))
    return math.floor(log2n + min(branch_poly, branch_log))


def approx_size_bound(n: int, params: AssumptionParams, eps: float, m: int) -> float:
    """Size guarantee matching :func:`halving_rounds`:
    2 max{ (30 sqrt(a ln m / gamma) / eps)^(2/(2-gamma)),
           12 sqrt((b/2 + 12 ln m) ln m log2 n) / eps } + 1."""
    a, b, gamma = params.a, params.b, params.gamma
    lm = math.log(m)
    log2n = math.log2(n)
    poly = (30.0 * math.sqrt(a * lm / gamma) / eps) ** (2.0 / (2.0 - gamma))
    logt = 12.0 * math.sqrt((b / 2.0 + 12.0 * lm) * lm * log2n) / eps
    return 2.0 * max(poly, logt) + 1.0


def approximate(
    system: SetSystem,
    params: AssumptionParams,
    eps: float,
    rng,
    *,
    config: MwuConfig = DEFAULT_CONFIG,
) -> ApproxResult:
    """Subset A with expected eps(A, X) <= eps, built by halving along the
    +1 class of successive low-discrepancy colorings."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if system.m < 34:
        raise ValueError(f"need at least 34 ranges, got {system.m}")
    n = system.n
    j = halving_rounds(n, params, eps, system.m)
    if j <= 0:
        subset = np.arange(n, dtype=np.int64)
        return ApproxResult(subset=subset, eps_measured=eps_error(subset, system),
                            rounds=0, noop=True)
    subset = np.arange(n, dtype=np.int64)
    for _ in range(j):
        sub = system.restrict(subset)
        coloring = low_disc_color(sub, params, rng, config=config)
        subset = subset[positive_class_half(coloring)]
    return ApproxResult(subset=subset, eps_measured=eps_error(subset, system), rounds=j)


def uniform_sample_size(eps: float, d_vc: float, c_apx: float = DEFAULT_C_APX) -> int:
    """Sample size ceil(4 c_apx d_vc / eps^2) making the expected uniform-
    sample error at most eps/2."""
    return math.ceil(4.0 * c_apx * d_vc / eps**2)


def vc_bootstrap_approximate(
    system: SetSystem,
    params: AssumptionParams,
    eps: float,
    d_vc: float,
    rng,
    *,
    c_apx: float = DEFAULT_C_APX,
    config: MwuConfig = DEFAULT_CONFIG,
) -> ApproxResult:
    """Uniform presample to expected error eps/2, then halve the sample to
    expected error eps/2; the composition is an eps-approximation."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if d_vc < 2:
        raise ValueError(f"VC dimension must be at least 2, got {d_vc}")
    size0 = min(system.n, uniform_sample_size(eps, d_vc, c_apx))
    if size0 >= system.n:
        return approximate(system, params, eps, rng, config=config)
    base = np.sort(rng.choice(system.n, size=size0, replace=False))
    inner = approximate(system.restrict(base), params, eps / 2.0, rng, config=config)
    subset = base[inner.subset]
    return ApproxResult(
        subset=subset,
        eps_measured=eps_error(subset, system),
        rounds=inner.rounds,
        noop=inner.noop,
    )


def calibrate_c_apx(
    reference_systems,
    d_vc: float,
    eps: float,
    rng,
    candidates=(0.25, 0.5, 1.0, 2.0),
    trials: int = 20,
    success_rate: float = 0.9,
) -> float:
    """Smallest candidate constant whose uniform-sample size meets the
    eps/2 target on at least the given fraction of seeded trials."""
    for cand in sorted(candidates):
        hits = 0
        for _ in range(trials):
            ok = True
            for system in reference_systems:
                size = min(system.n, uniform_sample_size(eps, d_vc, cand))
                sample = np.sort(rng.choice(system.n, size=size, replace=False))
                if eps_error(sample, system) > eps / 2.0:
                    ok = False
                    break
            hits += ok
        if hits >= success_rate * trials:
            return cand
    return max(candidates)
