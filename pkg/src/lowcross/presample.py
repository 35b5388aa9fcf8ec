"""Accelerated variants that work on a random sample of candidate edges.

The presampled matching pipeline draws each candidate edge i.i.d. with

    p = min{ 2 ln n / n^(1-alpha) + 4 ln(2/delta) / n^(2-alpha), 1 }

(delta = 1/n per round), runs the partial reweighing step with parameters
((2c)^(1/d), ln m, 1 - alpha/d) for ceil(n/16) draws, and recurses on the
survivors while more than 16 remain.  Smaller alpha means fewer candidate
edges and fewer oracle calls at the price of a larger crossing number.

The relaxed tier walk keeps weights on ranges only: at step i it forms the
ceil(|X_i|^(2-alpha)) lightest surviving pairs by total weight of crossing
ranges, halts if the sample misses the tier, and otherwise picks a uniform
tier edge from the sample and doubles the weights of the ranges crossing
it.  On the grid instance the number of ranges crossing an edge equals the
l1 distance of its endpoints, which turns the halting analysis into edge
counting: if the sample holds at most n/8 edges of l1 length at most
(1/(16p))^(1/d), every n/4-edge subset contains at least n/8 longer edges
and some range crosses at least (n/8) (1/(16p))^(1/d) / m of them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .core import AssumptionParams, Edge, SetSystem
from .discrepancy import Coloring, color_from_matching
from .geometry import grid_instance, GeometricSetSystem
from .matching import (
    DEFAULT_CONFIG,
    InfeasibleSampleError,
    Matching,
    MwuConfig,
    _member_cols,
    _random_pairing,
    partial_matching,
)
from .weights import CompleteEdgeSet, ListEdgeSet, binomial_subset

__all__ = [
    "presample_probability",
    "matching_presampled",
    "low_disc_color_presampled",
    "relaxed_mwu",
    "GridLowerBoundCheck",
    "grid_lowerbound_check",
]

logger = logging.getLogger(__name__)


def presample_probability(n: int, alpha: float, delta: float) -> float:
    """Edge-sample rate min{2 ln n / n^(1-alpha) + 4 ln(2/delta) / n^(2-alpha), 1}."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    p = 2.0 * math.log(n) / n ** (1.0 - alpha) + 4.0 * math.log(2.0 / delta) / n ** (2.0 - alpha)
    return min(p, 1.0)


def _presample_params(c: float, d: float, m: int, alpha: float) -> AssumptionParams:
    if c <= 0 or d < 1:
        raise ValueError("need dual-shatter constants c > 0 and d >= 1")
    if alpha >= d:
        raise ValueError(f"need alpha < d, got alpha={alpha}, d={d}")
    return AssumptionParams(a=(2.0 * c) ** (1.0 / d), b=math.log(m), gamma=1.0 - alpha / d)


def matching_presampled(
    system: SetSystem,
    c: float,
    d: float,
    alpha: float,
    rng,
    *,
    config: MwuConfig = DEFAULT_CONFIG,
    sample_multiplier: float = 1.0,
) -> Matching:
    """Perfect matching from presampled candidate edges.

    Rounds with more than 16 survivors draw ceil(|X|/16) edges from an
    i.i.d. candidate sample; an exhausted round is retried once with the
    sample rate doubled and then falls back to the complete candidate set.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if system.m < 34:
        raise ValueError(f"need at least 34 ranges, got {system.m}")
    params = _presample_params(c, d, system.m, alpha)
    out: list[Edge] = []
    survivors = np.arange(system.n, dtype=np.int64)
    while survivors.size > 16:
        k = survivors.size
        t = math.ceil(k / 16)
        p = min(1.0, presample_probability(k, alpha, 1.0 / k) * sample_multiplier)
        sub = system.restrict(survivors)
        chosen = None
        for attempt, p_try in enumerate((p, min(1.0, 2.0 * p), None)):
            if p_try is None or p_try >= 1.0:
                edge_set = CompleteEdgeSet(k)
            else:
                edge_set = ListEdgeSet.from_complete_sample(k, p_try, rng)
                if edge_set.size == 0:
                    continue
            try:
                chosen = partial_matching(sub, edge_set, params, t, rng, config=config)
                break
            except InfeasibleSampleError:
                logger.warning(
                    "presampled round exhausted at |X|=%d (attempt %d); %s",
                    k,
                    attempt + 1,
                    "falling back to the complete edge set" if attempt == 1 else "retrying with doubled rate",
                )
        used = np.zeros(k, dtype=bool)
        for e in chosen:
            out.append(Edge.of(int(survivors[e.u]), int(survivors[e.v])))
            used[e.u] = used[e.v] = True
        survivors = survivors[~used]
    out.extend(_random_pairing(survivors, rng))
    return Matching(edges=out, n=system.n)


def low_disc_color_presampled(
    system: SetSystem,
    c: float,
    d: float,
    alpha: float,
    rng,
    *,
    config: MwuConfig = DEFAULT_CONFIG,
    sample_multiplier: float = 1.0,
) -> Coloring:
    """Coloring along a presampled low-crossing matching."""
    matching = matching_presampled(
        system, c, d, alpha, rng, config=config, sample_multiplier=sample_multiplier
    )
    return color_from_matching(matching, rng)


def relaxed_mwu(system: SetSystem, alpha: float, edge_sample, rng, *, return_weights=False):
    """Tier walk over a fixed candidate sample.

    ``edge_sample`` is an iterable of pairs (subset of all element pairs).
    Returns (chosen edges, halting time T): T = i-1 when the sample first
    misses the tier of lightest pairs at step i, and n//2 on completion.
    Range weights end at exactly 2^(number of chosen edges crossing them);
    pass return_weights to get them as a third value.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    n = system.n
    m = system.m
    pairs = CompleteEdgeSet(n) if n >= 2 else None
    if pairs is None:
        return ([], 0, np.ones(m)) if return_weights else ([], 0)
    n_pairs = pairs.size
    pu, pv = pairs.endpoint_arrays()

    # pair-by-range crossing matrix; this is the oracle work of the walk
    system.calls.incidence += n_pairs * m
    system.calls.membership += 2 * n_pairs * m
    cross = np.empty((n_pairs, m), dtype=bool)
    for lo in range(0, m, 256):
        ss = np.arange(lo, min(lo + 256, m))
        cols = _member_cols(system, ss)
        cross[:, ss] = cols[pu] != cols[pv]

    in_sample = np.zeros(n_pairs, dtype=bool)
    for e in edge_sample:
        u, v = (e.u, e.v) if isinstance(e, Edge) else (int(e[0]), int(e[1]))
        if u == v:
            raise ValueError("edge sample must not contain loops")
        in_sample[pairs.edge_id(u, v)] = True

    w_ranges = np.ones(m)
    pair_w = cross @ w_ranges
    pair_alive = np.ones(n_pairs, dtype=bool)
    chosen: list[Edge] = []
    for i in range(n // 2):
        k_i = n - 2 * i
        tier_size = math.ceil(k_i ** (2.0 - alpha))
        alive_ids = np.flatnonzero(pair_alive)
        tier_size = min(tier_size, alive_ids.size)
        if tier_size == 0:
            return (chosen, i, w_ranges) if return_weights else (chosen, i)
        tier_ids = alive_ids[_lightest(pair_w[alive_ids], tier_size)]
        candidates = tier_ids[in_sample[tier_ids]]
        if candidates.size == 0:
            return (chosen, i, w_ranges) if return_weights else (chosen, i)
        e_id = int(candidates[rng.integers(candidates.size)])
        u0, v0 = pairs.endpoints(e_id)
        crossed = np.flatnonzero(cross[e_id])
        if crossed.size:
            pair_w += cross[:, crossed] @ w_ranges[crossed]
            w_ranges[crossed] *= 2.0
        pair_alive[pairs.incident_ids(u0)] = False
        pair_alive[pairs.incident_ids(v0)] = False
        chosen.append(Edge.of(u0, v0))
    return (chosen, n // 2, w_ranges) if return_weights else (chosen, n // 2)


def _lightest(weights: np.ndarray, k: int) -> np.ndarray:
    """Positions of the k smallest weights; ties at the boundary go to the
    smaller position."""
    if k >= weights.size:
        return np.arange(weights.size)
    part = np.argpartition(weights, k - 1)[:k]
    threshold = weights[part].max()
    below = np.flatnonzero(weights < threshold)
    at = np.flatnonzero(weights == threshold)
    return np.concatenate([below, at[: k - below.size]])


@dataclass
class GridLowerBoundCheck:
    """Outcome of the sub-threshold sampling check on the grid instance."""

    applicable: bool
    holds: bool
    n: int
    m: int
    p: float
    alpha: float
    k_threshold: float
    good_edges_in_sample: int
    cap: float
    crossing_lower_bound: float


def grid_lowerbound_check(n0: int, d: int, alpha: float, p_fn, rng) -> GridLowerBoundCheck:
    """Sample the grid instance's pairs with rate p = p_fn(n) and count the
    sampled edges of l1 length at most k_p = (1/(16p))^(1/d).

    When the count is at most n/8, every n/4-edge subset of the sample has
    at least n/8 edges longer than k_p, so some range crosses at least
    (n/8) k_p / m of them.  Rates of at least 1/16 make k_p < 1 and the
    check is reported as not applicable.
    """
    points, ranges = grid_instance(n0, d)
    system = GeometricSetSystem(points, ranges)
    n = system.n
    p = float(p_fn(n))
    if not (0.0 < p <= 1.0):
        raise ValueError(f"sampling rate must lie in (0, 1], got {p}")
    if p >= 1.0 / 16.0:
        return GridLowerBoundCheck(
            applicable=False, holds=False, n=n, m=system.m, p=p, alpha=alpha,
            k_threshold=0.0, good_edges_in_sample=0, cap=n / 8.0,
            crossing_lower_bound=0.0,
        )
    k_thr = (1.0 / (16.0 * p)) ** (1.0 / d)
    pairs = CompleteEdgeSet(n)
    ids = binomial_subset(pairs.size, p, rng)
    i, j = pairs.endpoints_of(ids)
    l1 = np.abs(points[i] - points[j]).sum(axis=1)
    good = int(np.count_nonzero(l1 <= k_thr))
    holds = good <= n / 8.0
    return GridLowerBoundCheck(
        applicable=True,
        holds=holds,
        n=n,
        m=system.m,
        p=p,
        alpha=alpha,
        k_threshold=k_thr,
        good_edges_in_sample=good,
        cap=n / 8.0,
        crossing_lower_bound=(n / 8.0) * k_thr / system.m if holds else 0.0,
    )
