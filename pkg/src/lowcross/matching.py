"""Randomized primal-dual reweighing for perfect matchings with low
crossing number.

The partial step keeps multiplicative weights on candidate edges and on
ranges.  Each iteration samples one edge e and one range S proportionally
to the weights, halves the weights of an i.i.d. sample of edges crossed by
S, doubles the weights of an i.i.d. sample of ranges crossing e, and zeroes
e together with every adjacent edge.  The full construction repeats the
partial step on the survivors until fewer than four elements remain, then
pairs those uniformly at random (one loop when the count is odd).

Sampling rates: with |E| candidate edges, m ranges, ground size n and
parameters (a, b, gamma),

    p_edges  = min{ 48 ln(|E| t) / (a n^gamma + b), 1 }
    p_ranges = min{ 72 ln(m t)  / (a n^gamma + b), 1 }

Both coefficients are config overrides.  Oracle accounting: every sampled
update check costs one incidence call (two membership calls); the counters
tally these regardless of the internal update strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import AssumptionParams, Edge, SetSystem
from .weights import CompleteEdgeSet, ListEdgeSet, WeightedIndex, binomial_subset

__all__ = [
    "Matching",
    "MwuConfig",
    "MwuTrace",
    "InfeasibleSampleError",
    "partial_matching",
    "build_matching",
    "crossing_number",
]


class InfeasibleSampleError(RuntimeError):
    """Raised when every remaining candidate edge has weight zero."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or []


@dataclass
class MwuConfig:
    edge_sample_coeff: float = 48.0
    range_sample_coeff: float = 72.0
    # below this many candidate edges the i.i.d. update subsets are
    # materialized as index lists (also required for tracing)
    materialize_threshold: int = 32768


DEFAULT_CONFIG = MwuConfig()


@dataclass
class MwuTrace:
    """Record of one partial-matching run, sufficient to replay the weight
    evolution exactly."""

    p_edges: float = 0.0
    p_ranges: float = 0.0
    edge_ids: list = field(default_factory=list)
    range_ids: list = field(default_factory=list)
    sampled_edge_sets: list = field(default_factory=list)
    sampled_range_sets: list = field(default_factory=list)
    final_edge_weights: np.ndarray | None = None
    final_range_weights: np.ndarray | None = None


@dataclass
class Matching:
    """List of pairwise-disjoint edges over n elements; at most one loop."""

    edges: list[Edge]
    n: int

    @property
    def size(self) -> int:
        return len(self.edges)

    def covered(self) -> np.ndarray:
        out = []
        for e in self.edges:
            out.append(e.u)
            if not e.is_loop:
                out.append(e.v)
        return np.array(sorted(out), dtype=np.int64)

    def is_perfect(self) -> bool:
        cov = self.covered()
        if cov.size != self.n:
            return False
        if cov.size and (np.any(np.diff(cov) != 1) or cov[0] != 0):
            return False
        return sum(e.is_loop for e in self.edges) <= (self.n % 2)


def partial_matching(
    system: SetSystem,
    edges,
    params: AssumptionParams,
    t: int,
    rng,
    *,
    config: MwuConfig = DEFAULT_CONFIG,
    trace: MwuTrace | None = None,
) -> list[Edge]:
    """Draw t vertex-disjoint edges from the candidate set by primal-dual
    reweighing.  Element ids are local to ``system``; ``edges`` is a
    :class:`CompleteEdgeSet` or :class:`ListEdgeSet` over those ids.

    Raises :class:`InfeasibleSampleError` when the candidate edges are
    exhausted before t draws (possible only for non-complete candidate
    sets when t is at most a quarter of the ground size).
    """
    n_edges = edges.size
    m = system.m
    n_ground = system.n
    if n_edges == 0:
        raise ValueError("candidate edge list is empty")
    if t < 1:
        raise ValueError(f"iteration count must be positive, got {t}")
    if 2 * t > n_ground:
        raise ValueError(f"cannot draw {t} disjoint edges from {n_ground} elements")

    denom = params.crossing_budget(n_ground)
    p_edges = min(config.edge_sample_coeff * math.log(n_edges * t) / denom, 1.0)
    p_ranges = min(config.range_sample_coeff * math.log(m * t) / denom, 1.0)

    w_edges = WeightedIndex(np.ones(n_edges))
    w_ranges = WeightedIndex(np.ones(m))
    complete = isinstance(edges, CompleteEdgeSet)
    materialize = trace is not None or n_edges <= config.materialize_threshold
    if materialize:
        eu, ev = edges.endpoint_arrays()
    if trace is not None:
        trace.p_edges = p_edges
        trace.p_ranges = p_ranges

    calls = system.calls
    alive = np.ones(n_ground, dtype=bool)
    chosen: list[Edge] = []
    for _ in range(t):
        if w_edges.total <= 0.0:
            raise InfeasibleSampleError(
                f"candidate edges exhausted after {len(chosen)} of {t} draws",
                partial=chosen,
            )
        e_id = w_edges.sample(rng)
        s_id = w_ranges.sample(rng)
        u0, v0 = edges.endpoints(e_id)

        # halve the weight of sampled edges crossed by the sampled range
        if materialize:
            ids = binomial_subset(n_edges, p_edges, rng)
            if ids.size:
                hit = system.incidence_pairs(eu[ids], ev[ids], s_id)
                w_edges.scale_ids(ids[hit], 0.5)
            if trace is not None:
                trace.sampled_edge_sets.append(ids)
        else:
            col = np.ascontiguousarray(system._member_col(s_id))
            seed = np.uint64(rng.integers(1, 2**63))
            if complete:
                alive_idx = np.flatnonzero(alive).astype(np.int64)
                n_live_cross, n_halved, delta = _kernels.halve_crossing_complete(
                    col, alive_idx, w_edges.weights, w_edges.block_sums, edges.k, p_edges, seed
                )
            else:
                n_live_cross, n_halved, delta = _kernels.halve_crossing_list(
                    edges.u, edges.v, col, alive,
                    w_edges.weights, w_edges.block_sums, p_edges, seed,
                )
            w_edges.apply_delta(delta, n_halved)
            if p_edges >= 1.0:
                n_sampled = n_edges
            else:
                # dead and non-crossing sampled edges are no-ops; one draw
                # settles how many the i.i.d. sample contained
                n_sampled = n_halved + int(rng.binomial(n_edges - n_live_cross, p_edges))
            calls.incidence += n_sampled
            calls.membership += 2 * n_sampled

        # double the weight of sampled ranges crossing the chosen edge
        r_ids = binomial_subset(m, p_ranges, rng)
        if r_ids.size:
            crossed = system.incidence_edge_ranges(u0, v0, r_ids)
            w_ranges.scale_ids(r_ids[crossed], 2.0)
        if trace is not None:
            trace.edge_ids.append(e_id)
            trace.range_ids.append(s_id)
            trace.sampled_range_sets.append(r_ids)

        # the chosen edge and everything adjacent leaves the candidate pool
        if complete and not materialize:
            d1 = _kernels.zero_incident_complete(w_edges.weights, w_edges.block_sums, edges.k, u0)
            d2 = _kernels.zero_incident_complete(w_edges.weights, w_edges.block_sums, edges.k, v0)
            w_edges.apply_delta(d1 + d2, 2 * edges.k)
        else:
            w_edges.zero_ids(edges.incident_ids(u0))
            w_edges.zero_ids(edges.incident_ids(v0))
        alive[u0] = alive[v0] = False
        chosen.append(Edge.of(u0, v0))

    if trace is not None:
        trace.final_edge_weights = w_edges.weights.copy()
        trace.final_range_weights = w_ranges.weights.copy()
    return chosen


def _random_pairing(ids: np.ndarray, rng) -> list[Edge]:
    """Uniform random perfect matching of the given elements; one loop when
    their count is odd, a single loop when there is one element."""
    ids = np.asarray(ids)
    if ids.size == 0:
        return []
    perm = ids[rng.permutation(ids.size)]
    out = [Edge.of(int(perm[2 * i]), int(perm[2 * i + 1])) for i in range(ids.size // 2)]
    if ids.size % 2:
        last = int(perm[-1])
        out.append(Edge(last, last))
    return out


def build_matching(
    system: SetSystem,
    params: AssumptionParams,
    rng,
    *,
    config: MwuConfig = DEFAULT_CONFIG,
) -> Matching:
    """Perfect matching of the whole ground set: repeat the partial step
    with t = ceil(|X|/4) on the complete edge set of the survivors while at
    least four remain, then pair the leftovers uniformly at random."""
    n = system.n
    out: list[Edge] = []
    survivors = np.arange(n, dtype=np.int64)
    while survivors.size >= 4:
        k = survivors.size
        t = math.ceil(k / 4)
        sub = system.restrict(survivors)
        chosen = partial_matching(sub, CompleteEdgeSet(k), params, t, rng, config=config)
        used = np.zeros(k, dtype=bool)
        for e in chosen:
            out.append(Edge.of(int(survivors[e.u]), int(survivors[e.v])))
            used[e.u] = used[e.v] = True
        survivors = survivors[~used]
    out.extend(_random_pairing(survivors, rng))
    return Matching(edges=out, n=n)


def crossing_number(matching: Matching, system: SetSystem, chunk: int = 256) -> int:
    """Maximum, over ranges, of the number of matching edges crossed."""
    live = [e for e in matching.edges if not e.is_loop]
    n_loops = len(matching.edges) - len(live)
    m = system.m
    system.calls.incidence += len(matching.edges) * m
    system.calls.membership += (2 * len(live) + n_loops) * m
    if not live or m == 0:
        return 0
    us = np.array([e.u for e in live])
    vs = np.array([e.v for e in live])
    best = 0
    for lo in range(0, m, chunk):
        ss = np.arange(lo, min(lo + chunk, m))
        cols = _member_cols(system, ss)
        counts = np.count_nonzero(cols[us] != cols[vs], axis=0)
        best = max(best, int(counts.max()))
    return best


def _member_cols(system: SetSystem, ss: np.ndarray) -> np.ndarray:
    """Uncounted membership columns for a batch of ranges, shape (n, len(ss))."""
    fast = getattr(system, "_normals", None)
    if fast is not None:
        return system.points @ system._normals[ss].T <= system._offsets[ss]
    cols = getattr(system, "_cols", None)
    if cols is not None:
        return cols[ss].T
    return np.column_stack([system._member_col(int(s)) for s in ss])
