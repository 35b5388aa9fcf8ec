"""Weighted sampling substrate: block-aggregated index sampler, i.i.d.
subset draws, and edge-set indexing with per-vertex incidence lookup.

The sampler keeps the weight vector flat plus one partial sum per block of
2048 items.  Updates are O(1) amortized (batch updates touch only the
affected blocks), a draw inverts the CDF over blocks and then within one
block, and a full refresh recomputes the partial sums from the leaves.
Refreshes are triggered automatically once accumulated updates could let
the tracked total drift beyond 1e-9 relative error.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from ._kernels import BLOCK, BLOCK_SHIFT

__all__ = ["WeightedIndex", "binomial_subset", "CompleteEdgeSet", "ListEdgeSet"]

DRIFT_TOL = 1e-9


class WeightedIndex:
    """Sampler over nonnegative weights supporting multiply-by-factor,
    zeroing, and proportional draws.  Zero-weight items are never returned.
    """

    def __init__(self, weights):
        w = np.ascontiguousarray(weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be one-dimensional")
        if w.size and w.min() < 0:
            raise ValueError("weights must be nonnegative")
        self.weights = w
        nblocks = max(1, (w.size + BLOCK - 1) >> BLOCK_SHIFT)
        self.block_sums = np.zeros(nblocks)
        self._total = 0.0
        self._updates = 0
        self.refresh()

    def __len__(self) -> int:
        return self.weights.size

    @property
    def total(self) -> float:
        if self._updates > max(4096, self.weights.size):
            self.refresh()
        return self._total

    def refresh(self) -> None:
        """Recompute block sums and the total exactly from the weights."""
        w = self.weights
        if w.size == 0:
            self._total = 0.0
        else:
            starts = np.arange(0, w.size, BLOCK)
            self.block_sums[:] = np.add.reduceat(w, starts)
            self._total = float(self.block_sums.sum())
        self._updates = 0

    def get(self, i: int) -> float:
        return float(self.weights[i])

    def scale(self, i: int, factor: float) -> None:
        old = self.weights[i]
        new = old * factor
        self.weights[i] = new
        self.block_sums[i >> BLOCK_SHIFT] += new - old
        self._total += new - old
        self._updates += 1

    def zero(self, i: int) -> None:
        self.scale(i, 0.0)

    def scale_ids(self, ids: np.ndarray, factor: float) -> None:
        ids = np.asarray(ids)
        if ids.size == 0:
            return
        old = self.weights[ids]
        new = old * factor
        self.weights[ids] = new
        if ids.size >= self.weights.size >> 3:
            self.refresh()
        else:
            np.add.at(self.block_sums, ids >> BLOCK_SHIFT, new - old)
            self._total += float((new - old).sum())
            self._updates += ids.size

    def zero_ids(self, ids: np.ndarray) -> None:
        self.scale_ids(ids, 0.0)

    def apply_delta(self, delta: float, updates: int) -> None:
        """Record a total change made by a kernel that wrote weights and
        block sums in place."""
        self._total += delta
        self._updates += updates

    def drift(self) -> float:
        """Relative disagreement between the tracked total and the leaves."""
        exact = float(self.weights.sum())
        if exact == 0.0:
            return abs(self._total)
        return abs(self._total - exact) / exact

    def sample(self, rng) -> int:
        """Draw index i with probability weights[i] / total."""
        if self.total <= 0.0:
            raise ValueError("cannot sample from an all-zero weight vector")
        for _ in range(3):
            r = rng.random()
            idx = _kernels.weighted_pick(self.weights, self.block_sums, self._total, r)
            if idx >= 0 and self.weights[idx] > 0.0:
                return int(idx)
            self.refresh()
            if self._total <= 0.0:
                raise ValueError("cannot sample from an all-zero weight vector")
        raise RuntimeError("weighted draw failed after refresh")


def binomial_subset(n: int, p: float, rng) -> np.ndarray:
    """Distinct sorted indices where each of 0..n-1 is included
    independently with probability p.

    Drawn as Binomial(n, p) for the size followed by a uniform distinct
    selection, so the cost is near-linear in the sample size rather
    than in n.
    """
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"inclusion probability must lie in [0, 1], got {p}")
    if n == 0 or p == 0.0:
        return np.empty(0, dtype=np.int64)
    if p == 1.0:
        return np.arange(n, dtype=np.int64)
    k = int(rng.binomial(n, p))
    return _uniform_distinct(n, k, rng)


def _uniform_distinct(n: int, k: int, rng) -> np.ndarray:
    """Uniformly random k-subset of 0..n-1, sorted."""
    if k <= 0:
        return np.empty(0, dtype=np.int64)
    if k >= n:
        return np.arange(n, dtype=np.int64)
    if k > n // 2:
        comp = _uniform_distinct(n, n - k, rng)
        mask = np.ones(n, dtype=bool)
        mask[comp] = False
        return np.flatnonzero(mask)
    # rejection batches; keep first appearances in draw order for uniformity
    out = np.empty(0, dtype=np.int64)
    while out.size < k:
        need = k - out.size
        batch = rng.integers(0, n, size=need + (need >> 3) + 16)
        merged = np.concatenate([out, batch])
        _, first = np.unique(merged, return_index=True)
        out = merged[np.sort(first)]
    return np.sort(out[:k])


class CompleteEdgeSet:
    """All pairs of k vertices, ids lexicographic: (0,1), (0,2), ...

    Vertices are local positions 0..k-1; callers keep any mapping to
    global element ids.
    """

    def __init__(self, k: int):
        if k < 2:
            raise ValueError("complete edge set needs at least two vertices")
        self.k = int(k)
        self.size = k * (k - 1) // 2
        i = np.arange(k, dtype=np.int64)
        self._row_start = i * (2 * k - i - 1) // 2

    def endpoints(self, e: int) -> tuple[int, int]:
        i = int(np.searchsorted(self._row_start, e, side="right")) - 1
        j = e - int(self._row_start[i]) + i + 1
        return i, j

    def endpoints_of(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ids = np.asarray(ids, dtype=np.int64)
        i = np.searchsorted(self._row_start, ids, side="right") - 1
        j = ids - self._row_start[i] + i + 1
        return i, j

    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        u, v = np.triu_indices(self.k, k=1)
        return u.astype(np.int32), v.astype(np.int32)

    def edge_id(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return int(self._row_start[i]) + (j - i - 1)

    def incident_ids(self, x: int) -> np.ndarray:
        k = self.k
        lo = np.arange(x, dtype=np.int64)
        left = self._row_start[lo] + (x - lo - 1)
        base = int(self._row_start[x])
        right = np.arange(base, base + (k - x - 1), dtype=np.int64)
        return np.concatenate([left, right])


class ListEdgeSet:
    """Explicit edge list over k vertices with a CSR vertex-to-edge index."""

    def __init__(self, u, v, k: int):
        u = np.asarray(u, dtype=np.int32)
        v = np.asarray(v, dtype=np.int32)
        if u.shape != v.shape or u.ndim != 1:
            raise ValueError("u and v must be equal-length vectors")
        if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= k):
            raise ValueError("edge endpoints out of vertex range")
        swap = u > v
        self.u = np.where(swap, v, u)
        self.v = np.where(swap, u, v)
        self.k = int(k)
        self.size = int(u.size)
        ends = np.concatenate([self.u, self.v])
        order = np.argsort(ends, kind="stable")
        self._edge_of = order % self.size if self.size else order
        counts = np.bincount(ends, minlength=k) if self.size else np.zeros(k, dtype=np.int64)
        self._indptr = np.concatenate([[0], np.cumsum(counts)])

    @classmethod
    def from_complete_sample(cls, k: int, p: float, rng) -> "ListEdgeSet":
        """i.i.d.-p sample of the complete edge set on k vertices."""
        complete = CompleteEdgeSet(k)
        ids = binomial_subset(complete.size, p, rng)
        i, j = complete.endpoints_of(ids)
        return cls(i, j, k)

    def endpoints(self, e: int) -> tuple[int, int]:
        return int(self.u[e]), int(self.v[e])

    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u, self.v

    def incident_ids(self, x: int) -> np.ndarray:
        return self._edge_of[self._indptr[x]:self._indptr[x + 1]]
