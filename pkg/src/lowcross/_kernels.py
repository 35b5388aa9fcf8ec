"""Jitted inner loops for the reweighing algorithms.

The weight vectors use a flat layout with per-block partial sums
(block size 2**BLOCK_SHIFT); kernels update blocks incrementally and
return the change of the total, so callers can keep sums exact with a
periodic refresh.

Bernoulli thinning inside the halving passes uses an inline xorshift64*
stream seeded per call; the caller draws the seed from its own generator,
so runs stay reproducible.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BLOCK_SHIFT = 11
BLOCK = 1 << BLOCK_SHIFT

_U1 = np.uint64(1)
_S12 = np.uint64(12)
_S25 = np.uint64(25)
_S27 = np.uint64(27)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def halve_crossing_complete(col, alive_idx, w, bs, k, p, seed):
    """Halve an i.i.d.-p sample of the live edges of the complete set on k
    vertices crossed by the range with membership column ``col``.

    Edge ids are lexicographic over pairs (i, j), i < j.  Live edges are
    exactly the pairs of alive vertices (``alive_idx``, ascending); all
    other edges are zeroed, so skipping them leaves the weights unchanged.
    Returns (number of live crossing edges, number halved, change of total
    weight); the caller accounts for the dead and non-crossing part of the
    sample with one Binomial draw.
    """
    s = seed | _U1
    na = alive_idx.shape[0]
    col_a = np.empty(na, dtype=np.bool_)
    for a in range(na):
        col_a[a] = col[alive_idx[a]]
    n_live_cross = 0
    n_halved = 0
    delta = 0.0
    thin = p < 1.0
    for a in range(na):
        i = alive_idx[a]
        ci = col_a[a]
        base = i * (2 * k - i - 1) // 2 - (i + 1)
        for b in range(a + 1, na):
            if ci != col_a[b]:
                n_live_cross += 1
                take = True
                if thin:
                    s ^= s >> _S12
                    s ^= s << _S25
                    s ^= s >> _S27
                    take = np.float64(s >> _S11) * _INV53 < p
                if take:
                    n_halved += 1
                    e = base + alive_idx[b]
                    d = w[e] * 0.5
                    w[e] = d
                    bs[e >> BLOCK_SHIFT] -= d
                    delta -= d
    return n_live_cross, n_halved, delta


@njit(cache=True)
def halve_crossing_list(eu, ev, col, alive, w, bs, p, seed):
    """Same as :func:`halve_crossing_complete` for an explicit edge list."""
    s = seed | _U1
    n_live_cross = 0
    n_halved = 0
    delta = 0.0
    thin = p < 1.0
    for e in range(eu.shape[0]):
        u = eu[e]
        v = ev[e]
        if alive[u] and alive[v] and col[u] != col[v]:
            n_live_cross += 1
            take = True
            if thin:
                s ^= s >> _S12
                s ^= s << _S25
                s ^= s >> _S27
                take = np.float64(s >> _S11) * _INV53 < p
            if take:
                n_halved += 1
                d = w[e] * 0.5
                w[e] = d
                bs[e >> BLOCK_SHIFT] -= d
                delta -= d
    return n_live_cross, n_halved, delta


@njit(cache=True)
def count_crossing_complete(col, k):
    """Number of complete-set edges crossed by a membership column."""
    inside = 0
    for i in range(k):
        if col[i]:
            inside += 1
    return inside * (k - inside)


@njit(cache=True)
def weighted_pick(w, bs, total, r):
    """Invert the CDF at r * total using the block partial sums.

    Returns -1 when the distribution looks empty.  Small drift in ``bs``
    is tolerated: the scan clamps into the last nonempty block and skips
    zero-weight leaves.
    """
    if total <= 0.0:
        return -1
    target = r * total
    acc = 0.0
    blk = -1
    for b in range(bs.shape[0]):
        nxt = acc + bs[b]
        if nxt > target and bs[b] > 0.0:
            blk = b
            break
        acc = nxt
    if blk < 0:
        for b in range(bs.shape[0] - 1, -1, -1):
            if bs[b] > 0.0:
                blk = b
                break
        if blk < 0:
            return -1
        acc = 0.0
        for b in range(blk):
            acc += bs[b]
    base = blk << BLOCK_SHIFT
    hi = min(base + BLOCK, w.shape[0])
    last_pos = -1
    for e in range(base, hi):
        if w[e] > 0.0:
            last_pos = e
            acc += w[e]
            if acc > target:
                return e
    return last_pos


@njit(cache=True)
def zero_incident_complete(w, bs, k, x):
    """Zero every complete-set edge with vertex x as an endpoint."""
    delta = 0.0
    for i in range(x):
        e = i * (2 * k - i - 1) // 2 + (x - i - 1)
        we = w[e]
        if we != 0.0:
            w[e] = 0.0
            bs[e >> BLOCK_SHIFT] -= we
            delta -= we
    base = x * (2 * k - x - 1) // 2
    for j in range(x + 1, k):
        e = base + (j - x - 1)
        we = w[e]
        if we != 0.0:
            w[e] = 0.0
            bs[e >> BLOCK_SHIFT] -= we
            delta -= we
    return delta
