"""Brute-force oracles for validating the randomized constructions on
small instances.

All results here are deterministic and seed-free.  Size caps keep every
oracle under a few seconds: matching enumeration is (n-1)!! so n <= 12,
coloring enumeration is 2^n so n <= 20.
"""

from __future__ import annotations

import math

import numpy as np

from .core import Edge, SetSystem
from .discrepancy import Coloring
from .matching import Matching, _member_cols

__all__ = [
    "brute_min_crossing_matching",
    "brute_min_discrepancy",
    "exact_expected_matching_discrepancy",
    "min_weighted_crossing_edge",
]

MAX_MATCHING_N = 12
MAX_COLORING_N = 20
MAX_EXACT_EDGES = 20


def _pair_cross_table(system: SetSystem, elements: np.ndarray):
    """Crossing indicator vectors (over ranges) for all pairs of the given
    elements; charges the counter for the full sweep."""
    k = elements.size
    m = system.m
    system.calls.incidence += (k * (k - 1) // 2) * m
    system.calls.membership += k * m
    cols = _member_cols(system, np.arange(m))[elements]  # (k, m)
    table = {}
    for a in range(k):
        for b in range(a + 1, k):
            table[(a, b)] = cols[a] != cols[b]
    return table


def brute_min_crossing_matching(system: SetSystem) -> tuple[Matching, int]:
    """Exhaustive minimum-crossing perfect matching, n <= 12.

    Enumerates matchings by always pairing the lowest unmatched element
    (each matching generated once), keeping per-range crossing counts
    incrementally.
    """
    n = system.n
    if n > MAX_MATCHING_N:
        raise ValueError(f"brute matching enumeration capped at n={MAX_MATCHING_N}, got {n}")
    if n == 0:
        return Matching(edges=[], n=0), 0
    elements = np.arange(n)
    table = _pair_cross_table(system, elements)
    counts = np.zeros(system.m, dtype=np.int64)
    best = {"kappa": n + 1, "edges": None}
    current: list[Edge] = []

    def recurse(unmatched: list[int]):
        if not unmatched:
            kappa = int(counts.max()) if system.m else 0
            if kappa < best["kappa"]:
                best["kappa"] = kappa
                best["edges"] = list(current)
            return
        a = unmatched[0]
        rest = unmatched[1:]
        for idx in range(len(rest)):
            b = rest[idx]
            cross = table[(a, b)]
            counts[cross] += 1
            current.append(Edge(a, b))
            kappa_now = int(counts.max()) if system.m else 0
            if kappa_now < best["kappa"]:  # prune dominated branches
                recurse(rest[:idx] + rest[idx + 1:])
            current.pop()
            counts[cross] -= 1

    if n % 2 == 0:
        recurse(list(range(n)))
        return Matching(edges=best["edges"], n=n), best["kappa"]
    # odd n: try every choice of loop element (loops never cross)
    best_overall = None
    for loop_el in range(n):
        best["kappa"] = n + 1
        best["edges"] = None
        recurse([x for x in range(n) if x != loop_el])
        if best_overall is None or best["kappa"] < best_overall[1]:
            best_overall = (best["edges"] + [Edge(loop_el, loop_el)], best["kappa"])
    return Matching(edges=best_overall[0], n=n), best_overall[1]


def enumerate_perfect_matchings(n: int):
    """Yield every perfect matching of 0..n-1 as a list of Edge, each once
    (lowest-unmatched-first pairing; for odd n every loop placement is
    enumerated)."""

    def rec(avail: tuple[int, ...]):
        if len(avail) == 0:
            yield []
            return
        a = avail[0]
        rest = avail[1:]
        for i, b in enumerate(rest):
            tail = rest[:i] + rest[i + 1:]
            for sub in rec(tail):
                yield [Edge(a, b)] + sub

    if n % 2 == 0:
        yield from rec(tuple(range(n)))
    else:
        for loop_el in range(n):
            avail = tuple(x for x in range(n) if x != loop_el)
            for sub in rec(avail):
                yield sub + [Edge(loop_el, loop_el)]


def brute_min_discrepancy(system: SetSystem) -> tuple[Coloring, int]:
    """Exhaustive minimum discrepancy over all 2^n colorings, n <= 20."""
    n = system.n
    if n > MAX_COLORING_N:
        raise ValueError(f"brute coloring enumeration capped at n={MAX_COLORING_N}, got {n}")
    if n == 0:
        return Coloring(signs=np.zeros(0, dtype=np.int8)), 0
    member = _member_cols(system, np.arange(system.m)).astype(np.float64)  # (n, m)
    system.calls.membership += n * system.m
    best_disc = None
    best_code = 0
    chunk = 1 << 14
    for lo in range(0, 1 << n, chunk):
        codes = np.arange(lo, min(lo + chunk, 1 << n), dtype=np.uint64)
        bits = (codes[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & np.uint64(1)
        signs = bits.astype(np.float64) * 2.0 - 1.0
        disc = np.abs(signs @ member).max(axis=1) if system.m else np.zeros(codes.size)
        k = int(np.argmin(disc))
        if best_disc is None or disc[k] < best_disc:
            best_disc = float(disc[k])
            best_code = int(codes[k])
    signs = np.array([1 if (best_code >> i) & 1 else -1 for i in range(n)], dtype=np.int8)
    return Coloring(signs=signs), int(round(best_disc))


def exact_expected_matching_discrepancy(matching: Matching, system: SetSystem) -> float:
    """Exact expectation of the discrepancy of a matching coloring, by
    enumerating all 2^|M| sign assignments.

    Within a range, matched pairs fully inside cancel; only crossing edges
    (and a loop whose element lies inside) contribute one +-1 term each.
    """
    k = len(matching.edges)
    if k > MAX_EXACT_EDGES:
        raise ValueError(f"exact enumeration capped at {MAX_EXACT_EDGES} edges, got {k}")
    m = system.m
    system.calls.incidence += k * m
    system.calls.membership += 2 * k * m
    if k == 0 or m == 0:
        return 0.0
    cols = _member_cols(system, np.arange(m))  # (n, m)
    contrib = np.zeros((k, m), dtype=np.float64)
    for idx, e in enumerate(matching.edges):
        if e.is_loop:
            contrib[idx] = cols[e.u].astype(np.float64)
        else:
            contrib[idx] = cols[e.u].astype(np.float64) - cols[e.v].astype(np.float64)
    total = 0.0
    chunk = 1 << 13
    for lo in range(0, 1 << k, chunk):
        codes = np.arange(lo, min(lo + chunk, 1 << k), dtype=np.uint64)
        bits = (codes[:, None] >> np.arange(k, dtype=np.uint64)[None, :]) & np.uint64(1)
        signs = bits.astype(np.float64) * 2.0 - 1.0
        total += float(np.abs(signs @ contrib).max(axis=1).sum())
    return total / (1 << k)


def min_weighted_crossing_edge(
    system: SetSystem, elements: np.ndarray, range_weights: np.ndarray
) -> tuple[Edge, float]:
    """Sweep all pairs of the given elements and return the pair whose
    crossing ranges have the smallest total weight (ties to the
    lexicographically first pair)."""
    elements = np.asarray(elements, dtype=np.int64)
    if elements.size < 2:
        raise ValueError("need at least two elements")
    w = np.asarray(range_weights, dtype=np.float64)
    if w.shape != (system.m,):
        raise ValueError(f"need one weight per range ({system.m}), got shape {w.shape}")
    k = elements.size
    system.calls.incidence += (k * (k - 1) // 2) * system.m
    system.calls.membership += k * system.m
    cols = _member_cols(system, np.arange(system.m))[elements].astype(np.float64)  # (k, m)
    best = None
    for a in range(k):
        for b in range(a + 1, k):
            tot = float(np.abs(cols[a] - cols[b]) @ w)
            if best is None or tot < best[1]:
                best = (Edge.of(int(elements[a]), int(elements[b])), tot)
    return best
