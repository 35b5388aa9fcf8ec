"""Finite set systems behind a counting membership oracle.

Conventions used throughout the package:

  * Elements are integer indices ``0..n-1``; ranges are indexed ``0..m-1``.
  * An edge is an unordered pair ``{u, v}`` stored with ``u <= v``; ``u == v``
    is a loop.  A range S *crosses* an edge when exactly one endpoint lies
    in S; loops never cross anything.
  * Every system carries a :class:`CallCounter`.  One incidence evaluation
    costs one incidence call plus two membership calls (one for a loop).
    Batch evaluation helpers charge the counter for the logical number of
    oracle accesses they stand for, independent of how the arithmetic is
    vectorized internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Edge",
    "CallCounter",
    "AssumptionParams",
    "params_from_dual_shatter",
    "SetSystem",
    "ExplicitSetSystem",
    "RestrictedSetSystem",
]


@dataclass(frozen=True, order=True)
class Edge:
    """Unordered element pair with u <= v; u == v is a loop."""

    u: int
    v: int

    def __post_init__(self):
        if not (0 <= self.u <= self.v):
            raise ValueError(f"edge endpoints must satisfy 0 <= u <= v, got ({self.u}, {self.v})")

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    @staticmethod
    def of(a: int, b: int) -> "Edge":
        return Edge(a, b) if a <= b else Edge(b, a)


@dataclass
class CallCounter:
    """Monotone tally of membership and incidence oracle evaluations."""

    membership: int = 0
    incidence: int = 0

    def snapshot(self) -> tuple[int, int]:
        return (self.membership, self.incidence)

    def since(self, snap: tuple[int, int]) -> "CallCounter":
        return CallCounter(self.membership - snap[0], self.incidence - snap[1])


@dataclass(frozen=True)
class AssumptionParams:
    """Parameters (a, b, gamma) asserting every subset Y has a perfect
    matching with crossing number at most a * |Y|**gamma + b."""

    a: float
    b: float
    gamma: float

    def __post_init__(self):
        if not (self.a > 0):
            raise ValueError(f"a must be positive, got {self.a}")
        if self.b < 0:
            raise ValueError(f"b must be nonnegative, got {self.b}")
        if not (0 < self.gamma <= 1):
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")

    def crossing_budget(self, n: int) -> float:
        return self.a * n**self.gamma + self.b


def params_from_dual_shatter(c: float, d: float, m: int) -> AssumptionParams:
    """Derive (a, b, gamma) from a dual shatter bound pi*(k) <= c * k**d.

    a = (2c)^(1/d) / (2 ln2 (1 - 1/d)),  b = ln(m)/ln(2),  gamma = 1 - 1/d.
    Requires d > 1 and m >= 34.
    """
    if c <= 0:
        raise ValueError(f"dual shatter constant c must be positive, got {c}")
    if d <= 1:
        raise ValueError(f"dual shatter exponent d must exceed 1, got {d}")
    if m < 34:
        raise ValueError(f"need at least 34 ranges, got {m}")
    a = (2.0 * c) ** (1.0 / d) / (2.0 * math.log(2) * (1.0 - 1.0 / d))
    b = math.log(m) / math.log(2)
    return AssumptionParams(a=a, b=b, gamma=1.0 - 1.0 / d)


class SetSystem:
    """Base class: n elements, m ranges, counted membership/incidence.

    Subclasses implement the uncounted kernels ``_member_many`` (membership
    of a batch of elements in one range) and ``_member_point`` (membership
    of one element in a batch of ranges).
    """

    n: int
    m: int
    calls: CallCounter

    # -- uncounted internals -------------------------------------------------

    def _member_many(self, xs: np.ndarray, s: int) -> np.ndarray:
        raise NotImplementedError

    def _member_point(self, x: int, ss: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _member_col(self, s: int) -> np.ndarray:
        return self._member_many(np.arange(self.n), s)

    # -- counted oracle surface ----------------------------------------------

    def membership(self, x: int, s: int) -> bool:
        if not (0 <= x < self.n):
            raise IndexError(f"element {x} out of range [0, {self.n})")
        if not (0 <= s < self.m):
            raise IndexError(f"range {s} out of range [0, {self.m})")
        self.calls.membership += 1
        return bool(self._member_many(np.array([x]), s)[0])

    def incidence(self, e: Edge | tuple[int, int], s: int) -> bool:
        u, v = (e.u, e.v) if isinstance(e, Edge) else e
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise IndexError(f"edge ({u}, {v}) out of range [0, {self.n})")
        if not (0 <= s < self.m):
            raise IndexError(f"range {s} out of range [0, {self.m})")
        self.calls.incidence += 1
        if u == v:
            self.calls.membership += 1
            return False
        self.calls.membership += 2
        mu, mv = self._member_many(np.array([u, v]), s)
        return bool(mu) != bool(mv)

    def membership_many(self, xs: np.ndarray, s: int) -> np.ndarray:
        xs = np.asarray(xs)
        self.calls.membership += int(xs.size)
        return self._member_many(xs, s)

    def incidence_pairs(self, us: np.ndarray, vs: np.ndarray, s: int) -> np.ndarray:
        """Crossing indicator of many edges against one range."""
        us = np.asarray(us)
        vs = np.asarray(vs)
        loops = int(np.count_nonzero(us == vs))
        self.calls.incidence += int(us.size)
        self.calls.membership += 2 * int(us.size) - loops
        col = self._member_col(s)
        return col[us] != col[vs]

    def incidence_edge_ranges(self, u: int, v: int, ss: np.ndarray) -> np.ndarray:
        """Crossing indicator of one edge against many ranges."""
        ss = np.asarray(ss)
        self.calls.incidence += int(ss.size)
        if u == v:
            self.calls.membership += int(ss.size)
            return np.zeros(ss.size, dtype=bool)
        self.calls.membership += 2 * int(ss.size)
        return self._member_point(u, ss) != self._member_point(v, ss)

    # -- derived views ---------------------------------------------------------

    def restrict(self, idx: np.ndarray) -> "RestrictedSetSystem":
        return RestrictedSetSystem(self, idx)


class ExplicitSetSystem(SetSystem):
    """Set system given by explicit ranges (strictly increasing index lists).

    Stores a boolean range-by-element incidence matrix, so it is meant for
    moderate n * m.
    """

    MAX_CELLS = 200_000_000

    def __init__(self, n: int, ranges):
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n * len(ranges) > self.MAX_CELLS:
            raise ValueError(f"explicit system too large: {n} x {len(ranges)} cells")
        self.n = int(n)
        self.m = len(ranges)
        self.calls = CallCounter()
        self._cols = np.zeros((self.m, n), dtype=bool)
        self.ranges: list[np.ndarray] = []
        for s, r in enumerate(ranges):
            r = np.asarray(r, dtype=np.int64)
            if r.size:
                if r.min() < 0 or r.max() >= n:
                    raise ValueError(f"range {s} has out-of-bounds elements")
                if np.any(np.diff(r) <= 0):
                    raise ValueError(f"range {s} is not strictly increasing")
                self._cols[s, r] = True
            self.ranges.append(r)

    def _member_many(self, xs, s):
        return self._cols[s][xs]

    def _member_point(self, x, ss):
        return self._cols[ss, x]

    def _member_col(self, s):
        return self._cols[s]


class RestrictedSetSystem(SetSystem):
    """View of a parent system on a subset of elements (index remapping).

    Shares the parent's oracle and call counter; local element i maps to
    parent element idx[i].
    """

    def __init__(self, parent: SetSystem, idx: np.ndarray):
        idx = np.asarray(idx, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= parent.n):
            raise ValueError("restriction indices out of parent bounds")
        self.parent = parent
        self.idx = idx
        self.n = int(idx.size)
        self.m = parent.m
        self.calls = parent.calls

    def _member_many(self, xs, s):
        return self.parent._member_many(self.idx[xs], s)

    def _member_point(self, x, ss):
        return self.parent._member_point(int(self.idx[x]), ss)

    def _member_col(self, s):
        return self.parent._member_many(self.idx, s)
