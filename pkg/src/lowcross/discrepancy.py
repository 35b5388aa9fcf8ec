"""Two-colorings from matchings and discrepancy evaluation.

A matching-derived coloring assigns each edge's first endpoint a uniform
sign and the second endpoint the opposite sign, so within every edge the
signs cancel; only crossing edges contribute to a range's imbalance.  The
dual-shatter entry point is the same pipeline with parameters derived from
a dual shatter bound: the interleaved construct-while-coloring formulation
and the compose-matching-then-color formulation are the same process.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AssumptionParams, SetSystem, params_from_dual_shatter
from .matching import DEFAULT_CONFIG, Matching, MwuConfig, _member_cols, build_matching

__all__ = [
    "Coloring",
    "discrepancy",
    "color_from_matching",
    "random_coloring",
    "low_disc_color",
    "low_disc_color_dual_shatter",
]


@dataclass
class Coloring:
    """A +-1 assignment over ground-set indices."""

    signs: np.ndarray

    def __post_init__(self):
        self.signs = np.asarray(self.signs, dtype=np.int8)
        if self.signs.size and not np.all(np.abs(self.signs) == 1):
            raise ValueError("signs must be +-1")

    @property
    def n(self) -> int:
        return self.signs.size


def discrepancy(coloring: Coloring, system: SetSystem, chunk: int = 256) -> int:
    """max over ranges S of |sum of signs over members of S|."""
    if coloring.n != system.n:
        raise ValueError(f"coloring covers {coloring.n} elements, system has {system.n}")
    system.calls.membership += system.n * system.m
    signs = coloring.signs.astype(np.float64)
    best = 0
    for lo in range(0, system.m, chunk):
        ss = np.arange(lo, min(lo + chunk, system.m))
        sums = signs @ _member_cols(system, ss)
        if sums.size:
            best = max(best, int(np.abs(sums).max()))
    return best


def random_coloring(n: int, rng) -> Coloring:
    """Uniform i.i.d. signs; the baseline the reweighed coloring is judged
    against."""
    return Coloring(signs=rng.integers(0, 2, size=n).astype(np.int8) * 2 - 1)


def color_from_matching(matching: Matching, rng) -> Coloring:
    """Uniform sign per edge, negated on the second endpoint; loops get a
    uniform sign.  Requires a perfect matching."""
    if not matching.is_perfect():
        raise ValueError("coloring requires a perfect matching")
    signs = np.zeros(matching.n, dtype=np.int8)
    flips = rng.integers(0, 2, size=len(matching.edges)).astype(np.int8) * 2 - 1
    for e, s in zip(matching.edges, flips):
        signs[e.u] = s
        if not e.is_loop:
            signs[e.v] = -s
    return Coloring(signs=signs)


def low_disc_color(
    system: SetSystem,
    params: AssumptionParams,
    rng,
    *,
    config: MwuConfig = DEFAULT_CONFIG,
) -> Coloring:
    """Low-discrepancy coloring: color a low-crossing matching edge by edge.

    The discrepancy guarantee assumes m >= n and m >= 34; the construction
    itself runs for any m >= 1.
    """
    matching = build_matching(system, params, rng, config=config)
    return color_from_matching(matching, rng)


def low_disc_color_dual_shatter(
    system: SetSystem,
    c: float,
    d: float,
    rng,
    *,
    config: MwuConfig = DEFAULT_CONFIG,
) -> Coloring:
    """Coloring with parameters derived from pi*(k) <= c * k**d."""
    params = params_from_dual_shatter(c, d, system.m)
    return low_disc_color(system, params, rng, config=config)
