"""Seeded benchmark harness.

Trials are independent: trial i draws its stream from the base seed plus
the (1-based) trial index; the instance itself is generated from the base
seed.  Rows report mean and sample standard deviation, mirroring mean
+- 1 sd bands.
"""

from __future__ import annotations

import math

import numpy as np

from .core import params_from_dual_shatter
from .discrepancy import color_from_matching, discrepancy, low_disc_color, random_coloring
from .geometry import GeometricSetSystem, build_halfspace_testset, gen_points
from .matching import crossing_number
from .presample import matching_presampled

__all__ = [
    "halfspace_dual_shatter_c",
    "make_halfspace_instance",
    "trial_rng",
    "disc_vs_random_trials",
    "disc_vs_random_rows",
    "tradeoff_trials",
    "tradeoff_rows",
]


def halfspace_dual_shatter_c(dim: int) -> float:
    """Dual-shatter constant (4e)^d for half-space ranges in R^d."""
    return (4.0 * math.e) ** dim


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(seed + trial)


def make_halfspace_instance(
    n: int, dim: int, seed: int, dist: str = "uniform-box", t: int | None = None
) -> GeometricSetSystem:
    """Point set plus half-space test set (resolution t = ceil(n^(1/d))
    unless given)."""
    rng = np.random.default_rng(seed)
    points = gen_points(n, dim, dist, rng)
    if t is None:
        t = max(1, math.ceil(n ** (1.0 / dim)))
    ranges = build_halfspace_testset(points, t, rng=rng)
    return GeometricSetSystem(points, ranges)


def disc_vs_random_trials(system, params, trials: int, seed: int):
    """Per-trial discrepancies of the reweighed coloring and of a uniform
    random coloring (paired by trial index)."""
    ours = np.zeros(trials)
    rand = np.zeros(trials)
    for i in range(trials):
        rng = trial_rng(seed, i + 1)
        ours[i] = discrepancy(low_disc_color(system, params, rng), system)
        rand[i] = discrepancy(random_coloring(system.n, rng), system)
    return ours, rand


def disc_vs_random_rows(
    dims, ns, trials: int, seed: int, dist: str = "uniform-box"
) -> list[dict]:
    rows = []
    for dim in dims:
        for n in ns:
            system = make_halfspace_instance(n, dim, seed, dist)
            params = params_from_dual_shatter(halfspace_dual_shatter_c(dim), dim, system.m)
            ours, rand = disc_vs_random_trials(system, params, trials, seed)
            rows.append(
                {
                    "n": n,
                    "dim": dim,
                    "mean_disc_ours": float(ours.mean()),
                    "sd_disc_ours": float(ours.std(ddof=1)) if trials > 1 else 0.0,
                    "mean_disc_random": float(rand.mean()),
                    "sd_disc_random": float(rand.std(ddof=1)) if trials > 1 else 0.0,
                    "trials": trials,
                }
            )
    return rows


def tradeoff_trials(system, c: float, d: float, alpha: float, trials: int, seed: int):
    """Per-trial crossing number, discrepancy, and incidence calls of the
    presampled pipeline at one alpha.  The coloring reuses the trial's
    matching, so the incidence calls are exactly the construction cost."""
    crossings = np.zeros(trials)
    discs = np.zeros(trials)
    calls = np.zeros(trials)
    for i in range(trials):
        rng = trial_rng(seed, i + 1)
        snap = system.calls.snapshot()
        matching = matching_presampled(system, c, d, alpha, rng)
        calls[i] = system.calls.since(snap).incidence
        coloring = color_from_matching(matching, rng)
        crossings[i] = crossing_number(matching, system)
        discs[i] = discrepancy(coloring, system)
    return crossings, discs, calls


def tradeoff_rows(
    alphas, n: int, dim: int, trials: int, seed: int, dist: str = "uniform-box"
) -> list[dict]:
    system = make_halfspace_instance(n, dim, seed, dist)
    c = halfspace_dual_shatter_c(dim)
    rows = []
    for alpha in alphas:
        crossings, discs, calls = tradeoff_trials(system, c, dim, alpha, trials, seed)
        rows.append(
            {
                "alpha": alpha,
                "n": n,
                "mean_crossing": float(crossings.mean()),
                "mean_disc": float(discs.mean()),
                "mean_incidence_calls": float(calls.mean()),
                "trials": trials,
            }
        )
    return rows
