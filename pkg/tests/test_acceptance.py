"""Release acceptance criteria.

Each test prints one PASS/FAIL line (run with -s to stream them).  The
bound checks use the guarantee formulas with their explicit constants; the
statistical suites pin seeds, trial counts, and thresholds.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from lowcross.approx import approx_size_bound, approximate, eps_error, larger_color_class
from lowcross.bench import (
    disc_vs_random_trials,
    halfspace_dual_shatter_c,
    make_halfspace_instance,
    tradeoff_trials,
    trial_rng,
)
from lowcross.core import AssumptionParams, Edge, ExplicitSetSystem, params_from_dual_shatter
from lowcross.discrepancy import (
    Coloring,
    color_from_matching,
    discrepancy,
    low_disc_color,
)
from lowcross.geometry import Ball, GeometricSetSystem, grid_instance, lift_ball, lift_points
from lowcross.matching import Matching, build_matching, crossing_number
from lowcross.presample import grid_lowerbound_check, presample_probability, relaxed_mwu
from lowcross.testkit import (
    brute_min_crossing_matching,
    brute_min_discrepancy,
    exact_expected_matching_discrepancy,
)
from lowcross.weights import ListEdgeSet, WeightedIndex

from conftest import random_explicit_system

pytestmark = pytest.mark.acceptance

INSTANCE_SEED = 107
TRIAL_SEED = 5_000
N_GRID = (512, 1024, 2048)
DIM = 2


def _report(ok: bool, label: str, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")
    assert ok, f"{label}: {detail}"


@pytest.fixture(scope="module")
def matching_runs():
    """Shared 10-seed matching/coloring runs per n (criteria 1-3)."""
    out = {}
    c = halfspace_dual_shatter_c(DIM)
    for n in N_GRID:
        system = make_halfspace_instance(n, DIM, INSTANCE_SEED)
        params = params_from_dual_shatter(c, DIM, system.m)
        crossings, discs, calls = [], [], []
        start = time.perf_counter()
        for trial in range(10):
            rng = trial_rng(TRIAL_SEED, trial + 1)
            snap = system.calls.snapshot()
            matching = build_matching(system, params, rng)
            calls.append(system.calls.since(snap).incidence)
            coloring = color_from_matching(matching, rng)
            crossings.append(crossing_number(matching, system))
            discs.append(discrepancy(coloring, system))
        elapsed = time.perf_counter() - start
        out[n] = {
            "system": system,
            "params": params,
            "crossings": np.array(crossings, dtype=float),
            "discs": np.array(discs, dtype=float),
            "calls": np.array(calls, dtype=float),
            "elapsed": elapsed,
        }
    return out


def test_criterion_1_matching_bound(matching_runs):
    ok = True
    details = []
    for n in N_GRID:
        run = matching_runs[n]
        params, m = run["params"], run["system"].m
        a, b, gamma = params.a, params.b, params.gamma
        bound = (
            3 * a / gamma * n**gamma
            + 1.5 * b * math.log2(n)
            + 18 * math.log(m * n) * math.log2(n)
        )
        mean = run["crossings"].mean()
        ok &= mean <= bound and run["elapsed"] <= 180.0
        details.append(f"n={n} mean={mean:.1f} bound={bound:.1f} t={run['elapsed']:.0f}s")
    _report(ok, "criterion 1 (matching crossing bound)", "; ".join(details))


def test_criterion_2_discrepancy_bound(matching_runs):
    ok = True
    details = []
    c = halfspace_dual_shatter_c(DIM)
    for n in N_GRID:
        run = matching_runs[n]
        m = run["system"].m
        bound = 3 * math.sqrt(
            (9 * c ** (1 / DIM) / 2) * n ** (1 - 1 / DIM) * math.log(m)
            + 19 * math.log(m) ** 2 * math.log(n)
        )
        mean = run["discs"].mean()
        ok &= mean <= bound and run["elapsed"] <= 180.0
        details.append(f"n={n} mean={mean:.1f} bound={bound:.1f}")
    _report(ok, "criterion 2 (discrepancy bound)", "; ".join(details))


def test_criterion_3_oracle_budget(matching_runs):
    n = 1024
    run = matching_runs[n]
    m = run["system"].m
    c = halfspace_dual_shatter_c(DIM)
    bound = (
        34 * n ** (2 + 1 / DIM) * math.log(n) / c ** (1 / DIM)
        + 25 * m * n ** (1 / DIM) * math.log(m * n) * math.log2(n) / c ** (1 / DIM)
    )
    mean = run["calls"].mean()
    _report(
        mean <= bound,
        "criterion 3 (oracle-call budget)",
        f"n={n} mean={mean/1e6:.1f}M bound={bound/1e6:.1f}M",
    )


def test_criterion_4_beats_random():
    ok = True
    details = []
    for dim in (2, 3):
        system = make_halfspace_instance(4096, dim, INSTANCE_SEED + dim)
        params = params_from_dual_shatter(halfspace_dual_shatter_c(dim), dim, system.m)
        ours, rand = disc_vs_random_trials(system, params, trials=10, seed=TRIAL_SEED + dim)
        test = stats.ttest_rel(ours, rand, alternative="less")
        ok &= ours.mean() < rand.mean() and test.pvalue < 0.05
        details.append(
            f"d={dim} ours={ours.mean():.1f} random={rand.mean():.1f} p={test.pvalue:.2g}"
        )
    _report(ok, "criterion 4 (beats random coloring)", "; ".join(details))


def test_criterion_5_matching_to_coloring_lemma():
    violations = 0
    checked = 0
    rng = np.random.default_rng(11)
    sizes = [4, 6, 8, 10, 12, 14, 16, 18, 18, 16, 14, 12, 10, 8, 6, 4, 18, 12, 8, 16]
    for size in sizes:
        n = 2 * size
        m = int(rng.integers(34, 64))
        system = random_explicit_system(n, m, rng)
        perm = rng.permutation(n)
        matching = Matching(
            edges=[Edge.of(int(perm[2 * i]), int(perm[2 * i + 1])) for i in range(size)], n=n
        )
        kappa = crossing_number(matching, system)
        value = exact_expected_matching_discrepancy(matching, system)
        checked += 1
        if value > math.sqrt(3 * kappa * math.log(m)):
            violations += 1
    _report(
        violations == 0,
        "criterion 5 (matching-to-coloring lemma)",
        f"{checked} matchings (|M| up to 18), {violations} violations",
    )


def test_criterion_6_halving_lemma():
    violations = 0
    checked = 0
    rng = np.random.default_rng(23)
    for _ in range(50):
        n = int(rng.integers(2, 13))
        base = random_explicit_system(n, int(rng.integers(1, 10)), rng)
        member = np.column_stack([base._member_col(s) for s in range(base.m)]).astype(float)
        sizes = member.sum(axis=0)
        for code in range(1 << n):
            signs = np.array([1 if (code >> i) & 1 else -1 for i in range(n)], dtype=np.int8)
            coloring = Coloring(signs=signs)
            # X adjoined as a range for the discrepancy side
            delta = max(
                int(np.abs(signs.astype(float) @ member).max()) if base.m else 0,
                abs(int(signs.sum())),
            )
            subset = larger_color_class(coloring)
            counts = member[subset].sum(axis=0)
            eps = float(np.abs(sizes / n - counts / subset.size).max()) if base.m else 0.0
            checked += 1
            if eps > 2.0 * delta / n + 1e-12:
                violations += 1
    _report(
        violations == 0,
        "criterion 6 (halving lemma, exhaustive)",
        f"{checked} colorings across 50 systems, {violations} violations",
    )


def test_criterion_7_eps_approximation():
    n, eps_target = 8192, 0.1
    system = make_halfspace_instance(n, DIM, INSTANCE_SEED)
    params = params_from_dual_shatter(halfspace_dual_shatter_c(DIM), DIM, system.m)
    measured = []
    sizes = []
    start = time.perf_counter()
    for trial in range(10):
        res = approximate(system, params, eps_target, trial_rng(TRIAL_SEED, trial + 1))
        measured.append(res.eps_measured)
        sizes.append(res.subset.size)
    elapsed = time.perf_counter() - start
    size_bound = approx_size_bound(n, params, eps_target, system.m)
    ok = (
        np.mean(measured) <= eps_target
        and max(sizes) <= size_bound
        and elapsed <= 300.0
    )
    _report(
        ok,
        "criterion 7 (eps-approximation)",
        f"mean eps={np.mean(measured):.4f} target={eps_target} size={max(sizes)} "
        f"size bound={size_bound:.0f} t={elapsed:.0f}s",
    )


def test_criterion_8_presampling_feasibility():
    points, ranges = grid_instance(256, 2)
    system = GeometricSetSystem(points, ranges)
    n = system.n
    p = presample_probability(n, 0.5, 0.1)
    hits = 0
    for trial in range(50):
        rng = trial_rng(900, trial + 1)
        sample = ListEdgeSet.from_complete_sample(n, p, rng)
        _, halted = relaxed_mwu(
            system, 0.5, list(zip(sample.u.tolist(), sample.v.tolist())), rng
        )
        hits += halted >= n // 4
    _report(
        hits >= 45,
        "criterion 8 (presampling feasibility)",
        f"T >= n/4 in {hits}/50 trials (need >= 45), p={p:.3f}",
    )


def test_criterion_9_presampling_lower_bound():
    alpha = 0.5
    holds = 0
    for trial in range(50):
        rng = trial_rng(901, trial + 1)
        res = grid_lowerbound_check(
            900, 2, alpha, lambda n: n ** (alpha - 1) / math.log2(n) ** 2, rng
        )
        assert res.applicable
        holds += res.holds
    _report(
        holds >= 25,
        "criterion 9 (presampling lower-bound direction)",
        f"k-good count within n/8 in {holds}/50 trials (need >= 25)",
    )


def test_criterion_10_tradeoff_monotonicity():
    n, dim, trials = 2048, 2, 20
    system = make_halfspace_instance(n, dim, INSTANCE_SEED)
    c = halfspace_dual_shatter_c(dim)
    calls_means = []
    disc_means = []
    for alpha in (1.0, 0.5, 0.25):
        _, discs, calls = tradeoff_trials(system, c, dim, alpha, trials, TRIAL_SEED)
        calls_means.append(calls.mean())
        disc_means.append(discs.mean())
    ok = (
        calls_means[0] > calls_means[1] > calls_means[2]
        and disc_means[0] < disc_means[1] < disc_means[2]
    )
    _report(
        ok,
        "criterion 10 (trade-off monotonicity)",
        f"calls {['%.2fM' % (x/1e6) for x in calls_means]}, disc {['%.1f' % x for x in disc_means]} "
        f"for alpha 1.0 -> 0.5 -> 0.25",
    )


def test_criterion_11_oracle_suites():
    rng = np.random.default_rng(31)
    params = AssumptionParams(a=2.0, b=1.0, gamma=0.5)
    # build_matching never beats the exhaustive optimum
    bad_matching = 0
    for _ in range(200):
        n = int(rng.integers(2, 11))
        system = random_explicit_system(n, int(rng.integers(1, 11)), rng)
        _, kappa_star = brute_min_crossing_matching(system)
        built = build_matching(system, params, rng)
        if crossing_number(built, system) < kappa_star:
            bad_matching += 1
    # low_disc_color never beats the exhaustive minimum discrepancy
    bad_disc = 0
    for _ in range(200):
        n = int(rng.integers(2, 13))
        system = random_explicit_system(n, 34, rng)
        _, best = brute_min_discrepancy(system)
        got = discrepancy(low_disc_color(system, params, rng), system)
        if got < best:
            bad_disc += 1
    # incidence == membership XOR, exhaustively at the size cap
    xor_bad = 0
    for _ in range(5):
        system = random_explicit_system(10, 10, rng)
        for s in range(10):
            col = [system.membership(x, s) for x in range(10)]
            for u in range(10):
                for v in range(u, 10):
                    want = col[u] != col[v]
                    if system.incidence(Edge(u, v), s) != want:
                        xor_bad += 1
    # lifting equivalence on 10^4 pairs per dimension
    lift_bad = 0
    for d in (2, 3, 4):
        pts = rng.normal(size=(10_000, d))
        centers = rng.normal(size=(10_000, d))
        radii = np.abs(rng.normal(size=10_000)) * 1.3
        direct = np.einsum("ij,ij->i", pts - centers, pts - centers) <= radii**2
        lifted = lift_points(pts)
        for i in range(10_000):
            h = lift_ball(Ball(center=tuple(centers[i]), radius=float(radii[i])))
            if bool(np.asarray(h.normal) @ lifted[i] <= h.offset) != bool(direct[i]):
                lift_bad += 1
    # grid l1 identity, exhaustive on the 5x5 grid
    points, ranges = grid_instance(25, 2)
    grid_sys = GeometricSetSystem(points, ranges)
    l1_bad = 0
    for u in range(grid_sys.n):
        for v in range(u + 1, grid_sys.n):
            crossings = sum(grid_sys.incidence(Edge(u, v), s) for s in range(grid_sys.m))
            if crossings != int(abs(points[u] - points[v]).sum()):
                l1_bad += 1
    # weighted-sampler chi-square
    weights = rng.random(16) + 0.05
    wi = WeightedIndex(weights)
    draws = np.array([wi.sample(rng) for _ in range(100_000)])
    pvalue = stats.chisquare(
        np.bincount(draws, minlength=16), weights / weights.sum() * 100_000
    ).pvalue
    ok = (
        bad_matching == 0
        and bad_disc == 0
        and xor_bad == 0
        and lift_bad == 0
        and l1_bad == 0
        and pvalue > 0.001
    )
    _report(
        ok,
        "criterion 11 (oracle suites)",
        f"matching viol={bad_matching}/200 disc viol={bad_disc}/200 xor={xor_bad} "
        f"lift={lift_bad} l1={l1_bad} chi2 p={pvalue:.3f}",
    )
