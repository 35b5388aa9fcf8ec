"""Geometric range families: half-spaces, balls (via paraboloid lifting),
semialgebraic predicates, test-set construction, and instance generators.

All ranges are closed (membership uses <=).  Semialgebraic sign tests treat
values within 1e-12 of zero as <= 0.  Lifting sends p to (p, |p|^2) and a
ball B(c, r) to the half-space z - 2<c, y> + |c|^2 - r^2 <= 0, so containment
is preserved exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import CallCounter, SetSystem

__all__ = [
    "HalfSpace",
    "Ball",
    "SemialgebraicRange",
    "GeometricSetSystem",
    "lift_points",
    "lift_ball",
    "lift_ball_system",
    "build_halfspace_testset",
    "build_ball_testset",
    "halfspace_testset_cap",
    "ball_testset_cap",
    "semialg_dual_shatter_params",
    "grid_instance",
    "grid_side",
    "gen_points",
]

SIGN_TOL = 1e-12

POINT_DISTRIBUTIONS = ("uniform-box", "gaussian", "clustered", "annulus", "grid")


@dataclass(frozen=True)
class HalfSpace:
    """Membership iff <normal, x> <= offset."""

    normal: tuple[float, ...]
    offset: float

    def __post_init__(self):
        if not any(c != 0.0 for c in self.normal):
            raise ValueError("half-space normal must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        self._check_dim(x)
        return bool(np.dot(self.normal, x) <= self.offset)

    def contains_batch(self, pts: np.ndarray) -> np.ndarray:
        self._check_dim(pts[0] if len(pts) else np.zeros(self.dim))
        return pts @ np.asarray(self.normal) <= self.offset

    def _check_dim(self, x):
        if len(x) != self.dim:
            raise ValueError(f"dimension mismatch: half-space in R^{self.dim}, point in R^{len(x)}")


@dataclass(frozen=True)
class Ball:
    """Membership iff |x - center|^2 <= radius^2 (boundary inclusive)."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("ball radius must be nonnegative")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if len(x) != self.dim:
            raise ValueError(f"dimension mismatch: ball in R^{self.dim}, point in R^{len(x)}")
        d = x - np.asarray(self.center)
        return bool(d @ d <= self.radius**2)

    def contains_batch(self, pts: np.ndarray) -> np.ndarray:
        if pts.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: ball in R^{self.dim}, points in R^{pts.shape[1]}")
        d = pts - np.asarray(self.center)
        return np.einsum("ij,ij->i", d, d) <= self.radius**2


class SemialgebraicRange:
    """Boolean combination of polynomial sign conditions p_i(x) <= 0.

    Polynomials are sparse: each is a list of (coefficient, exponent-tuple)
    monomials.  The formula is a nested tree of
    ("pred", i) / ("not", f) / ("and", f, ...) / ("or", f, ...).
    """

    def __init__(self, polys, formula, dim: int):
        self.dim = int(dim)
        self.polys = [
            [(float(c), tuple(int(e) for e in exps)) for c, exps in poly] for poly in polys
        ]
        for poly in self.polys:
            for _, exps in poly:
                if len(exps) != self.dim:
                    raise ValueError("monomial exponent tuple has wrong dimension")
        self.formula = formula
        self._validate(formula)

    def _validate(self, node):
        op = node[0]
        if op == "pred":
            if not (0 <= node[1] < len(self.polys)):
                raise ValueError(f"formula references undeclared polynomial {node[1]}")
        elif op == "not":
            self._validate(node[1])
        elif op in ("and", "or"):
            for child in node[1:]:
                self._validate(child)
        else:
            raise ValueError(f"unknown formula operator {op!r}")

    @property
    def degree(self) -> int:
        return max((sum(e) for poly in self.polys for _, e in poly), default=0)

    def _poly_values(self, pts: np.ndarray) -> np.ndarray:
        vals = np.zeros((len(self.polys), pts.shape[0]))
        for i, poly in enumerate(self.polys):
            acc = np.zeros(pts.shape[0])
            for c, exps in poly:
                term = np.full(pts.shape[0], c)
                for axis, e in enumerate(exps):
                    if e:
                        term = term * pts[:, axis] ** e
                acc += term
            vals[i] = acc
        return vals

    def _eval_formula(self, node, signs: np.ndarray) -> np.ndarray:
        op = node[0]
        if op == "pred":
            return signs[node[1]]
        if op == "not":
            return ~self._eval_formula(node[1], signs)
        parts = [self._eval_formula(child, signs) for child in node[1:]]
        out = parts[0]
        for part in parts[1:]:
            out = (out & part) if op == "and" else (out | part)
        return out

    def contains_batch(self, pts: np.ndarray) -> np.ndarray:
        if pts.shape[1] != self.dim:
            raise ValueError(f"dimension mismatch: range in R^{self.dim}, points in R^{pts.shape[1]}")
        signs = self._poly_values(pts) <= SIGN_TOL
        return self._eval_formula(self.formula, signs)

    def contains(self, x) -> bool:
        return bool(self.contains_batch(np.asarray(x, dtype=float).reshape(1, -1))[0])


class GeometricSetSystem(SetSystem):
    """Set system over points in R^d with geometric ranges.

    Homogeneous half-space families get a vectorized fast path; any mix of
    range objects exposing contains_batch works.
    """

    def __init__(self, points: np.ndarray, ranges):
        points = np.ascontiguousarray(points, dtype=np.float64)
        if points.ndim != 2:
            raise ValueError("points must be an (n, d) array")
        self.points = points
        self.n, self.dim = points.shape
        self.ranges = list(ranges)
        self.m = len(self.ranges)
        self.calls = CallCounter()
        if self.ranges and all(isinstance(r, HalfSpace) for r in self.ranges):
            self._normals = np.array([r.normal for r in self.ranges])
            self._offsets = np.array([r.offset for r in self.ranges])
            if self._normals.shape[1] != self.dim:
                raise ValueError("half-space dimension does not match the points")
        else:
            self._normals = None
            for r in self.ranges:
                if getattr(r, "dim", self.dim) != self.dim:
                    raise ValueError("range dimension does not match the points")

    def _member_many(self, xs, s):
        pts = self.points[xs]
        if self._normals is not None:
            return pts @ self._normals[s] <= self._offsets[s]
        return self.ranges[s].contains_batch(pts)

    def _member_col(self, s):
        if self._normals is not None:
            return self.points @ self._normals[s] <= self._offsets[s]
        return self.ranges[s].contains_batch(self.points)

    def _member_point(self, x, ss):
        pt = self.points[x]
        if self._normals is not None:
            return self._normals[ss] @ pt <= self._offsets[ss]
        return np.array([self.ranges[s].contains(pt) for s in np.asarray(ss).ravel()])


# -- lifting ------------------------------------------------------------------


def lift_points(points: np.ndarray) -> np.ndarray:
    """Map each p in R^d to (p, |p|^2) in R^(d+1)."""
    points = np.asarray(points, dtype=float)
    sq = np.einsum("ij,ij->i", points, points)
    return np.column_stack([points, sq])


def lift_ball(ball: Ball) -> HalfSpace:
    """Half-space in R^(d+1) containing exactly the lifted members of the ball."""
    c = np.asarray(ball.center)
    normal = tuple(-2.0 * c) + (1.0,)
    offset = ball.radius**2 - float(c @ c)
    return HalfSpace(normal=normal, offset=offset)


def lift_ball_system(points: np.ndarray, balls) -> tuple[np.ndarray, list[HalfSpace]]:
    """Lift points and balls together; containment is preserved exactly."""
    return lift_points(points), [lift_ball(b) for b in balls]


# -- test sets ----------------------------------------------------------------


def halfspace_testset_cap(d: int, t: int) -> int:
    return (d + 1) * t**d


def ball_testset_cap(d: int, n: int) -> float:
    return (d + 2) * n ** (1.0 + 1.0 / d)


def build_halfspace_testset(points: np.ndarray, t: int, rng=None, sample_factor: int = 2):
    """Surrogate family of at most (d+1) t^d half-spaces for a point set.

    Construction: all hyperplanes spanned by d-subsets of a uniform sample
    of sample_factor * t points, truncated to the size cap, plus d bundles
    of axis-aligned thresholds at t per-axis quantiles as a robustness
    floor.  Low crossing number against this family is an empirical proxy
    for low crossing number against every half-space.
    """
    points = np.asarray(points, dtype=float)
    n, d = points.shape
    if t < 1:
        raise ValueError("test-set resolution t must be at least 1")
    if n < 1:
        raise ValueError("need at least one point")
    if rng is None:
        rng = np.random.default_rng(0)
    cap = halfspace_testset_cap(d, t)

    ranges: list[HalfSpace] = []
    for axis in range(d):
        qs = np.quantile(points[:, axis], (np.arange(t) + 0.5) / t)
        normal = tuple(1.0 if a == axis else 0.0 for a in range(d))
        ranges.extend(HalfSpace(normal=normal, offset=float(q)) for q in qs)

    if n < d:  # too few points to span hyperplanes; thresholds only
        return ranges[: cap]
    n_sample = min(n, sample_factor * t)
    sample = points[rng.choice(n, size=n_sample, replace=False)]
    budget = cap - len(ranges)
    for subset in combinations(range(n_sample), d):
        if budget <= 0:
            break
        normal = _spanning_normal(sample[list(subset)])
        if normal is None:
            continue
        offset = float(normal @ sample[subset[0]])
        ranges.append(HalfSpace(normal=tuple(normal), offset=offset))
        budget -= 1
    return ranges


def _spanning_normal(pts: np.ndarray):
    """Unit normal of the hyperplane through d points in R^d, canonically
    oriented; None when the points are affinely degenerate."""
    d = pts.shape[1]
    if d == 1:
        return np.array([1.0])
    diffs = pts[1:] - pts[0]
    _, sv, vt = np.linalg.svd(diffs)
    if sv.size >= d - 1 and sv[-1] < 1e-9 * max(1.0, sv[0]):
        return None
    normal = vt[-1]
    nz = np.flatnonzero(np.abs(normal) > 1e-12)
    if nz.size == 0:
        return None
    if normal[nz[0]] < 0:
        normal = -normal
    return normal


def build_ball_testset(points: np.ndarray, rng=None):
    """Lifted surrogate family for balls: lift to R^(d+1) and build a
    half-space test set there with resolution t = ceil(n^(1/d)).

    Returns (lifted points, half-spaces); crossings evaluated in lifted
    space agree with crossings against the corresponding balls.
    """
    points = np.asarray(points, dtype=float)
    n, d = points.shape
    t = max(1, math.ceil(n ** (1.0 / d)))
    lifted = lift_points(points)
    return lifted, build_halfspace_testset(lifted, t, rng=rng)


# -- parameter derivations -----------------------------------------------------


def semialg_dual_shatter_params(d: int, delta: int, s: int) -> tuple[float, float]:
    """Dual-shatter constant (4 e delta s)^d and the VC-dimension bound
    2 s log2(e s) C(delta + d, d) for degree-delta, s-polynomial ranges."""
    if d < 1 or delta < 1 or s < 1:
        raise ValueError("d, delta, s must all be at least 1")
    c_eff = (4.0 * math.e * delta * s) ** d
    vc_bound = 2.0 * s * math.log2(math.e * s) * math.comb(delta + d, d)
    return c_eff, vc_bound


# -- instances ----------------------------------------------------------------


def grid_side(n0: int, d: int) -> int:
    return math.ceil(n0 ** (1.0 / d))


def grid_instance(n0: int, d: int) -> tuple[np.ndarray, list[HalfSpace]]:
    """Integer grid with axis-threshold half-spaces.

    Points are the grid [1, g]^d with g = ceil(n0^(1/d)); ranges are the
    separating thresholds x_axis <= j + 1/2 for j = 1..g-1 on each axis.
    The number of ranges crossing an edge equals the l1 distance of its
    endpoints.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    if n0 < 2**d:
        raise ValueError(f"grid instance needs n0 >= 2^d, got {n0}")
    g = grid_side(n0, d)
    axes = [np.arange(1, g + 1)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.column_stack([m.ravel() for m in mesh]).astype(float)
    ranges = []
    for axis in range(d):
        normal = tuple(1.0 if a == axis else 0.0 for a in range(d))
        for j in range(1, g):
            ranges.append(HalfSpace(normal=normal, offset=j + 0.5))
    return points, ranges


def gen_points(n: int, d: int, dist: str, rng) -> np.ndarray:
    """n points in R^d from a named distribution, deterministic per rng."""
    if n < 0 or d < 1:
        raise ValueError("need n >= 0 and d >= 1")
    if dist == "uniform-box":
        return rng.random((n, d))
    if dist == "gaussian":
        return rng.standard_normal((n, d))
    if dist == "clustered":
        if n == 0:
            return np.zeros((0, d))
        k = math.ceil(math.sqrt(n))
        centers = rng.random((k, d))
        labels = rng.integers(0, k, size=n)
        return centers[labels] + 0.05 * rng.standard_normal((n, d))
    if dist == "annulus":
        if n == 0:
            return np.zeros((0, d))
        direction = rng.standard_normal((n, d))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        radii = rng.uniform(0.75, 1.0, size=(n, 1))
        return direction / norms * radii
    if dist == "grid":
        g = math.ceil(n ** (1.0 / d)) if n else 1
        axes = [np.arange(1, g + 1)] * d
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.column_stack([m.ravel() for m in mesh]).astype(float)
        return pts[:n]
    raise ValueError(f"unknown distribution {dist!r}; expected one of {POINT_DISTRIBUTIONS}")
