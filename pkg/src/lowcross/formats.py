"""File formats: set-system JSON, range-family JSON, points CSV, result
JSON artifacts, benchmark CSVs, and a minimal SVG renderer for 2-D
matchings.

Explicit set systems are ``{"n": int, "ranges": [[int, ...], ...]}`` with
0-based, strictly increasing indices.  Geometric systems bundle inline
points with a typed range list.  All files are UTF-8; CSVs carry a header
row.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .approx import ApproxResult
from .core import Edge, ExplicitSetSystem, SetSystem
from .discrepancy import Coloring
from .geometry import Ball, GeometricSetSystem, HalfSpace, SemialgebraicRange
from .matching import Matching

__all__ = [
    "FormatError",
    "system_to_json",
    "system_from_json",
    "load_system",
    "save_system",
    "range_to_json",
    "range_from_json",
    "ranges_from_json",
    "points_to_csv",
    "points_from_csv",
    "matching_to_json",
    "matching_from_json",
    "coloring_to_json",
    "coloring_from_json",
    "approx_to_json",
    "rows_to_csv",
    "matching_svg",
]


class FormatError(ValueError):
    """Malformed file content; message names the offending field."""


# -- range families -------------------------------------------------------------


def range_to_json(r) -> dict:
    if isinstance(r, HalfSpace):
        return {"type": "halfspace", "normal": list(r.normal), "offset": r.offset}
    if isinstance(r, Ball):
        return {"type": "ball", "center": list(r.center), "radius": r.radius}
    if isinstance(r, SemialgebraicRange):
        return {
            "type": "semialg",
            "dim": r.dim,
            "polys": [[[c, list(e)] for c, e in poly] for poly in r.polys],
            "formula": r.formula,
        }
    raise FormatError(f"unknown range object {type(r).__name__}")


def _formula_from_json(node):
    if not isinstance(node, list) or not node:
        raise FormatError(f"formula node must be a nonempty list, got {node!r}")
    op = node[0]
    if op == "pred":
        return ("pred", int(node[1]))
    if op == "not":
        return ("not", _formula_from_json(node[1]))
    if op in ("and", "or"):
        return (op, *[_formula_from_json(c) for c in node[1:]])
    raise FormatError(f"unknown formula operator {op!r}")


def range_from_json(obj: dict, index: int = 0):
    try:
        kind = obj["type"]
    except (TypeError, KeyError):
        raise FormatError(f"range {index}: missing 'type' field")
    try:
        if kind == "halfspace":
            return HalfSpace(normal=tuple(float(c) for c in obj["normal"]),
                             offset=float(obj["offset"]))
        if kind == "ball":
            return Ball(center=tuple(float(c) for c in obj["center"]),
                        radius=float(obj["radius"]))
        if kind == "semialg":
            polys = [[(float(c), tuple(int(x) for x in e)) for c, e in poly]
                     for poly in obj["polys"]]
            return SemialgebraicRange(polys, _formula_from_json(obj["formula"]),
                                      dim=int(obj["dim"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"range {index} ({kind}): {exc}") from exc
    raise FormatError(f"range {index}: unknown type {kind!r}")


def ranges_from_json(objs) -> list:
    if not isinstance(objs, list):
        raise FormatError("range family must be a JSON list")
    return [range_from_json(obj, i) for i, obj in enumerate(objs)]


# -- set systems ----------------------------------------------------------------


def system_to_json(system: SetSystem) -> dict:
    if isinstance(system, ExplicitSetSystem):
        return {"n": system.n, "ranges": [r.tolist() for r in system.ranges]}
    if isinstance(system, GeometricSetSystem):
        return {
            "points": system.points.tolist(),
            "ranges": [range_to_json(r) for r in system.ranges],
        }
    raise FormatError(f"cannot serialize system type {type(system).__name__}")


def system_from_json(obj: dict) -> SetSystem:
    if not isinstance(obj, dict):
        raise FormatError("system file must hold a JSON object")
    if "points" in obj:
        try:
            points = np.asarray(obj["points"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"field 'points': {exc}") from exc
        if points.ndim != 2:
            raise FormatError("field 'points': expected a list of coordinate rows")
        return GeometricSetSystem(points, ranges_from_json(obj.get("ranges", [])))
    if "n" in obj:
        try:
            return ExplicitSetSystem(int(obj["n"]), obj.get("ranges", []))
        except ValueError as exc:
            raise FormatError(f"explicit system: {exc}") from exc
    raise FormatError("system file needs either 'points' (geometric) or 'n' (explicit)")


def load_system(path) -> SetSystem:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return system_from_json(obj)


def save_system(system: SetSystem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(system_to_json(system), fh)
        fh.write("\n")


# -- points CSV -----------------------------------------------------------------


def points_to_csv(points: np.ndarray, path) -> None:
    points = np.asarray(points, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{i}" for i in range(points.shape[1])])
        writer.writerows(points.tolist())


def points_from_csv(path) -> np.ndarray:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: empty points file")
    start = 0
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        start = 1  # header row
    out = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row:
            continue
        try:
            out.append([float(c) for c in row])
        except ValueError as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    if not out:
        raise FormatError(f"{path}: no point rows")
    widths = {len(r) for r in out}
    if len(widths) != 1:
        raise FormatError(f"{path}: inconsistent column counts {sorted(widths)}")
    return np.asarray(out)


# -- result artifacts -----------------------------------------------------------


def matching_to_json(matching: Matching, crossing: int, incidence_calls: int, seed: int) -> dict:
    return {
        "edges": [[e.u, e.v] for e in matching.edges],
        "crossing_number": int(crossing),
        "incidence_calls": int(incidence_calls),
        "seed": int(seed),
    }


def matching_from_json(obj: dict, n: int) -> Matching:
    try:
        edges = [Edge.of(int(u), int(v)) for u, v in obj["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"matching file: field 'edges': {exc}") from exc
    return Matching(edges=edges, n=n)


def coloring_to_json(coloring: Coloring, disc: int) -> dict:
    return {"signs": coloring.signs.tolist(), "discrepancy": int(disc)}


def coloring_from_json(obj: dict) -> Coloring:
    try:
        return Coloring(signs=np.asarray(obj["signs"], dtype=np.int8))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"coloring file: field 'signs': {exc}") from exc


def approx_to_json(result: ApproxResult, incidence_calls: int) -> dict:
    return {
        "subset": result.subset.tolist(),
        "eps_measured": float(result.eps_measured),
        "rounds": int(result.rounds),
        "incidence_calls": int(incidence_calls),
    }


# -- benchmark CSV --------------------------------------------------------------


def rows_to_csv(rows: list[dict], path=None) -> str:
    """Write dict rows with a header; returns the CSV text."""
    if not rows:
        raise ValueError("no rows to write")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


# -- SVG ------------------------------------------------------------------------


def matching_svg(points: np.ndarray, matching: Matching, width: int = 800) -> str:
    """SVG 1.1 rendering of a 2-D point set with its matching edges."""
    points = np.asarray(points, dtype=float)
    if points.shape[1] != 2:
        raise ValueError(f"SVG rendering is 2-D only, got dimension {points.shape[1]}")
    lo = points.min(axis=0)
    hi = points.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    pad = 0.04 * width

    def sx(p):
        return pad + (p[0] - lo[0]) / span[0] * (width - 2 * pad)

    def sy(p):
        return width - (pad + (p[1] - lo[1]) / span[1] * (width - 2 * pad))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{width}" viewBox="0 0 {width} {width}">',
        f'<rect width="{width}" height="{width}" fill="white"/>',
    ]
    for e in matching.edges:
        if e.is_loop:
            continue
        a, b = points[e.u], points[e.v]
        parts.append(
            f'<line x1="{sx(a):.2f}" y1="{sy(a):.2f}" x2="{sx(b):.2f}" y2="{sy(b):.2f}" '
            'stroke="steelblue" stroke-width="1"/>'
        )
    r = max(1.0, width / 400)
    for p in points:
        parts.append(f'<circle cx="{sx(p):.2f}" cy="{sy(p):.2f}" r="{r:.2f}" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
