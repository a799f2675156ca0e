"""Planar convex hulls and convex-polygon predicates.

Polygons are ``(k, 2)`` float arrays of vertices in counter-clockwise order
without a repeated closing vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Hull2D:
    vertices: np.ndarray
    degenerate: bool

    @property
    def area(self) -> float:
        return 0.0 if self.degenerate else polygon_area(self.vertices)

    def contains(self, point, tol: float = 0.0) -> bool:
        if self.degenerate:
            return False
        return point_in_convex_polygon(point, self.vertices, tol)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points, tol: float = 1e-12) -> Hull2D:
    """Andrew's monotone chain.

    Collinear boundary points are dropped.  Fewer than three hull vertices
    give a segment or a point, returned with ``degenerate=True``.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) == 0:
        raise ValueError(f"expected a non-empty (n, 2) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")

    order = np.lexsort((pts[:, 1], pts[:, 0]))
    ordered = [tuple(p) for p in pts[order]]
    unique = [ordered[0]]
    for p in ordered[1:]:
        if p != unique[-1]:
            unique.append(p)
    if len(unique) < 3:
        return Hull2D(np.array(unique), degenerate=True)

    lower: list[tuple[float, float]] = []
    for p in unique:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(unique):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)

    vertices = np.array(lower[:-1] + upper[:-1])
    return Hull2D(vertices, degenerate=len(vertices) < 3)


def polygon_area(vertices) -> float:
    """Signed shoelace area; positive for counter-clockwise order."""
    v = np.asarray(vertices, dtype=float)
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def signed_edge_distances(point, vertices) -> np.ndarray:
    """Signed distance of ``point`` to each edge line, positive inside."""
    v = np.asarray(vertices, dtype=float)
    p = np.asarray(point, dtype=float)
    edges = np.roll(v, -1, axis=0) - v
    rel = p - v
    cross = edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]
    return cross / np.linalg.norm(edges, axis=1)


def point_in_convex_polygon(point, vertices, tol: float = 0.0) -> bool:
    """True when ``point`` is inside or within ``tol`` of a CCW convex polygon.

    A negative ``tol`` demands the point sit at least ``|tol|`` inside.
    """
    return bool(np.all(signed_edge_distances(point, vertices) >= -tol))


def _line_intersection(p, q, a, b) -> np.ndarray:
    d1, d2 = q - p, b - a
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    t = ((a[0] - p[0]) * d2[1] - (a[1] - p[1]) * d2[0]) / denom
    return p + t * d1


def clip_convex_polygon(subject, clip, tol: float = 1e-12) -> np.ndarray:
    """Sutherland-Hodgman intersection of two CCW convex polygons."""
    output = [np.asarray(v, dtype=float) for v in np.asarray(subject, dtype=float)]
    clip = np.asarray(clip, dtype=float)
    for i in range(len(clip)):
        a, b = clip[i], clip[(i + 1) % len(clip)]
        inputs, output = output, []
        if not inputs:
            break
        for k in range(len(inputs)):
            current, previous = inputs[k], inputs[k - 1]
            current_in = _cross(a, b, current) >= -tol
            previous_in = _cross(a, b, previous) >= -tol
            if current_in:
                if not previous_in:
                    output.append(_line_intersection(previous, current, a, b))
                output.append(current)
            elif previous_in:
                output.append(_line_intersection(previous, current, a, b))

    deduped: list[np.ndarray] = []
    for v in output:
        if not deduped or np.linalg.norm(v - deduped[-1]) > 1e-9:
            deduped.append(v)
    if len(deduped) > 1 and np.linalg.norm(deduped[0] - deduped[-1]) <= 1e-9:
        deduped.pop()
    return np.array(deduped).reshape(-1, 2)


def hull_coverage(inner, outer) -> float:
    """Area of ``inner`` clipped to ``outer``, as a fraction of ``outer``."""
    outer_area = polygon_area(outer)
    if outer_area <= 0:
        raise ValueError("outer polygon must be counter-clockwise with positive area")
    return polygon_area(clip_convex_polygon(inner, outer)) / outer_area
