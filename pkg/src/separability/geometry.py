"""Closed-form geometry of invariant states of a spin 1 and a spin j2.

N = 2 j2 + 1 >= 3.  States are points ``(beta_1, beta_2)`` of the plane
``beta_0 = 1``.

Named points
------------
A, B, C    Vertices of the state triangle (images of P_J/(2J+1)).
A'         Reflection of A through the beta_2 axis.
D, E       Remaining vertices of the PPT polygon, on the beta_2 axis.
F          Tangent point of the witness line h (even N only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from src.algebra.numbers import HalfInt
from src.config import get_settings
from src.oracle.hull import point_in_convex_polygon, polygon_area
from src.states.invariant_states import AlphaVector, SpinPair

RegionKind = Literal["polygon", "polygon-plus-curve"]


class Point2(NamedTuple):
    beta1: float
    beta2: float

    def distance(self, other) -> float:
        return math.hypot(self.beta1 - other[0], self.beta2 - other[1])


@dataclass(frozen=True)
class Region2:
    """A convex region given by CCW vertices.

    For ``polygon-plus-curve`` the curve (ordered, endpoints included)
    runs from the second-to-last vertex to the last one and replaces that edge.
    """

    kind: RegionKind
    vertices: tuple[Point2, ...]
    curve: tuple[Point2, ...] = ()
    curve_params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("polygon", "polygon-plus-curve"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        object.__setattr__(self, "vertices", tuple(Point2(*v) for v in self.vertices))
        object.__setattr__(self, "curve", tuple(Point2(*v) for v in self.curve))
        object.__setattr__(self, "curve_params", tuple(float(t) for t in self.curve_params))
        if self.kind == "polygon" and self.curve:
            raise ValueError("a plain polygon carries no curve")
        if self.kind == "polygon-plus-curve" and len(self.curve) < 2:
            raise ValueError("polygon-plus-curve needs at least two curve points")
        if self.curve_params and len(self.curve_params) != len(self.curve):
            raise ValueError("curve_params must match the curve length")
        if polygon_area(self.boundary()) <= 0:
            raise ValueError("region boundary must be counter-clockwise")

    def boundary(self) -> np.ndarray:
        if self.kind == "polygon":
            return np.array(self.vertices, dtype=float)
        return np.array(self.vertices[:-2] + self.curve, dtype=float)

    def contains(self, point, tol: float | None = None) -> bool:
        if tol is None:
            tol = get_settings().numerics.region_tol
        return point_in_convex_polygon(point, self.boundary(), tol)

    @property
    def area(self) -> float:
        return polygon_area(self.boundary())


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_n(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int | np.integer):
        raise TypeError(f"N must be an integer, got {type(n).__name__}")
    if n < 3:
        raise ValueError(f"N = 2 j2 + 1 must be at least 3, got {n}")
    return int(n)


def pair_for(n: int) -> SpinPair:
    """Spin 1 with spin ``(N-1)/2``."""
    return SpinPair(HalfInt(2), HalfInt(validate_n(n) - 1))


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def simplex_vertices_alpha(n: int) -> tuple[AlphaVector, AlphaVector, AlphaVector]:
    """Alpha coordinates of the extreme invariant states, J ascending.

    Order: P_{j2+1}/(N+2), P_{j2-1}/(N-2), P_{j2}/N, which map to A, B, C.
    """
    pair = pair_for(n)
    return (
        AlphaVector(pair, [0.0, 0.0, math.sqrt(3 * n / (n + 2))]),
        AlphaVector(pair, [math.sqrt(3 * n / (n - 2)), 0.0, 0.0]),
        AlphaVector(pair, [0.0, math.sqrt(3), 0.0]),
    )


def named_points(n: int) -> dict[str, Point2]:
    n = validate_n(n)
    a = Point2(
        math.sqrt(3 * (n - 1) / (2 * (n + 1))),
        math.sqrt((n - 1) * (n - 2) / (2 * (n + 1) * (n + 2))),
    )
    points = {
        "A": a,
        "B": Point2(
            -math.sqrt(3 * (n + 1) / (2 * (n - 1))),
            math.sqrt((n + 1) * (n + 2) / (2 * (n - 1) * (n - 2))),
        ),
        "C": Point2(
            -math.sqrt(6 / ((n - 1) * (n + 1))),
            -math.sqrt(2 * (n - 2) * (n + 2) / ((n - 1) * (n + 1))),
        ),
        "A'": Point2(-a.beta1, a.beta2),
        "D": Point2(0.0, -math.sqrt(2 * (n - 1) * (n - 2) / ((n + 1) * (n + 2)))),
        "E": Point2(0.0, math.sqrt((n + 1) * (n - 1) / (2 * (n + 2) * (n - 2)))),
    }
    if n % 2 == 0:
        points["F"] = f_point(n)
    return points


def f_point(n: int) -> Point2:
    """Tangent point of h; its beta_2 is epsilon_0(1)."""
    n = validate_n(n)
    if n % 2:
        raise ValueError(f"F exists only for even N (half-integer j2), got N={n}")
    return Point2(0.0, math.sqrt((n + 2) * (n - 2) / (2 * (n + 1) * (n - 1))))


def state_triangle(n: int) -> Region2:
    points = named_points(n)
    return Region2("polygon", (points["A"], points["B"], points["C"]))


def ppt_polygon(n: int) -> Region2:
    """Intersection of the state triangle with its reflection."""
    points = named_points(n)
    return Region2("polygon", (points["D"], points["A"], points["E"], points["A'"]))


def in_state_triangle(point, n: int, tol: float | None = None) -> bool:
    return state_triangle(n).contains(point, tol)


def in_ppt_polygon(point, n: int, tol: float | None = None) -> bool:
    return ppt_polygon(n).contains(point, tol)


def large_n_trend(n: int) -> dict[str, float]:
    """Distances that vanish as N grows: B approaches A', C approaches D, F approaches E."""
    points = named_points(n)
    trend = {
        "B_to_A_prime": points["B"].distance(points["A'"]),
        "C_to_D": points["C"].distance(points["D"]),
    }
    if "F" in points:
        trend["F_to_E"] = points["F"].distance(points["E"])
    return trend
