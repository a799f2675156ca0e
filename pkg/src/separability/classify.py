"""Separable region and classification of invariant states of spin 1 with spin j2.

Odd N: the PPT polygon is the separable region.

Even N: the separable region is bounded below by the segments A'D and DA
and above by a concave arc through A, F and A'.  It is certified from the
inside by the convex hull of

    A, A', D, F, points on the ellipse arc, sampled product states,

all of which are separable.  From the outside, everything above the line
``beta_2 = epsilon_0(1)`` through F violates the witness.  States strictly
between the two bounds are reported as Unknown.
"""

from __future__ import annotations

import functools
import logging
import sys
from dataclasses import dataclass

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # Python 3.10 backport of enum.StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

import numpy as np

from src.config import get_settings
from src.oracle.bruteforce import wbeta_cloud
from src.oracle.hull import Hull2D, convex_hull_2d, point_in_convex_polygon
from src.separability.geometry import (
    Point2,
    Region2,
    f_point,
    named_points,
    pair_for,
    ppt_polygon,
    state_triangle,
    validate_n,
)
from src.separability.spectral import ellipse_points
from src.separability.witness import ppt_inequalities, probabilities_from_beta, witness_value
from src.states.invariant_states import BetaVector

logger = logging.getLogger(__name__)


class VerdictKind(StrEnum):
    NOT_A_STATE = "NotAState"
    SEPARABLE = "Separable"
    PPT_ENTANGLED = "PptEntangled"
    NPT_ENTANGLED = "NptEntangled"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    certificate: str
    point: Point2


# ---------------------------------------------------------------------------
# Certified inner bound (even N)
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=16)
def _certified_hull(
    n: int, samples: int, seed: int | None, scheme: str, ellipse_count: int
) -> Hull2D:
    points = named_points(n)
    seeds = [points["A"], points["A'"], points["D"], points["F"]]
    stacked = [np.array(seeds), np.array(ellipse_points(n, ellipse_count))]
    if samples:
        cloud = wbeta_cloud(pair_for(n), samples, seed, scheme=scheme)
        stacked.append(cloud.plane)
    hull = convex_hull_2d(np.vstack(stacked))
    logger.info(
        "Certified separable hull for N=%d: %d vertices from %d samples",
        n,
        len(hull.vertices),
        samples,
    )
    return hull


def certified_separable_hull(
    n: int,
    *,
    samples: int | None = None,
    seed: int | None = None,
    scheme: str | None = None,
) -> Hull2D:
    """Convex hull of known separable points for even N."""
    n = validate_n(n)
    if n % 2:
        raise ValueError(f"the certified hull is only needed for even N, got N={n}")
    sampling = get_settings().sampling
    samples = sampling.certification_samples if samples is None else samples
    if samples < 0:
        raise ValueError(f"samples must be non-negative, got {samples}")
    if samples and seed is None:
        seed = sampling.certification_seed
    return _certified_hull(
        n, samples, seed, scheme or sampling.scheme, sampling.ellipse_points
    )


def separable_region(
    n: int,
    *,
    samples: int | None = None,
    seed: int | None = None,
    scheme: str | None = None,
) -> Region2:
    """The PPT polygon for odd N; for even N, D A A' capped by the certified hull."""
    n = validate_n(n)
    if n % 2:
        return ppt_polygon(n)

    points = named_points(n)
    a, a_prime = points["A"], points["A'"]
    hull = certified_separable_hull(n, samples=samples, seed=seed, scheme=scheme)
    upper = [
        Point2(*v)
        for v in hull.vertices
        if v[1] > a.beta2 + 1e-12 and abs(v[0]) < a.beta1
    ]
    curve = [a, *sorted(upper, key=lambda p: -p.beta1), a_prime]

    steps = np.hypot(*np.diff(np.array(curve), axis=0).T)
    params = np.concatenate([[0.0], np.cumsum(steps)]) / np.sum(steps)
    return Region2(
        "polygon-plus-curve",
        (points["D"], a, a_prime),
        curve=tuple(curve),
        curve_params=tuple(params),
    )


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def _plane_point(beta, n: int) -> Point2:
    pair = pair_for(n)
    if isinstance(beta, BetaVector):
        if beta.pair != pair:
            raise ValueError(f"beta belongs to {beta.pair}, expected {pair}")
        values = beta.values
    else:
        values = np.asarray(beta, dtype=float)
        if values.shape != (3,):
            raise ValueError(f"beta needs three components, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("beta must be finite")
    if abs(values[0] - 1.0) > get_settings().numerics.normalization_tol:
        raise ValueError(f"beta_0 must equal 1 (trace one), got {values[0]}")
    return Point2(float(values[1]), float(values[2]))


def _npt_certificate(point: Point2, n: int) -> str:
    p = np.clip(probabilities_from_beta(point, n), 0.0, None)
    ineq1, ineq2 = ppt_inequalities(p / p.sum(), n)
    failed = [
        f"PPT inequality {i} (lhs={value:.6g})"
        for i, value in ((1, ineq1), (2, ineq2))
        if value < 0
    ]
    return "outside PPT polygon A A' D E; violates " + (" and ".join(failed) or "polygon edge")


def classify(
    beta,
    n: int,
    *,
    samples: int | None = None,
    seed: int | None = None,
    scheme: str | None = None,
) -> Verdict:
    """Classify an invariant state given by ``beta = (1, beta_1, beta_2)``.

    Checks run in order: state triangle, PPT polygon, odd N, line h through
    F, triangle D A A', then the sampled separable hull. The first check
    that decides the state wins.

    Args:
        beta: ``BetaVector`` of the 3 x N pair, or three numbers with
            ``beta_0 = 1``.
        n: Dimension of the second spin, at least 3.
        samples: Product states behind the certified hull. Defaults to
            ``sampling.certification_samples``.
        seed: Seed for those samples. Defaults to
            ``sampling.certification_seed``.
        scheme: ``haar``, ``tilted`` or ``mixed``.

    Returns:
        Verdict with its kind, a human-readable certificate and the plane
        point that was tested.
    """
    n = validate_n(n)
    point = _plane_point(beta, n)
    numerics = get_settings().numerics

    if not state_triangle(n).contains(point, numerics.region_tol):
        return Verdict(VerdictKind.NOT_A_STATE, "outside state triangle A B C", point)

    if not ppt_polygon(n).contains(point, numerics.region_tol):
        return Verdict(VerdictKind.NPT_ENTANGLED, _npt_certificate(point, n), point)

    if n % 2:
        return Verdict(
            VerdictKind.SEPARABLE,
            "odd N: every PPT invariant state is separable",
            point,
        )

    f = f_point(n)
    if point.beta2 > f.beta2 + numerics.hull_margin:
        p = np.clip(probabilities_from_beta(point, n), 0.0, None)
        w = witness_value(p / p.sum(), n)
        return Verdict(
            VerdictKind.PPT_ENTANGLED,
            f"PPT but tr(W rho) = {w:.6g} < 0: above line h through F",
            point,
        )

    points = named_points(n)
    lower = np.array([points["D"], points["A"], points["A'"]])
    if point_in_convex_polygon(point, lower, numerics.region_tol):
        return Verdict(VerdictKind.SEPARABLE, "inside triangle D A A' of product states", point)

    hull = certified_separable_hull(n, samples=samples, seed=seed, scheme=scheme)
    if hull.contains(point, -numerics.hull_margin):
        return Verdict(
            VerdictKind.SEPARABLE,
            f"inside certified separable hull ({len(hull.vertices)} vertices)",
            point,
        )
    return Verdict(
        VerdictKind.UNKNOWN,
        "PPT, below line h, outside certified separable hull",
        point,
    )
