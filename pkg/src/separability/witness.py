"""Entanglement witness and PPT inequalities for a spin 1 with spin j2.

Everything here is expressed through the probabilities ``p_J = tr(P_J rho)``
for ``J = j2-1, j2, j2+1``, the quantities an experiment measures.

    W = -P_{j2-1}/(N-2) + P_{j2} + P_{j2+1}/(N+2)

is non-negative on separable states when N is even.  ``tr(W rho) < 0`` with both
PPT inequalities holding then certifies a PPT entangled state.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from src.algebra.spherical_tensors import HermitianOperator
from src.config import get_settings
from src.separability.geometry import pair_for, validate_n
from src.states.invariant_states import (
    AlphaVector,
    BetaVector,
    alpha_from_probabilities,
    alpha_to_beta,
    beta_to_alpha,
    projector_pj,
)

logger = logging.getLogger(__name__)


def witness_coefficients(n: int) -> tuple[float, float, float]:
    n = validate_n(n)
    return -1.0 / (n - 2), 1.0, 1.0 / (n + 2)


def witness_operator(n: int) -> HermitianOperator:
    """``W`` on the 3N-dimensional space."""
    n = validate_n(n)
    if n % 2:
        # product states at E give tr(W rho) < 0 when j2 is an integer
        logger.warning("W is an entanglement witness for even N only; N=%d is informational", n)
    pair = pair_for(n)
    matrix = sum(
        c * projector_pj(pair, j).matrix
        for c, j in zip(witness_coefficients(n), pair.j_values, strict=True)
    )
    return HermitianOperator(matrix)


def validate_probabilities(p, tol: float | None = None) -> np.ndarray:
    """Return ``p`` as an array after checking it is a probability triple."""
    tol = get_settings().numerics.normalization_tol if tol is None else tol
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected three probabilities (p_-, p_0, p_+), got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("probabilities must be finite")
    if np.any(arr < -tol):
        raise ValueError(f"probabilities must be non-negative, got {arr.tolist()}")
    if abs(arr.sum() - 1.0) > tol:
        raise ValueError(f"probabilities must sum to 1, got sum {arr.sum():.15g}")
    return arr


def witness_value(p, n: int) -> float:
    """``tr(W rho) = -p_-/(N-2) + p_0 + p_+/(N+2)``."""
    arr = validate_probabilities(p)
    return float(np.dot(witness_coefficients(n), arr))


def ppt_inequalities(p, n: int) -> tuple[float, float]:
    """Left-hand sides of the two inequalities equivalent to PPT.

    ``-2 p_-/(N-1) + (N^2-5) p_0/((N+1)(N-1)) + 2 p_+/(N+1) >= 0``
    ``2 p_-/((N-1)(N-2)) - 2 p_0/(N-1) + p_+ >= 0``
    """
    n = validate_n(n)
    pm, p0, pp = validate_probabilities(p)
    first = -2 * pm / (n - 1) + (n * n - 5) * p0 / ((n + 1) * (n - 1)) + 2 * pp / (n + 1)
    second = 2 * pm / ((n - 1) * (n - 2)) - 2 * p0 / (n - 1) + pp
    return float(first), float(second)


def probabilities_from_beta(beta, n: int) -> np.ndarray:
    """``p_J`` for a beta vector (or the plane point ``(beta_1, beta_2)``)."""
    pair = pair_for(n)
    if not isinstance(beta, BetaVector):
        values = np.asarray(beta, dtype=float)
        if values.shape == (2,):
            values = np.concatenate([[1.0], values])
        beta = BetaVector(pair, values)
    return beta_to_alpha(beta).probabilities


def beta_from_probabilities(p, n: int) -> BetaVector:
    arr = validate_probabilities(p)
    return alpha_to_beta(alpha_from_probabilities(pair_for(n), arr))


def alpha_from_beta_point(point, n: int) -> AlphaVector:
    return beta_to_alpha(BetaVector(pair_for(n), [1.0, point[0], point[1]]))


@dataclass(frozen=True)
class DetectionOutcome:
    """Result of the measurement protocol on a probability triple."""

    witness: float
    ineq1: float
    ineq2: float
    ppt: bool
    witness_violated: bool
    witness_applicable: bool

    @property
    def bound_entangled(self) -> bool:
        return self.ppt and self.witness_violated and self.witness_applicable


def detect_bound_entanglement(p, n: int, tol: float | None = None) -> DetectionOutcome:
    """Apply both PPT inequalities and the witness to measured ``p_J``.

    Args:
        p: Probabilities ``(p_-, p_0, p_+)`` of total spin ``j2 - 1``, ``j2``
            and ``j2 + 1``.
        n: Dimension of the second spin.
        tol: Slack on every sign test. Defaults to ``numerics.hull_margin``.

    Returns:
        DetectionOutcome. ``bound_entangled`` needs PPT, a violated witness
        and even N.
    """
    tol = get_settings().numerics.hull_margin if tol is None else tol
    n = validate_n(n)
    ineq1, ineq2 = ppt_inequalities(p, n)
    w = witness_value(p, n)
    return DetectionOutcome(
        witness=w,
        ineq1=ineq1,
        ineq2=ineq2,
        ppt=ineq1 >= -tol and ineq2 >= -tol,
        witness_violated=w < -tol,
        witness_applicable=n % 2 == 0,
    )
