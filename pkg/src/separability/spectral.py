"""The one-spin operator H(lambda) whose top eigenvalue bounds beta_2.

For a spin-1 factor rotated to ``sqrt(r)|1,1> + sqrt(1-r)|1,-1>`` the
functional beta~_2 becomes ``<phi2|H(lambda)|phi2>`` with
``lambda = 2 sqrt(r(1-r))``, where

    H(lambda) = sqrt(N/10) T20 + lambda * 1/2 sqrt(3N/5) (T22 + T22^dagger)

acts on the spin j2 = (N-1)/2 alone.  Its largest eigenvalue
``epsilon_0(lambda)`` is convex and nondecreasing, so ``epsilon_0(1)`` bounds
beta_2 on product states.  For even N (half-integer j2) every level of H is
a time-reversal (Kramers) pair.
"""

from __future__ import annotations

import functools
import logging
import math

import numpy as np
import pandas as pd

from src.algebra.numbers import HalfInt
from src.algebra.spherical_tensors import (
    HermitianOperator,
    basis_state,
    jy_eigensystem,
    spin_matrices,
    tensor_matrix,
)
from src.config import get_settings
from src.separability.geometry import Point2, validate_n
from src.states.invariant_states import ProductState

logger = logging.getLogger(__name__)


def _spin(n: int) -> HalfInt:
    return HalfInt(validate_n(n) - 1)


@functools.lru_cache(maxsize=64)
def h_parts(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(H0, H1)`` as real symmetric arrays."""
    j = _spin(n)
    t22 = tensor_matrix(j, 2, 2)
    h0 = math.sqrt(n / 10) * tensor_matrix(j, 2, 0).real
    h1 = 0.5 * math.sqrt(3 * n / 5) * (t22 + t22.conj().T).real
    h0.setflags(write=False)
    h1.setflags(write=False)
    return h0, h1


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam}")
    return lam


def h_lambda(n: int, lam: float) -> HermitianOperator:
    h0, h1 = h_parts(validate_n(n))
    return HermitianOperator(h0 + _check_lambda(lam) * h1)


def h_one_spin_form(n: int) -> HermitianOperator:
    """``H(1)`` written with spin operators: ``c (j(j+1) - 3 jy^2)``."""
    j = _spin(n)
    jf = float(j)
    jy = spin_matrices(j).y
    scale = 2 * math.sqrt(2 / ((n + 2) * (n + 1) * (n - 1) * (n - 2)))
    return HermitianOperator(scale * (jf * (jf + 1) * np.eye(n) - 3 * (jy @ jy)))


def _spectrum(n: int, lam: float) -> tuple[np.ndarray, np.ndarray]:
    h0, h1 = h_parts(validate_n(n))
    return np.linalg.eigh(h0 + _check_lambda(lam) * h1)


def epsilon0(n: int, lam: float) -> float:
    """Largest eigenvalue of ``H(lambda)``."""
    return float(_spectrum(n, lam)[0][-1])


def epsilon0_closed_form(n: int) -> float:
    """``epsilon_0(1)`` for even N."""
    n = validate_n(n)
    if n % 2:
        raise ValueError(f"closed form holds for even N only, got N={n}")
    return math.sqrt((n + 2) * (n - 2) / (2 * (n + 1) * (n - 1)))


def _top_cluster(values: np.ndarray, tol: float) -> int:
    """Number of eigenvalues within ``tol`` of the largest."""
    return int(np.sum(values >= values[-1] - tol))


def epsilon0_derivative(n: int, lam: float) -> float:
    """Hellmann-Feynman slope of ``epsilon_0`` (right derivative when degenerate)."""
    values, vectors = _spectrum(n, lam)
    _, h1 = h_parts(n)
    top = vectors[:, -_top_cluster(values, get_settings().numerics.pairing_tol) :]
    return float(np.linalg.eigvalsh(top.conj().T @ h1 @ top)[-1])


def epsilon0_second_derivative(n: int, lam: float) -> float:
    """Second-order perturbation sum over levels outside the top cluster."""
    values, vectors = _spectrum(n, lam)
    _, h1 = h_parts(n)
    size = _top_cluster(values, get_settings().numerics.pairing_tol)
    top = vectors[:, -1]
    couplings = vectors[:, :-size].conj().T @ h1 @ top
    gaps = values[-1] - values[:-size]
    return float(2 * np.sum(np.abs(couplings) ** 2 / gaps))


def epsilon0_slope_at_zero(n: int, delta: float = 1e-4) -> float:
    """Richardson-extrapolated forward difference of ``epsilon_0`` at 0."""
    e0 = epsilon0(n, 0.0)
    coarse = (epsilon0(n, delta) - e0) / delta
    fine = (epsilon0(n, delta / 2) - e0) / (delta / 2)
    return 2 * fine - coarse


def kramers_pairs(n: int, lam: float) -> list[int]:
    """Multiplicities of the eigenvalue clusters of ``H(lambda)``, ascending."""
    values = _spectrum(n, lam)[0]
    tol = get_settings().numerics.pairing_tol
    multiplicities = [1]
    for prev, cur in zip(values[:-1], values[1:], strict=True):
        if cur - prev <= tol:
            multiplicities[-1] += 1
        else:
            multiplicities.append(1)
    return multiplicities


def epsilon0_table(n: int, grid: int | None = None) -> pd.DataFrame:
    """``epsilon_0`` on a uniform lambda grid with its finite differences."""
    grid = grid or get_settings().sampling.epsilon_grid
    lam = np.linspace(0.0, 1.0, grid)
    eps = np.array([epsilon0(n, x) for x in lam])
    table = pd.DataFrame({"lam": lam, "eps0": eps})
    table["first_diff"] = table["eps0"].diff()
    table["second_diff"] = table["eps0"].diff().diff()
    return table


# ---------------------------------------------------------------------------
# Ellipse arc through F
# ---------------------------------------------------------------------------


def _check_even(n: int) -> int:
    n = validate_n(n)
    if n % 2:
        raise ValueError(f"the ellipse arc exists for even N only, got N={n}")
    return n


def ellipse_curve(n: int, mu: float) -> Point2:
    """Upper ellipse arc traced by the fixed top doublet state."""
    n = _check_even(n)
    if not -1.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [-1, 1], got {mu}")
    eps = epsilon0_closed_form(n)
    return Point2(
        math.sqrt(3 * n * n / (8 * (n + 1) * (n - 1))) * mu,
        eps / 4 * (1 + 3 * math.sqrt(max(0.0, 1 - mu * mu))),
    )


@functools.lru_cache(maxsize=32)
def doublet_state(n: int) -> np.ndarray:
    """Equal superposition of the jy = +1/2 and -1/2 eigenstates.

    The relative phase is fixed by maximising ``<jz>``.
    """
    j = _spin(_check_even(n))
    w, vectors = jy_eigensystem(j)
    up = vectors[:, int(np.argmin(np.abs(w - 0.5)))]
    down = vectors[:, int(np.argmin(np.abs(w + 0.5)))]
    coupling = up.conj() @ spin_matrices(j).z @ down
    phase = np.conj(coupling) / abs(coupling)
    state = (up + phase * down) / math.sqrt(2)
    state.setflags(write=False)
    return state


def spin_one_factor(r: float) -> np.ndarray:
    """``sqrt(r)|1,1> + sqrt(1-r)|1,-1>``."""
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    return math.sqrt(r) * basis_state(1, 1) + math.sqrt(1 - r) * basis_state(1, -1)


def ellipse_state(n: int, mu: float) -> ProductState:
    """Product state whose beta~ is ``ellipse_curve(n, mu)``."""
    if not -1.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [-1, 1], got {mu}")
    return ProductState(spin_one_factor((1 + mu) / 2), doublet_state(n))


def ellipse_points(n: int, count: int | None = None) -> list[Point2]:
    count = count or get_settings().sampling.ellipse_points
    return [ellipse_curve(n, mu) for mu in np.linspace(-1.0, 1.0, count)]


def rotated_frame_beta(n: int, r: float, phi2: np.ndarray) -> Point2:
    """beta~ for the spin-1 factor ``spin_one_factor(r)`` and any ``phi2``.

    beta~_1 = sqrt(N/2) (2r-1) <T10>,  beta~_2 = <H(2 sqrt(r(1-r)))>.
    """
    validate_n(n)
    phi2 = np.asarray(phi2, dtype=complex)
    t10 = tensor_matrix(_spin(n), 1, 0)
    beta1 = math.sqrt(n / 2) * (2 * r - 1) * float(np.real(phi2.conj() @ t10 @ phi2))
    lam = min(1.0, 2 * math.sqrt(max(0.0, r * (1 - r))))
    beta2 = h_lambda(n, lam).expectation(phi2)
    return Point2(beta1, beta2)
