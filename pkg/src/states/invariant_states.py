"""Rotationally invariant states of two spins j1 <= j2.

An invariant state is diagonal in the total-spin projectors P_J, or
equivalently a combination of the invariant operators
``Q_K = sum_q T1_Kq (x) T2_Kq^dagger``.  The two coordinate systems are

    rho = 1/sqrt(N1 N2) * sum_J alpha_J / sqrt(2J+1) * P_J
    rho = 1/sqrt(N1 N2) * sum_K beta_K  / sqrt(2K+1) * Q_K

and ``beta = L alpha`` with L real orthogonal.

Product-basis index is ``i1 * N2 + i2`` with both factors in ascending m,
which is the ``np.kron`` order.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from src.algebra.numbers import HalfInt, SqrtRational, half_integer_range
from src.algebra.spherical_tensors import (
    HermitianOperator,
    basis_state,
    pi_rotation_matrix,
    tensor_matrix,
    tensor_stack,
    time_reversed_state,
)
from src.algebra.wigner_symbols import clebsch_gordan, triangle_ok, wigner_6j
from src.config import get_settings

logger = logging.getLogger(__name__)

LMethod = Literal["trace", "six_j", "closed_rows"]
L_METHODS: tuple[LMethod, ...] = ("trace", "six_j", "closed_rows")


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpinPair:
    """Two spins with ``j1 <= j2``."""

    j1: HalfInt
    j2: HalfInt

    def __post_init__(self) -> None:
        j1, j2 = HalfInt.of(self.j1), HalfInt.of(self.j2)
        if j1.twice < 0:
            raise ValueError(f"spins must be non-negative, got j1={j1}")
        if j1 > j2:
            raise ValueError(f"expected j1 <= j2, got j1={j1}, j2={j2}")
        object.__setattr__(self, "j1", j1)
        object.__setattr__(self, "j2", j2)

    @classmethod
    def of(cls, j1, j2) -> SpinPair:
        return cls(HalfInt.of(j1), HalfInt.of(j2))

    @property
    def n1(self) -> int:
        return self.j1.twice + 1

    @property
    def n2(self) -> int:
        return self.j2.twice + 1

    @property
    def dim(self) -> int:
        return self.n1 * self.n2

    @property
    def j_values(self) -> tuple[HalfInt, ...]:
        """Total spins ``j2-j1, ..., j1+j2``."""
        lo = self.j2.twice - self.j1.twice
        return tuple(HalfInt(t) for t in range(lo, self.j1.twice + self.j2.twice + 1, 2))

    @property
    def k_values(self) -> tuple[int, ...]:
        return tuple(range(self.n1))

    def __str__(self) -> str:
        return f"{self.j1}x{self.j2}"


def _coordinates(pair: SpinPair, values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.shape != (pair.n1,):
        raise ValueError(
            f"{name} for {pair} needs {pair.n1} components, got shape {arr.shape}"
        )
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class AlphaVector:
    """Coordinates ``alpha_J`` for ``J = j2-j1 .. j1+j2`` (ascending)."""

    pair: SpinPair
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _coordinates(self.pair, self.values, "alpha"))

    @property
    def labels(self) -> tuple[HalfInt, ...]:
        return self.pair.j_values

    @property
    def weights(self) -> np.ndarray:
        """``sqrt((2J+1)/(N1 N2))`` per slot."""
        return np.array([(j.twice + 1) / self.pair.dim for j in self.labels]) ** 0.5

    @property
    def probabilities(self) -> np.ndarray:
        """``p_J = tr(P_J rho)``."""
        return self.weights * self.values

    @property
    def is_state(self) -> bool:
        numerics = get_settings().numerics
        positive = bool(np.all(self.values >= -numerics.positivity_tol))
        total = float(self.weights @ self.values)
        return positive and abs(total - 1.0) <= numerics.normalization_tol

    def __getitem__(self, j) -> float:
        return float(self.values[self.labels.index(HalfInt.of(j))])


@dataclass(frozen=True, eq=False)
class BetaVector:
    """Coordinates ``beta_K`` for ``K = 0 .. 2 j1``."""

    pair: SpinPair
    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _coordinates(self.pair, self.values, "beta"))

    @property
    def labels(self) -> tuple[int, ...]:
        return self.pair.k_values

    @property
    def is_state(self) -> bool:
        return abs(float(self.values[0]) - 1.0) <= get_settings().numerics.normalization_tol

    def __getitem__(self, k: int) -> float:
        return float(self.values[k])


@dataclass(frozen=True, eq=False)
class ProductState:
    """Pure product state ``phi1 (x) phi2`` of unit-norm factors."""

    phi1: np.ndarray
    phi2: np.ndarray

    def __post_init__(self) -> None:
        for name in ("phi1", "phi2"):
            vec = np.array(getattr(self, name), dtype=complex)
            if vec.ndim != 1 or vec.size == 0:
                raise ValueError(f"{name} must be a non-empty vector")
            norm = float(np.linalg.norm(vec))
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"{name} is not normalized (norm {norm:.15g})")
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)

    @classmethod
    def from_basis(cls, pair: SpinPair, m1, m2) -> ProductState:
        return cls(basis_state(pair.j1, m1), basis_state(pair.j2, m2))

    @property
    def vector(self) -> np.ndarray:
        return np.kron(self.phi1, self.phi2)

    def time_reversed(self) -> ProductState:
        """Apply the time reversal to the second factor only."""
        j2 = HalfInt(self.phi2.size - 1)
        return ProductState(self.phi1, time_reversed_state(j2, self.phi2))

    def check_pair(self, pair: SpinPair) -> None:
        if (self.phi1.size, self.phi2.size) != (pair.n1, pair.n2):
            raise ValueError(
                f"state dims ({self.phi1.size}, {self.phi2.size}) do not match {pair}"
            )


# ---------------------------------------------------------------------------
# Projectors and invariant operators
# ---------------------------------------------------------------------------


def _check_total_spin(pair: SpinPair, j) -> HalfInt:
    j = HalfInt.of(j)
    if not triangle_ok(pair.j1, pair.j2, j):
        raise ValueError(f"J={j} cannot be reached from {pair}")
    return j


def coupled_state(pair: SpinPair, j, m) -> np.ndarray:
    """``|J M> = sum_{m1+m2=M} <j1 m1; j2 m2|J M> |m1>|m2>``."""
    j, m = _check_total_spin(pair, j), HalfInt.of(m)
    if abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
        raise ValueError(f"M={m} is not a magnetic number of J={j}")
    vec = np.zeros(pair.dim)
    for i1, m1 in enumerate(half_integer_range(pair.j1)):
        m2 = m - m1
        if abs(m2.twice) > pair.j2.twice:
            continue
        i2 = (m2.twice + pair.j2.twice) // 2
        vec[i1 * pair.n2 + i2] = float(clebsch_gordan(pair.j1, m1, pair.j2, m2, j, m))
    return vec


@functools.lru_cache(maxsize=256)
def _projector_matrix(pair: SpinPair, j: HalfInt) -> np.ndarray:
    vectors = np.array([coupled_state(pair, j, m) for m in half_integer_range(j)])
    matrix = vectors.T @ vectors
    matrix.setflags(write=False)
    return matrix


def projector_pj(pair: SpinPair, j) -> HermitianOperator:
    """Projector onto total spin J."""
    return HermitianOperator(_projector_matrix(pair, _check_total_spin(pair, j)))


@functools.lru_cache(maxsize=256)
def _invariant_matrix(pair: SpinPair, k: int) -> np.ndarray:
    matrix = sum(
        np.kron(tensor_matrix(pair.j1, k, q), tensor_matrix(pair.j2, k, q).conj().T)
        for q in range(-k, k + 1)
    )
    matrix = np.asarray(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


def operator_qk(pair: SpinPair, k: int) -> HermitianOperator:
    """``Q_K = sum_q T1_Kq (x) T2_Kq^dagger`` for ``0 <= K <= 2 j1``."""
    if k not in pair.k_values:
        raise ValueError(f"K={k} out of range 0..{pair.n1 - 1} for {pair}")
    return HermitianOperator(_invariant_matrix(pair, k))


# ---------------------------------------------------------------------------
# Coordinates <-> operators
# ---------------------------------------------------------------------------


def _as_matrix(rho, pair: SpinPair) -> np.ndarray:
    matrix = np.asarray(rho)
    if matrix.shape != (pair.dim, pair.dim):
        raise ValueError(
            f"operator shape {matrix.shape} does not match {pair} (dim {pair.dim})"
        )
    return matrix


def rho_from_alpha(alpha: AlphaVector) -> HermitianOperator:
    pair = alpha.pair
    matrix = np.zeros((pair.dim, pair.dim), dtype=complex)
    for a, j in zip(alpha.values, pair.j_values, strict=True):
        matrix += a / np.sqrt(j.twice + 1) * _projector_matrix(pair, j)
    return HermitianOperator(matrix / np.sqrt(pair.dim))


def rho_from_beta(beta: BetaVector) -> HermitianOperator:
    pair = beta.pair
    matrix = np.zeros((pair.dim, pair.dim), dtype=complex)
    for b, k in zip(beta.values, pair.k_values, strict=True):
        matrix += b / np.sqrt(2 * k + 1) * _invariant_matrix(pair, k)
    return HermitianOperator(matrix / np.sqrt(pair.dim))


def twirl(rho, pair: SpinPair) -> tuple[AlphaVector, BetaVector]:
    """Coordinates of the rotation average of ``rho`` (any operator)."""
    matrix = _as_matrix(rho, pair)
    alpha = [
        np.sqrt(pair.dim / (j.twice + 1))
        * np.real(np.einsum("ij,ji->", _projector_matrix(pair, j), matrix))
        for j in pair.j_values
    ]
    beta = [
        np.sqrt(pair.dim / (2 * k + 1))
        * np.real(np.einsum("ij,ji->", _invariant_matrix(pair, k), matrix))
        for k in pair.k_values
    ]
    return AlphaVector(pair, alpha), BetaVector(pair, beta)


def alpha_to_beta(alpha: AlphaVector) -> BetaVector:
    return BetaVector(alpha.pair, l_matrix(alpha.pair) @ alpha.values)


def beta_to_alpha(beta: BetaVector) -> AlphaVector:
    return AlphaVector(beta.pair, l_matrix(beta.pair).T @ beta.values)


def probabilities_from_alpha(alpha: AlphaVector) -> np.ndarray:
    return alpha.probabilities


def alpha_from_probabilities(pair: SpinPair, probabilities) -> AlphaVector:
    p = np.asarray(probabilities, dtype=float)
    weights = np.array([(j.twice + 1) / pair.dim for j in pair.j_values]) ** 0.5
    if p.shape != weights.shape:
        raise ValueError(f"{pair} needs {pair.n1} probabilities, got shape {p.shape}")
    return AlphaVector(pair, p / weights)


def simplex_vertices(pair: SpinPair) -> tuple[AlphaVector, ...]:
    """Alpha coordinates of ``P_J / (2J+1)``, one per J."""
    vertices = []
    for i, j in enumerate(pair.j_values):
        values = np.zeros(pair.n1)
        values[i] = np.sqrt(pair.dim / (j.twice + 1))
        vertices.append(AlphaVector(pair, values))
    return tuple(vertices)


# ---------------------------------------------------------------------------
# The L matrix
# ---------------------------------------------------------------------------


def _closed_row_entry(pair: SpinPair, k: int, j: HalfInt) -> SqrtRational:
    j1, j2, jf = pair.j1.as_fraction(), pair.j2.as_fraction(), j.as_fraction()
    n1, n2 = pair.n1, pair.n2
    multiplicity = 2 * jf + 1
    x = j1 * (j1 + 1) + j2 * (j2 + 1) - jf * (jf + 1)
    if k == 0:
        return SqrtRational.from_signed_square(multiplicity / (n1 * n2))
    if k == 1:
        denominator = (n1 - 1) * n1 * (n1 + 1) * (n2 - 1) * n2 * (n2 + 1)
        square = 12 * multiplicity * x * x / denominator
        return SqrtRational.from_signed_square(-square if x > 0 else square)
    if k == 2:
        y = 3 * x * (x - 1) - 4 * j1 * (j1 + 1) * j2 * (j2 + 1)
        denominator = 1
        for n in (n1, n2):
            denominator *= (n + 2) * (n + 1) * n * (n - 1) * (n - 2)
        square = 20 * multiplicity * y * y / denominator
        return SqrtRational.from_signed_square(square if y > 0 else -square)
    raise ValueError(f"no closed form for row K={k}")


def _six_j_entry(pair: SpinPair, k: int, j: HalfInt) -> SqrtRational:
    symbol = wigner_6j(pair.j1, pair.j2, j, pair.j2, pair.j1, k)
    phase = -1 if ((pair.j1.twice + pair.j2.twice + j.twice) // 2) % 2 else 1
    return symbol * SqrtRational(phase, Fraction((2 * k + 1) * (j.twice + 1)))


def l_matrix_exact(
    pair: SpinPair, method: LMethod = "six_j"
) -> list[list[SqrtRational | None]]:
    """Exact L entries; rows K beyond 2 are None for ``closed_rows``."""
    if method == "six_j":
        return [[_six_j_entry(pair, k, j) for j in pair.j_values] for k in pair.k_values]
    if method == "closed_rows":
        return [
            [_closed_row_entry(pair, k, j) if k <= 2 else None for j in pair.j_values]
            for k in pair.k_values
        ]
    raise ValueError(f"exact L matrix supports six_j and closed_rows, not {method!r}")


@functools.lru_cache(maxsize=128)
def _l_matrix_cached(pair: SpinPair, method: LMethod) -> np.ndarray:
    if method == "trace":
        matrix = np.array(
            [
                [
                    np.real(
                        np.einsum(
                            "ij,ji->",
                            _invariant_matrix(pair, k),
                            _projector_matrix(pair, j),
                        )
                    )
                    / np.sqrt((2 * k + 1) * (j.twice + 1))
                    for j in pair.j_values
                ]
                for k in pair.k_values
            ]
        )
    else:
        exact = l_matrix_exact(pair, method)
        matrix = np.array(
            [[np.nan if x is None else float(x) for x in row] for row in exact]
        )
    matrix.setflags(write=False)
    return matrix


def l_matrix(pair: SpinPair, method: LMethod = "six_j") -> np.ndarray:
    """Orthogonal matrix with ``beta = L alpha`` (rows K, columns J).

    ``closed_rows`` returns a masked array whose rows K > 2 are masked.
    """
    if method not in L_METHODS:
        raise ValueError(f"method must be one of {L_METHODS}, got {method!r}")
    matrix = _l_matrix_cached(pair, method)
    if method == "closed_rows":
        if pair.n1 > 3:
            logger.debug("closed_rows leaves rows K=3..%d of %s masked", pair.n1 - 1, pair)
        return np.ma.masked_invalid(matrix)
    return matrix


# ---------------------------------------------------------------------------
# Partial transpose and partial time reversal
# ---------------------------------------------------------------------------


def partial_transpose(rho, pair: SpinPair) -> HermitianOperator:
    """Transpose on the second factor in the product basis."""
    n1, n2 = pair.n1, pair.n2
    matrix = _as_matrix(rho, pair).reshape(n1, n2, n1, n2).transpose(0, 3, 2, 1)
    return HermitianOperator(matrix.reshape(pair.dim, pair.dim))


def partial_time_reversal(rho, pair: SpinPair) -> HermitianOperator:
    """``(I (x) V) T2(rho) (I (x) V)^dagger``; unitarily equivalent to T2."""
    local = np.kron(np.eye(pair.n1), pi_rotation_matrix(pair.j2))
    return HermitianOperator(local @ partial_transpose(rho, pair).matrix @ local.T)


def partial_time_reversal_beta(beta: BetaVector) -> BetaVector:
    """``beta_K -> (-1)^K beta_K``."""
    signs = np.array([(-1.0) ** k for k in beta.labels])
    return BetaVector(beta.pair, signs * beta.values)


def ppt_interval_2xn(j2) -> tuple[float, float]:
    """Range of beta_1 over PPT invariant states of a spin-1/2 and spin j2."""
    pair = SpinPair.of(Fraction(1, 2), j2)
    endpoints = [float(l_matrix(pair)[1] @ v.values) for v in simplex_vertices(pair)]
    half_width = min(abs(e) for e in endpoints)
    return -half_width, half_width


# ---------------------------------------------------------------------------
# beta functionals on product states
# ---------------------------------------------------------------------------


def beta_functionals_batch(
    phi1s: np.ndarray, phi2s: np.ndarray, pair: SpinPair
) -> np.ndarray:
    """Vectorised beta~ for ``S`` product states; returns an ``(S, N1)`` array."""
    phi1s = np.atleast_2d(np.asarray(phi1s, dtype=complex))
    phi2s = np.atleast_2d(np.asarray(phi2s, dtype=complex))
    if phi1s.shape[1] != pair.n1 or phi2s.shape[1] != pair.n2:
        raise ValueError(
            f"state batch shapes {phi1s.shape}, {phi2s.shape} do not match {pair}"
        )
    if phi1s.shape[0] != phi2s.shape[0]:
        raise ValueError("phi1s and phi2s must hold the same number of states")

    out = np.empty((phi1s.shape[0], pair.n1), dtype=complex)
    for k in pair.k_values:
        first = np.einsum(
            "si,qij,sj->sq", phi1s.conj(), tensor_stack(pair.j1, k), phi1s, optimize=True
        )
        second = np.einsum(
            "si,qij,sj->sq", phi2s.conj(), tensor_stack(pair.j2, k), phi2s, optimize=True
        )
        # <phi2|T^dagger|phi2> = conj(<phi2|T|phi2>)
        out[:, k] = np.sqrt(pair.dim / (2 * k + 1)) * np.sum(first * second.conj(), axis=1)

    leak = float(np.max(np.abs(out.imag))) if out.size else 0.0
    if leak > 1e-12 * np.sqrt(pair.dim):
        raise RuntimeError(f"beta functionals have imaginary part {leak:.3e}")
    return out.real


def beta_functionals(state: ProductState, pair: SpinPair) -> BetaVector:
    """``beta~_K = sqrt(N1 N2/(2K+1)) sum_q <T1_Kq> <T2_Kq^dagger>``."""
    state.check_pair(pair)
    values = beta_functionals_batch(state.phi1[None, :], state.phi2[None, :], pair)[0]
    return BetaVector(pair, values)
