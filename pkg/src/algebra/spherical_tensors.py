"""Spherical tensor operators and spin matrices on a single spin j.

Basis convention: index ``a`` of a (2j+1)-vector is the magnetic number
``m = -j + a`` (ascending).  Every matrix built here follows it.

Functions
---------
tensor_element          Exact <m|T_Kq|m'> from the 3j symbol.
tensor_matrix           Cached read-only complex matrix of T_Kq.
closed_form_element     Explicit rank-1 and rank-2 elements, used as an oracle.
spin_matrices           jx, jy, jz, j+, j- for spin j.
pi_rotation_matrix      V with V_{m'm} = (-1)^(j-m') delta_{m',-m}.
time_reversal           B -> V B^T V^dagger.
y_rotation              exp(-i theta jy) via an eigendecomposition of jy.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, NamedTuple

import numpy as np

from src.algebra.numbers import ZERO, HalfInt, SqrtRational, half_integer_range
from src.algebra.wigner_symbols import wigner_3j
from src.config import get_settings

ClosedFormCase = Literal["T10", "T11", "T20", "T21", "T22"]


def dimension(j: HalfInt) -> int:
    return j.twice + 1


def basis_m_values(j) -> list[HalfInt]:
    return half_integer_range(HalfInt.of(j))


def basis_index(j: HalfInt, m: HalfInt) -> int:
    if abs(m.twice) > j.twice or (j.twice - m.twice) % 2:
        raise ValueError(f"m={m} is not a magnetic number of j={j}")
    return (m.twice + j.twice) // 2


def basis_state(j, m) -> np.ndarray:
    """Unit vector |j, m> as a complex array."""
    j, m = HalfInt.of(j), HalfInt.of(m)
    vec = np.zeros(dimension(j), dtype=complex)
    vec[basis_index(j, m)] = 1.0
    return vec


# ---------------------------------------------------------------------------
# Hermitian operators
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A square Hermitian matrix, checked on construction and stored read-only."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
        tol = get_settings().numerics.hermiticity_tol
        deviation = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if deviation > tol:
            raise ValueError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def expectation(self, vector: np.ndarray) -> float:
        v = np.asarray(vector, dtype=complex)
        return float(np.real(v.conj() @ self.matrix @ v))

    def trace_with(self, other) -> float:
        """Real part of ``tr(self @ other)``."""
        return float(np.real(np.einsum("ij,ji->", self.matrix, np.asarray(other))))


# ---------------------------------------------------------------------------
# Tensor operators
# ---------------------------------------------------------------------------


def _check_rank(j: HalfInt, rank: int, component: int) -> None:
    if rank < 0 or rank > j.twice:
        raise ValueError(f"rank K={rank} must satisfy 0 <= K <= 2j = {j.twice}")
    if abs(component) > rank:
        raise ValueError(f"component q={component} exceeds rank K={rank}")


def tensor_element(j, rank: int, component: int, m, m_prime) -> SqrtRational:
    """``<j m|T_Kq|j m'> = sqrt(2K+1) (-1)^(j-m) (j j K; m -m' -q)``."""
    j, m, m_prime = HalfInt.of(j), HalfInt.of(m), HalfInt.of(m_prime)
    _check_rank(j, rank, component)
    if m.twice - m_prime.twice != 2 * component:
        basis_index(j, m)
        basis_index(j, m_prime)
        return ZERO
    symbol = wigner_3j(j, j, rank, m, -m_prime, -component)
    phase = -1 if ((j.twice - m.twice) // 2) % 2 else 1
    return symbol * SqrtRational(phase, Fraction(2 * rank + 1))


def tensor_matrix_exact(j, rank: int, component: int) -> list[list[SqrtRational]]:
    j = HalfInt.of(j)
    ms = half_integer_range(j)
    return [[tensor_element(j, rank, component, a, b) for b in ms] for a in ms]


@functools.lru_cache(maxsize=512)
def _tensor_matrix_cached(j: HalfInt, rank: int, component: int) -> np.ndarray:
    exact = tensor_matrix_exact(j, rank, component)
    matrix = np.array([[float(x) for x in row] for row in exact], dtype=complex)
    matrix.setflags(write=False)
    return matrix


def tensor_matrix(j, rank: int, component: int) -> np.ndarray:
    """Read-only complex matrix of ``T_Kq`` on spin ``j``."""
    j = HalfInt.of(j)
    _check_rank(j, rank, component)
    return _tensor_matrix_cached(j, rank, component)


def tensor_stack(j, rank: int) -> np.ndarray:
    """All components ``q = -K..K`` stacked along the first axis."""
    return np.stack([tensor_matrix(j, rank, q) for q in range(-rank, rank + 1)])


def closed_form_element(j, case: ClosedFormCase, m) -> SqrtRational:
    """Explicit matrix elements of low-rank tensors.

    T10   <m|T10|m>
    T11   <m|T11^dagger|m+1>
    T20   <m|T20|m>
    T21   <m|T21^dagger|m+1>
    T22   <m|T22^dagger|m+2>

    Elements whose ket falls outside the multiplet vanish.
    """
    j, m = HalfInt.of(j), HalfInt.of(m)
    basis_index(j, m)
    jf, mf = j.as_fraction(), m.as_fraction()
    n = j.twice + 1
    jj = jf * (jf + 1)

    if case in ("T10", "T11"):
        _check_rank(j, 1, 0)
        scale = Fraction(1, n * (n - 1) * (n + 1))
        if case == "T10":
            return SqrtRational.from_signed_square((2 * mf) * abs(2 * mf) * 3 * scale)
        return SqrtRational.from_signed_square(-6 * (jf - mf) * (jf + mf + 1) * scale)

    if case in ("T20", "T21", "T22"):
        _check_rank(j, 2, 0)
        scale = Fraction(1, (n + 2) * (n + 1) * n * (n - 1) * (n - 2))
        if case == "T20":
            x = 3 * mf * mf - jj
            return SqrtRational.from_signed_square(20 * x * abs(x) * scale)
        if case == "T21":
            x = 1 + 2 * mf
            square = 5 * x * x * 6 * (jf - mf) * (jf + mf + 1) * scale
            return SqrtRational.from_signed_square(-square if x > 0 else square)
        return SqrtRational.from_signed_square(
            5 * 6 * (jf - mf - 1) * (jf - mf) * (jf + mf + 1) * (jf + mf + 2) * scale
        )

    raise ValueError(f"unknown closed-form case {case!r}")


# ---------------------------------------------------------------------------
# Spin matrices, pi rotation, time reversal
# ---------------------------------------------------------------------------


class SpinMatrices(NamedTuple):
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    plus: np.ndarray
    minus: np.ndarray


@functools.lru_cache(maxsize=64)
def _spin_matrices_cached(j: HalfInt) -> SpinMatrices:
    jf = float(j)
    m = np.array([float(x) for x in half_integer_range(j)])
    n = m.size
    plus = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    plus[idx + 1, idx] = np.sqrt(jf * (jf + 1) - m[:-1] * (m[:-1] + 1))
    minus = plus.conj().T
    mats = SpinMatrices(
        x=(plus + minus) / 2,
        y=(plus - minus) / 2j,
        z=np.diag(m).astype(complex),
        plus=plus,
        minus=minus,
    )
    for mat in mats:
        mat.setflags(write=False)
    return mats


def spin_matrices(j) -> SpinMatrices:
    return _spin_matrices_cached(HalfInt.of(j))


@functools.lru_cache(maxsize=64)
def _pi_rotation_cached(j: HalfInt) -> np.ndarray:
    n = dimension(j)
    v = np.zeros((n, n))
    for a in range(n):
        # row a is m' = -j + a, so j - m' = 2j - a
        v[a, n - 1 - a] = -1.0 if (j.twice - a) % 2 else 1.0
    v.setflags(write=False)
    return v


def pi_rotation_matrix(j) -> np.ndarray:
    """Real orthogonal V with ``V_{m'm} = (-1)^(j-m') delta_{m',-m}``."""
    return _pi_rotation_cached(HalfInt.of(j))


def time_reversal(j, operator) -> np.ndarray:
    """``V B^T V^dagger`` for a (2j+1)-dimensional operator B."""
    v = pi_rotation_matrix(j)
    b = np.asarray(operator)
    if b.shape != v.shape:
        raise ValueError(f"operator shape {b.shape} does not match spin {j}")
    return v @ b.T @ v.T


def time_reversed_state(j, state: np.ndarray) -> np.ndarray:
    """``V conj(phi)``: the antiunitary time reversal applied to a ket."""
    v = pi_rotation_matrix(j)
    phi = np.asarray(state, dtype=complex)
    if phi.shape != (v.shape[0],):
        raise ValueError(f"state of length {phi.size} does not match spin {j}")
    return v @ phi.conj()


@functools.lru_cache(maxsize=64)
def jy_eigensystem(j) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of jy (columns), ascending."""
    values, vectors = np.linalg.eigh(spin_matrices(j).y)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return values, vectors


def y_rotation(j, theta: float) -> np.ndarray:
    """``exp(-i theta jy)``."""
    values, vectors = jy_eigensystem(HalfInt.of(j))
    return (vectors * np.exp(-1j * theta * values)) @ vectors.conj().T
