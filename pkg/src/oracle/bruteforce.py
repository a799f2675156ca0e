"""Numerical ground truth: dense PPT checks and product-state sampling.

Sampling schemes
----------------
haar    Both factors Haar-uniform (normalised complex Gaussian vectors).
tilted  Basis states |j1 m1> and exp(-i theta jy)|j2 m2> with m uniform and
        theta uniform on [0, pi].  Reaches the extreme points of W^beta,
        which Haar sampling approaches only slowly.
mixed   Alternates tilted and haar sample by sample.

Sampling is chunked.  Chunk ``i`` draws from ``PCG64(seed + i)``, so a cloud
depends on (seed, count, scheme, chunk size) and not on the worker count.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from src.algebra.spherical_tensors import jy_eigensystem
from src.config import get_settings
from src.states.invariant_states import (
    ProductState,
    SpinPair,
    beta_functionals_batch,
    partial_transpose,
)

logger = logging.getLogger(__name__)

Scheme = Literal["haar", "tilted", "mixed"]
SEED_MODULUS = 2**64


@dataclass(frozen=True, eq=False)
class SampleCloud:
    pair: SpinPair
    seed: int
    scheme: str
    points: np.ndarray  # (count, N1) beta~ vectors

    def __post_init__(self) -> None:
        self.points.setflags(write=False)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def plane(self) -> np.ndarray:
        """``(beta_1, beta_2)`` columns for a spin-1 first factor."""
        if self.pair.n1 != 3:
            raise ValueError(f"plane projection needs a spin-1 first factor, got {self.pair}")
        return self.points[:, 1:3]


# ---------------------------------------------------------------------------
# PPT
# ---------------------------------------------------------------------------


def ppt_bruteforce(rho, pair: SpinPair, tol: float | None = None) -> bool:
    """True iff the smallest eigenvalue of the partial transpose is >= -tol."""
    if tol is None:
        tol = get_settings().numerics.positivity_tol
    smallest = float(partial_transpose(rho, pair).eigenvalues()[0])
    logger.debug("min eig of T2(rho) for %s: %.3e", pair, smallest)
    return smallest >= -tol


# ---------------------------------------------------------------------------
# RNG and single-state sampling
# ---------------------------------------------------------------------------


def make_rng(seed: int) -> np.random.Generator:
    if isinstance(seed, bool) or not isinstance(seed, int | np.integer):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= int(seed) < SEED_MODULUS:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def standard_complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    """Box-Muller on the generator's uniforms: real and imaginary parts N(0, 1)."""
    u1 = 1.0 - rng.random(size)  # (0, 1]
    u2 = rng.random(size)
    return np.sqrt(-2.0 * np.log(u1)) * np.exp(2j * np.pi * u2)


def _haar_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    z = standard_complex_normal(rng, (count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    return _haar_vectors(rng, 1, dim)[0]


def sample_product_state(pair: SpinPair, rng: np.random.Generator) -> ProductState:
    """Both factors Haar-uniform."""
    return ProductState(haar_state(rng, pair.n1), haar_state(rng, pair.n2))


# ---------------------------------------------------------------------------
# Batched schemes
# ---------------------------------------------------------------------------


def _haar_batch(pair: SpinPair, rng: np.random.Generator, count: int):
    return _haar_vectors(rng, count, pair.n1), _haar_vectors(rng, count, pair.n2)


def _tilted_batch(pair: SpinPair, rng: np.random.Generator, count: int):
    first = rng.integers(0, pair.n1, count)
    second = rng.integers(0, pair.n2, count)
    theta = np.pi * rng.random(count)

    phi1s = np.zeros((count, pair.n1), dtype=complex)
    phi1s[np.arange(count), first] = 1.0

    # exp(-i theta jy)|m> = W diag(exp(-i theta w)) W^dagger |m>
    w, vectors = jy_eigensystem(pair.j2)
    coefficients = np.exp(-1j * theta[:, None] * w[None, :]) * vectors[second, :].conj()
    phi2s = coefficients @ vectors.T
    return phi1s, phi2s


def sample_tilted_basis_pair(pair: SpinPair, rng: np.random.Generator) -> ProductState:
    phi1s, phi2s = _tilted_batch(pair, rng, 1)
    return ProductState(phi1s[0], phi2s[0] / np.linalg.norm(phi2s[0]))


def _mixed_batch(pair: SpinPair, rng: np.random.Generator, count: int):
    n_tilted = (count + 1) // 2
    t1, t2 = _tilted_batch(pair, rng, n_tilted)
    h1, h2 = _haar_batch(pair, rng, count - n_tilted)
    phi1s = np.empty((count, pair.n1), dtype=complex)
    phi2s = np.empty((count, pair.n2), dtype=complex)
    phi1s[0::2], phi2s[0::2] = t1, t2
    phi1s[1::2], phi2s[1::2] = h1, h2
    return phi1s, phi2s


_SCHEMES = {"haar": _haar_batch, "tilted": _tilted_batch, "mixed": _mixed_batch}


def sample_product_batch(
    pair: SpinPair, rng: np.random.Generator, count: int, scheme: Scheme = "haar"
) -> tuple[np.ndarray, np.ndarray]:
    if scheme not in _SCHEMES:
        raise ValueError(f"scheme must be one of {sorted(_SCHEMES)}, got {scheme!r}")
    return _SCHEMES[scheme](pair, rng, count)


def wbeta_cloud(
    pair: SpinPair,
    count: int,
    seed: int,
    *,
    scheme: Scheme = "haar",
    workers: int | None = None,
    chunk_size: int | None = None,
) -> SampleCloud:
    """``count`` beta~ points of sampled product states.

    Chunk ``i`` draws from ``PCG64(seed + i)``, so the cloud depends on the
    seed, count, scheme and chunk size but not on *workers*.

    Args:
        pair: Spin pair the product states live on.
        count: Number of samples, at least 1.
        seed: Non-negative 64-bit integer.
        scheme: ``haar`` for Haar-random factors, ``tilted`` for a basis
            state of the first spin, ``mixed`` to alternate the two.
        workers: Thread count. Defaults to ``sampling.workers``.
        chunk_size: Samples per chunk. Defaults to ``sampling.chunk_size``.

    Returns:
        SampleCloud whose ``points`` array has shape ``(count, N1)``.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    make_rng(seed)
    sampling = get_settings().sampling
    chunk_size = chunk_size or sampling.chunk_size
    workers = workers or sampling.workers
    n_chunks = math.ceil(count / chunk_size)

    def _chunk(index: int) -> np.ndarray:
        rng = make_rng((seed + index) % SEED_MODULUS)
        size = min(chunk_size, count - index * chunk_size)
        phi1s, phi2s = sample_product_batch(pair, rng, size, scheme)
        return beta_functionals_batch(phi1s, phi2s, pair)

    logger.info(
        "Sampling %d product states of %s (%s, %d chunks, %d workers)",
        count,
        pair,
        scheme,
        n_chunks,
        workers,
    )
    if workers == 1:
        parts = [_chunk(i) for i in range(n_chunks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk, range(n_chunks)))
    return SampleCloud(pair=pair, seed=seed, scheme=scheme, points=np.vstack(parts))
