"""Moments of block-simplex coordinates on spheres, exact and sampled.

A uniform point ``xi`` on the unit sphere of ``C^M`` split into blocks of sizes
``n_1, ..., n_k`` gives simplex coordinates ``x_s = |xi_s|^2 / |xi|^2``. Their
law is Dirichlet(n_1, ..., n_k), so every moment is a ratio of rising
factorials and stays an exact rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core_numerics import (
    HermitianForm,
    MeanEstimate,
    RandomStream,
    chunked_mean,
    rising,
    standard_complex_normal,
    unit_vectors,
)


@dataclass(frozen=True)
class BlockConfig:
    block_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.block_sizes)
        if not sizes or any(n < 1 for n in sizes):
            raise ValueError(f"block sizes must be positive, got {sizes}")
        object.__setattr__(self, "block_sizes", sizes)

    @property
    def k(self) -> int:
        return len(self.block_sizes)

    @property
    def total(self) -> int:
        return sum(self.block_sizes)

    @classmethod
    def uniform(cls, k: int, r: int) -> BlockConfig:
        return cls((r,) * k)

    @classmethod
    def with_cuts(cls, k: int, r: int, cut_levels: Sequence[int]) -> BlockConfig:
        """Blocks of size ``r``, except size ``r - 1`` at the 1-based ``cut_levels``.

        A hyperplane ``xi_{s,1} = 0`` at level ``s`` removes one coordinate from
        that block.
        """
        cuts = set(cut_levels)
        if any(not 1 <= s <= k for s in cuts) or len(cuts) != len(cut_levels):
            raise ValueError("cut levels must be distinct and lie in 1..k")
        return cls(tuple(r - 1 if s in cuts else r for s in range(1, k + 1)))


def _check_alpha(cfg: BlockConfig, alpha: Sequence[int]) -> tuple[int, ...]:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != cfg.k:
        raise ValueError(f"alpha has length {len(alpha)}, expected {cfg.k}")
    if any(a < 0 for a in alpha):
        raise ValueError("alpha entries must be nonnegative")
    return alpha


def dirichlet_moment(cfg: BlockConfig, alpha: Sequence[int]) -> Fraction:
    """Exact ``E[prod_s x_s**alpha_s]`` for a uniform point of the sphere.

    >>> dirichlet_moment(BlockConfig((2, 2, 1)), (0, 0, 1))
    Fraction(1, 5)
    """
    alpha = _check_alpha(cfg, alpha)
    num = 1
    for n_s, a_s in zip(cfg.block_sizes, alpha):
        num *= rising(n_s, a_s)
    return Fraction(num, rising(cfg.total, sum(alpha)))


def multi_indices(k: int, max_degree: int):
    """All ``alpha in N^k`` with ``|alpha| <= max_degree``, graded then lexicographic."""
    for deg in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(k), deg):
            alpha = [0] * k
            for s in combo:
                alpha[s] += 1
            yield tuple(alpha)


def _block_masses(gen: np.random.Generator, m: int, cfg: BlockConfig) -> np.ndarray:
    """Simplex coordinates of ``m`` uniform sphere points, shape ``(m, k)``."""
    z = standard_complex_normal(gen, (m, cfg.total))
    sq = np.abs(z) ** 2
    edges = np.cumsum((0,) + cfg.block_sizes)
    blocks = np.add.reduceat(sq, edges[:-1], axis=1)
    return blocks / sq.sum(axis=1, keepdims=True)


def mc_moments(
    cfg: BlockConfig,
    alphas: Sequence[Sequence[int]],
    n_samples: int,
    rng: RandomStream,
    workers: int = 1,
) -> MeanEstimate:
    """Sample every moment in ``alphas`` from the same sphere points.

    Returns a :class:`MeanEstimate` whose arrays are indexed like ``alphas``.
    """
    powers = np.array([_check_alpha(cfg, a) for a in alphas], dtype=float)

    def sampler(gen, m):
        x = _block_masses(gen, m, cfg)
        return np.prod(x[:, None, :] ** powers[None, :, :], axis=2)

    return chunked_mean(sampler, n_samples, rng, workers)


def mc_moment(
    cfg: BlockConfig,
    alpha: Sequence[int],
    n_samples: int,
    rng: RandomStream,
    workers: int = 1,
) -> tuple[float, float]:
    """Monte Carlo ``(estimate, stderr)`` for one moment."""
    est = mc_moments(cfg, [alpha], n_samples, rng, workers)
    return float(est.mean[0]), float(est.stderr[0])


def partition_identity(k: int, r: int, ell: int) -> tuple[Fraction, Fraction, Fraction]:
    """First moments on a sphere with ``ell`` hyperplane-cut levels.

    Returns ``(I1, I2, check)`` where ``I1 = (r-1)/(kr-ell)`` is the mean of a
    cut level, ``I2 = r/(kr-ell)`` the mean of a free level, and
    ``check = ell*I1 + (k-ell)*I2``, which must equal 1.
    """
    if r < 2:
        raise ValueError("rank r must be >= 2")
    if not 1 <= ell <= k:
        raise ValueError("need 1 <= ell <= k")
    denom = k * r - ell
    i_cut = Fraction(r - 1, denom)
    i_free = Fraction(r, denom)
    check = ell * i_cut + (k - ell) * i_free
    if check != 1:
        raise ArithmeticError(f"first moments sum to {check}, not 1")
    ratio = i_cut / i_free
    if not 1 - Fraction(1, r) <= ratio <= 1:
        raise ArithmeticError(f"ratio {ratio} outside [1 - 1/r, 1]")
    return i_cut, i_free, check


def sphere_quadratic_average(
    q: HermitianForm,
    n_samples: int,
    rng: RandomStream,
    workers: int = 1,
) -> tuple[float, float, float]:
    """Average of ``<Qu, u>`` over the unit sphere of ``C^r``.

    Returns ``(estimate, stderr, exact)`` with ``exact = Tr(Q)/r``.
    """
    mat = q.entries
    r = q.dimension

    def sampler(gen, m):
        u = unit_vectors(gen, m, r)
        return np.einsum("na,ab,nb->n", u.conj(), mat, u).real

    est = chunked_mean(sampler, n_samples, rng, workers)
    return float(est.mean), float(est.stderr), q.trace() / r


def degree_factor(d_list: Sequence[int], s_list: Sequence[int], k: int, r: int) -> Fraction:
    """``prod_j d_j s_j / (k!)**r``: relative degree over the weighted FS volume."""
    if len(d_list) != len(s_list):
        raise ValueError("d_list and s_list must have the same length")
    if any(v < 1 for v in (*d_list, *s_list)):
        raise ValueError("degrees and orders must be >= 1")
    num = 1
    for d, s in zip(d_list, s_list):
        num *= d * s
    return Fraction(num, math.factorial(k) ** r)
