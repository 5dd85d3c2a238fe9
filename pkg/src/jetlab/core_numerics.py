"""Exact rationals, small Hermitian forms, and reproducible random streams.

Everything sampling-related in the package goes through :class:`RandomStream`
and :func:`chunked_mean`, so that an estimate depends only on the seed, the
stream index and the sample count -- never on how many worker threads ran.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

Rational = Fraction

#: Samples per independent chunk; each chunk owns one Philox substream.
CHUNK_SIZE = 1 << 14


def rising(a: int, b: int) -> int:
    """Rising factorial ``a (a+1) ... (a+b-1)``, equal to 1 when ``b == 0``."""
    if b < 0:
        raise ValueError("rising factorial needs b >= 0")
    out = 1
    for t in range(b):
        out *= a + t
    return out


@dataclass(frozen=True)
class GaussRational:
    """Exact Gaussian rational ``re + i*im``.

    Only the operations needed for exact homogeneity checks are provided.
    """

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, complex):
            return GaussRational(Fraction(other.real), Fraction(other.imag))
        return GaussRational(Fraction(other))

    def __add__(self, other):
        o = self._lift(other)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __mul__(self, other):
        o = self._lift(other)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers not supported")
        out = GaussRational(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im


class HermitianForm:
    """Complex Hermitian ``n x n`` matrix, checked exactly at construction."""

    __slots__ = ("_entries",)

    def __init__(self, entries, *, atol: float = 0.0):
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if dev > atol:
            raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3g})")
        if atol > 0.0:
            m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        self._entries = m

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dimension(self) -> int:
        return self._entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self._entries)

    def trace(self) -> float:
        return float(np.trace(self._entries).real)

    def conjugated(self, unitary) -> HermitianForm:
        """Return ``U H U*``, resymmetrized to absorb rounding."""
        u = np.asarray(unitary, dtype=complex)
        m = u @ self._entries @ u.conj().T
        return HermitianForm(0.5 * (m + m.conj().T))

    def __repr__(self):
        return f"HermitianForm(n={self.dimension})"


def default_tolerance(h: HermitianForm) -> float:
    """Zero-eigenvalue threshold ``1e-10 * max |entry|``."""
    return 1e-10 * float(np.max(np.abs(h.entries))) if h.dimension else 0.0


def signature(h: HermitianForm, tol: float | None = None) -> tuple[int, int, int]:
    """Return ``(n_plus, n_minus, n_zero)``.

    Eigenvalues with ``|lambda| <= tol`` are counted as zero. When ``tol`` is
    omitted, :func:`default_tolerance` is used.
    """
    if tol is None:
        tol = default_tolerance(h)
    if tol < 0:
        raise ValueError("tol must be >= 0")
    ev = h.eigenvalues()
    n_zero = int(np.sum(np.abs(ev) <= tol))
    n_plus = int(np.sum(ev > tol))
    return n_plus, h.dimension - n_plus - n_zero, n_zero


@dataclass
class RandomStream:
    """Seeded Philox stream; ``(seed, stream, path)`` fixes every draw.

    ``substream(j)`` derives an independent child stream, which is how
    :func:`chunked_mean` hands one stream to each chunk of samples.
    """

    seed: int
    stream: int = 0
    path: tuple[int, ...] = ()
    _gen: np.random.Generator | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def generator(self) -> np.random.Generator:
        if self._gen is None:
            ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, *self.path))
            self._gen = np.random.Generator(np.random.Philox(ss))
        return self._gen

    def substream(self, j: int) -> RandomStream:
        return RandomStream(self.seed, self.stream, (*self.path, j))

    def complex_normal(self, shape) -> np.ndarray:
        return standard_complex_normal(self.generator, shape)


def standard_complex_normal(gen: np.random.Generator, shape) -> np.ndarray:
    """Circular complex Gaussians with ``E|z|^2 = 1``."""
    shape = tuple(np.atleast_1d(shape))
    g = gen.standard_normal((*shape, 2))
    return (g[..., 0] + 1j * g[..., 1]) * math.sqrt(0.5)


def unit_vectors(gen: np.random.Generator, n: int, r: int) -> np.ndarray:
    """``n`` uniform points of the unit sphere of ``C^r``, shape ``(n, r)``."""
    z = standard_complex_normal(gen, (n, r))
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def sample_unit_vector(r: int, rng: RandomStream) -> np.ndarray:
    """One uniform unit vector of ``C^r`` drawn from ``rng``."""
    if r < 1:
        raise ValueError("fiber dimension r must be >= 1")
    return unit_vectors(rng.generator, 1, r)[0]


def random_unitary(gen: np.random.Generator, n: int) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix."""
    z = standard_complex_normal(gen, (n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(gen: np.random.Generator, n: int, scale: float = 1.0) -> HermitianForm:
    a = scale * standard_complex_normal(gen, (n, n))
    return HermitianForm(0.5 * (a + a.conj().T))


@dataclass(frozen=True)
class MeanEstimate:
    """Sample mean of an array-valued statistic and its standard error.

    For complex entries the standard error is ``sqrt(E|z - mean|^2 / N)``.
    """

    mean: np.ndarray
    stderr: np.ndarray
    count: int


def chunked_mean(
    sampler: Callable[[np.random.Generator, int], np.ndarray],
    n_samples: int,
    rng: RandomStream,
    workers: int = 1,
    chunk_size: int = CHUNK_SIZE,
) -> MeanEstimate:
    """Estimate ``E[sampler]`` from ``n_samples`` draws.

    The samples are cut into fixed chunks, chunk ``j`` drawing from
    ``rng.substream(j)``. Chunks are merged in index order with the pairwise
    variance update, so the result is bit-identical for any ``workers``.
    ``sampler(gen, m)`` must return an array whose first axis has length ``m``.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    sizes = [chunk_size] * (n_samples // chunk_size)
    if n_samples % chunk_size:
        sizes.append(n_samples % chunk_size)

    def run(j: int):
        vals = np.asarray(sampler(rng.substream(j).generator, sizes[j]))
        mean = vals.mean(axis=0)
        m2 = np.sum(np.abs(vals - mean) ** 2, axis=0)
        return vals.shape[0], mean, m2

    if workers == 1:
        parts = [run(j) for j in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))

    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        tot = n + nb
        delta = mb - mean
        mean = mean + delta * (nb / tot)
        m2 = m2 + m2b + np.abs(delta) ** 2 * (n * nb / tot)
        n = tot
    stderr = np.sqrt(m2 / (n - 1) / n)
    return MeanEstimate(mean, stderr, n)


def within_sigma(estimate, exact, stderr, n_sigma: float = 4.0) -> bool:
    """``|estimate - exact| <= n_sigma * stderr`` with an exact-zero allowance."""
    err = np.abs(np.asarray(estimate) - np.asarray(exact, dtype=complex))
    bound = n_sigma * np.asarray(stderr) + 1e-12
    return bool(np.all(err <= bound))
