"""Counting weighted-homogeneous jet polynomials.

A k-jet ``(xi_1, ..., xi_k)`` with ``xi_s in C^r`` carries the weighted
``C*``-action ``lambda . xi_s = lambda**s xi_s``; a monomial
``xi_1^alpha_1 ... xi_k^alpha_k`` has weighted degree
``|alpha_1| + 2|alpha_2| + ... + k|alpha_k|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class JetSpec:
    k: int
    r: int

    def __post_init__(self):
        if self.k < 1 or self.r < 1:
            raise ValueError(f"need k >= 1 and r >= 1, got k={self.k}, r={self.r}")


@dataclass(frozen=True)
class WeightedMultiIndex:
    """``alpha[s-1]`` is the exponent multi-index of ``xi_s``."""

    alpha: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        alpha = tuple(tuple(int(a) for a in block) for block in self.alpha)
        if any(a < 0 for block in alpha for a in block):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "alpha", alpha)

    @property
    def k(self) -> int:
        return len(self.alpha)


def weighted_degree(idx: WeightedMultiIndex | Sequence[Sequence[int]]) -> int:
    if not isinstance(idx, WeightedMultiIndex):
        idx = WeightedMultiIndex(idx)
    return sum(s * sum(block) for s, block in enumerate(idx.alpha, start=1))


def apply_weighted_action(lam, xi):
    """Return ``(lam*xi_1, lam**2*xi_2, ..., lam**k*xi_k)``.

    Works on any scalar type with ``*`` and ``**`` (floats, complex,
    :class:`~jetlab.core_numerics.GaussRational`, numpy arrays).
    """
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    return [[lam**s * v for v in block] for s, block in enumerate(xi, start=1)]


def evaluate_monomial(idx: WeightedMultiIndex, xi):
    """Value of ``prod_s prod_a xi_s[a] ** alpha_s[a]``."""
    out = 1
    for block, vec in zip(idx.alpha, xi):
        for a, v in zip(block, vec):
            if a:
                out = out * v**a
    return out


def _times_geometric(series: list[int], step: int) -> None:
    """In place: multiply a truncated series by ``1/(1 - t**step)``.

    Convolution with ``1 + t**step + t**(2*step) + ...`` is a stepped running sum.
    """
    for j in range(step, len(series)):
        series[j] += series[j - step]


def fiber_series(spec: JetSpec, m: int) -> list[int]:
    """Coefficients of ``prod_{s<=k} (1 - t**s)**(-r)`` for degrees ``0..m``."""
    if m < 0:
        raise ValueError("m must be >= 0")
    series = [1] + [0] * m
    for s in range(1, spec.k + 1):
        for _ in range(spec.r):
            _times_geometric(series, s)
    return series


def fiber_dimension(spec: JetSpec, m: int) -> int:
    """Number of monomials of weighted degree ``m`` in a ``(k, r)`` jet."""
    if m < 0:
        raise ValueError("m must be >= 0")
    # Only levels s <= m matter; this keeps large-k queries cheap.
    if spec.k > m and m > 0:
        spec = JetSpec(m, spec.r)
    return fiber_series(spec, m)[m]


def fiber_dimension_bruteforce(spec: JetSpec, m: int) -> int:
    """Count monomials one at a time by walking all exponent vectors.

    Exponential in ``k*r``; this is the independent oracle for
    :func:`fiber_dimension`, not a production path.
    """
    if m < 0:
        return 0
    weights = [s for s in range(1, spec.k + 1) for _ in range(spec.r)]

    def walk(pos: int, left: int) -> int:
        w = weights[pos]
        if pos == len(weights) - 1:
            return 1 if left % w == 0 else 0
        return sum(walk(pos + 1, left - e * w) for e in range(left // w + 1))

    return walk(0, m)


def asymptotic_fiber_dimension(spec: JetSpec, m: int) -> Fraction:
    """Leading term ``m**(kr-1) / ((kr-1)! (k!)**r)`` of :func:`fiber_dimension`."""
    if m < 1:
        raise ValueError("m must be >= 1")
    kr = spec.k * spec.r
    return Fraction(m ** (kr - 1), math.factorial(kr - 1) * math.factorial(spec.k) ** spec.r)


def monomials_of_degree(spec: JetSpec, m: int):
    """Yield every :class:`WeightedMultiIndex` of weighted degree ``m``.

    Plain depth-first enumeration over the ``k*r`` exponents; used as the
    independent oracle for :func:`fiber_dimension`.
    """
    if m < 0:
        return
    weights = [s for s in range(1, spec.k + 1) for _ in range(spec.r)]
    exps = [0] * len(weights)

    def walk(pos: int, left: int):
        if pos == len(weights):
            if left == 0:
                flat = iter(exps)
                yield WeightedMultiIndex(
                    tuple(tuple(next(flat) for _ in range(spec.r)) for _ in range(spec.k))
                )
            return
        w = weights[pos]
        for e in range(left // w + 1):
            exps[pos] = e
            yield from walk(pos + 1, left - e * w)
        exps[pos] = 0

    yield from walk(0, m)


def ggdim_rows(spec: JetSpec, m_max: int) -> list[dict]:
    """Rows ``(m, dimension, asymptotic, ratio)`` for ``m = 0..m_max``.

    ``asymptotic`` and ``ratio`` are ``None`` at ``m = 0`` where the leading
    term is undefined.
    """
    series = fiber_series(spec, m_max)
    rows = []
    for m, dim in enumerate(series):
        if m == 0:
            rows.append({"m": 0, "dimension": dim, "asymptotic": None, "ratio": None})
            continue
        asym = asymptotic_fiber_dimension(spec, m)
        rows.append({"m": m, "dimension": dim, "asymptotic": asym, "ratio": dim / asym})
    return rows

