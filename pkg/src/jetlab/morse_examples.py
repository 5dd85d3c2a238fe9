"""Concrete numbers for the Morse estimates: hypersurfaces and hypersurface cuts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .semple_algebra import dim_gg_locus
from .sphere_moments import degree_factor

#: Unevaluated error terms of the leading constant, carried symbolically.
ERROR_SLOTS = ("O(1/log k)", "O(delta)")

# Guard for the float comparison sum(1/s_j) <= delta * log k.
_LOG_GUARD = 1e-15


@dataclass(frozen=True)
class HypersurfaceSpec:
    """Smooth degree-``d`` hypersurface ``X`` of ``P^{n+1}``."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={self.n}, d={self.d}")


@dataclass(frozen=True)
class CompleteIntersectionCut:
    """Hypersurfaces ``P_j`` of order ``s_j`` and fiber degree ``d_j`` in the ``k``-jets."""

    k: int
    s_list: tuple[int, ...] = ()
    d_list: tuple[int, ...] = ()
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        s_list = tuple(int(s) for s in self.s_list)
        d_list = tuple(int(d) for d in self.d_list)
        if len(s_list) != len(d_list):
            raise ValueError("s_list and d_list must have the same length")
        if any(b <= a for a, b in zip(s_list, s_list[1:])):
            raise ValueError(f"orders must be strictly increasing, got {s_list}")
        if s_list and (s_list[0] < 1 or s_list[-1] > self.k):
            raise ValueError(f"orders must lie in 1..k={self.k}")
        if any(d < 1 for d in d_list):
            raise ValueError("degrees must be >= 1")
        object.__setattr__(self, "s_list", s_list)
        object.__setattr__(self, "d_list", d_list)
        object.__setattr__(self, "delta", Fraction(self.delta))

    @property
    def ell(self) -> int:
        return len(self.s_list)

    def sum_reciprocals(self) -> Fraction:
        return sum((Fraction(1, s) for s in self.s_list), Fraction(0))

    def relative_degree(self) -> int:
        out = 1
        for d, s in zip(self.d_list, self.s_list):
            out *= d * s
        return out


def eta_top_intersection(spec: HypersurfaceSpec, eps=0) -> Fraction:
    """``(K_X - eps H)^n`` on a degree-``d`` hypersurface: ``(d - n - 2 - eps)**n * d``.

    Uses ``K_X = O(d - n - 2)|_X`` and ``H^n = d``.
    """
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    return (spec.d - spec.n - 2 - eps) ** spec.n * spec.d


def general_type_threshold(n: int) -> int:
    """Smallest degree ``d`` with ``K_X`` ample on a hypersurface of ``P^{n+1}``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    d = n + 3
    spec = HypersurfaceSpec(n, d)
    # Positivity for a small eps below the margin d - n - 2 = 1.
    assert eta_top_intersection(spec, Fraction(1, 2)) > 0
    assert eta_top_intersection(HypersurfaceSpec(n, d - 1), 0) <= 0
    return d


@dataclass(frozen=True)
class Thm53Report:
    dim_Z: int
    sum_reciprocals: Fraction
    bound: float
    passes: bool


def thm53_check(cut: CompleteIntersectionCut, n: int, r: int) -> Thm53Report:
    """Dimension of the cut locus and the ``sum 1/s_j <= delta log k`` test."""
    if r < 2:
        raise ValueError("rank r must be >= 2")
    dim_z = dim_gg_locus(n, cut.k, r, cut.ell)
    total = cut.sum_reciprocals()
    bound = float(cut.delta) * math.log(cut.k)
    passes = cut.ell == 0 or float(total) <= bound + _LOG_GUARD
    return Thm53Report(dim_z, total, bound, passes)


@dataclass(frozen=True)
class LeadingConstant:
    """Main factor of the leading constant, with symbolic leftovers.

    The full constant is ``main_factor * (log k)**log_k_exponent`` times
    ``(1 - error_slots)`` in the obvious sense; the slots are not evaluated.
    """

    main_factor: Fraction
    log_k_exponent: int
    error_slots: tuple[str, ...] = field(default=ERROR_SLOTS)


def leading_constant_main_factor(
    n: int,
    k: int,
    r: int,
    cut: CompleteIntersectionCut | None,
    morse_value,
    relative_degree: int | None = None,
) -> LeadingConstant:
    """``prod(d_j s_j) / (n+kr-1)! / (n! (k!)^r) * morse_value``.

    ``relative_degree`` overrides ``prod(d_j s_j)``, e.g. for one irreducible
    component of a complete intersection.
    """
    if cut is not None and cut.k != k:
        raise ValueError("cut was built for a different k")
    rel = relative_degree
    if rel is None:
        rel = cut.relative_degree() if cut is not None else 1
    main = (
        Fraction(rel, math.factorial(n + k * r - 1) * math.factorial(n) * math.factorial(k) ** r)
        * Fraction(morse_value)
    )
    return LeadingConstant(main, n)


def leading_constant_via_degree_factor(n, k, r, cut: CompleteIntersectionCut, morse_value) -> Fraction:
    """Same main factor rebuilt from :func:`~jetlab.sphere_moments.degree_factor`."""
    return (
        degree_factor(cut.d_list, cut.s_list, k, r)
        / math.factorial(n + k * r - 1)
        / math.factorial(n)
        * Fraction(morse_value)
    )
