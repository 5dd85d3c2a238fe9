"""Symbolic bookkeeping on Semple towers.

Picard classes on ``X_k`` are written as an integer combination of named base
classes pulled back from ``X`` plus a weighted tautological part
``O_{X_k}(a_1, ..., a_k)``; tensor product is addition. ``det V`` (not its dual)
is the positive generator, so dual statements are sign flips.

Text form, used by the CLI::

    detV + O(1,0,2) - 3A
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

DET_V = "detV"


@dataclass(frozen=True)
class TowerSpec:
    n: int
    r: int
    k: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.r <= self.n or self.k < 0:
            raise ValueError(f"need n >= 1, 1 <= r <= n, k >= 0; got {self}")


def dim_semple(spec: TowerSpec) -> int:
    """``dim X_k = n + k (r - 1)``."""
    return spec.n + spec.k * (spec.r - 1)


def dim_gg_locus(n: int, k: int, r: int, ell: int) -> int:
    """Dimension ``n + kr - 1 - ell`` of the GG bundle cut by ``ell`` hypersurfaces."""
    if not 0 <= ell <= k * r - 1:
        raise ValueError(f"need 0 <= ell <= kr - 1 = {k * r - 1}")
    return n + k * r - 1 - ell


@dataclass(frozen=True)
class PicardClass:
    """``pi^* (sum_c base[c] * c) + O_{X_k}(weight)``; ``level = len(weight)``."""

    base: Mapping[str, int] = field(default_factory=dict)
    weight: tuple[int, ...] = ()

    def __post_init__(self):
        clean = {str(name): int(v) for name, v in dict(self.base).items() if v}
        object.__setattr__(self, "base", clean)
        object.__setattr__(self, "weight", tuple(int(a) for a in self.weight))

    @property
    def level(self) -> int:
        return len(self.weight)

    def _check_level(self, other: PicardClass):
        if self.level != other.level:
            raise ValueError(f"classes live on different levels ({self.level} vs {other.level})")

    def __add__(self, other: PicardClass) -> PicardClass:
        self._check_level(other)
        base = dict(self.base)
        for name, v in other.base.items():
            base[name] = base.get(name, 0) + v
        return PicardClass(base, tuple(a + b for a, b in zip(self.weight, other.weight)))

    def __neg__(self) -> PicardClass:
        return PicardClass({c: -v for c, v in self.base.items()}, tuple(-a for a in self.weight))

    def __sub__(self, other: PicardClass) -> PicardClass:
        return self + (-other)

    def __rmul__(self, m: int) -> PicardClass:
        return PicardClass({c: m * v for c, v in self.base.items()}, tuple(m * a for a in self.weight))

    def __eq__(self, other):
        if not isinstance(other, PicardClass):
            return NotImplemented
        return self.base == other.base and self.weight == other.weight

    def __hash__(self):
        return hash((tuple(sorted(self.base.items())), self.weight))

    def dual(self) -> PicardClass:
        return -self

    def __str__(self) -> str:
        return format_class(self)

    @classmethod
    def zero(cls, level: int = 0) -> PicardClass:
        return cls({}, (0,) * level)

    @classmethod
    def parse(cls, text: str) -> PicardClass:
        return parse_class(text)


_TERM = re.compile(
    r"\s*([+-])?\s*(\d+)?\s*\*?\s*(?:O\(\s*([-\d,\s]*)\)|([A-Za-z_][A-Za-z0-9_*^]*))\s*"
)


def parse_class(text: str) -> PicardClass:
    """Parse the ``detV + O(1,0,2) - 3A`` text form.

    Several ``O(...)`` terms are added; they must share one length, which sets
    the level. A class without any ``O(...)`` term lives on level 0.
    """
    text = text.strip()
    if text in ("", "0"):
        return PicardClass()
    pos, first = 0, True
    base: dict[str, int] = {}
    weight: list[int] | None = None
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (not first and m.group(1) is None):
            raise ValueError(f"cannot parse class near {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign * int(m.group(2) or 1)
        if m.group(3) is not None:
            parts = [p for p in m.group(3).replace(" ", "").split(",") if p]
            w = [coeff * int(p) for p in parts]
            if weight is None:
                weight = w
            elif len(weight) != len(w):
                raise ValueError("O(...) terms of different lengths")
            else:
                weight = [a + b for a, b in zip(weight, w)]
        else:
            name = m.group(4)
            base[name] = base.get(name, 0) + coeff
        pos, first = m.end(), False
    return PicardClass(base, tuple(weight or ()))


def format_class(cls: PicardClass) -> str:
    terms: list[tuple[int, str]] = [(v, name) for name, v in cls.base.items()]
    out = []
    for v, name in terms:
        mag = "" if abs(v) == 1 else str(abs(v))
        out.append(("-" if v < 0 else "+", f"{mag}{name}"))
    if cls.level:
        out.append(("+", "O(" + ",".join(str(a) for a in cls.weight) + ")"))
    if not out:
        return "0"
    head_sign, head = out[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def pullback_class(cls: PicardClass, to_level: int) -> PicardClass:
    """Pull back from ``X_level`` to ``X_to_level`` (zero-pad the weight)."""
    if to_level < cls.level:
        raise ValueError(f"cannot pull back from level {cls.level} to lower level {to_level}")
    return PicardClass(cls.base, cls.weight + (0,) * (to_level - cls.level))


def det_Vk_step(prev: PicardClass, r: int) -> PicardClass:
    """``det V_k = pi_k^* det V_{k-1} + O_{X_k}(r - 1)``."""
    pulled = pullback_class(prev, prev.level + 1)
    return PicardClass(pulled.base, pulled.weight[:-1] + (pulled.weight[-1] + r - 1,))


def det_Vk_closed(spec: TowerSpec) -> PicardClass:
    """``det V_k = pi^* det V + O_{X_k}((r - 1) * (1, ..., 1))``."""
    return PicardClass({DET_V: 1}, (spec.r - 1,) * spec.k)


def det_Vk_iterated(spec: TowerSpec) -> PicardClass:
    cls = PicardClass({DET_V: 1})
    for _ in range(spec.k):
        cls = det_Vk_step(cls, spec.r)
    return cls


def tautological_twist(p: int, k: int, r: int | None = None) -> tuple[int, ...]:
    """Weight ``-(p - 1) * (1, ..., 1)`` twisting ``Lambda^p V^*`` into ``Lambda^p V_k^*``."""
    if p < 1 or (r is not None and p > r):
        raise ValueError(f"need 1 <= p <= r, got p={p}, r={r}")
    return (-(p - 1),) * k


@dataclass(frozen=True)
class RankReport:
    ok: bool
    violations: tuple[str, ...] = ()

    def __bool__(self):
        return self.ok


def validate_rank_sequence(
    ranks: Sequence[int],
    proper_top: bool = False,
    top_rank: int | None = None,
) -> RankReport:
    """Check ``r_0 >= r_1 >= ... >= r_k`` with drops of 0 or 1 and ``r_k >= 1``.

    With ``proper_top=True`` the last stage is a proper subvariety dominating
    the previous one, so its rank must be strictly below ``top_rank`` (the rank
    of ``V_k``; defaults to ``r_0``). Never raises; problems are listed.
    """
    ranks = list(ranks)
    problems = []
    if not ranks:
        return RankReport(False, ("empty rank sequence",))
    for ell in range(1, len(ranks)):
        prev, cur = ranks[ell - 1], ranks[ell]
        if cur > prev:
            problems.append(f"not monotone at level {ell}: r_{ell - 1}={prev} < r_{ell}={cur}")
        elif prev - cur > 1:
            problems.append(f"drop of {prev - cur} at level {ell} (allowed: 0 or 1)")
    if ranks[-1] < 1:
        problems.append(f"top rank r_{len(ranks) - 1}={ranks[-1]} < 1")
    if proper_top:
        bound = ranks[0] if top_rank is None else top_rank
        if ranks[-1] >= bound:
            problems.append(f"proper top stage needs r_k < {bound}, got {ranks[-1]}")
    return RankReport(not problems, tuple(problems))


@dataclass(frozen=True)
class RankSequence:
    ranks: tuple[int, ...]

    def __post_init__(self):
        ranks = tuple(int(v) for v in self.ranks)
        report = validate_rank_sequence(ranks)
        if not report.ok:
            raise ValueError("; ".join(report.violations))
        object.__setattr__(self, "ranks", ranks)

    @property
    def k(self) -> int:
        return len(self.ranks) - 1


def induced_weights(seq: RankSequence | Sequence[int]) -> tuple[int, ...]:
    """Twist weights ``a_l = 2 r_{l-1} - r_l - 1`` for ``l = 1..k``."""
    if not isinstance(seq, RankSequence):
        seq = RankSequence(tuple(seq))
    r = seq.ranks
    a = tuple(2 * r[ell - 1] - r[ell] - 1 for ell in range(1, len(r)))
    assert all(v >= 0 for v in a)
    return a


def euler_rank_check(spec: TowerSpec) -> dict:
    """Rank arithmetic of the two basic exact sequences on ``X_k``.

    ``0 -> T_{X_k/X_{k-1}} -> V_k -> O(-1) -> 0`` and the Euler sequence
    ``0 -> O -> pi^* V_{k-1} (x) O(1) -> T_{X_k/X_{k-1}} -> 0``.
    """
    if spec.k < 1:
        raise ValueError("need k >= 1")
    r = spec.r
    rel_tangent = r - 1
    rank_vk = rel_tangent + 1
    euler_middle = r
    return {
        "rank_relative_tangent": rel_tangent,
        "rank_V_k": rank_vk,
        "rank_twisted_pullback": euler_middle,
        "vk_sequence": rank_vk == r,
        "euler_sequence": euler_middle == 1 + rel_tangent,
        "ok": rank_vk == r and euler_middle == 1 + rel_tangent and rel_tangent >= 0,
    }


def derived_orbifold_weights(rho: Sequence[float], s: int) -> list[Fraction]:
    """Coefficients ``(1 - s/rho_j)_+``; ``rho_j = math.inf`` gives 1."""
    if s < 1:
        raise ValueError("s must be >= 1")
    out = []
    for r in rho:
        if r == math.inf:
            out.append(Fraction(1))
            continue
        if int(r) != r or r < 1:
            raise ValueError(f"ramification orders must be integers >= 1 or inf, got {r}")
        out.append(max(Fraction(0), 1 - Fraction(s, int(r))))
    return out
