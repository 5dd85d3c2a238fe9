"""Probabilistic model of the jet-bundle curvature.

The horizontal curvature at a jet in polar coordinates ``(x_s, u_s)`` is

    H_ij = sum_s (x_s / s) sum_{a,b} c[i,j,a,b] u_s[a] conj(u_s[b])

and averaging over the unitary-invariant measure gives the harmonic-sum
multiple of the fiber trace. This module evaluates both sides, samples the
average, and does the index-set bookkeeping for Morse integrals.
"""

from __future__ import annotations

import json
import math
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core_numerics import (
    GaussRational,
    HermitianForm,
    MeanEstimate,
    RandomStream,
    chunked_mean,
    standard_complex_normal,
)


class CurvatureTensor:
    """Complex array ``c[i, j, a, b]`` of shape ``(n, n, r, r)``.

    Hermitian symmetry ``c[j, i, b, a] == conj(c[i, j, a, b])`` is the same as
    the ``(n r) x (n r)`` matrix ``C[(i, a), (j, b)]`` being Hermitian.
    """

    def __init__(self, c, *, atol: float = 0.0):
        c = np.array(c, dtype=complex)
        if c.ndim != 4 or c.shape[0] != c.shape[1] or c.shape[2] != c.shape[3]:
            raise ValueError(f"expected shape (n, n, r, r), got {c.shape}")
        n, _, r, _ = c.shape
        mat = c.transpose(0, 2, 1, 3).reshape(n * r, n * r)
        dev = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
        if dev > atol:
            raise ValueError(f"curvature tensor is not Hermitian (max deviation {dev:.3g})")
        if atol > 0.0:
            mat = 0.5 * (mat + mat.conj().T)
            c = mat.reshape(n, r, n, r).transpose(0, 2, 1, 3).copy()
        c.setflags(write=False)
        self.c = c

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def r(self) -> int:
        return self.c.shape[2]

    @classmethod
    def zero(cls, n: int, r: int) -> CurvatureTensor:
        return cls(np.zeros((n, n, r, r)))

    @classmethod
    def kronecker(cls, n: int, r: int) -> CurvatureTensor:
        """``c[i, j, a, b] = delta_ij delta_ab``."""
        return cls(np.einsum("ij,ab->ijab", np.eye(n), np.eye(r)))

    @classmethod
    def random(cls, n: int, r: int, rng: RandomStream, scale: float = 1.0) -> CurvatureTensor:
        a = scale * rng.complex_normal((n * r, n * r))
        mat = 0.5 * (a + a.conj().T)
        return cls(mat.reshape(n, r, n, r).transpose(0, 2, 1, 3))

    def fiber_trace(self) -> np.ndarray:
        """``sum_a c[i, j, a, a]`` as an ``n x n`` array."""
        return np.einsum("ijaa->ij", self.c)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "entries": [
                [[[[v.real, v.imag] for v in row] for row in block] for block in line]
                for line in self.c
            ],
        }

    @classmethod
    def from_dict(cls, data: dict, *, atol: float = 1e-12) -> CurvatureTensor:
        """Build from ``{"n", "r", "entries"}``; entries are ``[re, im]`` pairs.

        ``entries`` is nested ``[i][j][a][b]``. A bare number is read as real.
        """
        n, r = int(data["n"]), int(data["r"])

        def cval(v):
            if isinstance(v, (list, tuple)):
                re, im = v
                return complex(re, im)
            return complex(v)

        raw = data["entries"]

        def check_len(seq, size, where):
            if not isinstance(seq, (list, tuple)) or len(seq) != size:
                raise ValueError(f"entries{where} must be a list of length {size}")

        check_len(raw, n, "")
        for i in range(n):
            check_len(raw[i], n, f"[{i}]")
            for j in range(n):
                check_len(raw[i][j], r, f"[{i}][{j}]")
                for a in range(r):
                    check_len(raw[i][j][a], r, f"[{i}][{j}][{a}]")
        c = np.array(
            [[[[cval(raw[i][j][a][b]) for b in range(r)] for a in range(r)] for j in range(n)]
             for i in range(n)],
            dtype=complex,
        )
        return cls(c, atol=atol)


def load_tensor(path: str | Path) -> CurvatureTensor:
    """Read a curvature tensor from a ``.json`` or ``.toml`` file."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        data = tomllib.loads(text)
    else:
        data = json.loads(text)
    return CurvatureTensor.from_dict(data)


@dataclass(frozen=True)
class JetVector:
    """Jet ``(xi_1, ..., xi_k)``, ``xi_s`` a complex ``r``-vector."""

    xi: tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=complex).reshape(-1) for b in self.xi)
        if not blocks:
            raise ValueError("empty jet")
        if len({b.shape for b in blocks}) != 1:
            raise ValueError("all levels must have the same rank")
        if all(not np.any(b) for b in blocks):
            raise ValueError("jet is identically zero")
        object.__setattr__(self, "xi", blocks)

    @property
    def k(self) -> int:
        return len(self.xi)

    @property
    def r(self) -> int:
        return self.xi[0].shape[0]


@dataclass(frozen=True)
class JetPoint:
    """Polar coordinates: simplex weights ``x`` and unit vectors ``u``."""

    x: np.ndarray
    u: np.ndarray  # shape (k, r)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if np.any(x < 0):
            raise ValueError("simplex weights must be nonnegative")
        object.__setattr__(self, "x", x / x.sum())
        object.__setattr__(self, "u", np.asarray(self.u, dtype=complex))

    @property
    def k(self) -> int:
        return self.x.shape[0]


def _log_norms(xi: JetVector) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.array([np.linalg.norm(b) for b in xi.xi]))


def finsler_value(xi: JetVector, eps: Sequence[float] | None = None, p: int | None = None) -> float:
    """Weighted Finsler norm ``(sum_s (eps_s |xi_s|)**(2p/s))**(1/p)``.

    ``p`` defaults to ``k!`` and ``eps`` to all ones. Evaluated in log space so
    large ``p`` does not overflow.
    """
    k = xi.k
    p = math.factorial(k) if p is None else p
    if p < 1:
        raise ValueError("p must be >= 1")
    eps = np.ones(k) if eps is None else np.asarray(eps, dtype=float)
    if eps.shape != (k,) or np.any(eps <= 0):
        raise ValueError("eps must hold k positive reals")
    s = np.arange(1, k + 1)
    logs = (2.0 * p / s) * (np.log(eps) + _log_norms(xi))
    top = np.max(logs)
    return float(np.exp((top + np.log(np.sum(np.exp(logs - top)))) / p))


def finsler_power_exact(xi, eps, p: int) -> Fraction:
    """Exact ``Psi**p`` for Gaussian-rational jets.

    ``xi`` is a list of levels, each a list of :class:`GaussRational` (or
    anything :class:`GaussRational` can lift). ``eps`` are rationals. Needs
    ``s | p`` for each level ``s``, which holds for the default ``p = k!``.
    """
    total = Fraction(0)
    for s, (block, e) in enumerate(zip(xi, eps), start=1):
        if p % s:
            raise ValueError(f"p={p} is not divisible by level {s}")
        norm2 = sum((GaussRational._lift(v).abs2() for v in block), Fraction(0))
        total += (Fraction(e) ** 2 * norm2) ** (p // s)
    return total


def to_polar(xi: JetVector, p: int | None = None) -> JetPoint:
    """Polar coordinates ``x_s = |xi_s|^(2p/s) / sum_t |xi_t|^(2p/t)``, ``u_s = xi_s/|xi_s|``.

    A level with ``xi_s = 0`` gets ``x_s = 0`` and ``u_s = e_1``.
    """
    k = xi.k
    p = math.factorial(k) if p is None else p
    s = np.arange(1, k + 1)
    logs = (2.0 * p / s) * _log_norms(xi)
    w = np.exp(logs - np.max(logs))
    u = np.zeros((k, xi.r), dtype=complex)
    for t, block in enumerate(xi.xi):
        nrm = np.linalg.norm(block)
        if nrm > 0:
            u[t] = block / nrm
        else:
            u[t, 0] = 1.0
    return JetPoint(w / w.sum(), u)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.swapaxes(m, -1, -2).conj())


def horizontal_curvature(c: CurvatureTensor, pt: JetPoint) -> HermitianForm:
    """``H_ij = sum_s (x_s/s) sum_ab c[i,j,a,b] u_s[a] conj(u_s[b])``.

    For fixed ``i, j`` the inner sum is ``<A u, u>`` with ``A = c[i, j].T``.
    """
    if pt.u.shape[1] != c.r:
        raise ValueError("fiber rank mismatch")
    w = pt.x / np.arange(1, pt.k + 1)
    h = np.einsum("ijab,s,sa,sb->ij", c.c, w, pt.u, pt.u.conj())
    return HermitianForm(_hermitize(h))


def harmonic_sum(k: int) -> Fraction:
    """``1 + 1/2 + ... + 1/k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum((Fraction(1, s) for s in range(1, k + 1)), Fraction(0))


def expected_curvature_factor(k: int, r: int) -> Fraction:
    """``harmonic_sum(k) / (k r)``, the multiplier of the fiber trace."""
    return harmonic_sum(k) / (k * r)


def expected_curvature(c: CurvatureTensor, k: int) -> HermitianForm:
    """Mean horizontal curvature: ``harmonic_sum(k)/(k r)`` times the fiber trace."""
    factor = float(expected_curvature_factor(k, c.r))
    return HermitianForm(_hermitize(factor * c.fiber_trace()))


def sample_polar(gen: np.random.Generator, m: int, k: int, r: int):
    """Draw ``m`` jets uniformly from the sphere of ``C^{kr}``, in polar form.

    Returns ``(x, u)`` of shapes ``(m, k)`` and ``(m, k, r)``; ``x`` follows
    Dirichlet(r, ..., r) and each ``u_s`` is uniform on its sphere,
    independently of ``x``.
    """
    z = standard_complex_normal(gen, (m, k * r)).reshape(m, k, r)
    norms = np.linalg.norm(z, axis=2)
    sq = norms**2
    x = sq / sq.sum(axis=1, keepdims=True)
    u = z / norms[..., None]
    return x, u


def mc_expected_curvature(
    c: CurvatureTensor,
    k: int,
    n_samples: int,
    rng: RandomStream,
    workers: int = 1,
) -> tuple[HermitianForm, np.ndarray]:
    """Monte Carlo mean of :func:`horizontal_curvature` and per-entry stderr.

    The stderr of a complex entry is ``sqrt(E|H - mean|^2 / N)``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    inv_s = 1.0 / np.arange(1, k + 1)
    cc = c.c

    def sampler(gen, m):
        x, u = sample_polar(gen, m, k, c.r)
        w = x * inv_s
        return _hermitize(np.einsum("ijab,ns,nsa,nsb->nij", cc, w, u, u.conj(), optimize=True))

    est: MeanEstimate = chunked_mean(sampler, n_samples, rng, workers)
    return HermitianForm(_hermitize(est.mean)), est.stderr


# --- index sets and Morse sums -------------------------------------------

MorseSum = namedtuple("MorseSum", "value degenerate")
QIndexHistogram = namedtuple("QIndexHistogram", "counts degenerate")

MODES = ("le", "eq", "near")


def _negative_count(eigs, tol) -> int | None:
    """Number of negative eigenvalues, or ``None`` if one is within ``tol`` of 0."""
    if any(abs(v) <= tol for v in eigs):
        return None
    return sum(1 for v in eigs if v < 0)


def _selected(q_point: int, q: int, mode: str) -> bool:
    if mode == "le":
        return q_point <= q
    if mode == "eq":
        return q_point == q
    if mode == "near":
        return abs(q_point - q) <= 1
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _product(values):
    out = 1
    for v in values:
        out = out * v
    return out


def morse_sum(points: Iterable, q: int, mode: str = "le", tol=0) -> MorseSum:
    """Discrete Morse integral ``sum (-1)**q * prod(lambda) * w``.

    ``points`` yields ``(eigenvalues, weight)``. Only points whose number of
    negative eigenvalues lies in the selected set contribute: ``"le"`` is
    ``{0..q}``, ``"eq"`` is ``{q}``, ``"near"`` is ``{q-1, q, q+1}``. Points
    with an eigenvalue within ``tol`` of zero add nothing and are counted in
    ``degenerate``. Exact on :class:`~fractions.Fraction` inputs.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    sign = -1 if q % 2 else 1
    total = 0
    degenerate = 0
    for eigs, w in points:
        if not 0 <= q <= len(eigs):
            raise ValueError(f"q={q} outside 0..{len(eigs)}")
        if w < 0:
            raise ValueError("weights must be nonnegative")
        qp = _negative_count(eigs, tol)
        if qp is None:
            degenerate += 1
            continue
        if _selected(qp, q, mode):
            total = total + sign * _product(eigs) * w
    return MorseSum(total, degenerate)


def signed_bucket_sums(points: Iterable, n: int, tol=0) -> list:
    """``sum w * prod(lambda)`` over each index bucket ``q = 0..n``."""
    sums = [0] * (n + 1)
    for eigs, w in points:
        qp = _negative_count(eigs, tol)
        if qp is not None:
            sums[qp] = sums[qp] + _product(eigs) * w
    return sums


def q_index_partition(points: Iterable, n: int, tol=0) -> QIndexHistogram:
    """Histogram of the negative-eigenvalue count ``q = 0..n``.

    ``points`` yields ``(eigenvalues, weight)`` pairs as in :func:`morse_sum`.
    Raises ``ArithmeticError`` if a nondegenerate point in bucket ``q`` has
    ``sign(prod lambda) != (-1)**q``.
    """
    counts = [0] * (n + 1)
    degenerate = 0
    for eigs, _ in points:
        if len(eigs) != n:
            raise ValueError(f"expected {n} eigenvalues, got {len(eigs)}")
        qp = _negative_count(eigs, tol)
        if qp is None:
            degenerate += 1
            continue
        prod = _product(eigs)
        if (prod > 0) != (qp % 2 == 0):
            raise ArithmeticError(f"sign of {prod} disagrees with index {qp}")
        counts[qp] += 1
    return QIndexHistogram(counts, degenerate)


def cumulative(counts: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for c in counts:
        acc += c
        out.append(acc)
    return out


def points_from_forms(forms: Iterable[HermitianForm], weights: Iterable[float] | None = None):
    """Turn Hermitian forms into ``(eigenvalues, weight)`` Morse points."""
    forms = list(forms)
    weights = [1.0] * len(forms) if weights is None else list(weights)
    return [(tuple(float(v) for v in h.eigenvalues()), w) for h, w in zip(forms, weights)]
