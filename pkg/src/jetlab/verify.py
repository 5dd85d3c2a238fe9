"""Cross-oracle checks behind ``jetlab verify`` and the acceptance tests.

Each ``check_*`` function runs one group of comparisons and returns
:class:`Check` records. Statistical checks take the sample count explicitly;
exact checks ignore it. Random inputs come from streams keyed on the group
number, so groups do not share draws.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core_numerics import (
    GaussRational,
    HermitianForm,
    RandomStream,
    random_hermitian,
    within_sigma,
)
from .curvature_mc import (
    CurvatureTensor,
    JetPoint,
    JetVector,
    expected_curvature,
    finsler_power_exact,
    finsler_value,
    harmonic_sum,
    horizontal_curvature,
    mc_expected_curvature,
    morse_sum,
    points_from_forms,
    q_index_partition,
    sample_polar,
)
from .gg_combinatorics import (
    JetSpec,
    apply_weighted_action,
    asymptotic_fiber_dimension,
    fiber_dimension,
    fiber_dimension_bruteforce,
)
from .morse_examples import HypersurfaceSpec, eta_top_intersection, general_type_threshold
from .semple_algebra import (
    TowerSpec,
    det_Vk_closed,
    det_Vk_iterated,
    induced_weights,
    tautological_twist,
    validate_rank_sequence,
)
from .sphere_moments import (
    BlockConfig,
    dirichlet_moment,
    mc_moments,
    multi_indices,
    partition_identity,
    sphere_quadratic_average,
)


@dataclass(frozen=True)
class Check:
    name: str
    expected: str
    observed: str
    tolerance: str
    passed: bool

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "observed": self.observed,
            "tolerance": self.tolerance,
            "status": "pass" if self.passed else "FAIL",
        }


# 1 ------------------------------------------------------------------------

def check_trace_identity(seed=0, samples=100_000, workers=1, tol_sigma=4.0, cases=20):
    """MC sphere averages of random Hermitian forms against ``Tr(Q)/r``."""
    gen = RandomStream(seed, stream=1).generator
    hits = 0
    worst = 0.0
    for case in range(cases):
        r = (2, 3, 5)[case % 3]
        q = random_hermitian(gen, r)
        est, se, exact = sphere_quadratic_average(q, samples, RandomStream(seed, 1, (case,)), workers)
        z = abs(est - exact) / se
        worst = max(worst, z)
        hits += z <= tol_sigma
    need = cases - cases // 20
    return [
        Check(
            "trace_identity",
            f">= {need}/{cases} within {tol_sigma} sigma",
            f"{hits}/{cases} (worst {worst:.3f} sigma)",
            f"{tol_sigma} sigma",
            hits >= need,
        )
    ]


# 2 ------------------------------------------------------------------------

MOMENT_CASES = ((3, 2, 1), (4, 3, 2))


def check_dirichlet_moments(seed=0, samples=1_000_000, workers=1, tol_sigma=4.0):
    """Exact block moments against MC, plus the cut/free first-moment identity."""
    out = []
    configs = []
    for k, r, ell in MOMENT_CASES:
        configs.append((f"uniform(k={k},r={r})", BlockConfig.uniform(k, r)))
        configs.append((f"cut(k={k},r={r},l={ell})", BlockConfig.with_cuts(k, r, range(1, ell + 1))))
    for idx, (label, cfg) in enumerate(configs):
        alphas = list(multi_indices(cfg.k, 2))
        est = mc_moments(cfg, alphas, samples, RandomStream(seed, 2, (idx,)), workers)
        bad = []
        worst = 0.0
        for j, a in enumerate(alphas):
            exact = float(dirichlet_moment(cfg, a))
            err = abs(est.mean[j] - exact)
            if est.stderr[j] > 0:
                worst = max(worst, err / est.stderr[j])
            if not within_sigma(est.mean[j], exact, est.stderr[j], tol_sigma):
                bad.append(a)
        out.append(
            Check(
                f"moments {label} |alpha|<=2",
                f"{len(alphas)} exact rationals",
                f"{len(alphas) - len(bad)}/{len(alphas)} within (worst {worst:.3f} sigma)",
                f"{tol_sigma} sigma",
                not bad,
            )
        )
    for k, r, ell in MOMENT_CASES:
        i_cut, i_free, total = partition_identity(k, r, ell)
        cfg = BlockConfig.with_cuts(k, r, range(1, ell + 1))
        e = lambda s: tuple(int(t == s) for t in range(k))
        from_moments = (dirichlet_moment(cfg, e(0)), dirichlet_moment(cfg, e(k - 1)))
        ok = (
            i_cut == Fraction(r - 1, k * r - ell)
            and i_free == Fraction(r, k * r - ell)
            and total == 1
            and from_moments == (i_cut, i_free)
        )
        out.append(
            Check(
                f"partition identity (k={k},r={r},l={ell})",
                f"I'={Fraction(r - 1, k * r - ell)}, I''={Fraction(r, k * r - ell)}, sum=1",
                f"I'={i_cut}, I''={i_free}, sum={total}",
                "exact",
                ok,
            )
        )
    return out


# 3 ------------------------------------------------------------------------

def check_fiber_dimensions(seed=0, samples=None, workers=1, tol_sigma=4.0):
    mismatches = []
    cases = 0
    for k in range(1, 5):
        for r in range(1, 4):
            for m in range(16):
                cases += 1
                spec = JetSpec(k, r)
                if fiber_dimension(spec, m) != fiber_dimension_bruteforce(spec, m):
                    mismatches.append((k, r, m))
    out = [
        Check(
            "fiber_dimension vs enumeration (k<=4, r<=3, m<=15)",
            f"{cases} exact matches",
            f"{cases - len(mismatches)} matches",
            "exact",
            not mismatches,
        )
    ]
    for k, r, m, tol in ((2, 1, 100_000, 0.05), (2, 2, 10_000, 0.10)):
        spec = JetSpec(k, r)
        ratio = fiber_dimension(spec, m) / asymptotic_fiber_dimension(spec, m)
        out.append(
            Check(
                f"asymptotic ratio (k={k},r={r},m={m})",
                "1",
                f"{float(ratio):.8f}",
                f"{tol:.0%}",
                abs(ratio - 1) <= tol,
            )
        )
    return out


# 4 ------------------------------------------------------------------------

def curvature_tensors(seed: int, n: int = 3, r: int = 2):
    return [
        ("zero", CurvatureTensor.zero(n, r)),
        ("kronecker", CurvatureTensor.kronecker(n, r)),
        ("random", CurvatureTensor.random(n, r, RandomStream(seed, 4, (999,)))),
    ]


def check_expected_curvature(seed=0, samples=100_000, workers=1, tol_sigma=4.0, k=3):
    out = []
    n, r = 3, 2
    # Exact side rebuilt from the Dirichlet first moment and Tr(Q)/r.
    mean_x = [dirichlet_moment(BlockConfig.uniform(k, r), tuple(int(t == s) for t in range(k)))
              for s in range(k)]
    factor = sum(Fraction(1, s + 1) * mean_x[s] for s in range(k)) / r
    factor_ok = factor == harmonic_sum(k) / (k * r)
    for idx, (label, c) in enumerate(curvature_tensors(seed, n, r)):
        exact = expected_curvature(c, k).entries
        oracle = float(factor) * c.fiber_trace()
        formula_ok = factor_ok and np.allclose(exact, oracle, rtol=1e-14, atol=1e-15)
        h_est, se = mc_expected_curvature(c, k, samples, RandomStream(seed, 4, (idx,)), workers)
        mc_ok = within_sigma(h_est.entries, exact, se, tol_sigma)
        err = np.abs(h_est.entries - exact)
        worst = float(np.max(np.where(se > 0, err / np.where(se > 0, se, 1), 0.0)))
        out.append(
            Check(
                f"expected curvature {label} (k={k},r={r})",
                f"H_k/(kr) * trace, factor {harmonic_sum(k) / (k * r)}",
                f"formula {'ok' if formula_ok else 'mismatch'}; MC worst {worst:.3f} sigma",
                f"{tol_sigma} sigma per entry",
                bool(formula_ok and mc_ok),
            )
        )
    # k = 1: the curvature sampler and the sphere average see the same draws.
    c = curvature_tensors(seed, n, r)[2][1]
    h1, se1 = mc_expected_curvature(c, 1, samples, RandomStream(seed, 4, (100,)), workers)
    agree = True
    for i in range(n):
        q = _diag_block(c, i)
        est, se, exact = sphere_quadratic_average(q, samples, RandomStream(seed, 4, (100,)), workers)
        agree &= abs(h1.entries[i, i].real - est) <= 1e-12 * max(1.0, abs(est))
        agree &= within_sigma(est, exact, se, tol_sigma)
    out.append(
        Check(
            "k=1 reduction to sphere_quadratic_average",
            "identical diagonal estimates",
            "identical" if agree else "differ",
            "1e-12 relative",
            bool(agree),
        )
    )
    return out


def _diag_block(c: CurvatureTensor, i: int) -> HermitianForm:
    # sum_ab c[i,i,a,b] u_a conj(u_b) = <A u, u> with A = c[i,i]^T.
    return HermitianForm(c.c[i, i].T)


# 5 ------------------------------------------------------------------------

def _rank_rule(seq) -> bool:
    return seq[-1] >= 1 and all(0 <= a - b <= 1 for a, b in zip(seq, seq[1:]))


def check_semple(seed=0, samples=None, workers=1, tol_sigma=4.0):
    out = []
    bad = [(r, k) for r in range(1, 6) for k in range(13)
           if det_Vk_closed(TowerSpec(max(r, 1), r, k)) != det_Vk_iterated(TowerSpec(max(r, 1), r, k))]
    out.append(Check("det V_k closed vs iterated (r<=5, k<=12)", "equal", f"{65 - len(bad)}/65 equal",
                     "exact", not bad))
    bad_w = [(r, k) for r in range(1, 6) for k in range(1, 13)
             if induced_weights((r,) * (k + 1)) != (r - 1,) * k]
    out.append(Check("induced weights of constant sequences", "(r-1)*1",
                     f"{60 - len(bad_w)}/60 equal", "exact", not bad_w))
    bad_t = [(r, k) for r in range(1, 6) for k in range(1, 13)
             if tuple(a + b for a, b in zip(tautological_twist(r, k, r),
                                            det_Vk_closed(TowerSpec(r, r, k)).weight)) != (0,) * k]
    out.append(Check("tautological twist p=r is dual of det weight", "sum 0",
                     f"{60 - len(bad_t)}/60 dual", "exact", not bad_t))
    scanned = 0
    wrong = []
    for length in range(1, 7):
        for seq in itertools.product(range(5), repeat=length):
            if not 1 <= seq[0] <= 4:
                continue
            scanned += 1
            if validate_rank_sequence(seq).ok != _rank_rule(seq):
                wrong.append(seq)
    out.append(Check("rank sequence validator, exhaustive k<=5, r_0<=4",
                     "accepts exactly monotone drop-{0,1} sequences",
                     f"{scanned - len(wrong)}/{scanned} agree", "exact", not wrong))
    return out


# 6 ------------------------------------------------------------------------

def check_hypersurfaces(seed=0, samples=None, workers=1, tol_sigma=4.0):
    bad = []
    for d in range(3, 9):
        if eta_top_intersection(HypersurfaceSpec(1, d), 0) != d * (d - 3):
            bad.append((1, d))
        if eta_top_intersection(HypersurfaceSpec(2, d), 0) != d * (d - 4) ** 2:
            bad.append((2, d))
    out = [Check("eta^n vs adjunction (n=1,2; 3<=d<=8)", "d(d-3), d(d-4)^2",
                 f"{12 - len(bad)}/12 equal", "exact", not bad)]
    bad_t = []
    for n in range(1, 7):
        if general_type_threshold(n) != n + 3:
            bad_t.append(n)
        if eta_top_intersection(HypersurfaceSpec(n, n + 2), 0) != 0:
            bad_t.append((n, n + 2))
        for d in range(1, 13):
            spec = HypersurfaceSpec(n, d)
            canonical_positive = d - n - 2 > 0
            if canonical_positive != (d >= n + 3):
                bad_t.append((n, d))
            # Fano hypersurfaces of even dimension have (-K)^n > 0, so only
            # d >= n+3 is required to give positivity.
            if d >= n + 3 and not eta_top_intersection(spec, Fraction(1, 2)) > 0:
                bad_t.append((n, d, "eps=1/2"))
    out.append(Check("general-type threshold d = n+3 (n<=6, d<=12)", "n+3",
                     "confirmed" if not bad_t else f"violations {bad_t}", "exact", not bad_t))
    return out


# 7 ------------------------------------------------------------------------

def random_jet(gen: np.random.Generator, k: int, r: int) -> JetVector:
    z = gen.standard_normal((k, r, 2))
    return JetVector(tuple(z[..., 0] + 1j * z[..., 1]))


def check_finsler(seed=0, samples=None, workers=1, tol_sigma=4.0, cases=100):
    gen = RandomStream(seed, stream=7).generator
    worst = 0.0
    for _ in range(cases):
        k = int(gen.integers(1, 5))
        r = int(gen.integers(1, 4))
        xi = random_jet(gen, k, r)
        lam = complex(*gen.standard_normal(2)) * math.exp(gen.uniform(-1, 1))
        eps = np.sort(gen.uniform(0.05, 1.0, k))[::-1]
        eps[0] = 1.0
        scaled = JetVector(tuple(np.array(b) for b in apply_weighted_action(lam, xi.xi)))
        lhs = finsler_value(scaled, eps)
        rhs = abs(lam) ** 2 * finsler_value(xi, eps)
        worst = max(worst, abs(lhs - rhs) / rhs)
    exact_ok = True
    for _ in range(20):
        k = int(gen.integers(1, 5))
        r = int(gen.integers(1, 4))
        xi = [[GaussRational(int(a), int(b)) for a, b in gen.integers(-5, 6, (r, 2))] for _ in range(k)]
        if all(v.abs2() == 0 for blk in xi for v in blk):
            continue
        lam = GaussRational(int(gen.integers(1, 4)), int(gen.integers(-3, 4)))
        eps = [Fraction(1)] + [Fraction(1, 2 + s) for s in range(1, k)]
        p = math.factorial(k)
        lhs = finsler_power_exact(apply_weighted_action(lam, xi), eps, p)
        exact_ok &= lhs == lam.abs2() ** p * finsler_power_exact(xi, eps, p)
    return [
        Check("Finsler homogeneity (float, 100 jets)", "|lambda|^2 Psi", f"max rel err {worst:.2e}",
              "1e-12", worst <= 1e-12),
        Check("Finsler homogeneity (exact rational)", "Psi^p scales by |lambda|^(2p)",
              "exact" if exact_ok else "mismatch", "exact", bool(exact_ok)),
    ]


# 8 ------------------------------------------------------------------------

def check_morse(seed=0, samples=None, workers=1, tol_sigma=4.0):
    stream = RandomStream(seed, stream=8)
    gen = stream.generator
    n, r, k = 3, 2, 3
    forms = []
    for j in range(20):
        c = CurvatureTensor.random(n, r, stream.substream(j))
        x, u = sample_polar(gen, 10, k, r)
        forms.extend(horizontal_curvature(c, JetPoint(x[i], u[i])) for i in range(10))
    pts = points_from_forms(forms)
    try:
        hist = q_index_partition(pts, n, tol=1e-12)
        sign_ok = sum(hist.counts) + hist.degenerate == len(pts)
        observed = f"buckets {hist.counts}, degenerate {hist.degenerate}"
    except ArithmeticError as exc:
        sign_ok, observed = False, str(exc)
    out = [Check("sign(prod lambda) = (-1)^q per bucket", "all consistent", observed, "exact", sign_ok)]

    rat_pts = []
    for _ in range(200):
        eigs = tuple(Fraction(int(a), int(b)) for a, b in
                     zip(gen.integers(1, 20, n) * gen.choice([-1, 1], n), gen.integers(1, 9, n)))
        rat_pts.append((eigs, Fraction(int(gen.integers(1, 10)), int(gen.integers(1, 10)))))
    total = sum(w * math.prod(e) for e, w in rat_pts)
    value = morse_sum(rat_pts, n, "le").value
    expect = (-1) ** n * total
    out.append(Check("morse_sum full index set (q=n, <=q)", str(expect), str(value), "exact",
                     value == expect))
    return out


CRITERIA = (
    ("1 trace identity", check_trace_identity),
    ("2 dirichlet moments", check_dirichlet_moments),
    ("3 GG fiber dimensions", check_fiber_dimensions),
    ("4 expected curvature", check_expected_curvature),
    ("5 Semple bookkeeping", check_semple),
    ("6 hypersurface intersections", check_hypersurfaces),
    ("7 Finsler homogeneity", check_finsler),
    ("8 Morse index bookkeeping", check_morse),
)


def run_suite(seed: int = 0, samples: int = 100_000, workers: int = 1, tol_sigma: float = 4.0):
    """Run every criterion group; returns ``[(group, [Check, ...]), ...]``."""
    return [
        (group, fn(seed=seed, samples=samples, workers=workers, tol_sigma=tol_sigma))
        for group, fn in CRITERIA
    ]
