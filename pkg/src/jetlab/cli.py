"""Command line front end: ``jetlab <command> [options]``.

Commands: ggdim, moments, sphere-avg, curvature, semple, morse, verify.
Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import verify as verify_mod
from .core_numerics import HermitianForm, RandomStream, random_hermitian, signature, within_sigma
from .curvature_mc import (
    CurvatureTensor,
    expected_curvature,
    expected_curvature_factor,
    load_tensor,
    mc_expected_curvature,
)
from .gg_combinatorics import JetSpec, ggdim_rows
from .morse_examples import (
    CompleteIntersectionCut,
    HypersurfaceSpec,
    eta_top_intersection,
    leading_constant_main_factor,
    thm53_check,
)
from .semple_algebra import (
    TowerSpec,
    derived_orbifold_weights,
    det_Vk_closed,
    dim_semple,
    euler_rank_check,
    induced_weights,
    parse_class,
    pullback_class,
    tautological_twist,
    validate_rank_sequence,
)
from .sphere_moments import BlockConfig, dirichlet_moment, mc_moments, multi_indices, sphere_quadratic_average


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 100_000
    tol_sigma: float = 4.0
    output: str = "text"
    workers: int = 1

    def __post_init__(self):
        if self.samples < 2:
            raise UsageError("--samples must be >= 2")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must fit in 64 unsigned bits")


def _config(args) -> RunConfig:
    seed = args.seed
    if seed is None:
        env = os.environ.get("JETLAB_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"JETLAB_SEED={env!r} is not an integer")
    return RunConfig(seed, args.samples, args.tol_sigma, args.output, args.workers)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _emit(rows: list[dict], cfg: RunConfig, out) -> None:
    rows = [_jsonable(r) for r in rows]
    if cfg.output == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    if not rows:
        return
    cols = list(rows[0])
    if cfg.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([json.dumps(r[c]) if isinstance(r[c], (list, dict)) else r[c] for c in cols])
        return
    cells = [[("" if r[c] is None else str(r[c])) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out.write("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() + "\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


# --- commands ---------------------------------------------------------------

def cmd_ggdim(args, cfg, out):
    rows = ggdim_rows(JetSpec(args.k, args.r), args.m)
    for row in rows:
        if row["ratio"] is not None:
            row["ratio"] = float(row["ratio"])
    _emit(rows, cfg, out)
    return 0


def cmd_moments(args, cfg, out):
    if args.blocks:
        block_cfg = BlockConfig(tuple(_ints(args.blocks)))
    elif args.k and args.r:
        block_cfg = BlockConfig.with_cuts(args.k, args.r, range(1, args.ell + 1))
    else:
        raise UsageError("give --blocks or both -k and -r")
    if args.alpha:
        alphas = [tuple(_ints(a)) for a in args.alpha]
    else:
        alphas = list(multi_indices(block_cfg.k, args.max_degree))
    est = mc_moments(block_cfg, alphas, cfg.samples, RandomStream(cfg.seed), cfg.workers)
    rows = []
    for j, a in enumerate(alphas):
        exact = dirichlet_moment(block_cfg, a)
        rows.append({
            "config": list(block_cfg.block_sizes),
            "alpha": list(a),
            "exact": exact,
            "estimate": float(est.mean[j]),
            "stderr": float(est.stderr[j]),
            "within": within_sigma(est.mean[j], float(exact), est.stderr[j], cfg.tol_sigma),
        })
    _emit(rows, cfg, out)
    return 0


def cmd_sphere_avg(args, cfg, out):
    if args.diag:
        q = HermitianForm(np.diag(_floats(args.diag)))
    elif args.random:
        q = random_hermitian(RandomStream(cfg.seed, stream=1).generator, args.random)
    else:
        raise UsageError("give --diag or --random")
    est, se, exact = sphere_quadratic_average(q, cfg.samples, RandomStream(cfg.seed), cfg.workers)
    _emit([{
        "r": q.dimension,
        "exact": exact,
        "estimate": est,
        "stderr": se,
        "within": within_sigma(est, exact, se, cfg.tol_sigma),
    }], cfg, out)
    return 0


def cmd_curvature(args, cfg, out):
    if args.tensor_file:
        try:
            c = load_tensor(args.tensor_file)
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot load tensor: {exc}")
    elif args.kronecker:
        c = CurvatureTensor.kronecker(*args.kronecker)
    elif args.random_tensor:
        c = CurvatureTensor.random(*args.random_tensor, RandomStream(cfg.seed, stream=4))
    else:
        raise UsageError("give --tensor-file, --kronecker N R or --random-tensor N R")
    exact = expected_curvature(c, args.k)
    est, se = mc_expected_curvature(c, args.k, cfg.samples, RandomStream(cfg.seed), cfg.workers)
    rec = {
        "n": c.n,
        "r": c.r,
        "k": args.k,
        "factor": expected_curvature_factor(args.k, c.r),
        "expected": [[complex(v) for v in row] for row in exact.entries],
        "estimate": [[complex(v) for v in row] for row in est.entries],
        "stderr": se,
        "signature": list(signature(exact)),
        "within": within_sigma(est.entries, exact.entries, se, cfg.tol_sigma),
    }
    if cfg.output == "json":
        out.write(json.dumps(_jsonable(rec), indent=2) + "\n")
        return 0
    out.write(f"n={c.n} r={c.r} k={args.k} factor={rec['factor']}\n")
    out.write(f"signature (+,-,0) of expected curvature: {tuple(rec['signature'])}\n")
    rows = []
    for i in range(c.n):
        for j in range(c.n):
            rows.append({
                "i": i, "j": j,
                "expected": f"{exact.entries[i, j]:.6g}",
                "estimate": f"{est.entries[i, j]:.6g}",
                "stderr": f"{se[i, j]:.3g}",
            })
    _emit(rows, cfg, out)
    out.write(f"within {cfg.tol_sigma} sigma: {rec['within']}\n")
    return 0


def cmd_semple(args, cfg, out):
    spec = TowerSpec(args.n, args.r, args.k)
    rec = {
        "n": spec.n, "r": spec.r, "k": spec.k,
        "dim_X_k": dim_semple(spec),
    }
    if spec.k >= 1:
        rec["det_V_k"] = str(det_Vk_closed(spec))
        rec["twists"] = {p: list(tautological_twist(p, spec.k, spec.r)) for p in range(1, spec.r + 1)}
        rec["euler_rank_check"] = euler_rank_check(spec)
    if args.ranks:
        ranks = _ints(args.ranks)
        report = validate_rank_sequence(ranks, proper_top=args.proper_top)
        rec["ranks"] = ranks
        rec["rank_violations"] = list(report.violations)
        rec["induced_weights"] = list(induced_weights(ranks)) if report.ok else None
    if args.cls:
        try:
            cls = parse_class(args.cls)
        except ValueError as exc:
            raise UsageError(str(exc))
        rec["class"] = str(cls)
        if spec.k >= cls.level:
            rec["class_on_X_k"] = str(pullback_class(cls, spec.k))
    if args.rho:
        rho = [math.inf if t.strip() in ("inf", "oo") else int(t) for t in args.rho.split(",")]
        rec["orbifold_weights"] = {
            s: derived_orbifold_weights(rho, s) for s in range(1, max(spec.k, 1) + 1)
        }
    if cfg.output == "json":
        out.write(json.dumps(_jsonable(rec), indent=2) + "\n")
    else:
        for key, val in _jsonable(rec).items():
            out.write(f"{key}: {val}\n")
    return 0


def cmd_morse(args, cfg, out):
    orders = _ints(args.orders) if args.orders else []
    degrees = _ints(args.degrees) if args.degrees else [1] * len(orders)
    try:
        cut = CompleteIntersectionCut(args.k, orders, degrees, Fraction(args.delta))
        spec = HypersurfaceSpec(args.n, args.d)
        eps = Fraction(args.eps)
        eta = eta_top_intersection(spec, eps)
        report = thm53_check(cut, args.n, args.r)
        const = leading_constant_main_factor(args.n, args.k, args.r, cut, eta)
    except ValueError as exc:
        raise UsageError(str(exc))
    rec = {
        "input": {"n": args.n, "d": args.d, "eps": eps, "k": args.k, "r": args.r,
                  "orders": orders, "degrees": degrees, "delta": Fraction(args.delta)},
        "dim_Z": report.dim_Z,
        "sum_reciprocals": report.sum_reciprocals,
        "delta_log_k": report.bound,
        "passes": report.passes,
        "eta": eta,
        "constant_main_factor": const.main_factor,
        "log_k_exponent": const.log_k_exponent,
        "symbolic_error_slots": list(const.error_slots),
    }
    if cfg.output == "json":
        out.write(json.dumps(_jsonable(rec), indent=2) + "\n")
    else:
        for key, val in _jsonable(rec).items():
            out.write(f"{key}: {val}\n")
    return 0


def cmd_verify(args, cfg, out):
    groups = verify_mod.run_suite(cfg.seed, cfg.samples, cfg.workers, cfg.tol_sigma)
    failed = [c for _, checks in groups for c in checks if not c.passed]
    if cfg.output == "json":
        payload = {
            "seed": cfg.seed,
            "samples": cfg.samples,
            "tol_sigma": cfg.tol_sigma,
            "groups": [{"group": g, "checks": [c.as_dict() for c in cs]} for g, cs in groups],
            "failed": [c.name for c in failed],
        }
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(f"jetlab verify: seed={cfg.seed} samples={cfg.samples} tol={cfg.tol_sigma} sigma\n")
        for group, checks in groups:
            out.write(f"[{group}]\n")
            for c in checks:
                status = "PASS" if c.passed else "FAIL"
                out.write(f"  {status}  {c.name}\n")
                out.write(f"        expected: {c.expected}\n")
                out.write(f"        observed: {c.observed}\n")
                out.write(f"        tolerance: {c.tolerance}\n")
        total = sum(len(cs) for _, cs in groups)
        out.write(f"{total - len(failed)}/{total} checks passed\n")
        for c in failed:
            out.write(f"FAILED: {c.name}\n")
    return 1 if failed else 0


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="64-bit seed (default: $JETLAB_SEED or 0)")
    common.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples")
    common.add_argument("--workers", type=int, default=1, help="worker threads; results do not depend on it")
    common.add_argument("--tol-sigma", type=float, default=4.0, help="acceptance band in standard errors")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json", help="JSON output")
    fmt.add_argument("--csv", dest="output", action="store_const", const="csv", help="CSV output")
    common.set_defaults(output="text")

    p = argparse.ArgumentParser(prog="jetlab", description="Exact and Monte Carlo checks for jet-bundle curvature bookkeeping.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("ggdim", parents=[common], help="fiber dimensions of GG jet polynomials")
    g.add_argument("-k", type=int, required=True)
    g.add_argument("-r", type=int, required=True)
    g.add_argument("-m", type=int, required=True, help="largest weighted degree")
    g.set_defaults(func=cmd_ggdim)

    m = sub.add_parser("moments", parents=[common], help="block-simplex moments, exact and MC")
    m.add_argument("--blocks", help="block sizes, e.g. 2,2,1")
    m.add_argument("-k", type=int)
    m.add_argument("-r", type=int)
    m.add_argument("--ell", type=int, default=0, help="number of cut levels (first ell)")
    m.add_argument("--alpha", action="append", help="moment exponents, e.g. 0,0,1; repeatable")
    m.add_argument("--max-degree", type=int, default=1)
    m.set_defaults(func=cmd_moments)

    s = sub.add_parser("sphere-avg", parents=[common], help="sphere average of <Qu,u>")
    s.add_argument("--diag", help="diagonal of Q, e.g. 1,-1")
    s.add_argument("--random", type=int, metavar="R", help="seeded random Hermitian Q on C^R")
    s.set_defaults(func=cmd_sphere_avg)

    c = sub.add_parser("curvature", parents=[common], help="expected horizontal curvature")
    c.add_argument("-k", type=int, required=True)
    c.add_argument("--tensor-file", metavar="PATH")
    c.add_argument("--kronecker", type=int, nargs=2, metavar=("N", "R"))
    c.add_argument("--random-tensor", type=int, nargs=2, metavar=("N", "R"))
    c.set_defaults(func=cmd_curvature)

    t = sub.add_parser("semple", parents=[common], help="Semple tower bookkeeping")
    t.add_argument("-n", type=int, required=True)
    t.add_argument("-r", type=int, required=True)
    t.add_argument("-k", type=int, required=True)
    t.add_argument("--ranks", help="rank sequence r_0,...,r_k")
    t.add_argument("--proper-top", action="store_true")
    t.add_argument("--class", dest="cls", help="class such as 'detV + O(1,0,2) - 3A'")
    t.add_argument("--rho", help="ramification orders, e.g. 2,3,inf")
    t.set_defaults(func=cmd_semple)

    h = sub.add_parser("morse", parents=[common], help="hypersurface Morse numbers")
    h.add_argument("-n", type=int, required=True)
    h.add_argument("-d", type=int, required=True)
    h.add_argument("--eps", default="0")
    h.add_argument("-k", type=int, required=True)
    h.add_argument("-r", type=int, required=True)
    h.add_argument("--orders", help="cut orders s_1<...<s_l")
    h.add_argument("--degrees", help="cut degrees d_j")
    h.add_argument("--delta", default="0")
    h.set_defaults(func=cmd_morse)

    v = sub.add_parser("verify", parents=[common], help="run every cross-oracle check")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        return args.func(args, cfg, out)
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"jetlab {args.command}: error: {exc}\n")
        return 2


def run() -> None:
    sys.exit(main())
