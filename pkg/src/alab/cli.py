"""Command-line front end: ``alab <subcommand> ...``.

Exit codes: 0 success, 1 computational failure (structured error JSON on
stdout), 2 usage error.  JSON output carries ``"schema": 1`` and floats are
printed with 15 significant digits.

CSV columns
  mahler        method,resolution,value,excluded_zeros,skipped_nodes
  classify      verdict,reason,dim_estimate
  torsion-scan  order,t1..td
  homoclinic    n1..nd,re,im
  growth        gamma,index,norm,excluded_zeros,log_count,rate,abs_error
  gelfond       root,angle,n,gap,dist,bound,violation
  dioph-ratio   gamma,r,M,ratio
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import cyclo, homoclinic, mahler
from .config import FORMATS, RunConfig
from .laurent import LaurentPoly, PolySyntaxError, parse_laurent
from .lattice import parse_lattice, parse_lattice_sequence

SCHEMA = 1


class UsageError(Exception):
    pass


def _clean(obj):
    """Round floats to 15 significant digits; non-finite floats become strings."""
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.15g}")
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):          # numpy scalars
        return _clean(obj.item())
    return obj


def _json(command: str, result) -> str:
    return json.dumps({"schema": SCHEMA, "command": command, "result": _clean(result)},
                      sort_keys=True) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([f"{x:.15g}" if isinstance(x, float) else x for x in r])
    return buf.getvalue()


def _table(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[f"{x:.15g}" if isinstance(x, float) else str(x) for x in r] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n"
                   for row in cells)


def _emit(cfg: RunConfig, command: str, result: dict, header: list[str], rows: list[list]) -> str:
    if cfg.format == "json":
        return _json(command, result)
    if cfg.format == "csv":
        return _csv(header, rows)
    return _table(header, rows)


def _poly(args) -> LaurentPoly:
    return parse_laurent(args.poly, args.dims)


def cmd_mahler(args, cfg):
    f = _poly(args)
    if args.mode == "quadrature":
        n = args.n or mahler.DEFAULT_GRID.get(f.dims, 64)
        if n > cfg.max_grid:
            raise UsageError(f"grid {n} exceeds max_grid {cfg.max_grid}")
        est = mahler.mahler_quadrature(f, n)
    elif args.mode == "riemann":
        if not args.gamma:
            raise UsageError("--mode riemann needs --gamma")
        est = mahler.riemann_sum_log(f, parse_lattice(args.gamma, f.dims))
    else:
        if f.dims != 1 or not args.n:
            raise UsageError("--mode resultant needs --dims 1 and --n")
        prod, zeros = mahler.exact_root_of_unity_product(f, args.n)
        est = mahler.MahlerEstimate(math.log(prod) / args.n, "resultant", f"n={args.n}", zeros)
    res = {"value": est.value, "method": est.method, "resolution": est.resolution,
           "excluded_zeros": est.excluded_zeros, "skipped_nodes": est.skipped_nodes}
    return res, ["method", "resolution", "value", "excluded_zeros", "skipped_nodes"], \
        [[est.method, est.resolution, est.value, est.excluded_zeros, est.skipped_nodes]]


def cmd_classify(args, cfg):
    from .variety import classify_atoral

    v = classify_atoral(_poly(args), args.grid)
    res = {"verdict": v.verdict, "reason": v.reason, "dim_estimate": v.dim_estimate}
    return res, ["verdict", "reason", "dim_estimate"], [[v.verdict, v.reason, v.dim_estimate]]


def cmd_torsion_scan(args, cfg):
    from .variety import torsion_scan

    if args.max_order > cfg.max_order:
        raise UsageError(f"max order {args.max_order} exceeds cap {cfg.max_order}")
    f = _poly(args)
    pts = torsion_scan(f, args.max_order)
    items = [{"order": p.order, "angles": [str(a) for a in p.angles]} for p in pts]
    rows = [[p.order] + [str(a) for a in p.angles] for p in pts]
    return {"count": len(pts), "points": items}, \
        ["order"] + [f"t{j + 1}" for j in range(f.dims)], rows


def cmd_homoclinic(args, cfg):
    from .variety import sample_variety

    f = _poly(args)
    if args.search:
        found = homoclinic.multiplier_search(f, sample_variety(f), args.max_power,
                                             args.radius, args.grid)
        if found is None:
            res = {"found": False}
            return res, ["found"], [[0]]
        g, k = found.g, found.k
    else:
        g = parse_laurent(args.g, f.dims) if args.g else LaurentPoly.constant(1, f.dims)
        k = args.k
    grid = args.grid or 4 * args.radius + 64
    if grid > cfg.max_grid:
        raise UsageError(f"grid {grid} exceeds max_grid {cfg.max_grid}")
    w = homoclinic.fourier_window(f, g, k, args.radius, grid, extrapolate=args.extrapolate)
    rep = homoclinic.summability_report(w) if args.radius >= 4 else None
    resid = homoclinic.verify_homoclinic(w)
    res = {"g": str(g), "k": k, "radius": w.radius, "grid": w.grid_n, "offsets": list(w.offsets),
           "extrapolated": w.extrapolated,
           "aliasing_estimate": w.aliasing, "residual": resid.max_deviation,
           "coefficients": [{"n": [int(x) for x in n], "value": c}
                            for n, c in zip(w.indices(), w.coeffs.ravel())]}
    if rep is not None:
        res["summability"] = {"decay_exponent": rep.decay_exponent,
                              "tail_ratio": rep.tail_ratio,
                              "exponential_preferred": rep.exponential_preferred,
                              "l1_partial_sums": list(rep.l1_partial_sums)}
    rows = [[int(x) for x in n] + [c.real, c.imag] for n, c in zip(w.indices(), w.coeffs.ravel())]
    return res, [f"n{j + 1}" for j in range(f.dims)] + ["re", "im"], rows


def cmd_growth(args, cfg):
    from .periodic import growth_series

    f = _poly(args)
    t = growth_series(f, parse_lattice_sequence(args.gammas, f.dims))
    res = {"target": t.target, "target_resolution": t.target_resolution,
           "empirical_only": t.empirical_only, "note": t.verdict_note,
           "final_error": t.final_error,
           "rows": [{"gamma": r.descriptor, "index": r.index, "norm": r.lattice_norm,
                     "excluded_zeros": r.excluded_zeros, "log_count": r.log_count,
                     "rate": r.rate} for r in t.rows]}
    rows = [[r.descriptor, r.index, r.lattice_norm, r.excluded_zeros, r.log_count, r.rate,
             abs(r.rate - t.target)] for r in t.rows]
    return res, ["gamma", "index", "norm", "excluded_zeros", "log_count", "rate", "abs_error"], rows


def cmd_gelfond(args, cfg):
    from .dioph import gelfond_table

    if args.dims != 1:
        raise UsageError("gelfond needs a univariate polynomial (--dims 1)")
    t = gelfond_table(parse_laurent(args.poly, 1), args.n_max, args.eps)
    res = {"eps": t.eps, "violations": t.violations, "last_violation": t.last_violation,
           "min_margin": t.min_margin,
           "roots": [{"value": r.value, "angle": r.angle, "modulus_defect": r.modulus_defect,
                      "borderline": r.borderline} for r in t.roots],
           "degenerate": [{"value": r.value, "torsion_order": r.torsion_order}
                          for r in t.degenerate],
           "rows": [{"root": r.root, "n": r.n, "gap": r.gap, "dist": r.dist, "bound": r.bound,
                     "violation": r.violation} for r in t.rows]}
    rows = [[r.root, t.roots[r.root].angle, r.n, r.gap, r.dist, r.bound, int(r.violation)]
            for r in t.rows]
    return res, ["root", "angle", "n", "gap", "dist", "bound", "violation"], rows


def cmd_dioph_ratio(args, cfg):
    from .dioph import quantitative_ratio
    from .variety import sample_variety

    f = _poly(args)
    gammas = parse_lattice_sequence(args.gammas, f.dims)
    try:
        radii = [float(x) for x in args.radii.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad --radii: {exc}") from None
    s = quantitative_ratio(f, gammas, radii, sample_variety(f))
    res = {"verdict": s.verdict,
           "rows": [{"gamma": d, "r": r, "M": m, "ratio": q}
                    for d, r, m, q in zip(s.descriptors, s.radii, s.M, s.ratios)]}
    rows = [list(x) for x in zip(s.descriptors, s.radii, s.M, s.ratios)]
    return res, ["gamma", "r", "M", "ratio"], rows


def cmd_fixtures(args, cfg):
    from .fixtures import run_fixtures

    lines, ok = run_fixtures(cfg.seed)
    return {"lines": lines, "passed": ok}, None, lines


COMMANDS = {"mahler": cmd_mahler, "classify": cmd_classify, "torsion-scan": cmd_torsion_scan,
            "homoclinic": cmd_homoclinic, "growth": cmd_growth, "gelfond": cmd_gelfond,
            "dioph-ratio": cmd_dioph_ratio, "fixtures": cmd_fixtures}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--format", choices=FORMATS, default=None)
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--zero-tol", type=float)
    common.add_argument("--max-order-cap", type=int, dest="max_order_cap")
    common.add_argument("--max-grid", type=int)

    def poly_args(p, dims=True):
        p.add_argument("--poly", required=True, help='e.g. "2 - u1 - u2^-1"')
        if dims:
            p.add_argument("--dims", type=int, required=True)
        else:
            p.add_argument("--dims", type=int, default=1, help="must be 1")

    ap = argparse.ArgumentParser(prog="alab", description=__doc__.split("\n")[0],
                                 epilog=__doc__.split("\n\n", 2)[2],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mahler", parents=[common], help="logarithmic Mahler measure")
    poly_args(p)
    p.add_argument("--mode", choices=("quadrature", "riemann", "resultant"), default="quadrature")
    p.add_argument("--n", type=int, help="grid size (quadrature) or n (resultant)")
    p.add_argument("--gamma", help="lattice for --mode riemann, e.g. diag:8,8")

    p = sub.add_parser("classify", parents=[common], help="atoral / toral verdict")
    poly_args(p)
    p.add_argument("--grid", type=int)

    p = sub.add_parser("torsion-scan", parents=[common], help="torsion points on U(f)")
    poly_args(p)
    p.add_argument("--max-order", type=int, required=True)

    p = sub.add_parser("homoclinic", parents=[common], help="Fourier window of g^k/f*")
    poly_args(p)
    p.add_argument("--multiplier", "--g", dest="g", help="multiplier polynomial (default 1)")
    p.add_argument("--power", "--k", dest="k", type=int, default=1)
    p.add_argument("--window", "--radius", dest="radius", type=int, default=8)
    p.add_argument("--grid", type=int)
    p.add_argument("--search", action="store_true", help="search for g and k first")
    p.add_argument("--max-power", type=int, default=4)
    p.add_argument("--extrapolate", action="store_true",
                   help="Richardson step in N^-1/2 against grid N/2 (point zeros of f)")

    p = sub.add_parser("growth", parents=[common], help="growth rates over lattices")
    poly_args(p)
    p.add_argument("--gammas", required=True, help="diag-range:a:b:step or descriptors")

    p = sub.add_parser("gelfond", parents=[common], help="|lambda^n - 1| against exp(-eps n)")
    poly_args(p, dims=False)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--eps", type=float, required=True)

    p = sub.add_parser("dioph-ratio", parents=[common], help="M_f log(1/r) / |Omega|")
    poly_args(p)
    p.add_argument("--gammas", required=True)
    p.add_argument("--radii", required=True, help="comma-separated radii, one per lattice")

    sub.add_parser("fixtures", parents=[common], help="run the worked examples and checks")
    return ap


def _config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    over = {"format": args.format, "threads": args.threads, "seed": args.seed,
            "zero_tol": args.zero_tol, "max_order": args.max_order_cap,
            "max_grid": args.max_grid}
    cfg = replace(cfg, **{k: v for k, v in over.items() if v is not None})
    if args.command == "fixtures" and args.format is None and not args.config:
        cfg = replace(cfg, format="table")
    return cfg.with_env()


def _apply(cfg: RunConfig) -> None:
    cyclo.ZERO_REL = cfg.zero_tol
    cyclo.MAX_ORDER = cfg.max_order
    mahler.SKIP_REL = cfg.quad_tol
    homoclinic.WORKERS = cfg.threads


def _error(kind: str, exc: Exception, **extra) -> str:
    return json.dumps({"schema": SCHEMA, "error": {"type": kind, "message": str(exc), **extra}},
                      sort_keys=True) + "\n"


def dispatch(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except (ValueError, OSError) as exc:
        stdout.write(_error("usage", exc))
        return 2
    _apply(cfg)
    try:
        result, header, rows = COMMANDS[args.command](args, cfg)
    except PolySyntaxError as exc:
        stdout.write(_error("syntax", exc, position=exc.pos))
        return 2
    except UsageError as exc:
        stdout.write(_error("usage", exc))
        return 2
    except (ValueError, ArithmeticError, MemoryError) as exc:
        stdout.write(_error(type(exc).__name__, exc))
        return 1
    if header is None:                 # fixtures: text report
        text = _json(args.command, result) if cfg.format == "json" else "\n".join(rows) + "\n"
        code = 0 if result["passed"] else 1
    else:
        text = _emit(cfg, args.command, result, header, rows)
        code = 0
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
