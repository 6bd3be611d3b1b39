"""Command-line interface: `gvlab <subcommand>`.

Subcommands cover the real and complex Gruss-Voronovskaya sweeps, the complex
Gruss bounds, Faber bases and sweeps, and the full acceptance suite. Exit
code is 0 exactly when no check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import complex_ops, faber, funcs, harness, real_ops


def _parse_ns(text):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _common(parser):
    parser.add_argument("--out", default=None, help="output directory for report files")
    parser.add_argument("--format", default="csv", choices=("csv", "json"), dest="fmt")
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--n", default=None, help="comma-separated degree sweep, e.g. 4,8,16")
    parser.add_argument("--seed", type=int, default=None, help="seed for sampled points")
    parser.add_argument("--modulus-grid", type=int, default=None)
    parser.add_argument("--modulus-steps", type=int, default=None)


def _load_config(args) -> harness.SweepConfig:
    cfg = harness.SweepConfig.from_json(args.config) if args.config else harness.SweepConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    if getattr(args, "modulus_grid", None):
        cfg.modulus_grid = args.modulus_grid
    if getattr(args, "modulus_steps", None):
        cfg.modulus_steps = args.modulus_steps
    return cfg


def _emit(rows, args, default_name):
    if not rows:
        print("no rows produced", file=sys.stderr)
        return
    if args.out:
        path = os.path.join(args.out, f"{default_name}.{args.fmt}")
        harness.emit_report(rows, args.fmt, path)
        print(f"wrote {path}")
    else:
        if args.fmt == "csv":
            print(",".join(harness.CSV_COLUMNS))
            for r in rows:
                print(",".join(harness._fmt(r.get(c)) for c in harness.CSV_COLUMNS))
        else:
            print(json.dumps(rows, sort_keys=True, indent=2, default=harness._fmt))


def _status_of(rows):
    return 0 if all(r.get("status") != "fail" for r in rows) else 1


def cmd_real_gv(args):
    cfg = _load_config(args)
    f, g = funcs.resolve(args.f), funcs.resolve(args.g)
    ns = _parse_ns(args.n) if args.n else cfg.ns_real
    rows = []
    for n in ns:
        op = real_ops.OperatorSpec("bernstein", n)
        for x in cfg.x_grid():
            lhs = n * real_ops.gv_residual(op, f, g, x)
            rhs = real_ops.gv_upper_bound_c2(f, g, n, x, cfg.modulus_grid)
            status = "pass" if lhs <= rhs else "fail"
            ratio = lhs / rhs if rhs > 0 else None
            rows.append(harness._row("real-gv", n, x, lhs, rhs, ratio, status))
    _emit(rows, args, "real-gv")
    return _status_of(rows)


def cmd_paltanea_gv(args):
    cfg = _load_config(args)
    f, g = funcs.resolve(args.f), funcs.resolve(args.g)
    rho = args.rho
    ns = _parse_ns(args.n) if args.n else cfg.ns_real
    rows = []
    for n in ns:
        op = real_ops.OperatorSpec("paltanea", n, rho)
        delta = (rho + 1.0) / (n * rho + 1.0)
        bracket = real_ops.gv_bracket(f, g, delta, cfg.modulus_grid)
        for x in cfg.x_grid():
            lhs = n * real_ops.gv_residual(op, f, g, x)
            denom = (rho + 1.0) / rho * x * (1.0 - x) * bracket
            ratio = lhs / denom if denom > 0 else None
            rows.append(harness._row("paltanea-gv", n, x, lhs, denom, ratio, "sweep"))
    _emit(rows, args, "paltanea-gv")
    return 0


def cmd_complex_gruss(args):
    cfg = _load_config(args)
    f = funcs.resolve(args.f).as_series
    g = funcs.resolve(args.g).as_series
    ns = _parse_ns(args.n) if args.n else harness._pow2_range(4, 256)
    rows = []
    for n in ns:
        norm = complex_ops.gruss_norm("bernstein", f, g, n, args.r)
        bound = complex_ops.gruss_bound_cbernstein(f, g, n, args.r)
        rows.append(harness._row("complex-gruss", n, args.r, norm, bound,
                                 norm / bound if bound else None, "pass" if norm <= bound else "fail"))
    _emit(rows, args, "complex-gruss")
    return _status_of(rows)


def cmd_durrmeyer_gruss(args):
    cfg = _load_config(args)
    f = funcs.resolve(args.f).as_series
    g = funcs.resolve(args.g).as_series
    ns = _parse_ns(args.n) if args.n else harness._pow2_range(4, 256)
    rows = []
    for n in ns:
        norm = complex_ops.gruss_norm("durrmeyer", f, g, n, args.r)
        bound = complex_ops.gruss_bound_cdurrmeyer(f, g, n, args.r)
        rows.append(harness._row("durrmeyer-gruss", n, args.r, norm, bound,
                                 norm / bound if bound else None, "pass" if norm <= bound else "fail"))
    _emit(rows, args, "durrmeyer-gruss")
    return _status_of(rows)


def cmd_complex_gv(args):
    cfg = _load_config(args)
    f = funcs.resolve(args.f).as_series
    g = funcs.resolve(args.g).as_series
    ns = _parse_ns(args.n) if args.n else cfg.ns_complex
    family = args.family
    rows = []
    vals = []
    for n in ns:
        v = complex_ops.gv_residual_complex(family, f, g, n, args.r)
        vals.append(v)
        rows.append(harness._row(f"complex-gv-{family}", n, args.r, v, None, n * n * v, "sweep"))
    fit = harness.fit_rate(ns, vals, cfg.rate_drop)
    rows.append(harness._row(f"complex-gv-{family}", ns[-1], args.r, fit.exponent, -1.8, None,
                             "pass" if fit.identically_zero or fit.exponent <= -1.8 else "fail"))
    _emit(rows, args, "complex-gv")
    return _status_of(rows)


def cmd_faber_basis(args):
    mp = faber.conformal_map(args.domain)
    basis = faber.faber_basis(mp, args.order)
    payload = {
        "domain": mp.name,
        "capacity": mp.capacity,
        "laurent": [float(b) for b in mp.laurent[: args.order + 1]],
        "polynomials": [[_c(v) for v in basis.poly(p).tolist()] for p in range(args.order + 1)],
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"faber-basis-{mp.name.replace(':', '-')}.json")
        with open(path, "w") as fh:
            fh.write(text)
        print(f"wrote {path}")
    else:
        print(text, end="")
    return 0


def _c(v):
    if isinstance(v, complex):
        return [v.real, v.imag] if v.imag else v.real
    return v


def cmd_faber_gv(args):
    cfg = _load_config(args)
    f, g = funcs.resolve(args.f), funcs.resolve(args.g)
    mp = faber.conformal_map(args.domain)
    pts = faber.level_points(mp, args.r, 128)
    ns = _parse_ns(args.n) if args.n else cfg.ns_faber
    rows = []
    for n in ns:
        gr = faber.gruss_faber(f, g, mp, n, pts)
        gv = faber.gv_residual_faber(f, g, mp, n, pts)
        rows.append(harness._row("faber-gv", n, args.domain, n * gr, n * n * gv, None, "sweep"))
    _emit(rows, args, "faber-gv")
    return 0


def cmd_suite(args):
    cfg = _load_config(args)
    out = args.out or "reports"
    verdicts, rows = harness.run_suite(cfg, out_dir=out, fmt=args.fmt)
    failed = 0
    for v in verdicts:
        print(f"[{v.status.upper():>12}] {v.criterion}: {v.note}")
        if v.status == "fail":
            failed += 1
    print(harness.suite_summary(verdicts), end="")
    print(f"reports in {out}/")
    return 1 if failed else 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="gvlab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("real-gv", help="Bernstein Gruss-Voronovskaya sweep on [0,1]")
    _common(p)
    p.add_argument("--f", default="exp")
    p.add_argument("--g", default="sin")
    p.set_defaults(fn=cmd_real_gv)

    p = sub.add_parser("paltanea-gv", help="Paltanea operator sweep with empirical constants")
    _common(p)
    p.add_argument("--f", default="exp")
    p.add_argument("--g", default="sin")
    p.add_argument("--rho", type=float, default=1.0)
    p.set_defaults(fn=cmd_paltanea_gv)

    p = sub.add_parser("complex-gruss", help="complex Bernstein Gruss norms vs coefficient bound")
    _common(p)
    p.add_argument("--f", default="exp")
    p.add_argument("--g", default="sin")
    p.add_argument("--r", type=float, default=1.25)
    p.set_defaults(fn=cmd_complex_gruss)

    p = sub.add_parser("durrmeyer-gruss", help="complex Durrmeyer Gruss norms vs coefficient bound")
    _common(p)
    p.add_argument("--f", default="exp")
    p.add_argument("--g", default="sin")
    p.add_argument("--r", type=float, default=1.25)
    p.set_defaults(fn=cmd_durrmeyer_gruss)

    p = sub.add_parser("complex-gv", help="complex Gruss-Voronovskaya residual rate")
    _common(p)
    p.add_argument("--f", default="exp")
    p.add_argument("--g", default="sin")
    p.add_argument("--r", type=float, default=1.25)
    p.add_argument("--family", default="bernstein", choices=complex_ops.FAMILIES)
    p.set_defaults(fn=cmd_complex_gv)

    p = sub.add_parser("faber-basis", help="emit Faber polynomial coefficients as JSON")
    p.add_argument("--domain", default="hypocycloid:2",
                   help="disk | hypocycloid:m | star:m | lemniscate:m | semidisk")
    p.add_argument("--order", type=int, default=12)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_faber_basis)

    p = sub.add_parser("faber-gv", help="Bernstein-Faber Gruss/GV sweep on a domain")
    _common(p)
    p.add_argument("--f", default="poly:[0,1]")
    p.add_argument("--g", default="poly:[0,0,1]")
    p.add_argument("--domain", default="hypocycloid:2")
    p.add_argument("--r", type=float, default=1.2)
    p.set_defaults(fn=cmd_faber_gv)

    p = sub.add_parser("suite", help="run the full verification suite")
    _common(p)
    p.set_defaults(fn=cmd_suite)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
