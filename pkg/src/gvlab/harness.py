"""Sweep orchestration, rate fitting, inequality adjudication and reports.

Every acceptance check is a criterion function registered in CRITERIA; the
suite runs the selected ones, collects per-point report rows and one verdict
per criterion, and writes deterministic CSV/JSON artifacts (17-significant-
digit floats, stable ordering, seeded sampling).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import complex_ops, faber, funcs, moduli, real_ops

__all__ = [
    "SweepConfig",
    "RateFit",
    "Verdict",
    "fit_rate",
    "bounded_sweep_ok",
    "run_suite",
    "emit_report",
    "CRITERIA",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("criterion", "n", "x_or_r", "measured", "bound", "ratio", "status")


def _pow2_range(lo: int, hi: int) -> list:
    out = []
    n = lo
    while n <= hi:
        out.append(n)
        n *= 2
    return out


@dataclass
class SweepConfig:
    """Full parameterization of the verification suite; defaults run everything."""

    seed: int = 20260810
    x_points: int = 21
    ns_real: list = field(default_factory=lambda: _pow2_range(4, 256))
    ns_complex: list = field(default_factory=lambda: _pow2_range(8, 512))
    ns_faber: list = field(default_factory=lambda: _pow2_range(4, 128))
    ns_small: list = field(default_factory=lambda: [1, 2, 4, 8, 16, 32])
    r_values: list = field(default_factory=lambda: [1.0, 1.25, 1.5])
    r_rate: float = 1.25
    faber_level_r: float = 1.2
    modulus_grid: int = 2049
    modulus_steps: int = 512
    boundary_samples: int = 1024
    rate_drop: int = 2
    bounded_factor: float = 1.05
    rhos: list = field(default_factory=lambda: [1.0, 10.0, 100.0])
    rho_limit: float = 1000.0
    pairs_real: list = field(default_factory=lambda: [
        ["exp", "sin"], ["poly:[0,0,1]", "poly:[0,0,0,1]"], ["exp", "exp"]])
    pairs_complex: list = field(default_factory=lambda: [
        ["exp", "sin"], ["poly:[0,0,1]", "poly:[0,0,0,1]"], ["exp", "exp"], ["poly:[0,1]", "poly:[0,0,1]"]])
    pairs_faber: list = field(default_factory=lambda: [
        ["poly:[0,1]", "poly:[0,0,1]"], ["poly:[0,0,1]", "poly:[0,0,1]"]])
    functions: list = field(default_factory=lambda: [
        "exp", "sin", "cos", "poly:[0,1]", "poly:[0,0,1]", "poly:[0,0,0,1]", "geom:2"])
    faber_domains: list = field(default_factory=lambda: [
        "hypocycloid:2", "hypocycloid:3", "star:2", "lemniscate:2", "semidisk"])
    criteria: Optional[list] = None

    @classmethod
    def from_json(cls, path_or_dict) -> "SweepConfig":
        if isinstance(path_or_dict, dict):
            data = path_or_dict
        else:
            with open(path_or_dict) as fh:
                data = json.load(fh)
        cfg = cls()
        for key, val in data.items():
            if not hasattr(cfg, key):
                raise KeyError(f"unknown config key {key!r}")
            setattr(cfg, key, val)
        cfg.validate()
        return cfg

    def validate(self):
        for name in ("ns_real", "ns_complex", "ns_faber"):
            ns = getattr(self, name)
            if len(ns) < 4 or any(b <= a for a, b in zip(ns, ns[1:])):
                raise ValueError(f"{name} must be strictly increasing with at least 4 entries")
        if self.x_points < 3 or self.modulus_grid < 65 or self.boundary_samples < 64:
            raise ValueError("grids too coarse")
        if self.bounded_factor <= 1.0:
            raise ValueError("bounded_factor must exceed 1")

    def x_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.x_points)


@dataclass(frozen=True)
class RateFit:
    """Least-squares slope of log(value) against log(n)."""

    exponent: float
    log_constant: float
    residual: float
    n_range: tuple
    dropped: int
    excluded_zero: int
    identically_zero: bool = False


@dataclass
class Verdict:
    criterion: str
    status: str  # pass | fail | inconclusive
    measured: float
    bound: float
    slack: float = 0.0
    note: str = ""


def fit_rate(ns: Sequence[int], values: Sequence[float], drop_smallest: int = 0) -> RateFit:
    """Fit values ~ C n^p; zero values are excluded (and disclosed), and if all
    values vanish the fit reports the identically-zero special case."""
    ns = list(ns)
    values = list(values)
    if len(ns) != len(values) or len(ns) < 4:
        raise ValueError("need at least 4 (n, value) points")
    if drop_smallest:
        ns, values = ns[drop_smallest:], values[drop_smallest:]
    pairs = [(n, v) for n, v in zip(ns, values) if v > 0.0]
    excluded = len(ns) - len(pairs)
    if not pairs:
        return RateFit(-math.inf, -math.inf, 0.0, (min(ns), max(ns)), drop_smallest, excluded, True)
    if len(pairs) < 3:
        raise ValueError("too few nonzero values for a rate fit")
    ln = np.log([p[0] for p in pairs])
    lv = np.log([p[1] for p in pairs])
    slope, intercept = np.polyfit(ln, lv, 1)
    resid = float(np.max(np.abs(lv - (slope * ln + intercept))))
    return RateFit(float(slope), float(intercept), resid, (min(ns), max(ns)), drop_smallest, excluded)


def bounded_sweep_ok(ns: Sequence[int], values: Sequence[float], factor: float = 1.05):
    """Boundedness surrogate: max over the upper half of the n-range must not
    exceed `factor` times the max over the lower half.

    The range is halved by n value (midpoint of [min, max]), so a sequence
    that levels off passes while steady growth across the top octave fails.
    """
    ns = np.asarray(ns, dtype=float)
    vals = np.asarray(values, dtype=float)
    mid = (ns[0] + ns[-1]) / 2.0
    lower = vals[ns <= mid]
    upper = vals[ns > mid]
    lo = float(np.max(lower)) if len(lower) else 0.0
    up = float(np.max(upper)) if len(upper) else 0.0
    if lo == 0.0:
        return up == 0.0, up, lo
    return up <= factor * lo, up, lo


# ---------------------------------------------------------------------------
# report rows


def _row(criterion, n, x_or_r, measured, bound, ratio, status):
    return {
        "criterion": criterion,
        "n": n,
        "x_or_r": x_or_r,
        "measured": measured,
        "bound": bound,
        "ratio": ratio,
        "status": status,
    }


def _fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def emit_report(rows: Sequence[dict], fmt: str, path: str) -> str:
    """Write rows as CSV (fixed column order) or JSON; byte-stable per config."""
    if not rows:
        raise ValueError("refusing to emit an empty report")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    try:
        if fmt == "csv":
            lines = [",".join(CSV_COLUMNS)]
            for r in rows:
                lines.append(",".join(_fmt(r.get(c)) for c in CSV_COLUMNS))
            payload = "\n".join(lines) + "\n"
        elif fmt == "json":
            payload = json.dumps(rows, sort_keys=True, indent=2, default=_fmt) + "\n"
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        with open(path, "w") as fh:
            fh.write(payload)
    except OSError as exc:
        raise OSError(f"failed writing report to {path}: {exc}") from exc
    return payload


# ---------------------------------------------------------------------------
# criterion implementations (each returns (verdicts, rows))


def _interior(xs: np.ndarray) -> np.ndarray:
    return xs[(xs > 0.0) & (xs < 1.0)]


def crit_exact_gruss_identity(cfg: SweepConfig):
    """Closed-form identity for the Gruss-Voronovskaya functional of (e1, e2):
    B_n(e3) - B_n(e1)B_n(e2) - x(1-x) e1' e2' /n = x(1-x)(1-2x)/n^2, exactly."""
    from fractions import Fraction

    rows = []
    worst = 0.0
    exact_ok = True
    e1 = funcs.monomial(1)
    e2 = funcs.monomial(2)
    xs = np.linspace(0.0, 1.0, 11)
    for n in range(1, 51):
        lhs = (
            real_ops.bernstein_monomial_image(n, 3)
            - real_ops.bernstein_monomial_image(n, 1) * real_ops.bernstein_monomial_image(n, 2)
            - real_ops.ExactPolynomial([0, 0, Fraction(2, n), Fraction(-2, n)])
        )
        target = real_ops.ExactPolynomial([0, Fraction(1, n * n), Fraction(-3, n * n), Fraction(2, n * n)])
        if lhs != target:
            exact_ok = False
        op = real_ops.OperatorSpec("bernstein", n)
        for x in xs:
            t = real_ops.gruss_functional(op, e1, e2, x)
            gv = t - x * (1 - x) * 2 * x / n
            closed = x * (1 - x) * (1 - 2 * x) / n ** 2
            err = abs(gv - closed)
            worst = max(worst, err)
            if n in (1, 2, 10, 50):
                rows.append(_row("exact-gruss-identity", n, x, err, 1e-13, None,
                                 "pass" if err <= 1e-13 else "fail"))
    status = "pass" if exact_ok and worst <= 1e-13 else "fail"
    note = "rational-path identity exact" if exact_ok else "rational-path identity FAILED"
    return [Verdict("exact-gruss-identity", status, worst, 1e-13, note=note)], rows


def crit_monomial_images(cfg: SweepConfig):
    """B_n(e2), B_n(e3) closed forms and the second-moment identity of U_n^rho."""
    from fractions import Fraction

    rows = []
    ok = True
    for n in range(1, 65):
        e2img = real_ops.ExactPolynomial([0, Fraction(1, n), 1 - Fraction(1, n)])
        got2 = real_ops.bernstein_monomial_image(n, 2)
        x = real_ops.ExactPolynomial([0, 1])
        one = real_ops.ExactPolynomial([1])
        e3expect = (
            real_ops.ExactPolynomial([0, 0, 0, 1])
            + x * x * (one - x) * Fraction(3, n)
            + x * (one - x) * real_ops.ExactPolynomial([1, -2]) * Fraction(1, n * n)
        )
        if got2 != e2img or real_ops.bernstein_monomial_image(n, 3) != e3expect:
            ok = False
    rows.append(_row("monomial-images", 64, None, 0.0 if ok else 1.0, 0.0, None, "pass" if ok else "fail"))

    worst = 0.0
    moment_exact = True
    xs_exact = [Fraction(1, 4), Fraction(1, 3), Fraction(7, 10)]
    for rho in (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5)):
        for n in range(1, 65):
            for x in xs_exact:
                got = real_ops.paltanea_central_moment(n, rho, 2, x)
                want = (rho + 1) * x * (1 - x) / (n * rho + 1)
                if got != want:
                    moment_exact = False
        for n in (1, 2, 4, 8, 16, 32, 64):
            mom = real_ops._moment_matrix(n, float(rho), 2)
            for x in np.linspace(0.0, 1.0, 11):
                w = real_ops.bernstein_weights(n, x)
                sigma = float(np.dot(w, mom[:, 2] - 2 * x * mom[:, 1] + x * x))
                closed = float(real_ops.paltanea_second_moment(n, float(rho), x))
                err = abs(sigma - closed)
                worst = max(worst, err)
            rows.append(_row("monomial-images", n, float(rho), worst, 1e-12, None,
                             "pass" if worst <= 1e-12 else "fail"))
    status = "pass" if ok and moment_exact and worst <= 1e-12 else "fail"
    note = "image formulas exact; second moment exact on rational path"
    return [Verdict("monomial-images", status, worst, 1e-12, note=note)], rows


def crit_c2_gv_bound(cfg: SweepConfig):
    """n |T(f,g) - x(1-x) f'g'/n| against the C^2 majorant-based upper bound."""
    rows = []
    n_fail = n_inc = 0
    worst_margin = -math.inf
    for fname, gname in cfg.pairs_real:
        f, g = funcs.resolve(fname), funcs.resolve(gname)
        for n in cfg.ns_real:
            op = real_ops.OperatorSpec("bernstein", n)
            xs = cfg.x_grid()
            report_at = {len(xs) // 4, len(xs) // 2, 3 * len(xs) // 4}
            for i, x in enumerate(xs):
                lhs = n * real_ops.gv_residual(op, f, g, x)
                rhs = real_ops.gv_upper_bound_c2(f, g, n, x, cfg.modulus_grid)
                slack = real_ops.gv_upper_bound_c2_slack(f, g, x, cfg.modulus_grid)
                if lhs <= rhs:
                    status = "pass"
                elif lhs <= rhs + slack:
                    status = "inconclusive"
                    n_inc += 1
                else:
                    status = "fail"
                    n_fail += 1
                worst_margin = max(worst_margin, lhs - rhs)
                if i in report_at:
                    rows.append(_row("c2-gv-upper-bound", n, x, lhs, rhs,
                                     lhs / rhs if rhs > 0 else None, status))
    status = "fail" if n_fail else ("inconclusive" if n_inc else "pass")
    note = f"{n_fail} failures, {n_inc} inconclusive; worst lhs-rhs margin {worst_margin:.3e}"
    return [Verdict("c2-gv-upper-bound", status, worst_margin, 0.0, note=note)], rows


def crit_videnskij(cfg: SweepConfig):
    """|n(B_n f - f) - x(1-x) f''/2| <= x(1-x) omega_1(f'', sqrt(2/n))."""
    rows = []
    n_fail = n_inc = 0
    worst = -math.inf
    names = sorted({name for pair in cfg.pairs_real for name in pair})
    eps = float(np.finfo(float).eps)
    for name in names:
        f = funcs.resolve(name)
        d3 = funcs.sup_norm(f.as_smooth, 3)
        slack_unit = moduli.modulus_slack(d3, 1, cfg.modulus_grid)
        scale = 1.0 + funcs.sup_norm(f.as_smooth) + funcs.sup_norm(f.as_smooth, 2)
        for n in cfg.ns_real:
            xs = cfg.x_grid()
            # the residual multiplies B_n f - f (which is O(1/n)) by n, so plain
            # evaluation roundoff reaches ~ n eps and must not count as failure
            eval_noise = 32.0 * n * eps * scale
            for i, x in enumerate(xs):
                residual, bound = real_ops.voronovskaya_residual_bernstein(f, n, x, cfg.modulus_grid)
                slack = x * (1 - x) * slack_unit
                if residual <= bound + eval_noise:
                    status = "pass"
                elif residual <= bound + eval_noise + slack:
                    status = "inconclusive"
                    n_inc += 1
                else:
                    status = "fail"
                    n_fail += 1
                worst = max(worst, residual - bound)
                if i == len(xs) // 2:
                    rows.append(_row("voronovskaya-videnskij", n, x, residual, bound,
                                     residual / bound if bound > 0 else None, status))
    status = "fail" if n_fail else ("inconclusive" if n_inc else "pass")
    note = f"{n_fail} failures, {n_inc} inconclusive over {sorted(names)}"
    return [Verdict("voronovskaya-videnskij", status, worst, 0.0, note=note)], rows


def crit_paltanea_boundedness(cfg: SweepConfig):
    """Empirical constants of the U_n^rho Gruss-Voronovskaya bound stay bounded,
    and U_n^rho approaches B_n as rho grows."""
    rows = []
    verdicts = []
    all_ok = True
    for rho in cfg.rhos:
        factor = (rho + 1.0) / rho
        for fname, gname in cfg.pairs_real:
            f, g = funcs.resolve(fname), funcs.resolve(gname)
            ratios = []
            for n in cfg.ns_real:
                op = real_ops.OperatorSpec("paltanea", n, rho)
                delta = (rho + 1.0) / (n * rho + 1.0)
                bracket = real_ops.gv_bracket(f, g, delta, cfg.modulus_grid)
                best = 0.0
                for x in _interior(cfg.x_grid()):
                    lhs = n * real_ops.gv_residual(op, f, g, x)
                    denom = factor * x * (1 - x) * bracket
                    if denom > 0:
                        best = max(best, lhs / denom)
                ratios.append(best)
                rows.append(_row("paltanea-boundedness", n, rho, best, None, None, "sweep"))
            ok, up, lo = bounded_sweep_ok(cfg.ns_real, ratios, cfg.bounded_factor)
            all_ok = all_ok and ok
            rows.append(_row("paltanea-boundedness", cfg.ns_real[-1], rho, up, lo * cfg.bounded_factor,
                             up / lo if lo else None, "pass" if ok else "fail"))

    gap_worst = 0.0
    gap_ok = True
    for name in cfg.functions:
        f = funcs.resolve(name)
        norm = funcs.sup_norm(f.as_smooth)
        for n in cfg.ns_small:
            for x in np.linspace(0.0, 1.0, 11):
                gap = real_ops.paltanea_to_bernstein_gap(f, n, cfg.rho_limit, x)
                rel = gap / norm
                gap_worst = max(gap_worst, rel)
                if rel > 1e-2:
                    gap_ok = False
        rows.append(_row("paltanea-boundedness", cfg.ns_small[-1], cfg.rho_limit, gap_worst, 1e-2,
                         None, "pass" if gap_ok else "fail"))
    status = "pass" if all_ok and gap_ok else "fail"
    note = f"surrogate ok={all_ok}; max |U^rho - B_n|/||f|| = {gap_worst:.2e} at rho={cfg.rho_limit:g}"
    verdicts.append(Verdict("paltanea-boundedness", status, gap_worst, 1e-2, note=note))
    return verdicts, rows


def crit_complex_gruss_bounds(cfg: SweepConfig):
    """||T_n||_r below the tail-inclusive coefficient bounds, both families."""
    rows = []
    n_fail = 0
    worst = -math.inf
    for family, bound_fn in (("bernstein", complex_ops.gruss_bound_cbernstein),
                             ("durrmeyer", complex_ops.gruss_bound_cdurrmeyer)):
        for fname, gname in cfg.pairs_complex:
            f = funcs.resolve(fname).as_series
            g = funcs.resolve(gname).as_series
            for n in cfg.ns_real:
                for r in cfg.r_values:
                    norm = complex_ops.gruss_norm(family, f, g, n, r)
                    bound = bound_fn(f, g, n, r)
                    ok = norm <= bound
                    if not ok:
                        n_fail += 1
                    worst = max(worst, norm - bound)
                    rows.append(_row(f"complex-gruss-upper-{family}", n, r, norm, bound,
                                     norm / bound if bound > 0 else None, "pass" if ok else "fail"))
    status = "pass" if n_fail == 0 else "fail"
    return [Verdict("complex-gruss-upper", status, worst, 0.0,
                    note=f"{n_fail} violations across families/pairs/radii")], rows


def crit_complex_gv_rate(cfg: SweepConfig):
    """n^-2 decay of the complex Gruss-Voronovskaya residual, plus boundedness."""
    rows = []
    verdicts_ok = True
    notes = []
    pairs = [p for p in cfg.pairs_complex[:2]]
    for family in complex_ops.FAMILIES:
        for fname, gname in pairs:
            f = funcs.resolve(fname).as_series
            g = funcs.resolve(gname).as_series
            vals = [complex_ops.gv_residual_complex(family, f, g, n, cfg.r_rate) for n in cfg.ns_complex]
            fit = fit_rate(cfg.ns_complex, vals, cfg.rate_drop)
            scaled = [n * n * v for n, v in zip(cfg.ns_complex, vals)]
            ok_b, up, lo = bounded_sweep_ok(cfg.ns_complex, scaled, cfg.bounded_factor)
            ok = (fit.identically_zero or fit.exponent <= -1.8) and ok_b
            verdicts_ok = verdicts_ok and ok
            notes.append(f"{family}({fname},{gname}): slope {fit.exponent:.3f}, n^2-max {max(scaled):.3g}")
            for n, v in zip(cfg.ns_complex, vals):
                rows.append(_row(f"complex-gv-rate-{family}", n, cfg.r_rate, v, None, n * n * v, "sweep"))
            rows.append(_row(f"complex-gv-rate-{family}", cfg.ns_complex[-1], cfg.r_rate,
                             fit.exponent, -1.8, None, "pass" if ok else "fail"))
    status = "pass" if verdicts_ok else "fail"
    return [Verdict("complex-gv-rate", status, 0.0, -1.8, note="; ".join(notes))], rows


def crit_equivalence(cfg: SweepConfig):
    """Two-sided 1/n equivalence for (exp, sin); the (e1, e2) pair is reported
    with its exact-path exponent and degeneracy flag rather than adjudicated."""
    rows = []
    f = funcs.resolve("exp").as_series
    g = funcs.resolve("sin").as_series
    rep = complex_ops.equivalence_sweep("bernstein", f, g, cfg.r_rate, cfg.ns_complex)
    fit = fit_rate(rep.ns, rep.norms, cfg.rate_drop)
    ok = -1.15 <= fit.exponent <= -0.85 and rep.lower_constant_K > 0
    for n, v in zip(rep.ns, rep.norms):
        rows.append(_row("equivalence-1-over-n", n, cfg.r_rate, v, None, n * v, "sweep"))
    rows.append(_row("equivalence-1-over-n", rep.ns[-1], cfg.r_rate, fit.exponent, None,
                     rep.lower_constant_K, "pass" if ok else "fail"))

    d1 = funcs.resolve("poly:[0,1]").as_series
    d2 = funcs.resolve("poly:[0,0,1]").as_series
    degen = complex_ops.equivalence_sweep("bernstein", d1, d2, cfg.r_rate, cfg.ns_complex)
    dfit = fit_rate(degen.ns, degen.norms, cfg.rate_drop)
    rows.append(_row("equivalence-1-over-n", degen.ns[-1], cfg.r_rate, dfit.exponent, None,
                     degen.lower_constant_K, "flagged" if degen.degenerate else "reported"))
    note = (
        f"(exp,sin): exponent {fit.exponent:.4f}, K={rep.lower_constant_K:.4g}; "
        f"(e1,e2): exponent {dfit.exponent:.4f}, degenerate={degen.degenerate} "
        f"(exact T carries a z(1-z)f'g'/n term, so the pair follows the 1/n law)"
    )
    status = "pass" if ok else "fail"
    return [Verdict("equivalence-1-over-n", status, fit.exponent, -1.0, note=note)], rows


def crit_faber_basis_oracle(cfg: SweepConfig):
    """Recurrence Faber polynomials against the Fourier-Laurent oracle, p <= 20."""
    rows = []
    worst = 0.0
    ok = True
    for spec in cfg.faber_domains:
        mp = faber.conformal_map(spec)
        basis = faber.faber_basis(mp, 24)
        zs = faber._basis_oracle_points(mp)
        oracle = faber._fourier_faber_values(mp, zs, 20)
        err = 0.0
        for p in range(21):
            mine = np.polynomial.polynomial.polyval(zs, basis.poly(p))
            err = max(err, float(np.max(np.abs(mine - oracle[:, p]) / (1.0 + np.abs(oracle[:, p])))))
        worst = max(worst, err)
        ok = ok and err <= 1e-8
        rows.append(_row("faber-basis-oracle", 20, spec, err, 1e-8, None, "pass" if err <= 1e-8 else "fail"))
    disk = faber.faber_basis(faber.conformal_map("disk"), 24)
    monomial_exact = all(
        len(disk.poly(p)) == p + 1 and abs(disk.poly(p)[-1] - 1.0) <= 0 and np.all(disk.poly(p)[:-1] == 0)
        for p in range(25)
    )
    ok = ok and monomial_exact
    rows.append(_row("faber-basis-oracle", 24, "disk", 0.0 if monomial_exact else 1.0, 0.0, None,
                     "pass" if monomial_exact else "fail"))
    return [Verdict("faber-basis-oracle", "pass" if ok else "fail", worst, 1e-8,
                    note=f"max relative error {worst:.2e}; disk basis exactly monomial: {monomial_exact}")], rows


def crit_disk_reduction(cfg: SweepConfig):
    """Bernstein-Faber on the disk reproduces the complex Bernstein operator."""
    rows = []
    mp = faber.conformal_map("disk")
    rng = np.random.default_rng(cfg.seed)
    zs = np.sqrt(rng.random(100)) * np.exp(2j * np.pi * rng.random(100))
    worst = 0.0
    for name in cfg.functions:
        f = funcs.resolve(name)
        if f.as_series is None:
            continue
        for n in cfg.ns_small:
            bf = faber.bernstein_faber_eval(f, mp, n, zs)
            cb = complex_ops.cbernstein_eval(f.as_series, n, zs)
            err = float(np.max(np.abs(bf - cb)))
            worst = max(worst, err)
            if n == cfg.ns_small[-1]:
                rows.append(_row("disk-reduction", n, name, err, 1e-10, None,
                                 "pass" if err <= 1e-10 else "fail"))
    ok = worst <= 1e-10
    return [Verdict("disk-reduction", "pass" if ok else "fail", worst, 1e-10,
                    note=f"max |BF - B| over {len(zs)} seeded points: {worst:.2e}")], rows


def _faber_correction(f, g, mp, n, zs):
    af = faber.faber_coefficients(f, mp)
    ag = faber.faber_coefficients(g, mp)
    fn, gn = faber._boundary_fn(f), faber._boundary_fn(g)
    afg = faber.faber_coefficients(lambda z: fn(z) * gn(z), mp)
    kmax = max(af.order, ag.order, afg.order)
    basis = faber.faber_basis(mp, max(kmax, n))
    fz = np.asarray(fn(zs), dtype=complex)
    gz = np.asarray(gn(zs), dtype=complex)
    corr = np.zeros_like(np.asarray(zs, dtype=complex))

    def coef(c, k):
        arr = c.arr()
        return arr[k] if k < len(arr) else 0.0

    for k in range(2, kmax + 1):
        fk = np.polynomial.polynomial.polyval(zs, basis.poly(k))
        fk1 = np.polynomial.polynomial.polyval(zs, basis.poly(k - 1))
        corr += k * (k - 1) / (2.0 * n) * (fk1 - fk) * (coef(afg, k) - fz * coef(ag, k) - gz * coef(af, k))
    return corr


def crit_faber_gv(cfg: SweepConfig):
    """Theorem-style boundedness of the Faber Gruss and GV quantities, plus the
    disk cross-check of the correction term against z(1-z) f'g'/n."""
    rows = []
    ok = True
    mp = faber.conformal_map("hypocycloid:2")
    pts = faber.level_points(mp, cfg.faber_level_r, 128)
    for fname, gname in cfg.pairs_faber:
        f, g = funcs.resolve(fname), funcs.resolve(gname)
        gr = [n * faber.gruss_faber(f, g, mp, n, pts) for n in cfg.ns_faber]
        gv = [n * n * faber.gv_residual_faber(f, g, mp, n, pts) for n in cfg.ns_faber]
        ok_g, upg, log_ = bounded_sweep_ok(cfg.ns_faber, gr, cfg.bounded_factor)
        ok_v, upv, lov = bounded_sweep_ok(cfg.ns_faber, gv, cfg.bounded_factor)
        ok = ok and ok_g and ok_v
        for n, a, b in zip(cfg.ns_faber, gr, gv):
            rows.append(_row("faber-gv-boundedness", n, f"{fname}|{gname}", a, b, None, "sweep"))
        rows.append(_row("faber-gv-boundedness", cfg.ns_faber[-1], f"{fname}|{gname}", upg, upv, None,
                         "pass" if ok_g and ok_v else "fail"))

    mpd = faber.conformal_map("disk")
    zs = faber.level_points(mpd, 1.0 + 1e-9, 128)
    f = funcs.resolve("exp")
    g = funcs.resolve("sin")
    n0 = 16
    corr = _faber_correction(f, g, mpd, n0, zs)
    df = funcs.ps_derivative(f.as_series)
    dg = funcs.ps_derivative(g.as_series)
    closed = zs * (1 - zs) * funcs.ps_eval(df, zs) * funcs.ps_eval(dg, zs) / n0
    cross = float(np.max(np.abs(corr - closed)))
    ok = ok and cross <= 1e-9
    rows.append(_row("faber-gv-boundedness", n0, "disk-correction", cross, 1e-9, None,
                     "pass" if cross <= 1e-9 else "fail"))
    return [Verdict("faber-gv-boundedness", "pass" if ok else "fail", cross, 1e-9,
                    note=f"disk correction cross-check {cross:.2e}")], rows


def crit_property_suites(cfg: SweepConfig):
    """Positivity, partition of unity, linear preservation, endpoint values,
    contraction, modulus-table invariants and report determinism."""
    rows = []
    failures = []

    ops = []
    for n in (1, 2, 5, 16, 64):
        ops.append(real_ops.OperatorSpec("bernstein", n))
        ops.append(real_ops.OperatorSpec("genuine_durrmeyer", n))
        for rho in (0.5, 2.0):
            ops.append(real_ops.OperatorSpec("paltanea", n, rho))
    xs = np.linspace(0.0, 1.0, 9)
    e0 = funcs.resolve("poly:[1]")
    e1 = funcs.monomial(1)
    nonneg = [funcs.resolve("exp"), funcs.monomial(2), funcs.resolve("geom:2")]
    test_fns = [funcs.resolve("exp"), funcs.resolve("sin"), funcs.monomial(3)]
    for op in ops:
        for x in xs:
            if abs(real_ops.op_eval(op, e0, x) - 1.0) > 1e-14:
                failures.append(f"partition of unity at {op} x={x}")
            if abs(real_ops.op_eval(op, e1, x) - x) > 1e-13:
                failures.append(f"linear preservation at {op} x={x}")
            for f in nonneg:
                if real_ops.op_eval(op, f, x) < -1e-14:
                    failures.append(f"positivity at {op} {f.name} x={x}")
        for f in test_fns:
            norm = funcs.sup_norm(f.as_smooth)
            f0 = float(np.asarray(f.as_smooth(np.array([0.0])))[0])
            f1 = float(np.asarray(f.as_smooth(np.array([1.0])))[0])
            if abs(real_ops.op_eval(op, f, 0.0) - f0) > 1e-12 or abs(real_ops.op_eval(op, f, 1.0) - f1) > 1e-12:
                failures.append(f"endpoint interpolation at {op} {f.name}")
            for x in xs:
                if abs(real_ops.op_eval(op, f, x)) > norm + 1e-12:
                    failures.append(f"contraction at {op} {f.name} x={x}")
    rows.append(_row("property-suites", 64, "operators", float(len(failures)), 0.0, None,
                     "pass" if not failures else "fail"))

    # Bernstein deviation bound |f - B_n f| <= x(1-x) ||f''|| / (2n)
    for name in ("exp", "sin", "poly:[0,0,0,1]"):
        f = funcs.resolve(name)
        d2 = funcs.sup_norm(f.as_smooth, 2)
        for n in (1, 4, 16, 64):
            for x in xs:
                fx = float(np.asarray(f.as_smooth(np.array([x])))[0])
                dev = abs(fx - real_ops.bernstein_eval(f, n, x))
                if dev > x * (1 - x) * d2 / (2 * n) + 1e-13:
                    failures.append(f"deviation bound {name} n={n} x={x}")

    for name in ("exp", "sin", "poly:[0,0,1]"):
        f = funcs.resolve(name)
        for p in (1, 2, 3):
            table = moduli.modulus_table(f.as_smooth, p, cfg.modulus_grid)
            vals = np.asarray(table.values)
            if np.any(np.diff(vals) < 0):
                failures.append(f"monotonicity of omega_{p} for {name}")
            for d in (0.1, 0.3, 0.7):
                c0 = moduli.omega(f.as_smooth, p, d, cfg.modulus_grid)
                c1 = moduli.omega(f.as_smooth, p, d, 2 * cfg.modulus_grid - 1)
                if abs(c1 - c0) >= 1e-3 * (1.0 + c1):
                    failures.append(f"grid stability of omega_{p} for {name} at {d}")
        table = moduli.modulus_table(f.as_smooth, 1, cfg.modulus_grid)
        maj = moduli.least_concave_majorant(table)
        deltas = np.asarray(table.deltas)
        if maj(0.0) != 0.0:
            failures.append(f"majorant origin for {name}")
        if np.any(maj(deltas) < np.asarray(table.values) - 1e-12):
            failures.append(f"majorant domination for {name}")
        kx, ky = np.asarray(maj.knots_x), np.asarray(maj.knots_y)
        for i in range(1, len(kx) - 1):
            chord = ky[i - 1] + (ky[i + 1] - ky[i - 1]) * (kx[i] - kx[i - 1]) / (kx[i + 1] - kx[i - 1])
            if ky[i] < chord - 1e-12:
                failures.append(f"majorant concavity for {name}")
    rows.append(_row("property-suites", 0, "moduli", float(len(failures)), 0.0, None,
                     "pass" if not failures else "fail"))

    sample = [_row("determinism", 1, 0.5, 1.0 / 3.0, 2.0 / 3.0, 0.5, "pass")]
    p1 = emit_report(sample, "csv", os.path.join(_scratch_dir(), "determinism-a.csv"))
    p2 = emit_report(sample, "csv", os.path.join(_scratch_dir(), "determinism-b.csv"))
    if p1 != p2:
        failures.append("report determinism")
    rows.append(_row("property-suites", 0, "determinism", 0.0 if p1 == p2 else 1.0, 0.0, None,
                     "pass" if p1 == p2 else "fail"))

    status = "pass" if not failures else "fail"
    note = "all property families green" if not failures else "; ".join(failures[:6])
    return [Verdict("property-suites", status, float(len(failures)), 0.0, note=note)], rows


def _scratch_dir():
    path = os.path.join(os.path.expanduser("~"), ".cache", "gvlab")
    os.makedirs(path, exist_ok=True)
    return path


CRITERIA: dict = {
    "exact-gruss-identity": crit_exact_gruss_identity,
    "monomial-images": crit_monomial_images,
    "c2-gv-upper-bound": crit_c2_gv_bound,
    "voronovskaya-videnskij": crit_videnskij,
    "paltanea-boundedness": crit_paltanea_boundedness,
    "complex-gruss-upper": crit_complex_gruss_bounds,
    "complex-gv-rate": crit_complex_gv_rate,
    "equivalence-1-over-n": crit_equivalence,
    "faber-basis-oracle": crit_faber_basis_oracle,
    "disk-reduction": crit_disk_reduction,
    "faber-gv-boundedness": crit_faber_gv,
    "property-suites": crit_property_suites,
}


def run_suite(cfg: SweepConfig, out_dir: Optional[str] = None, fmt: str = "csv"):
    """Run the selected criteria; returns (verdicts, rows) and writes reports.

    A criterion that raises is recorded as a failed verdict with the error
    note; the rest of the suite still runs.
    """
    selected = cfg.criteria or list(CRITERIA)
    unknown = [c for c in selected if c not in CRITERIA]
    if unknown:
        raise KeyError(f"unknown criteria {unknown}")
    verdicts: list = []
    rows: list = []
    for cid in selected:
        try:
            v, r = CRITERIA[cid](cfg)
        except Exception as exc:  # a broken module must not sink the suite
            v = [Verdict(cid, "fail", math.nan, math.nan, note=f"error: {exc!r}")]
            r = [_row(cid, 0, None, None, None, None, "fail")]
        verdicts.extend(v)
        rows.extend(r)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        emit_report(rows, fmt, os.path.join(out_dir, f"suite-rows.{fmt}"))
        summary = suite_summary(verdicts)
        with open(os.path.join(out_dir, "suite-summary.json"), "w") as fh:
            fh.write(summary)
    return verdicts, rows


def suite_summary(verdicts: Sequence[Verdict]) -> str:
    counts = {"pass": 0, "fail": 0, "inconclusive": 0}
    crit = {}
    for v in verdicts:
        counts[v.status] = counts.get(v.status, 0) + 1
        crit[v.criterion] = {"status": v.status, "measured": _fmt(v.measured),
                             "bound": _fmt(v.bound), "note": v.note}
    return json.dumps({"counts": counts, "criteria": crit}, sort_keys=True, indent=2) + "\n"
