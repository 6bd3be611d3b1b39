"""Function representations used throughout the lab.

Analytic functions live here as truncated power series around 0 (with an
explicit convergence radius and a certified truncation tolerance), real test
functions as evaluator bundles carrying closed-form derivatives up to order 4.
Both views of the same catalog function must agree on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

__all__ = [
    "PowerSeries",
    "SmoothFunction",
    "FunctionCatalogEntry",
    "ps_eval",
    "ps_cauchy_product",
    "ps_abs_convolution",
    "ps_derivative",
    "resolve",
    "monomial",
    "catalog_names",
]

#: truncation target used when auto-selecting the cut-off degree
TAIL_TARGET = 1e-12

#: hard cap on stored series length
MAX_TERMS = 257


def _geometric_tail_bound(abs_coeffs: np.ndarray, r: float, radius: float) -> float:
    """Upper estimate of sum_{m>M} |a_m| r^m from the trailing coefficient ratio.

    The per-step ratio is estimated from the last two nonzero coefficients and
    never taken below r/radius (the asymptotically correct value for a series
    with convergence radius `radius`).
    """
    if r <= 0:
        return 0.0
    nz = np.nonzero(abs_coeffs > 0)[0]
    if len(nz) == 0:
        return 0.0
    top = len(abs_coeffs) - 1
    i2 = int(nz[-1])
    if len(nz) >= 2:
        i1 = int(nz[-2])
        step = (abs_coeffs[i2] / abs_coeffs[i1]) ** (1.0 / (i2 - i1))
        q = r * step
    else:
        q = 0.0
    if math.isfinite(radius):
        q = max(q, r / radius)
    if q == 0.0:
        return 0.0
    if q >= 1.0:
        return math.inf
    return float(abs_coeffs[i2] * r ** i2 * q ** (top - i2 + 1) / (1.0 - q))


@dataclass(frozen=True)
class PowerSeries:
    """Truncated Taylor coefficients a_0..a_M of a function analytic on |z| < radius.

    ``tail_tol`` bounds sum_{m>M} |a_m| r^m for every r up to ``work_radius``
    (checked at construction through the geometric tail estimate). A value of
    0.0 declares the series exact, i.e. a polynomial.
    """

    coeffs: tuple
    radius: float
    tail_tol: float
    work_radius: float
    _arr: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("empty coefficient list")
        if len(self.coeffs) > MAX_TERMS:
            raise ValueError(f"series longer than {MAX_TERMS} terms")
        if not (self.radius > 1.0):
            raise ValueError("convergence radius must exceed 1")
        if not (0.0 < self.work_radius < self.radius):
            raise ValueError("work_radius must satisfy 0 < work_radius < radius")
        if self.tail_tol < 0.0:
            raise ValueError("tail_tol must be nonnegative")
        arr = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "_arr", arr)
        if self.tail_tol > 0.0:
            est = _geometric_tail_bound(np.abs(arr), self.work_radius, self.radius)
            if not est <= self.tail_tol:
                raise ValueError(
                    f"declared tail_tol {self.tail_tol:g} not supported by the "
                    f"geometric tail estimate {est:g} at r={self.work_radius:g}"
                )

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def tail_bound(self, r: float) -> float:
        """Geometric estimate of the truncation error at radius r < radius."""
        if r > self.work_radius and self.tail_tol > 0.0:
            return _geometric_tail_bound(np.abs(self._arr), r, self.radius)
        if self.tail_tol == 0.0:
            return 0.0
        return min(self.tail_tol, _geometric_tail_bound(np.abs(self._arr), r, self.radius))

    def coeff_norm(self, r: float) -> float:
        """sum |a_m| r^m over the stored coefficients."""
        return float(np.polynomial.polynomial.polyval(r, np.abs(self._arr)))

    def is_constant(self, tol: float = 1e-13) -> bool:
        if self.degree == 0:
            return True
        scale = 1.0 + abs(self.coeffs[0])
        return bool(np.all(np.abs(self._arr[1:]) * self.work_radius ** np.arange(1, len(self.coeffs)) <= tol * scale))


def series(coeffs, radius=math.inf, tail_tol=None, work_radius=None) -> PowerSeries:
    """Build a PowerSeries, auto-computing tail_tol from the geometric estimate."""
    arr = np.asarray(coeffs, dtype=complex)
    if work_radius is None:
        work_radius = 4.0 if math.isinf(radius) else (1.0 + radius) / 2.0
    if tail_tol is None:
        tail_tol = _geometric_tail_bound(np.abs(arr), work_radius, radius)
    return PowerSeries(tuple(arr.tolist()), float(radius), float(tail_tol), float(work_radius))


def ps_eval(ps: PowerSeries, z):
    """Evaluate the series at z (scalar or array) by Horner's rule.

    Points with |z| >= radius are rejected; the result carries absolute error
    at most tail_tol for |z| <= work_radius.
    """
    zz = np.asarray(z, dtype=complex)
    if np.any(np.abs(zz) >= ps.radius):
        raise ValueError(f"|z| must stay below the convergence radius {ps.radius:g}")
    out = np.polynomial.polynomial.polyval(zz, ps._arr)
    if np.isscalar(z) or zz.ndim == 0:
        return complex(out)
    return out


def ps_cauchy_product(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Coefficient convolution c_m = sum_j a_j b_{m-j} with propagated tolerances."""
    coeffs = np.convolve(a._arr, b._arr)
    radius = min(a.radius, b.radius)
    wr = min(a.work_radius, b.work_radius)
    # sub-multiplicative error budget
    tol = a.tail_tol * b.coeff_norm(wr) + b.tail_tol * a.coeff_norm(wr) + a.tail_tol * b.tail_tol
    return PowerSeries(tuple(coeffs.tolist()), radius, float(tol), wr)


def ps_abs_convolution(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """A_m = sum_j |a_j| |b_{m-j}|, the all-positive majorant of the Cauchy product."""
    coeffs = np.convolve(np.abs(a._arr), np.abs(b._arr))
    radius = min(a.radius, b.radius)
    wr = min(a.work_radius, b.work_radius)
    tol = a.tail_tol * b.coeff_norm(wr) + b.tail_tol * a.coeff_norm(wr) + a.tail_tol * b.tail_tol
    return PowerSeries(tuple(coeffs.astype(complex).tolist()), radius, float(tol), wr)


def ps_derivative(ps: PowerSeries) -> PowerSeries:
    """Termwise derivative; radius is preserved, the tail bound is re-estimated."""
    if ps.degree < 1:
        return PowerSeries((0j,), ps.radius, 0.0 if ps.tail_tol == 0.0 else ps.tail_tol, ps.work_radius)
    coeffs = ps._arr[1:] * np.arange(1, len(ps.coeffs))
    tol = 0.0
    if ps.tail_tol > 0.0:
        tol = _geometric_tail_bound(np.abs(coeffs), ps.work_radius, ps.radius)
    return PowerSeries(tuple(coeffs.tolist()), ps.radius, float(tol), ps.work_radius)


# ---------------------------------------------------------------------------
# real C^k evaluator bundles


@dataclass(frozen=True)
class SmoothFunction:
    """Evaluator on [0,1] with closed-form derivatives.

    derivs[j-1] is the j-th derivative, present for all j <= min(smoothness, 4).
    All callables must accept numpy arrays.
    """

    evaluator: Callable
    derivs: tuple
    smoothness: int
    name: str = ""

    def __post_init__(self):
        need = min(self.smoothness, 4)
        if len(self.derivs) < need:
            raise ValueError(f"need derivatives up to order {need}")
        self._check_first_derivative()

    def _check_first_derivative(self):
        if not self.derivs:
            return
        x = np.linspace(0.05, 0.9, 18)
        h = 1e-6
        fd = (self.evaluator(x + h) - self.evaluator(x)) / h
        d1 = self.derivs[0](x)
        scale = 1.0 + np.max(np.abs(d1))
        if np.max(np.abs(fd - d1)) > 1e-3 * scale:
            raise ValueError(f"first derivative of {self.name or 'function'} fails the finite-difference check")

    def __call__(self, x):
        return self.evaluator(x)

    def deriv(self, j: int) -> Callable:
        """The j-th derivative evaluator (j=0 returns the function itself)."""
        if j == 0:
            return self.evaluator
        if j > len(self.derivs):
            raise ValueError(f"derivative of order {j} not available for {self.name or 'function'}")
        return self.derivs[j - 1]


@lru_cache(maxsize=512)
def sup_norm(fn: Callable, order: int = 0, grid: int = 4097) -> float:
    """Sup norm on [0,1] of a SmoothFunction derivative (or plain callable).

    Grid maximum on `grid` points plus one Richardson refinement; the refined
    step both sharpens the estimate and flags non-convergence.
    """
    f = fn.deriv(order) if isinstance(fn, SmoothFunction) else fn
    m1 = float(np.max(np.abs(f(np.linspace(0.0, 1.0, grid)))))
    m2 = float(np.max(np.abs(f(np.linspace(0.0, 1.0, 2 * grid - 1)))))
    return m2 + max(m2 - m1, 0.0) / 3.0


def smooth_product(f: SmoothFunction, g: SmoothFunction) -> SmoothFunction:
    """Pointwise product with Leibniz-rule derivatives up to shared order."""
    order = min(len(f.derivs), len(g.derivs))
    fd = [f.evaluator] + list(f.derivs)
    gd = [g.evaluator] + list(g.derivs)

    def make(j):
        terms = [(math.comb(j, i), fd[i], gd[j - i]) for i in range(j + 1)]

        def d(x, _terms=terms):
            return sum(c * a(x) * b(x) for c, a, b in _terms)

        return d

    return SmoothFunction(
        evaluator=make(0),
        derivs=tuple(make(j) for j in range(1, order + 1)),
        smoothness=min(f.smoothness, g.smoothness),
        name=f"({f.name})*({g.name})",
    )


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class FunctionCatalogEntry:
    """Named test function with both representations where applicable."""

    name: str
    as_series: Optional[PowerSeries]
    as_smooth: SmoothFunction
    provenance: str

    def __call__(self, x):
        return self.as_smooth(x)


def _poly_derivs(coeffs):
    P = np.polynomial.polynomial
    c = np.asarray(coeffs, dtype=float)
    out = []
    for _ in range(4):
        c = P.polyder(c) if len(c) > 1 else np.zeros(1)
        out.append(lambda x, cc=c.copy(): P.polyval(np.asarray(x, dtype=float), cc))
    return tuple(out)


def _poly_entry(coeffs) -> FunctionCatalogEntry:
    cs = [Fraction(c) if not isinstance(c, Fraction) else c for c in coeffs]
    fl = np.array([float(c) for c in cs])
    P = np.polynomial.polynomial
    name = "poly:[" + ",".join(_fmt_frac(c) for c in cs) + "]"
    smooth = SmoothFunction(
        evaluator=lambda x: P.polyval(np.asarray(x, dtype=float), fl),
        derivs=_poly_derivs(fl),
        smoothness=99,
        name=name,
    )
    ps = series(fl.astype(complex), radius=math.inf, tail_tol=0.0, work_radius=8.0)
    return FunctionCatalogEntry(name, ps, smooth, f"polynomial with coefficients {[str(c) for c in cs]}")


def _fmt_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _entire_entry(name, fn, deriv_cycle, coeff_fn, provenance) -> FunctionCatalogEntry:
    coeffs = [coeff_fn(k) for k in range(31)]
    ps = series(np.array(coeffs, dtype=complex), radius=math.inf, work_radius=4.0)
    smooth = SmoothFunction(evaluator=fn, derivs=deriv_cycle, smoothness=99, name=name)
    return FunctionCatalogEntry(name, ps, smooth, provenance)


def _geom_entry(a: float) -> FunctionCatalogEntry:
    """1/(a - z) for a > 1: coefficients a^{-(k+1)}, radius a."""
    if a <= 1.0:
        raise ValueError("geom parameter must exceed 1")
    name = f"geom:{a:g}"
    wr = (1.0 + a) / 2.0
    q = wr / a
    m = max(4, min(MAX_TERMS - 1, int(math.ceil(math.log(TAIL_TARGET * a * (1 - q)) / math.log(q)))))
    coeffs = np.array([a ** -(k + 1) for k in range(m + 1)], dtype=complex)
    ps = series(coeffs, radius=a, work_radius=wr)

    def d(j):
        return lambda x: math.factorial(j) / (a - np.asarray(x, dtype=float)) ** (j + 1)

    smooth = SmoothFunction(
        evaluator=lambda x: 1.0 / (a - np.asarray(x, dtype=float)),
        derivs=tuple(d(j) for j in range(1, 5)),
        smoothness=99,
        name=name,
    )
    return FunctionCatalogEntry(name, ps, smooth, f"1/({a:g} - z)")


def _build_static_catalog():
    entries = {}
    entries["exp"] = _entire_entry(
        "exp", np.exp, (np.exp, np.exp, np.exp, np.exp),
        lambda k: 1.0 / math.factorial(k), "exponential function",
    )
    entries["sin"] = _entire_entry(
        "sin", np.sin, (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin),
        lambda k: 0.0 if k % 2 == 0 else (-1.0) ** ((k - 1) // 2) / math.factorial(k), "sine",
    )
    entries["cos"] = _entire_entry(
        "cos", np.cos, (lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin, np.cos),
        lambda k: 0.0 if k % 2 == 1 else (-1.0) ** (k // 2) / math.factorial(k), "cosine",
    )
    return entries


_STATIC = _build_static_catalog()
_DYNAMIC: dict = {}


def monomial(k: int) -> FunctionCatalogEntry:
    """e_k(x) = x^k as a catalog entry."""
    return resolve("poly:[" + ",".join(["0"] * k + ["1"]) + "]")


def resolve(name: str) -> FunctionCatalogEntry:
    """Look up a catalog function by its config-file name.

    Accepted forms: "exp", "sin", "cos", "poly:[c0,c1,...]", "geom:a" with a > 1.
    """
    name = name.strip()
    if name in _STATIC:
        return _STATIC[name]
    if name in _DYNAMIC:
        return _DYNAMIC[name]
    if name.startswith("poly:"):
        body = name[5:].strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"malformed polynomial spec {name!r}")
        parts = [p for p in body[1:-1].split(",") if p.strip()]
        coeffs = [Fraction(p.strip()) for p in parts] or [Fraction(0)]
        entry = _poly_entry(coeffs)
        _DYNAMIC[name] = entry
        _DYNAMIC[entry.name] = entry
        return entry
    if name.startswith("geom:"):
        entry = _geom_entry(float(name[5:]))
        _DYNAMIC[name] = entry
        return entry
    raise KeyError(f"unknown catalog function {name!r}")


def catalog_names():
    return sorted(_STATIC)
