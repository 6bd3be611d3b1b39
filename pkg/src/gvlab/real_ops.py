"""Real-variable Bernstein, Paltanea and genuine Durrmeyer operators on [0, 1].

Provides exact rational monomial images and moments (big-integer Fractions),
stable floating evaluation for arbitrary continuous functions, Gruss
functionals, Voronovskaya-type residuals, and the right-hand sides of the
first- and second-order Gruss-Voronovskaya upper bounds.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .funcs import FunctionCatalogEntry, SmoothFunction, smooth_product, sup_norm
from . import moduli

__all__ = [
    "ExactPolynomial",
    "OperatorSpec",
    "GrussReportRow",
    "QuadratureWarning",
    "bernstein_weights",
    "bernstein_eval",
    "bernstein_monomial_image",
    "bernstein_image_coeffs",
    "durrmeyer_image_coeffs",
    "paltanea_monomial_moment",
    "paltanea_eval",
    "genuine_durrmeyer_eval",
    "paltanea_second_moment",
    "paltanea_central_moment",
    "paltanea_moment_ratios",
    "paltanea_to_bernstein_gap",
    "gruss_functional",
    "voronovskaya_residual_bernstein",
    "gv_residual",
    "gv_correction_constant",
    "gv_upper_bound_c2",
    "gv_upper_bound_c2_slack",
    "gv_bracket_c1",
    "gv_bracket",
    "op_eval",
    "entry_product",
]


class QuadratureWarning(UserWarning):
    """Raised as a warning when adaptive quadrature fails its agreement gate."""


# ---------------------------------------------------------------------------
# exact rational polynomials


class ExactPolynomial:
    """Polynomial with Fraction coefficients in the monomial basis."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, ExactPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"ExactPolynomial({[str(c) for c in self.coeffs]})"

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return ExactPolynomial([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __sub__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return ExactPolynomial([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])

    def __mul__(self, other):
        if isinstance(other, ExactPolynomial):
            out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return ExactPolynomial(out)
        return ExactPolynomial([c * other for c in self.coeffs])

    __rmul__ = __mul__

    def shift(self, k: int) -> "ExactPolynomial":
        """Multiply by x^k."""
        return ExactPolynomial([Fraction(0)] * k + list(self.coeffs))

    def derivative(self) -> "ExactPolynomial":
        if len(self.coeffs) == 1:
            return ExactPolynomial([0])
        return ExactPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        acc = self.coeffs[-1] if isinstance(x, Fraction) else complex(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + (c if isinstance(x, Fraction) else complex(c))
        if isinstance(x, Fraction) or isinstance(acc, Fraction):
            return acc
        return acc.real if abs(acc.imag) == 0.0 and not isinstance(x, complex) else acc

    def float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.coeffs])

    def to_json(self):
        return [[str(c.numerator), str(c.denominator)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls([Fraction(int(num), int(den)) for num, den in data])


_X = ExactPolynomial([0, 1])
_ONE = ExactPolynomial([1])

#: exact-rational gate for the recurrence path (documented limit)
EXACT_GATE_N = 200
EXACT_GATE_K = 30

_image_cache: dict = {}


def bernstein_monomial_image(n: int, k: int) -> ExactPolynomial:
    """B_n(e_k) as an exact polynomial, via the derivative recurrence
    B_n(e_{k+1}) = x(1-x)/n * B_n(e_k)' + x * B_n(e_k)."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    images = _image_cache.setdefault(n, [_ONE])
    while len(images) <= k:
        b = images[-1]
        d = b.derivative()
        nxt = (d.shift(1) - d.shift(2)) * Fraction(1, n) + b.shift(1)
        images.append(nxt)
    return images[k]


@lru_cache(maxsize=8)
def _stirling2(kmax: int):
    """S2[k][p]: Stirling numbers of the second kind, 0 <= p <= k <= kmax."""
    S = [[0] * (kmax + 1) for _ in range(kmax + 1)]
    S[0][0] = 1
    for k in range(1, kmax + 1):
        for p in range(1, k + 1):
            S[k][p] = p * S[k - 1][p] + S[k - 1][p - 1]
    return S


@lru_cache(maxsize=8)
def _stirling1u(kmax: int):
    """c[m][j]: unsigned Stirling numbers of the first kind (rising factorial coefficients)."""
    c = [[0] * (kmax + 1) for _ in range(kmax + 1)]
    c[0][0] = 1
    for m in range(1, kmax + 1):
        for j in range(1, m + 1):
            c[m][j] = (m - 1) * c[m - 1][j] + c[m - 1][j - 1]
    return c


@lru_cache(maxsize=4096)
def bernstein_image_coeffs(n: int, m: int) -> tuple:
    """Monomial coefficients of B_n(e_m) as exact Fractions via the closed form
    coeff_p = C(n,p) p! S2(m,p) / n^m.  All coefficients are nonnegative."""
    if m == 0:
        return (Fraction(1),)
    S = _stirling2(max(m, 32))
    top = min(n, m)
    den = n ** m
    return tuple(Fraction(math.comb(n, p) * math.factorial(p) * S[m][p], den) for p in range(top + 1))


@lru_cache(maxsize=4096)
def durrmeyer_image_coeffs(n: int, m: int) -> tuple:
    """Monomial coefficients of U_n(e_m) (genuine Durrmeyer) as exact Fractions.

    The Bernstein-basis coefficient of U_n(e_m) at node k is the moment
    G_m(k) = rising(k, m)/rising(n, m); converting with forward differences,
    coeff_p = C(n,p) p! [sum_j c(m,j) S2(j,p)] / rising(n,m), all nonnegative.
    """
    if m == 0:
        return (Fraction(1),)
    kmax = max(m, 32)
    S = _stirling2(kmax)
    c1 = _stirling1u(kmax)
    rising = 1
    for i in range(m):
        rising *= n + i
    top = min(n, m)
    out = []
    for p in range(top + 1):
        s = sum(c1[m][j] * S[j][p] for j in range(p, m + 1))
        out.append(Fraction(math.comb(n, p) * math.factorial(p) * s, rising))
    return tuple(out)


# ---------------------------------------------------------------------------
# operator specs and stable Bernstein weights


@dataclass(frozen=True)
class OperatorSpec:
    """Operator family and parameters: Bernstein, Paltanea (rho), genuine Durrmeyer."""

    family: str
    n: int
    rho: Optional[Union[float, Fraction]] = None

    def __post_init__(self):
        if self.family not in ("bernstein", "paltanea", "genuine_durrmeyer"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("degree must be at least 1")
        if self.family == "paltanea":
            if self.rho is None or not (self.rho > 0):
                raise ValueError("paltanea operators need rho > 0")
        if self.family == "genuine_durrmeyer" and self.rho not in (None, 1):
            raise ValueError("genuine Durrmeyer is the rho = 1 case")

    @property
    def effective_rho(self):
        if self.family == "genuine_durrmeyer":
            return 1
        return self.rho


@dataclass(frozen=True)
class GrussReportRow:
    n: int
    x: float
    functional: float
    residual: float
    bound: float
    ratio: Optional[float]


def bernstein_weights(n: int, x: float) -> np.ndarray:
    """All n+1 basis values p_{n,k}(x), by the multiplicative recurrence.

    The x > 1/2 branch is mirrored so the running products stay well scaled;
    every weight is nonnegative and the vector sums to 1.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0:
        w = np.zeros(n + 1)
        w[0] = 1.0
        return w
    if x == 1.0:
        w = np.zeros(n + 1)
        w[n] = 1.0
        return w
    if x > 0.5:
        return bernstein_weights(n, 1.0 - x)[::-1]
    w = np.empty(n + 1)
    w[0] = (1.0 - x) ** n
    q = x / (1.0 - x)
    for k in range(n):
        w[k + 1] = w[k] * ((n - k) / (k + 1)) * q
    return w


def _eval_fn(f) -> Callable:
    if isinstance(f, FunctionCatalogEntry):
        return f.as_smooth.evaluator
    if isinstance(f, SmoothFunction):
        return f.evaluator
    return f


def bernstein_eval(f, n: int, x: float) -> float:
    """B_n(f)(x) = sum_k p_{n,k}(x) f(k/n)."""
    fn = _eval_fn(f)
    w = bernstein_weights(n, x)
    nodes = np.arange(n + 1) / n
    return float(np.dot(w, np.asarray(fn(nodes), dtype=float)))


# ---------------------------------------------------------------------------
# Paltanea operators


def _coerce_rho(rho) -> Fraction:
    if isinstance(rho, Fraction):
        return rho
    if isinstance(rho, int):
        return Fraction(rho)
    return Fraction(rho).limit_denominator(10 ** 12)


def paltanea_monomial_moment(n: int, rho, k: int, m: int) -> Fraction:
    """Exact m-th moment of the averaging density at node k:
    prod_{i<m} (k rho + i)/(n rho + i)."""
    if not 1 <= k <= n - 1:
        raise ValueError("node index must satisfy 1 <= k <= n-1")
    r = _coerce_rho(rho)
    v = Fraction(1)
    for i in range(m):
        v *= (k * r + i) / (n * r + i)
    return v


@lru_cache(maxsize=256)
def _moment_matrix(n: int, rho_f: float, mmax: int) -> np.ndarray:
    """mom[k, m] = prod_{i<m} (k rho + i)/(n rho + i) for k = 0..n (float)."""
    k = np.arange(n + 1, dtype=float)[:, None]
    i = np.arange(mmax, dtype=float)[None, :]
    factors = (k * rho_f + i) / (n * rho_f + i)
    mom = np.ones((n + 1, mmax + 1))
    mom[:, 1:] = np.cumprod(factors, axis=1)
    return mom


def _taylor_on_unit(f: FunctionCatalogEntry) -> np.ndarray:
    """Real Taylor coefficients valid on [0, 1] within the series tail_tol."""
    if f.as_series is None:
        raise ValueError(f"{f.name} has no series representation")
    return np.real(np.asarray(f.as_series.coeffs))


def _jacobi_rule_normalized(nn: int, alpha: float, beta: float):
    """Golub-Welsch nodes on [-1,1] and probability weights for (1-x)^a (1+x)^b.

    Normalizing the weights to sum 1 avoids the 2^(a+b+1) B(a+1,b+1) factor,
    which overflows for the large exponents reached at big n rho.
    """
    idx = np.arange(nn, dtype=float)
    ab = alpha + beta
    with np.errstate(invalid="ignore", divide="ignore"):
        diag = (beta ** 2 - alpha ** 2) / ((2 * idx + ab) * (2 * idx + ab + 2))
    if not np.isfinite(diag[0]):
        diag[0] = (beta - alpha) / (ab + 2)
    k = np.arange(1, nn, dtype=float)
    num = 4 * k * (k + alpha) * (k + beta) * (k + ab)
    den = (2 * k + ab) ** 2 * (2 * k + ab + 1) * (2 * k + ab - 1)
    nodes, vecs = eigh_tridiagonal(diag, np.sqrt(num / den))
    w = vecs[0, :] ** 2
    return nodes, w / w.sum()


def _beta_average_quadrature(fn, n, rho_f, k, base_nodes=24, tol=1e-11):
    """int f d(beta density at node k), adaptive node doubling."""
    alpha = (n - k) * rho_f - 1.0
    beta = k * rho_f - 1.0
    nn = base_nodes
    prev = None
    while nn <= 768:
        x, w = _jacobi_rule_normalized(nn, alpha, beta)
        val = float(np.dot(w, np.asarray(fn((1.0 + x) / 2.0), dtype=float)))
        if prev is not None and abs(val - prev) <= tol * (1.0 + abs(val)):
            return val, True
        prev = val
        nn *= 2
    return prev, False


def paltanea_eval(f, n: int, rho, x: float, method: str = "auto") -> float:
    """U_n^rho(f)(x).

    Catalog entries go through exact monomial moments applied to their Taylor
    coefficients ("moments" path); plain evaluators are averaged by
    Gauss-Jacobi quadrature matched to the node densities ("quadrature").
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    rho_f = float(rho)
    if rho_f <= 0:
        raise ValueError("rho must be positive")
    if method == "auto":
        method = "moments" if isinstance(f, FunctionCatalogEntry) and f.as_series is not None else "quadrature"
    w = bernstein_weights(n, x)
    if method == "moments":
        a = _taylor_on_unit(f)
        mom = _moment_matrix(n, rho_f, len(a) - 1)
        c = mom @ a
        return float(np.dot(w, c))
    fn = _eval_fn(f)
    c = np.empty(n + 1)
    c[0] = float(np.asarray(fn(np.array([0.0])))[0])
    c[n] = float(np.asarray(fn(np.array([1.0])))[0])
    ok = True
    for k in range(1, n):
        c[k], conv = _beta_average_quadrature(fn, n, rho_f, k)
        ok = ok and conv
    if not ok:
        warnings.warn("beta-average quadrature did not reach its agreement gate", QuadratureWarning)
    return float(np.dot(w, c))


def genuine_durrmeyer_eval(f, n: int, x: float, method: str = "direct") -> float:
    """U_n(f)(x) by the (n-1) int f p_{n-2,k-1} weights (Gauss-Legendre path).

    method="paltanea" routes through the rho = 1 code instead; the two paths
    must agree to 1e-12 on polynomials.
    """
    if method == "paltanea":
        return paltanea_eval(f, n, 1, x)
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    fn = _eval_fn(f)
    w = bernstein_weights(n, x)
    f0 = float(np.asarray(fn(np.array([0.0])))[0])
    f1 = float(np.asarray(fn(np.array([1.0])))[0])
    if n == 1:
        return float(w[0] * f0 + w[1] * f1)
    nn = max(48, n)
    prev = None
    while True:
        t, gw = np.polynomial.legendre.leggauss(nn)
        t = (t + 1.0) / 2.0
        gw = gw / 2.0
        fv = np.asarray(fn(t), dtype=float)
        ks = np.arange(1, n)
        logbin = np.array([math.lgamma(n - 1) - math.lgamma(k) - math.lgamma(n - k) for k in ks])
        # p_{n-2,k-1}(t) without overflow: exp of log-binomial plus log powers
        with np.errstate(divide="ignore"):
            logt = np.log(t)
            log1t = np.log(1.0 - t)
        P = np.exp(logbin[:, None] + (ks[:, None] - 1) * logt[None, :] + (n - 1 - ks[:, None]) * log1t[None, :])
        integrals = (n - 1) * (P * (fv * gw)[None, :]).sum(axis=1)
        val = float(w[0] * f0 + w[n] * f1 + np.dot(w[1:n], integrals))
        if prev is not None and abs(val - prev) <= 1e-12 * (1.0 + abs(val)):
            return val
        if nn >= 8 * max(48, n):
            warnings.warn("Durrmeyer Gauss-Legendre weights did not converge", QuadratureWarning)
            return val
        prev = val
        nn *= 2


def op_eval(op: OperatorSpec, f, x: float) -> float:
    """Evaluate the operator described by `op` at x."""
    if op.family == "bernstein":
        return bernstein_eval(f, op.n, x)
    if op.family == "paltanea":
        return paltanea_eval(f, op.n, op.rho, x)
    return paltanea_eval(f, op.n, 1, x)


# ---------------------------------------------------------------------------
# moments, identities, gaps


def paltanea_second_moment(n: int, rho, x):
    """U_n^rho((e_1 - x)^2)(x) = (rho+1) x(1-x) / (n rho + 1)."""
    return (rho + 1) * x * (1 - x) / (n * rho + 1)


def paltanea_central_moment(n: int, rho, r: int, x: Fraction) -> Fraction:
    """Exact central moment U_n^rho((e_1 - x)^r)(x) for rational rho and x."""
    rr = _coerce_rho(rho)
    x = Fraction(x)
    total = Fraction(0)
    for k in range(n + 1):
        if 1 <= k <= n - 1:
            mk = sum(
                Fraction(math.comb(r, j)) * (-x) ** (r - j) * paltanea_monomial_moment(n, rr, k, j)
                for j in range(r + 1)
            )
        else:
            node = Fraction(k, n)  # endpoint masses at t = 0, 1
            t = Fraction(0) if k == 0 else Fraction(1)
            mk = (t - x) ** r
        pk = Fraction(math.comb(n, k)) * x ** k * (1 - x) ** (n - k)
        total += mk * pk
    return total


def paltanea_moment_ratios(n: int, rho, x):
    """(M3^2/(M2 M4), M4/M2) for the central moments of U_n^rho, closed form."""
    rho = float(rho)
    X = x * (1.0 - x)
    Xp = 1.0 - 2.0 * x
    core = 3.0 * (rho * (rho + 1) * n - 2.0 * (rho ** 2 + 3 * rho + 3)) * X + (rho + 2) * (rho + 3)
    if core <= 0 or n * rho + 2 <= 0:
        raise AssertionError("moment-ratio denominator must stay positive on [0,1]")
    a_factor = (rho + 2) ** 2 * Xp ** 2 * (n * rho + 3) / ((n * rho + 2) * core)
    b_factor = core / ((n * rho + 2) * (n * rho + 3))
    return a_factor, b_factor


def paltanea_to_bernstein_gap(f, n: int, rho, x: float) -> float:
    """|U_n^rho(f)(x) - B_n(f)(x)|, which vanishes as rho grows."""
    return abs(paltanea_eval(f, n, rho, x) - bernstein_eval(f, n, x))


# ---------------------------------------------------------------------------
# Gruss functionals and Voronovskaya residuals


@lru_cache(maxsize=256)
def entry_product(f: FunctionCatalogEntry, g: FunctionCatalogEntry) -> FunctionCatalogEntry:
    """Catalog entry for the pointwise product f*g (series and smooth views)."""
    from .funcs import ps_cauchy_product

    ps = None
    if f.as_series is not None and g.as_series is not None:
        ps = ps_cauchy_product(f.as_series, g.as_series)
    return FunctionCatalogEntry(
        name=f"({f.name})*({g.name})",
        as_series=ps,
        as_smooth=smooth_product(f.as_smooth, g.as_smooth),
        provenance=f"product of {f.name} and {g.name}",
    )


def _as_entry_pair(f, g):
    if not isinstance(f, FunctionCatalogEntry) or not isinstance(g, FunctionCatalogEntry):
        raise TypeError("Gruss machinery expects catalog entries (use funcs.resolve)")
    return f, g, entry_product(f, g)


def gruss_functional(op: OperatorSpec, f, g, x: float) -> float:
    """T(f,g;x) = op(fg)(x) - op(f)(x) op(g)(x)."""
    f, g, fg = _as_entry_pair(f, g)
    return op_eval(op, fg, x) - op_eval(op, f, x) * op_eval(op, g, x)


def gv_correction_constant(op: OperatorSpec) -> float:
    """Coefficient c in the first-order correction c x(1-x) f'g'/n."""
    if op.family == "bernstein":
        return 1.0
    rho = float(op.effective_rho)
    return (rho + 1.0) / rho


def gv_residual(op: OperatorSpec, f, g, x: float) -> float:
    """|T(f,g;x) - c x(1-x) f'(x) g'(x) / n|."""
    f, g, _ = _as_entry_pair(f, g)
    t = gruss_functional(op, f, g, x)
    c = gv_correction_constant(op)
    fp = float(np.asarray(f.as_smooth.deriv(1)(np.array([x])))[0])
    gp = float(np.asarray(g.as_smooth.deriv(1)(np.array([x])))[0])
    return abs(t - c * x * (1.0 - x) * fp * gp / op.n)


def voronovskaya_residual_bernstein(f, n: int, x: float, grid_n: int = moduli.DEFAULT_GRID):
    """Quantitative Voronovskaya check for B_n.

    Returns (|n(B_n f - f)(x) - x(1-x) f''(x)/2|, x(1-x) omega_1(f'', sqrt(2/n))).
    """
    smooth = f.as_smooth if isinstance(f, FunctionCatalogEntry) else f
    d2 = smooth.deriv(2)
    fx = float(np.asarray(smooth(np.array([x])))[0])
    residual = abs(n * (bernstein_eval(smooth, n, x) - fx) - x * (1 - x) * float(np.asarray(d2(np.array([x])))[0]) / 2.0)
    bound = x * (1 - x) * moduli.omega(d2, 1, math.sqrt(2.0 / n), grid_n)
    return residual, bound


def _second_deriv(entry: FunctionCatalogEntry):
    return entry.as_smooth.deriv(2)


def gv_upper_bound_c2(f, g, n: int, x: float, grid_n: int = moduli.DEFAULT_GRID) -> float:
    """Second-order Gruss-Voronovskaya upper bound for Bernstein operators:

    x(1-x)/2 [ ot((fg)''; 1/(3 sqrt n)) + ||g|| ot(f''; .) + ||f|| ot(g''; .)
               + ||f''|| ||g''|| / (2n) ],  ot = least concave majorant of omega_1.
    """
    f, g, fg = _as_entry_pair(f, g)
    t = 1.0 / (3.0 * math.sqrt(n))
    term = (
        moduli.omega_tilde(_second_deriv(fg), t, grid_n)
        + sup_norm(g.as_smooth) * moduli.omega_tilde(_second_deriv(f), t, grid_n)
        + sup_norm(f.as_smooth) * moduli.omega_tilde(_second_deriv(g), t, grid_n)
        + sup_norm(f.as_smooth, 2) * sup_norm(g.as_smooth, 2) / (2.0 * n)
    )
    return x * (1.0 - x) / 2.0 * term


def gv_upper_bound_c2_slack(f, g, x: float, grid_n: int = moduli.DEFAULT_GRID) -> float:
    """Disclosed grid slack of gv_upper_bound_c2 (from the modulus resolution)."""
    f, g, fg = _as_entry_pair(f, g)
    s = (
        moduli.modulus_slack(sup_norm(fg.as_smooth, 3), 1, grid_n)
        + sup_norm(g.as_smooth) * moduli.modulus_slack(sup_norm(f.as_smooth, 3), 1, grid_n)
        + sup_norm(f.as_smooth) * moduli.modulus_slack(sup_norm(g.as_smooth, 3), 1, grid_n)
    )
    return x * (1.0 - x) / 2.0 * s


def gv_bracket(f, g, delta: float, grid_n: int = moduli.DEFAULT_GRID) -> float:
    """Shared bracket of the C^1 Gruss-Voronovskaya bounds at step parameter delta:

    w3(f')w3(g') + ||f'|| w3(g') + ||g'|| w3(f')
      + max(sqrt(delta) ||f||, w3(f')) max(sqrt(delta) ||g||, w3(g'))
    with w3(h) = omega_3(h; delta^{1/6}).
    """
    f, g, _ = _as_entry_pair(f, g)
    t = delta ** (1.0 / 6.0)
    w3f = moduli.omega(f.as_smooth.deriv(1), 3, t, grid_n)
    w3g = moduli.omega(g.as_smooth.deriv(1), 3, t, grid_n)
    nf, ng = sup_norm(f.as_smooth), sup_norm(g.as_smooth)
    nfp, ngp = sup_norm(f.as_smooth, 1), sup_norm(g.as_smooth, 1)
    root = math.sqrt(delta)
    return w3f * w3g + nfp * w3g + ngp * w3f + max(root * nf, w3f) * max(root * ng, w3g)


def gv_bracket_c1(f, g, n: int, grid_n: int = moduli.DEFAULT_GRID) -> float:
    """Bracket for the Bernstein C^1 bound (step parameter 1/n)."""
    return gv_bracket(f, g, 1.0 / n, grid_n)
