"""Moduli of continuity and least concave majorants on [0, 1].

All modulus values are grid suprema and therefore one-sided under-estimates of
the true sup; `modulus_slack` returns the disclosed resolution error so that
inequality checks can distinguish genuine failures from grid-marginal ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .funcs import SmoothFunction, sup_norm

__all__ = [
    "ModulusTable",
    "ConcaveMajorant",
    "modulus",
    "modulus_table",
    "least_concave_majorant",
    "omega",
    "omega_tilde",
    "modulus_slack",
]

DEFAULT_GRID = 2049
DEFAULT_H_STEPS = 512

_BINOM = {1: (1.0, -1.0), 2: (1.0, -2.0, 1.0), 3: (1.0, -3.0, 3.0, -1.0)}


def _as_callable(f):
    return f.evaluator if isinstance(f, SmoothFunction) else f


@dataclass(frozen=True)
class ModulusTable:
    """omega_p sampled on an increasing delta grid starting at (0, 0)."""

    deltas: tuple
    values: tuple
    order: int

    def __post_init__(self):
        d = np.asarray(self.deltas)
        v = np.asarray(self.values)
        if len(d) == 0 or len(d) != len(v):
            raise ValueError("empty or mismatched table")
        if d[0] != 0.0 or v[0] != 0.0:
            raise ValueError("table must start at (0, 0)")
        if np.any(np.diff(d) <= 0):
            raise ValueError("delta grid must be strictly increasing")
        if np.any(np.diff(v) < 0):
            raise ValueError("modulus values must be nondecreasing")


@dataclass(frozen=True)
class ConcaveMajorant:
    """Upper concave envelope of a modulus table, evaluated by interpolation."""

    knots_x: tuple
    knots_y: tuple

    def __call__(self, delta):
        d = np.asarray(delta, dtype=float)
        if np.any(d < 0) or np.any(d > self.knots_x[-1] * (1 + 1e-12)):
            raise ValueError("majorant queried outside its delta range")
        out = np.interp(np.clip(d, 0.0, self.knots_x[-1]), self.knots_x, self.knots_y)
        return float(out) if np.isscalar(delta) else out


def modulus(f, p: int, delta: float, grid_n: int = DEFAULT_GRID, h_steps: int = DEFAULT_H_STEPS) -> float:
    """omega_p(f; delta): sup of |Delta_h^p f(x)| over h <= delta, x + p h <= 1.

    The sup runs over `h_steps` step sizes per delta and a uniform x grid of
    `grid_n` points, so the result is a lower estimate of the true modulus.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if p not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    if delta == 0:
        return 0.0
    fn = _as_callable(f)
    xs = np.linspace(0.0, 1.0, grid_n)
    signs = _BINOM[p]
    best = 0.0
    for s in range(1, h_steps + 1):
        h = delta * s / h_steps
        if p * h > 1.0:
            break
        valid = xs <= 1.0 - p * h + 1e-15
        x = xs[valid]
        acc = np.zeros_like(x)
        for i, c in enumerate(signs):
            acc += c * fn(x + (p - i) * h)
        m = float(np.max(np.abs(acc))) if len(acc) else 0.0
        if m > best:
            best = m
    return best


@lru_cache(maxsize=256)
def modulus_table(f, p: int, grid_n: int = DEFAULT_GRID) -> ModulusTable:
    """Full omega_p table with deltas at every grid multiple L/(grid_n-1).

    Step sizes are grid lags, so each value is the running maximum of the
    p-th differences over all lags up to delta; cached per function.
    """
    fn = _as_callable(f)
    vals = fn(np.linspace(0.0, 1.0, grid_n))
    n = grid_n - 1
    lag_max = np.zeros(n + 1)
    signs = _BINOM[p]
    for L in range(1, n // p + 1):
        acc = None
        m = grid_n - p * L
        for i, c in enumerate(signs):
            seg = c * vals[(p - i) * L : (p - i) * L + m]
            acc = seg if acc is None else acc + seg
        lag_max[L] = np.max(np.abs(acc))
    values = np.maximum.accumulate(lag_max)
    deltas = np.arange(n + 1) / n
    return ModulusTable(tuple(deltas.tolist()), tuple(values.tolist()), p)


def omega(f, p: int, delta: float, grid_n: int = DEFAULT_GRID) -> float:
    """Table-backed omega_p lookup (piecewise-constant from below in delta)."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    table = modulus_table(f, p, grid_n)
    idx = int(math.floor(delta * (grid_n - 1) + 1e-12))
    idx = min(idx, len(table.values) - 1)
    return table.values[idx]


def least_concave_majorant(table: ModulusTable) -> ConcaveMajorant:
    """Upper concave envelope of {(delta_i, omega_i)} by monotone-chain hull."""
    xs = np.asarray(table.deltas)
    ys = np.asarray(table.values)
    hull_x = [xs[0]]
    hull_y = [ys[0]]
    for x, y in zip(xs[1:], ys[1:]):
        while len(hull_x) >= 2:
            cross = (hull_x[-1] - hull_x[-2]) * (y - hull_y[-2]) - (x - hull_x[-2]) * (hull_y[-1] - hull_y[-2])
            if cross >= 0:
                hull_x.pop()
                hull_y.pop()
            else:
                break
        hull_x.append(x)
        hull_y.append(y)
    return ConcaveMajorant(tuple(hull_x), tuple(hull_y))


@lru_cache(maxsize=256)
def _majorant_of(f, p: int, grid_n: int) -> ConcaveMajorant:
    return least_concave_majorant(modulus_table(f, p, grid_n))


def omega_tilde(f, delta: float, grid_n: int = DEFAULT_GRID) -> float:
    """Least concave majorant of omega_1(f; .) evaluated at delta."""
    return _majorant_of(f, 1, grid_n)(min(delta, 1.0))


def modulus_slack(f_deriv_sup: float, p: int, grid_n: int = DEFAULT_GRID) -> float:
    """Resolution error bound for a grid modulus of order p.

    If the true sup is attained at (x*, h*), the nearest grid pair is within
    dx in x and dh in h, perturbing each of the p+1 samples by at most
    ||f'|| (dx + p dh); summed against the binomial weights this gives
    ||f'|| (2^p dx + p 2^{p-1} dh).
    """
    d = 1.0 / (grid_n - 1)
    return f_deriv_sup * (2.0 ** p * d + p * 2.0 ** (p - 1) * d)
