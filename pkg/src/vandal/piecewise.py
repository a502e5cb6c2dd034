"""Piecewise polynomials with exact construction of the bump autocorrelation."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

__all__ = ["PiecewisePoly", "bump_autocorrelation_coeffs", "scaled_even_pieces"]


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomial pieces on consecutive intervals, zero outside.

    ``coeffs[i]`` holds ascending-power coefficients in the global variable
    ``x`` for the interval ``[breakpoints[i], breakpoints[i+1]]``.
    """

    breakpoints: tuple
    coeffs: tuple

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly ascending with at least two entries")
        if len(self.coeffs) != bp.size - 1:
            raise ValueError("need one coefficient list per interval")

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def degree(self) -> int:
        return max(len(c) for c in self.coeffs) - 1

    def __call__(self, x):
        x_in = np.asarray(x, dtype=float)
        x = np.atleast_1d(x_in)
        out = np.zeros(x.shape)
        bp = np.asarray(self.breakpoints, dtype=float)
        idx = np.searchsorted(bp, x, side="right") - 1
        # the right end of the last interval belongs to it
        idx[x == bp[-1]] = len(self.coeffs) - 1
        for i, c in enumerate(self.coeffs):
            sel = idx == i
            if np.any(sel):
                out[sel] = P.polyval(x[sel], np.asarray(c, dtype=float))
        if x_in.ndim == 0:
            return float(out[0])
        return out

    def derivative(self, k: int = 1) -> "PiecewisePoly":
        if k < 0:
            raise ValueError("derivative order must be nonnegative")
        coeffs = tuple(
            tuple(P.polyder(np.asarray(c, dtype=float), k)) if len(c) > k else (0.0,)
            for c in self.coeffs
        )
        return PiecewisePoly(self.breakpoints, coeffs)


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


@lru_cache(maxsize=None)
def bump_autocorrelation_coeffs(r: int) -> tuple:
    """Exact coefficients of ``Q(s) = int f(t) f(s - t) dt`` on ``0 <= s <= 1``.

    Here ``f(t) = (1 - 4 t^2)^r`` on ``|t| < 1/2``.  The overlap of the two
    supports is ``[s - 1/2, 1/2]``.  Returned as ascending rational
    coefficients in ``s``; the autocorrelation is even, so ``Q(-s)`` covers
    negative arguments.
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    # bivariate polynomials as {(power of s, power of t): coefficient}
    f_t = {(0, 2 * k): Fraction(comb(r, k) * (-4) ** k) for k in range(r + 1)}
    f_shift: dict = {}
    for k in range(r + 1):
        ck = Fraction(comb(r, k) * (-4) ** k)
        for m in range(2 * k + 1):
            key = (m, 2 * k - m)
            f_shift[key] = f_shift.get(key, 0) + ck * comb(2 * k, m) * (-1) ** (2 * k - m)
    integrand = _poly_mul(f_t, f_shift)

    deg = 4 * r + 2
    q = [Fraction(0)] * (deg + 1)
    half = Fraction(1, 2)
    for (i, j), c in integrand.items():
        anti = c / (j + 1)
        # upper limit t = 1/2
        q[i] += anti * half ** (j + 1)
        # lower limit t = s - 1/2, expanded in powers of s
        for m in range(j + 2):
            q[i + m] -= anti * comb(j + 1, m) * (-half) ** (j + 1 - m)
    while len(q) > 1 and q[-1] == 0:
        q.pop()
    return tuple(q)


def scaled_even_pieces(q: Sequence[Fraction], h: float) -> PiecewisePoly:
    """Piecewise polynomial ``x -> h * Q(|x| / h)`` on ``[-h, h]``."""
    right = [float(c) * h ** (1 - k) for k, c in enumerate(q)]
    left = [c * (-1) ** k for k, c in enumerate(right)]
    return PiecewisePoly((-h, 0.0, h), (tuple(left), tuple(right)))
