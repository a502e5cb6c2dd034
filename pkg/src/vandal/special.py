"""Exact half-integer Gamma values and Riemann zeta at integer arguments."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = ["gamma_half", "gamma_half_ratio", "zeta_int", "MAX_HALF_INT"]

#: Largest n accepted by :func:`gamma_half`; covers r <= 20 in every formula.
MAX_HALF_INT = 4 * 20 + 3


def gamma_half_ratio(n: int) -> Fraction:
    """Rational part of ``Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)``."""
    if n < 0 or n > MAX_HALF_INT:
        raise ValueError(f"gamma_half argument n={n} outside [0, {MAX_HALF_INT}]")
    return Fraction(math.factorial(2 * n), 4**n * math.factorial(n))


def gamma_half(n: int) -> float:
    """``Gamma(n + 1/2)`` for integer ``n >= 0``."""
    return float(gamma_half_ratio(n)) * math.sqrt(math.pi)


@lru_cache(maxsize=None)
def zeta_int(s: int, tol: float = 1e-15) -> float:
    """Riemann zeta at an integer ``s >= 3`` by direct summation.

    The number of terms K is chosen so that the neglected tail, bounded by
    ``K**(1-s) / (s-1)``, stays below ``tol``.  Terms are added smallest first.
    """
    # at s = 2 the tail decays like 1/K and would need ~1/tol terms
    if int(s) != s or s < 3:
        raise ValueError("zeta_int needs an integer s >= 3")
    k_max = int(math.ceil((tol * (s - 1)) ** (-1.0 / (s - 1)))) + 1
    total = 0.0
    chunk = 1 << 20
    for stop in range(k_max, 0, -chunk):
        start = max(stop - chunk, 0)
        k = np.arange(stop, start, -1, dtype=float)
        total += float(np.sum(k ** (-float(s))))
    return total
