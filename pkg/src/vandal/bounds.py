"""Closed-form bounds on the extremal singular values and their hypotheses.

Each evaluator returns a :class:`BoundReport` holding the tested separation
quantity, its threshold, whether the hypothesis holds, and the bound.
Lower bounds on ``sigma_min`` are normalized either by ``(N-1)^{d/2}`` or by
``N^{d/2}``, following the form in which each result is stated.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .localizer import PsiParams
from .special import zeta_int

__all__ = [
    "THEOREM_IDS",
    "BoundReport",
    "trivial_bounds",
    "separated_bounds",
    "equispaced_exact",
    "ingham_threshold",
    "ingham_bound",
    "small_r_hb",
    "small_r_factor",
    "small_r_bound",
    "cluster_specialization_bound",
    "kernel_bound",
    "kernel_zeta_factor",
    "sharpness_upper",
    "all_bounds",
    "lower_bounds",
    "Table1Row",
    "table1",
    "Table2",
    "table2",
]

THEOREM_IDS = (
    "trivial",
    "separated_d1_min",
    "separated_max",
    "equispaced_exact",
    "ingham",
    "small_r",
    "cluster_specialization",
    "kernel",
    "kernel_zeta",
)


@dataclass(frozen=True)
class BoundReport:
    theorem_id: str
    applicable: bool
    condition_lhs: float
    condition_rhs: float
    bound_value: float | None
    normalized_value: float | None
    normalization: str = "N-1"
    kind: str = "sigma_min_lower"
    strict: bool = False
    params: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "applicable": self.applicable,
            "condition_lhs": self.condition_lhs,
            "condition_rhs": self.condition_rhs,
            "bound": self.bound_value,
            "normalized": self.normalized_value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def label(self) -> str:
        if self.theorem_id == "small_r":
            return f"small_r[r={self.params['r']}]"
        return self.theorem_id


def _report(theorem_id, holds, lhs, rhs, bound, norm_base, normalization, **kw) -> BoundReport:
    if holds:
        return BoundReport(theorem_id, True, float(lhs), float(rhs), float(bound),
                           float(bound / norm_base), normalization, **kw)
    return BoundReport(theorem_id, False, float(lhs), float(rhs), None, None, normalization, **kw)


def trivial_bounds(n: int, d: int) -> tuple[float, float]:
    """``(N^{d/2}, N^{d/2})``: an upper bound on sigma_min and a lower bound on sigma_max."""
    v = float(n) ** (d / 2)
    return v, v


def separated_bounds(n: int, q: float, d: int) -> tuple[BoundReport, BoundReport]:
    """Bounds under ``qN > 1``: ``sigma_min >= (N - 1/q)^{1/2}`` (d = 1 only) and
    ``sigma_max <= (N + 1/q)^{d/2}``."""
    if not 0 < q <= 0.5:
        raise ValueError("q must lie in (0, 1/2]")
    lhs = q * n
    ok = lhs > 1
    norm = float(n) ** (d / 2)
    low = _report(
        "separated_d1_min", ok and d == 1, lhs, 1.0,
        math.sqrt(n - 1 / q) if ok else None, norm, "N", strict=True,
        note="" if d == 1 else "lower bound proven for d = 1 only",
    )
    high = _report(
        "separated_max", ok, lhs, 1.0, (n + 1 / q) ** (d / 2) if ok else None, norm, "N",
        kind="sigma_max_upper", strict=True,
    )
    return low, high


def equispaced_exact(n: int, m: int, d: int) -> tuple[float, float]:
    """Exact ``(sigma_min, sigma_max)`` for the full grid ``(1/M){0..M-1}^d``.

    Per dimension the squared singular values are ``M floor(N/M)`` and
    ``M ceil(N/M)``, i.e. ``N floor(Nq)/(Nq)`` and ``N ceil(Nq)/(Nq)`` with
    ``q = 1/M``.
    """
    if n < m:
        raise PreconditionError(f"inapplicable: Nq = {n}/{m} < 1")
    lo = m * (n // m)
    hi = m * (-(-n // m))
    return float(lo) ** (d / 2), float(hi) ** (d / 2)


def ingham_threshold(d: int) -> float:
    return (8 * math.log(d) + 14) / math.pi


def ingham_bound(n: int, q: float, d: int) -> BoundReport:
    """Bound under ``q(N-1) >= (8 log d + 14)/pi`` with natural logarithm."""
    if n < 2:
        raise ValueError("N must be at least 2")
    lhs = q * (n - 1)
    rhs = ingham_threshold(d)
    factor = (math.sqrt(2) / (3 * math.e**2) / math.sqrt(math.log(d) + 1)) ** (d / 2) / math.sqrt(2)
    base = float(n - 1) ** (d / 2)
    return _report("ingham", lhs >= rhs, lhs, rhs, factor * base, base, "N-1")


_HB = {
    1: lambda d: math.sqrt(5) / (math.sqrt(2) * math.pi) * math.sqrt(d + 2),
    2: lambda d: math.sqrt(3) / math.pi * 3.5**0.25 * (d + 4) ** 0.25,
    3: lambda d: math.sqrt(3) * 143 ** (1 / 6) / (2 ** (1 / 3) * math.pi) * (d + 6) ** (1 / 6),
}

_FACTOR = {
    1: lambda d: 2 ** (1.5 * d + 1) * 5 ** (-1.5 * d) * (d + 2) ** (-d / 2 - 1) * (3 * math.pi) ** d,
    2: lambda d: 2 ** (1.25 * d + 2) * 3 ** (-d / 2) * 7 ** (-1.25 * d) * (d + 4) ** (-d / 4 - 1) * (5 * math.pi) ** d,
    3: lambda d: 2 ** (7 * d / 3 + 1) * 3 ** (1 - 1.5 * d) * 143 ** (-7 * d / 6) * (d + 6) ** (-d / 6 - 1) * (175 * math.pi) ** d,
}


def _check_small_r(r: int) -> None:
    if r not in _HB:
        raise ValueError("small_r bounds exist for r in {1, 2, 3}; use localizer.ratio_closed_form otherwise")


def small_r_hb(r: int, d: int) -> float:
    """Optimal product ``h * b`` for order ``r``."""
    _check_small_r(r)
    return _HB[r](d)


def small_r_factor(r: int, d: int) -> float:
    """``b^{-d} psi(0) / psi_hat(0)`` at the optimal ``h * b``."""
    _check_small_r(r)
    return _FACTOR[r](d)


def small_r_bound(n: int, q: float, d: int, r: int) -> BoundReport:
    """Bound for ``r in {1, 2, 3}`` with ``b = (N-1)/2`` and the optimal ``h``.

    The hypothesis ``q(N-1) >= 2 h b`` makes the node set ``h``-separated.
    """
    _check_small_r(r)
    if n < 2:
        raise ValueError("N must be at least 2")
    lhs = q * (n - 1)
    rhs = 2 * small_r_hb(r, d)
    b = (n - 1) / 2
    bound = math.sqrt(small_r_factor(r, d)) * b ** (d / 2)
    base = float(n - 1) ** (d / 2)
    return _report("small_r", lhs >= rhs, lhs, rhs, bound, base, "N-1", params={"r": r})


def small_r_psi_params(n: int, d: int, r: int) -> PsiParams:
    """Localizer parameters behind :func:`small_r_bound`."""
    b = (n - 1) / 2
    return PsiParams(d, r, b, small_r_hb(r, d) / b)


def cluster_specialization_bound(n: int, q: float, d: int, m: int) -> BoundReport:
    """``sigma_min >= N^{d/2} / (3 d^{d/4})`` under ``qN > 6d`` and ``N > max(M, 2(d+2)^2)``."""
    lhs = q * n
    rhs = 6 * d
    holds = lhs > rhs and n > max(m, 2 * (d + 2) ** 2)
    base = float(n) ** (d / 2)
    note = "" if n > max(m, 2 * (d + 2) ** 2) else f"needs N > max(M, {2 * (d + 2) ** 2})"
    return _report("cluster_specialization", holds, lhs, rhs, base / (3 * d ** (d / 4)), base, "N",
                   strict=True, params={"M": m}, note=note)


def kernel_zeta_factor(d: int) -> float:
    """``(1 - 2 zeta(d+1) (2 pi)^{-d-1})^d (1 - 2^{-d-1})``, a lower bound on ``sigma_min^2 / N^d``."""
    return (1 - 2 * zeta_int(d + 1) * (2 * math.pi) ** (-d - 1)) ** d * (1 - 2.0 ** (-d - 1))


def kernel_bound(n: int, q: float, d: int) -> tuple[BoundReport, BoundReport]:
    """Headline ``sigma_min > 0.9 N^{d/2}`` and the zeta-based intermediate bound.

    Hypotheses: ``d >= 2``, ``N`` even and ``qN > 4d``.  Both constants are
    contradicted by equispaced grids whose ``Nq`` sits just below an integer
    (for example ``d = 2, N = 98, M = 11`` gives ``sigma_min = 0.898 N``);
    they are reported as stated, not repaired.
    """
    lhs = q * n
    rhs = 4 * d
    holds = d >= 2 and n % 2 == 0 and lhs > rhs
    note = []
    if d < 2:
        note.append("needs d >= 2")
    if n % 2:
        note.append("needs N even")
    base = float(n) ** (d / 2)
    headline = _report("kernel", holds, lhs, rhs, 0.9 * base, base, "N", strict=True, note="; ".join(note))
    zeta_val = math.sqrt(kernel_zeta_factor(d)) * base if holds else None
    sharper = _report("kernel_zeta", holds, lhs, rhs, zeta_val, base, "N", strict=True, note="; ".join(note))
    return headline, sharper


def _floor_ceil_nq(n: int, q: float) -> tuple[float, int, int]:
    nq = n * q
    near = round(nq)
    # q = 1/M is rarely exact in binary; snap products within rounding of an integer
    if abs(nq - near) <= 1e-12 * max(1.0, nq):
        return float(near), near, near
    return nq, math.floor(nq), math.ceil(nq)


def sharpness_upper(n: int, q: float, d: int) -> float:
    """``N^{d/2} (floor(Nq)/(Nq))^{d/2}``: equispaced ``sigma_min`` at separation ``q``.

    No lower bound valid for all node sets with separation ``q`` can exceed
    this value when ``q = 1/M``.
    """
    nq, fl, _ = _floor_ceil_nq(n, q)
    if nq < 1:
        raise PreconditionError(f"inapplicable: Nq = {nq} < 1")
    return float(n) ** (d / 2) * (fl / nq) ** (d / 2)


def lower_bounds(n: int, q: float, d: int, m: int) -> list[BoundReport]:
    """Every lower bound on ``sigma_min`` evaluated at ``(N, q, d, M)``."""
    low, _ = separated_bounds(n, q, d)
    out = [low, ingham_bound(n, q, d)]
    out += [small_r_bound(n, q, d, r) for r in (1, 2, 3)]
    out.append(cluster_specialization_bound(n, q, d, m))
    out += list(kernel_bound(n, q, d))
    return out


def all_bounds(n: int, q: float, d: int, m: int) -> list[BoundReport]:
    """Lower bounds plus the ``sigma_max`` upper bound."""
    _, high = separated_bounds(n, q, d)
    return lower_bounds(n, q, d, m) + [high]


# ---------------------------------------------------------------- tables


@dataclass(frozen=True)
class Table1Row:
    label: str
    condition_form: str
    threshold: float
    normalized_bound: float | None
    quoted_threshold: str
    quoted_bound: str
    evaluable: bool
    note: str = ""


def table1(d: int) -> list[Table1Row]:
    """Rows of the dimension-dependence comparison for a given ``d``.

    Evaluable rows carry the exact threshold and normalized bound; rows for
    results from other work carry only their quoted constants.
    """
    n_big = 10**6
    rows = [
        Table1Row(
            "kernel", "qN", 4.0 * d, 0.9 if d >= 2 else None, "4d", "0.9", d >= 2,
            "stated as qN > 4d although the column reads q(N-1); requires d >= 2 and N even",
        ),
        Table1Row(
            "cluster_specialization", "qN", 6.0 * d, 1 / (3 * d ** (d / 4)), "6d", "(1/3) d^(-d/4)", True,
            "normalized by N^(d/2); requires N > max(M, 2(d+2)^2)",
        ),
        Table1Row("prior_sqrt_d", "q(N-1)", math.sqrt(d), None, "sqrt(d)", "is positive", False,
                  "quoted constant from prior work"),
        Table1Row(
            "small_r[r=1]", "q(N-1)", 2 * small_r_hb(1, d), math.sqrt(small_r_factor(1, d) / 2**d),
            "1.01 sqrt(d+2)", "(1/2) d^(-d/4)", True,
        ),
        Table1Row("prior_log_d", "q(N-1)", 3 + 2 * math.log(d), None, "3+2 log d", "is positive", False,
                  "quoted constant from prior work"),
        Table1Row(
            "ingham", "q(N-1)", ingham_threshold(d), ingham_bound(n_big, 0.5, d).normalized_value,
            "4.5+2.6 log d", "5.6^(-d) (1+log d)^(-d/4)", True,
        ),
    ]
    return rows


@dataclass(frozen=True)
class Table2:
    """Separation constants and normalized bounds for ``r, d in {1, 2, 3}``.

    ``conditions`` are rounded up and ``bounds`` rounded down to three
    decimals, the conservative direction for each.
    """

    conditions_raw: np.ndarray
    bounds_raw: np.ndarray
    conditions: np.ndarray
    bounds: np.ndarray


def _round_up(x: float, digits: int = 3) -> float:
    s = 10**digits
    return math.ceil(x * s - 1e-9) / s


def _round_down(x: float, digits: int = 3) -> float:
    s = 10**digits
    return math.floor(x * s + 1e-9) / s


def table2(n: int = 1025) -> Table2:
    cond = np.empty((3, 3))
    bnd = np.empty((3, 3))
    for i, r in enumerate((1, 2, 3)):
        for j, d in enumerate((1, 2, 3)):
            rep = small_r_bound(n, 0.5, d, r)
            cond[i, j] = rep.condition_rhs
            bnd[i, j] = rep.normalized_value
    return Table2(
        cond,
        bnd,
        np.vectorize(_round_up)(cond),
        np.vectorize(_round_down)(bnd),
    )
