"""Compactly supported localizing function and its Fourier transform.

The bump ``phi(x) = (1 - (2x/h)^2)^r`` on ``|x| < h/2`` has autocorrelation
``g = phi * phi`` supported on ``[-h, h]``.  With ``p = 2r`` the localizer is

    psi(x) = (2 pi b)^p prod_l g(x_l) - (-1)^r sum_s g^{(p)}(x_s) prod_{l != s} g(x_l)

whose Fourier transform is

    psi_hat(v) = ((2 pi b)^p - sum_s (2 pi v_s)^p) prod_l phi_hat(v_l)^2.

``psi_hat`` is nonnegative on the l^p ball of radius ``b`` and nonpositive
outside it, while ``psi`` vanishes for ``|x_s| >= h``.  Combined with Poisson
summation this yields ``sigma_min(A)^2 >= psi(0) / psi_hat(0)`` for
``h``-separated nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import PreconditionError
from .piecewise import PiecewisePoly, bump_autocorrelation_coeffs, scaled_even_pieces
from .special import gamma_half
from .vandermonde import VandermondeSpec, dirichlet

__all__ = [
    "PsiParams",
    "REGIMES",
    "phi",
    "phi_autocorrelation",
    "phi_hat",
    "psi_eval",
    "psi_hat",
    "psi_at_zero",
    "psi_hat_at_zero",
    "ratio_closed_form",
    "ratio_lower_bounds",
    "positivity_threshold",
    "h_for_regime",
    "r_for_log_d",
    "bracket_exact",
    "bracket_simplified",
    "PoissonDiagnostic",
    "poisson_check",
]

REGIMES = ("general", "h_of_p", "log_d")
MAX_R = 20


@dataclass(frozen=True)
class PsiParams:
    dim: int
    r: int
    b: float
    h: float

    def __post_init__(self):
        if self.dim < 1 or int(self.dim) != self.dim:
            raise ValueError("dim must be a positive integer")
        if self.r < 1 or int(self.r) != self.r or self.r > MAX_R:
            raise ValueError(f"r must be an integer in [1, {MAX_R}]")
        if not (self.b > 0 and self.h > 0):
            raise ValueError("b and h must be positive")

    @property
    def p(self) -> int:
        return 2 * self.r

    @property
    def positive(self) -> bool:
        """True when ``h`` reaches the threshold guaranteeing ``psi(0) > 0``.

        A relative slack of 1e-12 lets ``h`` computed from the threshold itself count.
        """
        return self.h >= positivity_threshold(self.dim, self.r, self.b) * (1 - 1e-12)


def positivity_threshold(d: int, r: int, b: float) -> float:
    """``C_p d^{1/p} / b`` with ``C_p = (2p + 3) / (e pi)``."""
    p = 2 * r
    return (2 * p + 3) / (math.e * math.pi) * d ** (1.0 / p) / b


def r_for_log_d(d: int) -> int:
    """``ceil(log d)`` with the natural log, but at least 1 (``log 1 = 0`` is not a valid order)."""
    return max(1, math.ceil(math.log(d)))


def h_for_regime(d: int, r: int, b: float, regime: str) -> float:
    """The support half-width prescribed by a regime (not defined for ``general``)."""
    if regime == "h_of_p":
        return positivity_threshold(d, r, b)
    if regime == "log_d":
        return positivity_threshold(d, r_for_log_d(d), b)
    raise ValueError(f"regime {regime!r} does not prescribe h")


# ---------------------------------------------------------------- bump


def phi(x, r: int, h: float):
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < h / 2
    out = np.where(inside, 1.0 - (2.0 * x / h) ** 2, 0.0) ** r
    out = np.where(inside, out, 0.0)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=256)
def phi_autocorrelation(r: int, h: float) -> PiecewisePoly:
    """Exact ``phi * phi`` as a piecewise polynomial of degree ``4r + 1`` on ``[-h, h]``."""
    return scaled_even_pieces(bump_autocorrelation_coeffs(r), h)


@lru_cache(maxsize=None)
def _bump_derivs_at_one(r: int) -> tuple:
    # derivatives of R(u) = (1 - u^2)^r at u = 1, orders 0..2r
    coeffs = np.zeros(2 * r + 1)
    for k in range(r + 1):
        coeffs[2 * k] = comb(r, k) * (-1) ** k
    out = []
    c = coeffs
    for _ in range(2 * r + 1):
        out.append(float(np.polynomial.polynomial.polyval(1.0, c)))
        c = np.polynomial.polynomial.polyder(c) if c.size > 1 else np.zeros(1)
    return tuple(out)


def _moment(r: int, m: int) -> float:
    # int_{-1}^{1} (1 - u^2)^r u^{2m} du = r! / prod_{j=0}^{r} (m + j + 1/2)
    den = 1.0
    for j in range(r + 1):
        den *= m + j + 0.5
    return factorial(r) / den


def phi_hat(v, r: int, h: float):
    """Fourier transform ``int phi(x) exp(-2 pi i v x) dx`` (real, even).

    For ``|v| h < 1`` a Taylor series with exact beta moments is summed;
    otherwise repeated integration by parts gives a finite closed form in
    ``1 / v`` with no cancellation.
    """
    v_in = np.asarray(v, dtype=float)
    v = np.abs(np.atleast_1d(v_in))
    a = h / 2.0
    kappa = 2.0 * np.pi * v * a
    out = np.empty(v.shape)

    small = v * h < 1.0
    if np.any(small):
        ks = kappa[small] ** 2
        total = np.zeros(ks.shape)
        term_scale = np.ones(ks.shape)
        m = 0
        while True:
            term = term_scale * _moment(r, m)
            total += (-1) ** m * term
            if np.all(term < 1e-17 * _moment(r, 0)) and m > 0:
                break
            m += 1
            term_scale = term_scale * ks / ((2 * m - 1) * (2 * m))
        out[small] = a * total

    big = ~small
    if np.any(big):
        kb = kappa[big]
        derivs = _bump_derivs_at_one(r)
        acc = np.zeros(kb.shape, dtype=complex)
        e_minus = np.exp(-1j * kb)
        e_plus = np.conj(e_minus)
        for k in range(r, 2 * r + 1):
            dk = derivs[k]
            if dk == 0.0:
                continue
            acc -= dk * (e_minus - (-1) ** k * e_plus) / (1j * kb) ** (k + 1)
        out[big] = a * acc.real

    if v_in.ndim == 0:
        return float(out[0])
    return out


def phi_hat_envelope(v, r: int, h: float):
    """Upper bound on ``|phi_hat(v)|`` valid for ``|v| h >= 1``."""
    v = np.abs(np.asarray(v, dtype=float))
    a = h / 2.0
    kappa = 2.0 * np.pi * v * a
    derivs = _bump_derivs_at_one(r)
    total = sum(2.0 * abs(derivs[k]) / kappa ** (k + 1) for k in range(r, 2 * r + 1))
    return a * total


# ---------------------------------------------------------------- psi


def psi_eval(x, params: PsiParams):
    """Evaluate the localizer at points ``x`` of shape ``(..., d)``."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != params.dim:
        raise ValueError(f"last axis must have length {params.dim}")
    g = phi_autocorrelation(params.r, params.h)
    gp = g.derivative(params.p)
    gx = g(x)
    gpx = gp(x)
    base = (2 * np.pi * params.b) ** params.p * np.prod(gx, axis=-1)
    corr = np.zeros(x.shape[:-1])
    for s in range(params.dim):
        others = np.prod(np.delete(gx, s, axis=-1), axis=-1)
        corr = corr + gpx[..., s] * others
    out = base - (-1) ** params.r * corr
    out = np.where(np.any(np.abs(x) >= params.h, axis=-1), 0.0, out)
    return float(out) if out.ndim == 0 else out


def psi_hat(v, params: PsiParams):
    """Fourier transform of the localizer at frequencies ``v`` of shape ``(..., d)``."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != params.dim:
        raise ValueError(f"last axis must have length {params.dim}")
    p = params.p
    radial = (2 * np.pi * params.b) ** p - np.sum((2 * np.pi * v) ** p, axis=-1)
    out = radial * np.prod(phi_hat(v, params.r, params.h) ** 2, axis=-1)
    return float(out) if out.ndim == 0 else out


def _g_at_zero(r: int, h: float) -> float:
    # phi*phi(0) = h sqrt(pi) (2r)! / (2 Gamma(2r + 3/2))
    return h * math.sqrt(math.pi) * factorial(2 * r) / (2 * gamma_half(2 * r + 1))


def _phi_hat_at_zero(r: int, h: float) -> float:
    return h * math.sqrt(math.pi) * factorial(r) / (2 * gamma_half(r + 1))


def psi_at_zero(params: PsiParams) -> float:
    """Closed form of ``psi(0)``."""
    d, r, b, h = params.dim, params.r, params.b, params.h
    g0 = _g_at_zero(r, h)
    second = d * 4 ** (2 * r) * factorial(r) ** 2 / ((2 * r + 1) * h ** (2 * r - 1))
    return g0**d * (2 * math.pi * b) ** (2 * r) - g0 ** (d - 1) * second


def psi_hat_at_zero(params: PsiParams) -> float:
    """Closed form of ``psi_hat(0)``, the maximum of ``psi_hat``."""
    return (2 * math.pi * params.b) ** params.p * _phi_hat_at_zero(params.r, params.h) ** (2 * params.dim)


def ratio_closed_form(params: PsiParams) -> float:
    """Exact ``psi(0) / psi_hat(0)`` written as a first factor times a bracket.

    The value may be nonpositive when ``h`` is below the positivity
    threshold; check ``params.positive``.
    """
    d, r, h = params.dim, params.r, params.h
    g32 = gamma_half(r + 1)
    g2r32 = gamma_half(2 * r + 1)
    first = 2 * factorial(2 * r) * g32**2 / (g2r32 * h * math.sqrt(math.pi) * factorial(r) ** 2)
    try:
        scale = first**d
    except OverflowError:
        scale = math.inf
    return scale * bracket_exact(params)


def bracket_exact(params: PsiParams) -> float:
    """The bracket ``1 - d 2^{2r+1} Gamma(2r+3/2) (r!)^2 / ((2r)! h^{2r} sqrt(pi) (2r+1) pi^{2r} b^{2r})``."""
    d, r, b, h = params.dim, params.r, params.b, params.h
    num = d * 2 ** (2 * r + 1) * gamma_half(2 * r + 1) * factorial(r) ** 2
    den = factorial(2 * r) * (h * b * math.pi) ** (2 * r) * math.sqrt(math.pi) * (2 * r + 1)
    return 1.0 - num / den


def bracket_simplified(r: int, d: int = 1, hb: float | None = None) -> float:
    """Stirling-simplified bracket ``1 - d (2 e^2 / sqrt(pi)) sqrt(r) (2r / (pi e h b))^{2r}``.

    Without ``hb`` the regime choice ``h b = (4r + 3) d^{1/(2r)} / (e pi)`` is
    used, which makes the value independent of ``d``.
    """
    if hb is None:
        hb = (4 * r + 3) / (math.e * math.pi) * d ** (1.0 / (2 * r))
    return 1.0 - d * 2 * math.e**2 / math.sqrt(math.pi) * math.sqrt(r) * (2 * r / (math.pi * math.e * hb)) ** (2 * r)


def ratio_lower_bounds(params: PsiParams, regime: str = "general") -> float:
    """Simplified lower bounds on ``psi(0) / psi_hat(0)``.

    ``general``
        any parameters.
    ``h_of_p``
        requires ``h`` equal to :func:`positivity_threshold`.
    ``log_d``
        additionally requires ``r = max(1, ceil(log d))``.
    """
    d, r, b, h = params.dim, params.r, params.b, params.h
    if regime == "general":
        return (math.sqrt(2 / math.pi) * math.sqrt(r) / h) ** d * bracket_simplified(r, d, h * b)
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    target = positivity_threshold(d, r, b)
    if abs(h - target) > 1e-12 * target:
        raise PreconditionError(f"regime {regime} needs h = {target!r}, got {h!r}")
    if regime == "h_of_p":
        p = 2 * r
        return 0.5 * (4.0 / 3.0 * b / (math.sqrt(p) * d ** (1.0 / p))) ** d
    if r != r_for_log_d(d):
        raise PreconditionError(f"regime log_d needs r = {r_for_log_d(d)}, got {r}")
    return 0.5 * (4.0 / (3.0 * math.sqrt(2) * math.e**2) * b / math.sqrt(math.log(d) + 1)) ** d


# ---------------------------------------------------------------- Poisson summation


@dataclass(frozen=True)
class PoissonDiagnostic:
    lhs: float
    mid: float
    rhs: float
    sandwich: float
    truncation: int
    tail_estimate: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _one_dim_tail(params: PsiParams, t: int) -> tuple[float, float, float, float]:
    """Sums of ``phi_hat^2`` and ``(2 pi nu)^p phi_hat^2`` over Z and over ``|nu| <= t``.

    The full sums are over-estimated: terms up to ``k = max(t, ceil(1/h))``
    are summed directly and the rest is bounded by integrating the envelope
    ``E(k) (k / nu)^{r+1}``.
    """
    r, h, p = params.r, params.h, params.p
    k = max(t, math.ceil(1.0 / h))
    nu = np.arange(-k, k + 1, dtype=float)
    a = phi_hat(nu, r, h) ** 2
    c = (2 * np.pi * nu) ** p * a
    inner = np.abs(nu) <= t
    env2 = float(phi_hat_envelope(k, r, h)) ** 2
    tail_a = 2 * env2 * k / (2 * r + 1)
    tail_c = 2 * (2 * np.pi) ** p * env2 * k ** (p + 1)
    return float(a.sum()) + tail_a, float(a[inner].sum()), float(c.sum()) + tail_c, float(c[inner].sum())


def _tail_bound(params: PsiParams, t: int) -> float:
    s, s_in, sp, sp_in = _one_dim_tail(params, t)
    d = params.dim
    radial = (2 * np.pi * params.b) ** params.p * (s**d - s_in**d)
    deriv = d * (sp * s ** (d - 1) - sp_in * s_in ** (d - 1))
    return radial + deriv


def _auto_truncation(params: PsiParams, budget: int) -> int:
    target = 1e-8 * psi_hat_at_zero(params)
    t = 4
    while (2 * (2 * t) + 1) ** params.dim <= budget:
        if _tail_bound(params, t) < target:
            return t
        t *= 2
    return t


def poisson_check(
    spec: VandermondeSpec,
    params: PsiParams,
    u,
    truncation: int | None = None,
    budget: int = 1 << 22,
) -> PoissonDiagnostic:
    """Evaluate both sides of the Poisson-summation identity for the localizer.

    ``lhs`` sums ``psi_hat(nu) |sum_j u_j exp(2 pi i nu . t_j)|^2`` over the
    box ``|nu|_inf <= truncation``; ``mid`` is the double sum of periodized
    ``psi`` over node differences; ``rhs`` is ``psi(0) |u|^2``; ``sandwich``
    is ``psi_hat(0) |A~^* u|^2`` for the centered Vandermonde matrix.
    ``tail_estimate`` bounds the neglected part of ``lhs`` (up to a factor
    ``|u|_1^2``).

    Raises
    ------
    PreconditionError
        If ``h > 1/2`` or the node set is not ``h``-separated.
    """
    ns = spec.node_set
    d = ns.dim
    if params.dim != d:
        raise ValueError("parameter and node dimensions differ")
    if params.h > 0.5 + 1e-12:
        raise PreconditionError("h must not exceed 1/2")
    if len(ns) >= 2 and ns.separation < params.h:
        raise PreconditionError(
            f"node set is not h-separated: q = {ns.separation:.6g} < h = {params.h:.6g}"
        )
    u = np.asarray(u, dtype=complex).reshape(-1)
    if u.size != len(ns):
        raise ValueError("u must have one entry per node")
    t_nodes = ns.nodes

    t = _auto_truncation(params, budget) if truncation is None else int(truncation)
    nu = np.arange(-t, t + 1, dtype=float)
    # per-axis exponentials, then contract over nodes with u
    waves = [np.exp(2j * np.pi * np.outer(t_nodes[:, s], nu)) for s in range(d)]
    letters = "abcdefghijklmnop"[:d]
    expr = "j," + ",".join(f"j{c}" for c in letters) + "->" + letters
    trig = np.einsum(expr, u, *waves)
    ph2 = phi_hat(nu, params.r, params.h) ** 2
    pw = (2 * np.pi * nu) ** params.p
    radial = np.full([1] * d, (2 * np.pi * params.b) ** params.p)
    prod = np.ones([1] * d)
    for s in range(d):
        shape = [1] * d
        shape[s] = nu.size
        radial = radial - pw.reshape(shape)
        prod = prod * ph2.reshape(shape)
    lhs = float(np.sum(radial * prod * np.abs(trig) ** 2))

    shifts = np.array(np.meshgrid(*([[-1.0, 0.0, 1.0]] * d), indexing="ij")).reshape(d, -1).T
    diff = t_nodes[:, None, None, :] - t_nodes[None, :, None, :] + shifts[None, None, :, :]
    periodized = psi_eval(diff, params).sum(axis=-1)
    mid = float(np.real(u @ periodized @ np.conj(u)))

    norm2 = float(np.vdot(u, u).real)
    rhs = psi_at_zero(params) * norm2

    n = spec.degree
    shift = math.ceil((n - 1) / 2)
    delta = t_nodes[:, None, :] - t_nodes[None, :, :]
    kern = dirichlet(n, delta) * np.exp(-2j * np.pi * shift * delta)
    gram_c = np.prod(kern, axis=-1)
    sandwich = psi_hat_at_zero(params) * float(np.real(np.conj(u) @ gram_c @ u))

    return PoissonDiagnostic(lhs, mid, rhs, sandwich, t, _tail_bound(params, t) * float(np.sum(np.abs(u))) ** 2)
