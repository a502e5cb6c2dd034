"""Randomized verification suites: spectra, localizer identities, bound soundness.

Every check records a *margin*, positive when the property holds with room to
spare.  A suite passes when no margin is negative.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bd
from . import localizer as lz
from .errors import FeasibilityError
from .torus import NodeSet, gen_equispaced, gen_grid_subset, gen_quasi_grid, gen_random_separated
from .vandermonde import VandermondeSpec, spectrum

__all__ = [
    "Violation",
    "SuiteReport",
    "SOUNDNESS_THEOREMS",
    "sample_soundness_instance",
    "soundness_sweep",
    "dual_path_check",
    "equispaced_check",
    "quasi_grid_check",
    "psi_closed_form_check",
    "psi_sign_check",
    "poisson_suite",
    "ratio_chain_check",
    "run_suite",
    "SUITES",
]

SOUNDNESS_THEOREMS = (
    "separated_d1_min",
    "ingham",
    "small_r1",
    "small_r2",
    "small_r3",
    "cluster_specialization",
    "kernel",
)

REL_SLACK = 1e-9


@dataclass
class Violation:
    check: str
    margin: float
    detail: dict


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    violations: list = field(default_factory=list)
    worst_margin: float = math.inf
    elapsed: float = 0.0

    def record(self, check: str, margin: float, **detail) -> None:
        self.checks += 1
        self.worst_margin = min(self.worst_margin, margin)
        if not margin >= 0:
            self.violations.append(Violation(check, margin, detail))

    def merge(self, other: "SuiteReport") -> None:
        self.checks += other.checks
        self.violations += other.violations
        self.worst_margin = min(self.worst_margin, other.worst_margin)
        self.elapsed += other.elapsed

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> dict:
        return {
            "suite": self.name,
            "checks": self.checks,
            "violations": len(self.violations),
            "worst_margin": self.worst_margin,
            "elapsed_s": round(self.elapsed, 3),
        }


def _timed(name: str):
    def wrap(fn):
        def inner(*args, **kwargs):
            start = time.perf_counter()
            report = fn(*args, **kwargs)
            report.elapsed = time.perf_counter() - start
            return report

        inner.__name__ = fn.__name__
        inner.__doc__ = fn.__doc__
        return inner

    return wrap


# ---------------------------------------------------------------- spectral


@_timed("dual_path")
def dual_path_check(instances: int = 100, seed: int = 0, tol: float = 1e-8) -> SuiteReport:
    """Gram-path versus explicit SVD on random instances with d <= 3, N <= 8, M <= 20."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("dual_path")
    done = 0
    while done < instances:
        d = int(rng.integers(1, 4))
        n = int(rng.integers(1, 9))
        m = int(rng.integers(1, 21))
        q = float(rng.uniform(0.02, 0.5)) * (0.5 / m) ** (1 / d) / 0.5
        q = min(q, 0.5)
        try:
            ns = gen_random_separated(m, d, q, int(rng.integers(2**31)))
        except FeasibilityError:
            continue
        spec = VandermondeSpec(ns, n)
        g = spectrum(spec)
        e = spectrum(spec, path="explicit")
        scale = g.sigma_max
        err_max = abs(g.sigma_max - e.sigma_max) / scale
        err_min = abs(g.sigma_min - e.sigma_min) / e.sigma_min if e.sigma_min > 0 else g.sigma_min
        rep.record("dual_path", tol - max(err_max, err_min), d=d, n=n, nodes=ns.to_dict())
        done += 1
    return rep


@_timed("equispaced")
def equispaced_check(max_m: int = 6, max_n: int = 12, max_d: int = 3, tol: float = 1e-10) -> SuiteReport:
    """Spectra of full grids against the floor/ceil closed forms."""
    rep = SuiteReport("equispaced")
    for d in range(1, max_d + 1):
        for m in range(1, max_m + 1):
            ns = gen_equispaced(m, d)
            for n in range(m, max_n + 1):
                res = spectrum(VandermondeSpec(ns, n))
                lo, hi = bd.equispaced_exact(n, m, d)
                err = max(abs(res.sigma_min - lo) / lo, abs(res.sigma_max - hi) / hi)
                rep.record("equispaced", tol - err, m=m, n=n, d=d)
    return rep


@_timed("quasi_grid")
def quasi_grid_check(instances: int = 20, seed: int = 0, tol: float = 1e-10) -> SuiteReport:
    """Quasi-grid and grid-subset layouts must be perfectly conditioned."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("quasi_grid")
    for i in range(instances):
        d = int(rng.integers(2, 4))
        n = int(rng.integers(2, 17))
        if i % 2 == 0:
            ns = gen_quasi_grid(n, d, int(rng.integers(2**31)), m=int(rng.integers(1, n + 1)))
        else:
            ns = gen_grid_subset(n, d, int(rng.integers(1, min(n**d, 40) + 1)), int(rng.integers(2**31)))
        res = spectrum(VandermondeSpec(ns, n))
        rep.record("cond_one", tol - (res.cond - 1.0), d=d, n=n, nodes=ns.to_dict())
    return rep


@_timed("spectral_invariants")
def spectral_invariants_check(instances: int = 50, seed: int = 0) -> SuiteReport:
    """Trivial bounds and the well-separated bounds on random instances."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("spectral_invariants")
    done = 0
    while done < instances:
        d = int(rng.integers(1, 4))
        m = int(rng.integers(2, 13))
        q_cap = min(0.5, (0.5 / m) ** (1 / d))
        q = float(rng.uniform(0.3, 1.0)) * q_cap
        try:
            ns = gen_random_separated(m, d, q, int(rng.integers(2**31)))
        except FeasibilityError:
            continue
        qs = ns.separation
        n = int(rng.integers(1, 65))
        res = spectrum(VandermondeSpec(ns, n))
        mid = float(n) ** (d / 2)
        rep.record("trivial", min(mid * (1 + 1e-10) - res.sigma_min, res.sigma_max - mid * (1 - 1e-10)) / mid,
                   d=d, n=n, nodes=ns.to_dict())
        if qs * n > 1:
            upper = (n + 1 / qs) ** (d / 2)
            rep.record("sigma_max_upper", (upper * (1 + 1e-10) - res.sigma_max) / upper, d=d, n=n, nodes=ns.to_dict())
            if d == 1:
                lower = math.sqrt(n - 1 / qs)
                rep.record("sigma_min_lower_d1", (res.sigma_min - lower * (1 - 1e-10)) / mid, n=n, nodes=ns.to_dict())
        done += 1
    return rep


# ---------------------------------------------------------------- localizer


def psi_param_grid(b: float = 10.0) -> list[lz.PsiParams]:
    """``r in {1,2,3}``, ``d in {1..4}``, with ``h`` from both prescribed regimes."""
    out = []
    for r in (1, 2, 3):
        for d in (1, 2, 3, 4):
            for regime in ("h_of_p", "log_d"):
                out.append(lz.PsiParams(d, r, b, lz.h_for_regime(d, r, b, regime)))
    return out


@_timed("psi_closed_form")
def psi_closed_form_check(tol: float = 1e-9) -> SuiteReport:
    """Closed forms at zero against the piecewise-polynomial and quadrature paths."""
    from scipy.integrate import quad

    rep = SuiteReport("psi_closed_form")
    for params in psi_param_grid():
        zero = np.zeros(params.dim)
        direct = lz.psi_eval(zero, params)
        closed = lz.psi_at_zero(params)
        rep.record("psi0", tol - abs(direct - closed) / abs(closed), params=params.__dict__)
        integral, _ = quad(lambda x: lz.phi(x, params.r, params.h), -params.h / 2, params.h / 2,
                           epsabs=0, epsrel=1e-13)
        hat0 = (2 * np.pi * params.b) ** params.p * integral ** (2 * params.dim)
        closed_hat = lz.psi_hat_at_zero(params)
        rep.record("psi_hat0", tol - abs(hat0 - closed_hat) / closed_hat, params=params.__dict__)
        ratio = lz.ratio_closed_form(params)
        rep.record("ratio", 1e-12 - abs(ratio - closed / closed_hat) / abs(ratio), params=params.__dict__)
    return rep


def _lp_sphere(rng, n: int, d: int, p: int) -> np.ndarray:
    v = rng.normal(size=(n, d))
    return v / np.sum(np.abs(v) ** p, axis=1, keepdims=True) ** (1 / p)


@_timed("psi_sign")
def psi_sign_check(samples: int = 1000, seed: int = 0) -> SuiteReport:
    """Sign pattern, maximality at the origin, support and symmetry."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("psi_sign")
    for params in psi_param_grid():
        d, b, p = params.dim, params.b, params.p
        top = lz.psi_hat_at_zero(params)
        direction = _lp_sphere(rng, samples, d, p)
        inner = direction * (b * rng.uniform(0, 1, size=(samples, 1)))
        outer = direction * (b * rng.uniform(1, 6, size=(samples, 1)))
        hi = lz.psi_hat(inner, params)
        ho = lz.psi_hat(outer, params)
        rep.record("inside_nonneg", float(np.min(hi)) / top + 1e-12, params=params.__dict__)
        rep.record("outside_nonpos", 1e-12 - float(np.max(ho)) / top, params=params.__dict__)
        both = np.concatenate([hi, ho])
        rep.record("max_at_zero", 1e-12 - (float(np.max(both)) - top) / top, params=params.__dict__)

        h = params.h
        x = rng.uniform(-1.5 * h, 1.5 * h, size=(samples, d))
        vals = lz.psi_eval(x, params)
        outside = np.any(np.abs(x) >= h, axis=1)
        rep.record("support", -float(np.max(np.abs(vals[outside]), initial=0.0)), params=params.__dict__)
        scale = abs(lz.psi_at_zero(params)) + float(np.max(np.abs(vals)))
        sym = float(np.max(np.abs(vals - lz.psi_eval(-x, params)))) / scale
        rep.record("symmetry", 1e-12 - sym, params=params.__dict__)
    return rep


def _decay_start(params: lz.PsiParams) -> int:
    """First power of two past the band ``b`` and the support scale ``2/h``."""
    return 1 << max(1, math.ceil(math.log2(max(params.b, 2.0 / params.h))))


@_timed("poisson")
def poisson_suite(seed: int = 0, doublings: int = 4) -> SuiteReport:
    """Poisson-summation identity on separated node sets.

    ``|LHS - MID|`` is the remainder of a signed series, so it only shrinks
    monotonically once the truncation is in the decay regime of the
    transform; sweeps start there.  The certified tail estimate must
    dominate the remainder at every truncation.
    """
    rng = np.random.default_rng(seed)
    rep = SuiteReport("poisson")
    cases = [
        (NodeSet([[0.0, 0.0], [0.5, 0.5]]), 1, 4, (2, 4, 8)),
        (None, (1, 1, 32, 3, 0.15), None, None),
        (None, (1, 2, 24, 2, 0.2), None, None),
        (None, (2, 1, 8, 3, 0.3), None, None),
        (None, (2, 2, 12, 3, 0.3), None, None),
        (None, (3, 1, 10, 2, 0.4), None, None),
    ]
    for ns, r, n, sweep in cases:
        if ns is None:
            d, r, n, m, q = r
            ns = gen_random_separated(m, d, q, int(rng.integers(2**31)))
        d, m = ns.dim, len(ns)
        params = lz.PsiParams(d, r, (n - 1) / 2, min(ns.separation, 0.5))
        if sweep is None:
            t0 = _decay_start(params)
            sweep = tuple(t0 << k for k in range(doublings) if (2 * (t0 << k) + 1) ** d <= 1 << 22)
        u = rng.normal(size=m) + 1j * rng.normal(size=m)
        spec = VandermondeSpec(ns, n)
        diffs = []
        for t in sweep:
            diag = lz.poisson_check(spec, params, u, truncation=t)
            gap = abs(diag.lhs - diag.mid)
            diffs.append(gap)
            rep.record("mid_rhs", 1e-10 - abs(diag.mid - diag.rhs) / abs(diag.rhs), d=d, r=r, n=n)
            rep.record("sandwich", (diag.sandwich - diag.lhs) / abs(diag.rhs), d=d, r=r, n=n, t=t)
            rep.record("tail_dominates", (diag.tail_estimate - gap) / abs(diag.rhs), d=d, r=r, n=n, t=t)
        rep.record("lhs_converges", float(np.min(-np.diff(diffs))), d=d, r=r, n=n, sweep=sweep, diffs=diffs)
    return rep


@_timed("ratio_chain")
def ratio_chain_check(draws: int = 500, seed: int = 0) -> SuiteReport:
    """Simplified lower bounds never exceed the exact ratio."""
    rng = np.random.default_rng(seed)
    rep = SuiteReport("ratio_chain")
    for _ in range(draws):
        r = int(rng.integers(1, 11))
        d = int(rng.integers(1, 11))
        b = float(rng.uniform(1, 100))
        h = lz.positivity_threshold(d, r, b) * float(rng.uniform(1.0001, 4))
        params = lz.PsiParams(d, r, b, h)
        exact = lz.ratio_closed_form(params)
        general = lz.ratio_lower_bounds(params, "general")
        rep.record("general", (exact - general) / abs(exact), params=params.__dict__)
    for r in range(1, 11):
        worst_simplified = worst_exact = math.inf
        for d in range(1, 1001):
            b = 1.0 + r
            params = lz.PsiParams(d, r, b, lz.positivity_threshold(d, r, b))
            worst_simplified = min(worst_simplified, lz.bracket_simplified(r, d) - 0.5)
            worst_exact = min(worst_exact, lz.bracket_exact(params) - 0.5)
            exact = lz.ratio_closed_form(params)
            if 1e-250 < exact < math.inf:
                rep.record("h_of_p_ordering", (exact - lz.ratio_lower_bounds(params, "h_of_p")) / exact,
                           params=params.__dict__)
        # the bracket in the form used by the h-of-p estimate, and its exact value
        rep.record("h_of_p_bracket", worst_simplified, r=r, d_max=1000)
        rep.record("h_of_p_bracket_exact", worst_exact, r=r, d_max=1000)
    return rep


# ---------------------------------------------------------------- bounds


def _threshold(theorem: str, d: int) -> tuple[float, str]:
    if theorem == "ingham":
        return bd.ingham_threshold(d), "N-1"
    if theorem.startswith("small_r"):
        return 2 * bd.small_r_hb(int(theorem[-1]), d), "N-1"
    if theorem == "cluster_specialization":
        return 6.0 * d, "N"
    if theorem == "kernel":
        return 4.0 * d, "N"
    return 1.0, "N"


def sample_soundness_instance(theorem: str, rng: np.random.Generator, max_n: int = 64, max_m: int = 12):
    """Draw ``(d, N, M, q_target)`` satisfying the theorem's hypothesis.

    Returns ``None`` when the draw cannot satisfy the dart-throwing density
    guard with at least two nodes; callers simply draw again.
    """
    if theorem == "separated_d1_min":
        d = 1
    elif theorem == "kernel":
        d = int(rng.integers(2, 4))
    else:
        d = int(rng.integers(1, 4))
    thr, form = _threshold(theorem, d)
    lo_n = 2
    if theorem == "cluster_specialization":
        lo_n = 2 * (d + 2) ** 2 + 1
    if lo_n > max_n:
        return None
    n = int(rng.integers(lo_n, max_n + 1))
    if theorem == "kernel" and n % 2:
        n -= 1
    denom = n - 1 if form == "N-1" else n
    if denom < 1:
        return None
    # strictly above the threshold; actual separation only grows
    q = thr / denom * float(rng.uniform(1.0 + 1e-6, 1.4))
    if q > 0.5:
        return None
    m_cap = min(max_m, int(0.5 / q**d))
    if theorem == "cluster_specialization":
        m_cap = min(m_cap, n - 1)
    if d == 3:
        # random sequential packing in 3-d jams well before the density guard
        m_cap = min(m_cap, 8)
    if m_cap < 2:
        return None
    m = int(rng.integers(2, m_cap + 1))
    return d, n, m, q


def _theorem_report(theorem: str, n: int, q: float, d: int, m: int) -> list[bd.BoundReport]:
    if theorem == "separated_d1_min":
        return [bd.separated_bounds(n, q, d)[0]]
    if theorem == "ingham":
        return [bd.ingham_bound(n, q, d)]
    if theorem.startswith("small_r"):
        return [bd.small_r_bound(n, q, d, int(theorem[-1]))]
    if theorem == "cluster_specialization":
        return [bd.cluster_specialization_bound(n, q, d, m)]
    if theorem == "kernel":
        return list(bd.kernel_bound(n, q, d))
    raise ValueError(f"unknown theorem {theorem!r}")


@_timed("soundness")
def soundness_sweep(
    theorems=SOUNDNESS_THEOREMS,
    instances: int = 200,
    seed: int = 0,
    max_n: int = 64,
    max_m: int = 12,
) -> SuiteReport:
    """``sigma_min >= bound * (1 - 1e-9)`` on random node sets meeting each hypothesis."""
    rep = SuiteReport("soundness")
    for k, theorem in enumerate(theorems):
        rng = np.random.default_rng([seed, k])
        done = 0
        while done < instances:
            inst = sample_soundness_instance(theorem, rng, max_n, max_m)
            if inst is None:
                continue
            d, n, m, q_target = inst
            try:
                ns = gen_random_separated(m, d, q_target, int(rng.integers(2**31)))
            except FeasibilityError:
                continue
            q = ns.separation
            res = spectrum(VandermondeSpec(ns, n))
            for report in _theorem_report(theorem, n, q, d, m):
                if not report.applicable:
                    rep.record(f"{theorem}:applicable", -1.0, n=n, d=d, q=q, nodes=ns.to_dict())
                    continue
                margin = (res.sigma_min - report.bound_value * (1 - REL_SLACK)) / report.bound_value
                rep.record(report.label if theorem != "kernel" else report.theorem_id, margin,
                           n=n, d=d, m=m, q=q, sigma_min=res.sigma_min, bound=report.bound_value,
                           nodes=ns.to_dict())
            _, high = bd.separated_bounds(n, q, d)
            if high.applicable:
                rep.record("separated_max", (high.bound_value * (1 + REL_SLACK) - res.sigma_max) / high.bound_value,
                           n=n, d=d, nodes=ns.to_dict())
            done += 1
    return rep


# ---------------------------------------------------------------- driver


def _spectral(instances: int, seed: int) -> SuiteReport:
    rep = SuiteReport("spectral")
    for part in (
        dual_path_check(instances, seed),
        equispaced_check(),
        quasi_grid_check(20, seed),
        spectral_invariants_check(instances, seed),
    ):
        rep.merge(part)
    return rep


def _psi(instances: int, seed: int) -> SuiteReport:
    rep = SuiteReport("psi")
    for part in (psi_closed_form_check(), psi_sign_check(1000, seed), poisson_suite(seed), ratio_chain_check(500, seed)):
        rep.merge(part)
    return rep


def _bounds(instances: int, seed: int) -> SuiteReport:
    rep = soundness_sweep(instances=instances, seed=seed)
    rep.name = "bounds"
    return rep


SUITES = {"spectral": _spectral, "psi": _psi, "bounds": _bounds}


def run_suite(name: str, instances: int = 200, seed: int = 0) -> list[SuiteReport]:
    """Run one named suite, or every suite for ``name == "all"``."""
    names = list(SUITES) if name == "all" else [name]
    out = []
    for n in names:
        if n not in SUITES:
            raise ValueError(f"unknown suite {n!r}")
        out.append(SUITES[n](instances, seed))
    return out
