"""Command-line front end: ``vandal {gen,spectrum,bound,verify,tables,sweep}``.

Exit codes: 0 success, 1 verification failure (or a solver that did not
converge), 2 usage, parse or precondition error, 3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

import numpy as np

from . import bounds as bd
from . import localizer as lz
from . import verify as vf
from .errors import ConvergenceError, FeasibilityError, ResourceCapError, VandalError
from .io import CSV_DIGITS, emit, load_nodes
from .torus import (
    NodeSet,
    gen_equispaced,
    gen_grid_subset,
    gen_quasi_grid,
    gen_random_separated,
    satisfies_equality_condition,
)
from .vandermonde import EXPLICIT_CAP, VandermondeSpec, spectrum

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

THEOREM_CHOICES = (
    "all",
    "trivial",
    "separated_d1_min",
    "separated_max",
    "equispaced_exact",
    "ingham",
    "small_r",
    "cluster_specialization",
    "kernel",
    "kernel_zeta",
    "sharpness_upper",
    "psi",
)
REGIME_FLAGS = {"explicit": None, "p-rule": "h_of_p", "log-d-rule": "log_d"}


class UsageError(VandalError):
    """Flag combination that argparse cannot reject on its own."""


# ------------------------------------------------------------------ parser


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # Subcommands repeat the global flags with suppressed defaults so both
    # ``vandal --seed 1 gen ...`` and ``vandal gen ... --seed 1`` work.
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="RNG seed (default 0)")
    parser.add_argument("--format", choices=("json", "csv", "text"), default=default("json"),
                        help="output format (default json)")
    parser.add_argument("--explicit-cap", type=int, default=default(EXPLICIT_CAP),
                        help="largest M*N^d for which the explicit matrix may be formed")
    parser.add_argument("--out", default=default(None), metavar="FILE", help="write output here instead of stdout")
    parser.add_argument("--digits", type=int, default=default(CSV_DIGITS),
                        help="significant digits in csv/text output (default 6)")


def _psi_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=int, help="bump exponent; p = 2r")
    parser.add_argument("--b", type=float, help="radius of the frequency ball (default (N-1)/2)")
    parser.add_argument("--h", type=float, help="support half-width, with --h-regime explicit")
    parser.add_argument("--h-regime", choices=tuple(REGIME_FLAGS), default="explicit",
                        help="explicit --h, or the p-rule / log-d-rule choice of h")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vandal",
        description="Extremal singular values of multivariate Vandermonde matrices on the torus.",
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, description=help_text)
        _global_flags(p, suppress=True)
        return p

    g = add("gen", "generate a node set")
    g.add_argument("kind", choices=("equispaced", "quasi-grid", "grid-subset", "random"))
    g.add_argument("--m", type=int, help="node count (per axis for equispaced)")
    g.add_argument("--d", type=int, default=1, help="dimension (default 1)")
    g.add_argument("--n", type=int, help="lattice size for quasi-grid and grid-subset")
    g.add_argument("--q", type=float, help="target separation for random")
    g.add_argument("--max-attempts", type=int, help="dart-throwing budget for random")

    s = add("spectrum", "extremal singular values of A for a node file")
    s.add_argument("nodes", help="node file (JSON or text), '-' for stdin")
    s.add_argument("--n", type=int, required=True, help="degree N")
    s.add_argument("--path", choices=("gram", "explicit"), default="gram")
    s.add_argument("--cross-check", action="store_true", help="compare against the explicit SVD")
    s.add_argument("--poisson", action="store_true", help="also run the Poisson-summation diagnostic")
    s.add_argument("--truncation", type=int, help="frequency cutoff for --poisson (default: automatic)")
    _psi_flags(s)

    b = add("bound", "evaluate closed-form bounds")
    b.add_argument("nodes", nargs="?", help="node file; q, d and M are taken from it")
    b.add_argument("--q", type=float, help="separation for synthetic evaluation")
    b.add_argument("--n", type=int, help="degree N")
    b.add_argument("--d", type=int, help="dimension (synthetic evaluation, default 1)")
    b.add_argument("--m", type=int, help="node count for synthetic evaluation (default 2)")
    b.add_argument("--theorem", choices=THEOREM_CHOICES, default="all")
    _psi_flags(b)

    v = add("verify", "run randomized verification suites")
    v.add_argument("--suite", choices=("spectral", "psi", "bounds", "all"), default="all")
    v.add_argument("--instances", type=int, default=200, help="instances per theorem or per check")

    t = add("tables", "reproduce the comparison tables")
    t.add_argument("--which", choices=("1", "2"), required=True)
    t.add_argument("--d", type=int, nargs="+", default=[1, 2, 3, 4, 5], help="dimensions for table 1")
    t.add_argument("--n", type=int, default=1025, help="degree used for table 2 (values do not depend on it)")

    w = add("sweep", "sigma_min against every bound over a parameter range")
    w.add_argument("--vary", choices=("q", "n", "d"), required=True)
    w.add_argument("--range", nargs=2, type=float, required=True, metavar=("LO", "HI"))
    w.add_argument("--steps", type=int, default=10)
    w.add_argument("--n", type=int, help="degree N (fixed unless --vary n)")
    w.add_argument("--d", type=int, default=1, help="dimension (fixed unless --vary d)")
    w.add_argument("--m", type=int, default=4, help="node count for --vary q, per-axis count for --vary d")
    w.add_argument("--nodes", help="fixed node file for --vary n")
    return parser


# ------------------------------------------------------------------ helpers


def _rng_seed(seed: int, *salt: int) -> int:
    return int(np.random.SeedSequence([seed, *salt]).generate_state(1)[0])


def _psi_params(args, d: int, n: int | None) -> lz.PsiParams:
    regime = REGIME_FLAGS[args.h_regime]
    b = args.b if args.b is not None else ((n - 1) / 2 if n else None)
    if b is None:
        raise UsageError("localizer parameters need --b or --n")
    r = args.r
    if regime == "log_d":
        want = lz.r_for_log_d(d)
        if r is None:
            r = want
        elif r != want:
            raise UsageError(f"--h-regime log-d-rule fixes r = {want} for d = {d}")
    if r is None:
        raise UsageError("--r is required")
    if regime is None:
        if args.h is None:
            raise UsageError("--h-regime explicit needs --h")
        h = args.h
    else:
        if args.h is not None:
            raise UsageError("--h conflicts with a rule-based --h-regime")
        h = lz.h_for_regime(d, r, b, regime)
    return lz.PsiParams(d, r, b, h)


def _psi_record(params: lz.PsiParams, regime: str | None) -> dict:
    rec = {
        "d": params.dim,
        "r": params.r,
        "b": params.b,
        "h": params.h,
        "positive": params.positive,
        "threshold": lz.positivity_threshold(params.dim, params.r, params.b),
        "psi0": lz.psi_at_zero(params),
        "psi_hat0": lz.psi_hat_at_zero(params),
        "ratio": lz.ratio_closed_form(params),
        "bracket": lz.bracket_exact(params),
        "ratio_lower_general": lz.ratio_lower_bounds(params, "general"),
    }
    if regime is not None:
        rec[f"ratio_lower_{regime}"] = lz.ratio_lower_bounds(params, regime)
    return rec


def _bound_record(rep: bd.BoundReport) -> dict:
    rec = rep.to_dict()
    rec["theorem"] = rep.label
    rec["kind"] = rep.kind
    return rec


def _plain_record(theorem: str, kind: str, value: float, normalized: float | None = None) -> dict:
    return {
        "theorem": theorem,
        "applicable": True,
        "condition_lhs": None,
        "condition_rhs": None,
        "bound": value,
        "normalized": normalized,
        "kind": kind,
    }


# ------------------------------------------------------------------ commands


def cmd_gen(args) -> tuple[list[dict], str | None]:
    kind = args.kind
    if kind == "equispaced":
        if args.m is None:
            raise UsageError("gen equispaced needs --m")
        ns = gen_equispaced(args.m, args.d)
    elif kind == "quasi-grid":
        if args.n is None:
            raise UsageError("gen quasi-grid needs --n")
        ns = gen_quasi_grid(args.n, args.d, args.seed, m=args.m)
    elif kind == "grid-subset":
        if args.n is None or args.m is None:
            raise UsageError("gen grid-subset needs --n and --m")
        ns = gen_grid_subset(args.n, args.d, args.m, args.seed)
    else:
        if args.m is None or args.q is None:
            raise UsageError("gen random needs --m and --q")
        ns = gen_random_separated(args.m, args.d, args.q, args.seed, max_attempts=args.max_attempts)
    q = ns.separation if len(ns) > 1 else None
    note = f"M={len(ns)} d={ns.dim} separation={q!r}"
    if kind == "quasi-grid":
        note += f" equality_condition={satisfies_equality_condition(ns, args.n)}"
    return ns, note


def _render_nodes(ns: NodeSet, fmt: str) -> str:
    if fmt == "json":
        return ns.to_json() + "\n"
    if fmt == "text":
        return ns.to_text()
    cols = [f"t{i + 1}" for i in range(ns.dim)]
    return emit([dict(zip(cols, map(float, row))) for row in ns.nodes], "csv", cols, digits=17)


def cmd_spectrum(args) -> list[dict]:
    ns = load_nodes(args.nodes, sys.stdin.read() if args.nodes == "-" else None)
    spec = VandermondeSpec(ns, args.n)
    res = spectrum(spec, path=args.path, cross_check=args.cross_check, explicit_cap=args.explicit_cap)
    rec = {"m": len(ns), "d": ns.dim, "n": args.n, **res.to_dict()}
    if not args.poisson:
        return [rec]
    params = _psi_params(args, ns.dim, args.n)
    rng = np.random.default_rng(args.seed)
    u = rng.normal(size=len(ns)) + 1j * rng.normal(size=len(ns))
    diag = lz.poisson_check(spec, params, u, truncation=args.truncation)
    rec.update({f"poisson_{k}": v for k, v in diag.to_dict().items()})
    rec.update({"psi_r": params.r, "psi_b": params.b, "psi_h": params.h})
    return [rec]


def cmd_bound(args) -> list[dict]:
    if args.theorem == "psi":
        d = args.d or 1
        return [_psi_record(_psi_params(args, d, args.n), REGIME_FLAGS[args.h_regime])]
    if args.n is None:
        raise UsageError("bound needs --n")
    n = args.n
    if args.nodes:
        if args.q is not None or args.d is not None or args.m is not None:
            raise UsageError("--q/--d/--m conflict with a node file")
        ns = load_nodes(args.nodes, sys.stdin.read() if args.nodes == "-" else None)
        q, d, m = ns.separation, ns.dim, len(ns)
    else:
        if args.q is None:
            raise UsageError("bound needs a node file or --q")
        q, d, m = args.q, args.d or 1, args.m or 2

    theorem = args.theorem
    rows: list[dict] = []
    if theorem in ("all", "trivial"):
        lo_up, hi_low = bd.trivial_bounds(n, d)
        rows.append(_plain_record("trivial", "sigma_min_upper", lo_up, 1.0))
        rows.append(_plain_record("trivial", "sigma_max_lower", hi_low, 1.0))
    reports = bd.all_bounds(n, q, d, m)
    if theorem == "small_r" and args.r is not None:
        reports = [bd.small_r_bound(n, q, d, args.r)]
    elif theorem not in ("all", "trivial", "equispaced_exact", "sharpness_upper"):
        reports = [rep for rep in reports if rep.theorem_id == theorem]
    elif theorem != "all":
        reports = []
    rows += [_bound_record(rep) for rep in reports]
    if theorem in ("all", "equispaced_exact", "sharpness_upper"):
        per_axis = round(1 / q)
        on_grid = abs(per_axis * q - 1) <= 1e-12 and per_axis <= n
        if theorem in ("all", "equispaced_exact") and on_grid:
            smin, smax = bd.equispaced_exact(n, per_axis, d)
            norm = float(n) ** (d / 2)
            rows.append(_plain_record("equispaced_exact", "sigma_min_exact", smin, smin / norm))
            rows.append(_plain_record("equispaced_exact", "sigma_max_exact", smax, smax / norm))
        elif theorem == "equispaced_exact":
            raise UsageError("equispaced_exact needs q = 1/M with M <= N")
        if n * q >= 1:
            up = bd.sharpness_upper(n, q, d)
            rows.append(_plain_record("sharpness_upper", "sigma_min_upper", up, up / float(n) ** (d / 2)))
        elif theorem == "sharpness_upper":
            raise UsageError("sharpness_upper needs Nq >= 1")
    return rows


def cmd_verify(args) -> tuple[list[dict], list[dict], list[str]]:
    reports = vf.run_suite(args.suite, instances=args.instances, seed=args.seed)
    summaries, violations, timing = [], [], []
    for rep in reports:
        summ = rep.summary()
        timing.append(f"{rep.name}: {summ.pop('elapsed_s')} s")
        summ["passed"] = rep.passed
        summaries.append(summ)
        for v in rep.violations:
            violations.append({"suite": rep.name, "check": v.check, "margin": v.margin, "detail": v.detail})
    return summaries, violations, timing


def cmd_tables(args) -> list[dict]:
    if args.which == "2":
        tab = bd.table2(args.n)
        rows = []
        for i, r in enumerate((1, 2, 3)):
            for j, d in enumerate((1, 2, 3)):
                rows.append({
                    "r": r,
                    "d": d,
                    "condition": float(tab.conditions[i, j]),
                    "bound": float(tab.bounds[i, j]),
                    "condition_raw": float(tab.conditions_raw[i, j]),
                    "bound_raw": float(tab.bounds_raw[i, j]),
                })
        return rows
    rows = []
    for d in args.d:
        for row in bd.table1(d):
            rows.append({
                "d": d,
                "row": row.label,
                "condition_form": row.condition_form,
                "threshold": row.threshold,
                "normalized_bound": row.normalized_bound,
                "quoted_threshold": row.quoted_threshold,
                "quoted_bound": row.quoted_bound,
                "evaluable": row.evaluable,
            })
    return rows


def _sweep_row(value, ns: NodeSet, n: int, cap: int) -> dict:
    d, m = ns.dim, len(ns)
    res = spectrum(VandermondeSpec(ns, n), explicit_cap=cap)
    q = ns.separation
    row = {"value": value, "n": n, "d": d, "m": m, "q": q,
           "sigma_min": res.sigma_min, "sigma_max": res.sigma_max, "cond": res.cond}
    for rep in bd.all_bounds(n, q, d, m):
        row[rep.label] = rep.bound_value if rep.applicable else None
    return row


def cmd_sweep(args) -> list[dict]:
    lo, hi = args.range
    if args.steps < 1 or hi < lo:
        raise UsageError("--range must satisfy LO <= HI and --steps >= 1")
    grid = np.linspace(lo, hi, args.steps) if args.steps > 1 else np.array([lo])
    rows = []
    if args.vary == "q":
        if args.n is None:
            raise UsageError("sweep --vary q needs --n")
        for i, q in enumerate(grid):
            ns = gen_random_separated(args.m, args.d, float(q), _rng_seed(args.seed, i))
            rows.append(_sweep_row(float(q), ns, args.n, args.explicit_cap))
    elif args.vary == "n":
        if args.nodes is None:
            raise UsageError("sweep --vary n needs --nodes")
        ns = load_nodes(args.nodes)
        for n in sorted({int(round(x)) for x in grid}):
            rows.append(_sweep_row(n, ns, n, args.explicit_cap))
    else:
        if args.n is None:
            raise UsageError("sweep --vary d needs --n")
        for d in sorted({int(round(x)) for x in grid}):
            ns = gen_equispaced(args.m, d)
            rows.append(_sweep_row(d, ns, args.n, args.explicit_cap))
    return rows


# ------------------------------------------------------------------ entry


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_threads() -> None:
    raw = os.environ.get("VANDAL_THREADS")
    if raw is None:
        return
    if not raw.isdigit() or int(raw) < 1:
        raise UsageError(f"VANDAL_THREADS must be a positive integer, got {raw!r}")


def _run(args) -> int:
    _check_threads()
    fmt = args.format
    if args.command == "gen":
        ns, note = cmd_gen(args)
        _write(_render_nodes(ns, fmt), args.out)
        print(note, file=sys.stderr)
        return EXIT_OK
    if args.command == "verify":
        summaries, violations, timing = cmd_verify(args)
        if fmt == "json":
            text = json.dumps({"suites": summaries, "violations": violations}, default=_jsonable) + "\n"
        else:
            text = emit(summaries, fmt, digits=args.digits)
            for v in violations:
                print(json.dumps(v, default=_jsonable), file=sys.stderr)
        _write(text, args.out)
        for line in timing:
            print(line, file=sys.stderr)
        return EXIT_FAIL if violations else EXIT_OK
    handler = {"spectrum": cmd_spectrum, "bound": cmd_bound, "tables": cmd_tables, "sweep": cmd_sweep}
    rows = handler[args.command](args)
    single = args.command == "spectrum"
    _write(emit(rows, fmt, digits=args.digits, single=single), args.out)
    return EXIT_OK


def _jsonable(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return _run(args)
    except ResourceCapError as exc:
        print(f"vandal: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConvergenceError as exc:
        print(f"vandal: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, FeasibilityError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"vandal: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
