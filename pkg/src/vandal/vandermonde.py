"""Multivariate rectangular Vandermonde matrices with nodes on the torus.

For a node set ``t_1, ..., t_M`` in ``[0, 1)^d`` and degree ``N`` the matrix
``A`` has entries ``exp(2 pi i nu . t_j)`` for multi-indices
``nu in {0, ..., N-1}^d``.  Its Gram matrix ``A A^*`` factors into products
of univariate Dirichlet kernels, so the extremal singular values are
obtained from an ``M x M`` Hermitian eigenproblem without ever forming the
``M x N^d`` matrix.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, ResourceCapError
from .torus import NodeSet

__all__ = [
    "VandermondeSpec",
    "SpectralResult",
    "multi_indices",
    "build_matrix",
    "dirichlet",
    "gram_matrix",
    "spectrum",
    "EXPLICIT_CAP",
]

#: Default maximum number of entries M * N^d for the explicit matrix.
EXPLICIT_CAP = 10**7

_GUARD = 1e-9
# negative eigenvalues down to this multiple of lambda_max are rounding noise
_CLAMP_TOL = 1e-10
_INT_LIMIT = 2**62


@dataclass(frozen=True)
class VandermondeSpec:
    """A node set together with the degree ``N``."""

    node_set: NodeSet
    degree: int

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 1:
            raise ValueError("degree must be a positive integer")
        if self.degree ** self.node_set.dim >= _INT_LIMIT:
            raise ResourceCapError("column count N**d overflows a 64-bit integer")

    @property
    def n_rows(self) -> int:
        return len(self.node_set)

    @property
    def n_cols(self) -> int:
        return self.degree ** self.node_set.dim


@dataclass(frozen=True)
class SpectralResult:
    sigma_min: float
    sigma_max: float
    cond: float
    path: str
    residual: float
    clamped: bool = False

    def to_dict(self) -> dict:
        return {
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "cond": self.cond,
            "path": self.path,
            "residual": self.residual,
        }

    def to_json(self) -> str:
        # repr-based float output round-trips every double exactly
        return json.dumps(self.to_dict())


def multi_indices(n: int, d: int) -> np.ndarray:
    """All ``nu in {0..n-1}^d`` in lexicographic order, last coordinate fastest."""
    return np.array(list(itertools.product(range(n), repeat=d)), dtype=np.int64).reshape(-1, d)


def build_matrix(spec: VandermondeSpec, cap: int = EXPLICIT_CAP) -> np.ndarray:
    """Explicit ``M x N^d`` Vandermonde matrix.

    Raises
    ------
    ResourceCapError
        If ``M * N**d`` exceeds ``cap``; use :func:`gram_matrix` instead.
    """
    entries = spec.n_rows * spec.n_cols
    if entries > cap:
        raise ResourceCapError(
            f"explicit matrix has {entries} entries (cap {cap}); use the Gram path"
        )
    nu = multi_indices(spec.degree, spec.node_set.dim)
    # phases are reduced mod 1 before exponentiation to keep arguments small
    phase = np.mod(spec.node_set.nodes @ nu.T.astype(float), 1.0)
    return np.exp(2j * np.pi * phase)


def dirichlet(n: int, tau):
    """Dirichlet kernel ``sum_{nu=0}^{n-1} exp(2 pi i nu tau)``.

    Closed form ``exp(pi i (n-1) tau) sin(pi n tau) / sin(pi tau)`` away from
    the integers; exactly ``n`` at integers; direct summation within 1e-9 of
    an integer.  Accepts scalars or arrays.
    """
    tau_arr = np.asarray(tau, dtype=float)
    # the kernel is 1-periodic; work on [-1/2, 1/2)
    x = tau_arr - np.round(tau_arr)
    out = np.empty(x.shape, dtype=complex)
    near = np.abs(x) < _GUARD
    far = ~near
    xf = x[far]
    out[far] = np.exp(1j * np.pi * (n - 1) * xf) * np.sin(np.pi * n * xf) / np.sin(np.pi * xf)
    if np.any(near):
        xn = x[near]
        exact = xn == 0.0
        k = np.arange(n)
        summed = np.exp(2j * np.pi * np.multiply.outer(xn, k)).sum(axis=-1)
        summed[exact] = n
        out[near] = summed
    if out.ndim == 0:
        return complex(out)
    return out


def gram_matrix(spec: VandermondeSpec) -> np.ndarray:
    """Hermitian ``M x M`` matrix ``A A^*`` assembled from Dirichlet kernels."""
    nodes = spec.node_set.nodes
    m, d = nodes.shape
    n = spec.degree
    iu = np.triu_indices(m, k=1)
    delta = nodes[iu[0]] - nodes[iu[1]]
    upper = np.prod(dirichlet(n, delta).reshape(-1, d), axis=-1)
    gram = np.zeros((m, m), dtype=complex)
    gram[iu] = upper
    gram[(iu[1], iu[0])] = np.conj(upper)
    gram[np.diag_indices(m)] = float(n) ** d
    return gram


def _result(lam_min: float, lam_max: float, path: str, residual: float) -> SpectralResult:
    clamped = False
    if lam_min < 0.0:
        clamped = lam_min >= -_CLAMP_TOL * lam_max
        lam_min = 0.0
    smin = float(np.sqrt(lam_min))
    smax = float(np.sqrt(max(lam_max, 0.0)))
    cond = smax / smin if smin > 0.0 else float("inf")
    return SpectralResult(smin, smax, cond, path, residual, clamped)


def spectrum(
    spec: VandermondeSpec,
    *,
    cross_check: bool = False,
    explicit_cap: int = EXPLICIT_CAP,
    path: str = "gram",
) -> SpectralResult:
    """Extremal singular values and condition number of ``A``.

    The default path diagonalizes the Gram matrix.  ``path="explicit"`` runs
    a dense SVD of ``A`` instead.  With ``cross_check=True`` both paths run
    and the largest relative discrepancy (relative to ``sigma_max``) is
    folded into ``residual``.
    """
    if path == "explicit":
        a = build_matrix(spec, explicit_cap)
        try:
            s = np.linalg.svd(a, compute_uv=False)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"SVD did not converge: {exc}") from exc
        if spec.n_rows > spec.n_cols:
            s = np.concatenate([s, np.zeros(spec.n_rows - spec.n_cols)])
        return _result(float(s[-1]) ** 2, float(s[0]) ** 2, "explicit", 0.0)
    if path != "gram":
        raise ValueError(f"unknown path {path!r}")

    gram = gram_matrix(spec)
    try:
        lam, vecs = np.linalg.eigh(gram)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigh failed on {gram.shape} Gram matrix: {exc}") from exc
    lam_max = float(lam[-1])
    ends = vecs[:, [0, -1]]
    resid = np.linalg.norm(gram @ ends - ends * lam[[0, -1]], axis=0)
    residual = float(np.max(resid)) / lam_max
    # more rows than columns: rank deficiency makes the bottom eigenvalue exactly zero
    lam_min = 0.0 if spec.n_rows > spec.n_cols else float(lam[0])
    result = _result(lam_min, lam_max, "gram", residual)

    if cross_check and spec.n_rows * spec.n_cols <= explicit_cap:
        other = spectrum(spec, path="explicit", explicit_cap=explicit_cap)
        gap = max(
            abs(result.sigma_min - other.sigma_min),
            abs(result.sigma_max - other.sigma_max),
        ) / result.sigma_max
        result = SpectralResult(
            result.sigma_min, result.sigma_max, result.cond, "gram", max(residual, gap), result.clamped
        )
    return result
