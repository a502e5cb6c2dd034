"""Node sets on the d-dimensional torus [0, 1)^d.

Distances use the wrap-around max-norm: per coordinate the circular
distance ``min(|delta|, 1 - |delta|)``, then the maximum over coordinates.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import FeasibilityError, NoPairsError, ResourceCapError

__all__ = [
    "NodeSet",
    "wrap_distance",
    "pairwise_wrap_distances",
    "separation",
    "gen_equispaced",
    "gen_quasi_grid",
    "gen_grid_subset",
    "gen_random_separated",
    "satisfies_equality_condition",
    "MAX_NODES",
]

#: Largest node count any generator is allowed to produce.
MAX_NODES = 1 << 16

# rows per block when scanning all pairs; bounds peak memory to ~block*M*d doubles
_PAIR_BLOCK = 512


def reduce_to_torus(x) -> np.ndarray:
    """Map real coordinates to their representative in [0, 1)."""
    y = np.mod(np.asarray(x, dtype=float), 1.0)
    # np.mod(-tiny, 1.0) rounds to 1.0
    y[y >= 1.0] = 0.0
    return y


def _circular(delta: np.ndarray) -> np.ndarray:
    a = np.abs(np.mod(delta, 1.0))
    return np.minimum(a, 1.0 - a)


def wrap_distance(t, t_prime) -> float:
    """Wrap-around distance between two points of the torus.

    Parameters
    ----------
    t, t_prime : array_like, shape (d,)
        Coordinates; any real values are accepted and read modulo 1.

    Returns
    -------
    float
        Value in [0, 1/2].
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    t_prime = np.atleast_1d(np.asarray(t_prime, dtype=float))
    if t.ndim != 1 or t.shape != t_prime.shape:
        raise ValueError(f"dimension mismatch: {t.shape} vs {t_prime.shape}")
    return float(np.max(_circular(t - t_prime)))


def pairwise_wrap_distances(nodes: np.ndarray) -> np.ndarray:
    """Full M x M matrix of wrap-around distances (diagonal is zero)."""
    nodes = np.asarray(nodes, dtype=float)
    return np.max(_circular(nodes[:, None, :] - nodes[None, :, :]), axis=-1)


def _min_pair_distance(nodes: np.ndarray) -> float:
    m = nodes.shape[0]
    best = np.inf
    for start in range(0, m - 1, _PAIR_BLOCK):
        stop = min(start + _PAIR_BLOCK, m - 1)
        rows = nodes[start:stop]
        dist = np.max(_circular(rows[:, None, :] - nodes[None, :, :]), axis=-1)
        # keep only pairs (i, j) with j > i
        mask = np.arange(m)[None, :] > np.arange(start, stop)[:, None]
        best = min(best, float(np.min(dist[mask])))
    return best


class NodeSet:
    """An immutable set of M distinct points on the d-torus.

    Coordinates are reduced to [0, 1) on construction.  The minimal
    separation is computed lazily and cached; it is ``None`` for a single node.
    """

    __slots__ = ("_nodes", "_separation", "_separation_known")

    def __init__(self, nodes, dim: int | None = None, *, _separation: float | None = None):
        arr = np.asarray(nodes, dtype=float)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1) if dim in (None, 1) else arr.reshape(-1, dim)
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise ValueError("nodes must be a non-empty (M, d) array")
        if dim is not None and arr.shape[1] != dim:
            raise ValueError(f"expected dimension {dim}, got {arr.shape[1]}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("node coordinates must be finite")
        arr = reduce_to_torus(arr)
        if np.unique(arr, axis=0).shape[0] != arr.shape[0]:
            raise ValueError("nodes must be pairwise distinct on the torus")
        arr.setflags(write=False)
        self._nodes = arr
        self._separation = _separation
        self._separation_known = _separation is not None

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def dim(self) -> int:
        return self._nodes.shape[1]

    def __len__(self) -> int:
        return self._nodes.shape[0]

    @property
    def cached_separation(self) -> float | None:
        """Minimal separation if it has been computed, else ``None``."""
        return self._separation if self._separation_known else None

    @property
    def separation(self) -> float:
        """Minimal wrap-around distance over distinct pairs."""
        if len(self) < 2:
            raise NoPairsError("separation needs at least two nodes")
        if not self._separation_known:
            self._separation = _min_pair_distance(self._nodes)
            self._separation_known = True
        return self._separation

    def __eq__(self, other) -> bool:
        return isinstance(other, NodeSet) and np.array_equal(self._nodes, other._nodes)

    def __hash__(self) -> int:
        return hash(self._nodes.tobytes())

    def __repr__(self) -> str:
        return f"NodeSet(M={len(self)}, d={self.dim})"

    # serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {"dim": self.dim, "nodes": self._nodes.tolist()}

    def to_json(self) -> str:
        # repr of a Python float round-trips exactly
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "NodeSet":
        return cls(np.asarray(data["nodes"], dtype=float).reshape(-1, int(data["dim"])), int(data["dim"]))

    @classmethod
    def from_json(cls, text: str) -> "NodeSet":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        return "".join(" ".join(repr(float(c)) for c in row) + "\n" for row in self._nodes)

    @classmethod
    def from_text(cls, text: str) -> "NodeSet":
        rows = [line.split() for line in text.splitlines()]
        rows = [r for r in rows if r and not r[0].startswith("#")]
        if not rows:
            raise ValueError("no nodes found")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ValueError("inconsistent node dimensions")
        return cls([[float(c) for c in r] for r in rows])


def separation(ns: NodeSet) -> float:
    """Minimal separation ``q`` of a node set (raises for M < 2)."""
    return ns.separation


def _check_count(count: int) -> None:
    if count > MAX_NODES:
        raise ResourceCapError(f"{count} nodes exceeds the cap of {MAX_NODES}")


def gen_equispaced(m: int, d: int) -> NodeSet:
    """Full grid ``(1/m) {0, ..., m-1}^d`` with separation ``1/m``."""
    if m < 1 or d < 1:
        raise ValueError("m and d must be positive")
    _check_count(m**d)
    axis = np.arange(m) / m
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    sep = _min_pair_distance(axis.reshape(-1, 1)) if m > 1 else None
    return NodeSet(grid, d, _separation=sep)


def gen_quasi_grid(n: int, d: int, layout_seed: int, m: int | None = None) -> NodeSet:
    """Node set whose Vandermonde matrix of degree ``n`` is perfectly conditioned.

    One coordinate axis (chosen by the seed) carries distinct points of the
    lattice ``(1/n) Z``; the remaining coordinates are uniform random, so no
    two nodes share a full grid cell yet every pair differs by a nonzero
    multiple of ``1/n`` along the lattice axis.

    Parameters
    ----------
    n : int
        Polynomial degree parameter N.
    d : int
        Dimension, at least 2.
    layout_seed : int
        Seed for the random layout.
    m : int, optional
        Number of nodes, at most ``n``.  Defaults to ``n``.
    """
    if d < 2:
        raise ValueError("quasi-grid layouts need d >= 2")
    if n < 1:
        raise ValueError("n must be positive")
    m = n if m is None else m
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    rng = np.random.default_rng(layout_seed)
    axis = int(rng.integers(d))
    lattice = np.sort(rng.choice(n, size=m, replace=False)) / n
    nodes = rng.random((m, d))
    nodes[:, axis] = lattice
    return NodeSet(nodes, d)


def gen_grid_subset(n: int, d: int, m: int, seed: int) -> NodeSet:
    """Random ``m`` points of the grid ``(1/n) {0..n-1}^d`` under a random global shift."""
    if not 1 <= m <= n**d:
        raise ValueError("need 1 <= m <= n**d")
    _check_count(m)
    rng = np.random.default_rng(seed)
    flat = rng.choice(n**d, size=m, replace=False)
    idx = np.stack(np.unravel_index(flat, (n,) * d), axis=-1)
    return NodeSet(idx / n + rng.random(d), d)


def gen_random_separated(
    m: int,
    d: int,
    q_target: float,
    seed: int,
    max_attempts: int | None = None,
) -> NodeSet:
    """Seeded dart throwing: ``m`` uniform nodes with separation >= ``q_target``.

    Raises
    ------
    ValueError
        If ``q_target`` is outside (0, 1/2] or ``m * q_target**d > 0.5``.
    FeasibilityError
        If the attempt budget (default ``10**4 * m``) runs out.
    """
    if m < 1 or d < 1:
        raise ValueError("m and d must be positive")
    if not 0.0 < q_target <= 0.5:
        raise ValueError("q_target must lie in (0, 1/2]")
    if m * q_target**d > 0.5:
        raise ValueError(f"density guard violated: m * q**d = {m * q_target**d:.3g} > 0.5")
    _check_count(m)
    rng = np.random.default_rng(seed)
    if m == 1:
        return NodeSet(rng.random((1, d)), d)
    budget = 10_000 * m if max_attempts is None else max_attempts
    accepted = np.empty((m, d))
    count = 0
    used = 0
    batch = 256
    while count < m:
        if used >= budget:
            raise FeasibilityError(
                f"placed {count}/{m} nodes at separation {q_target} after {used} attempts"
            )
        cand = rng.random((min(batch, budget - used), d))
        for c in cand:
            used += 1
            if count == 0 or np.min(np.max(_circular(accepted[:count] - c), axis=-1)) >= q_target:
                accepted[count] = c
                count += 1
                if count == m:
                    break
    return NodeSet(accepted, d)


def satisfies_equality_condition(ns: NodeSet, n: int, tol: float = 1e-9) -> bool:
    """True iff every distinct pair differs by a nonzero multiple of ``1/n`` in some coordinate.

    This is exactly the condition under which the degree-``n`` Gram matrix
    equals ``n**d`` times the identity.
    """
    if len(ns) < 2:
        return True
    delta = ns.nodes[:, None, :] - ns.nodes[None, :, :]
    scaled = n * delta
    on_lattice = np.abs(scaled - np.round(scaled)) <= tol * n
    nonzero = _circular(delta) > tol
    good = np.any(on_lattice & nonzero, axis=-1)
    np.fill_diagonal(good, True)
    return bool(np.all(good))
