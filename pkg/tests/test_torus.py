import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vandal.errors import FeasibilityError, NoPairsError, ResourceCapError
from vandal.torus import (
    NodeSet,
    gen_equispaced,
    gen_grid_subset,
    gen_quasi_grid,
    gen_random_separated,
    pairwise_wrap_distances,
    reduce_to_torus,
    satisfies_equality_condition,
    separation,
    wrap_distance,
)

unit = st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False)


def shift_oracle(t, s):
    """Max-norm distance minimized over all integer shifts in {-1, 0, 1}^d."""
    t, s = np.asarray(t, float), np.asarray(s, float)
    best = np.inf
    for k in itertools.product((-1, 0, 1), repeat=t.size):
        best = min(best, float(np.max(np.abs(t - s + np.array(k)))))
    return best


def brute_separation(nodes):
    best = np.inf
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            best = min(best, shift_oracle(nodes[i], nodes[j]))
    return best


class TestWrapDistance:
    def test_wraps_across_zero(self):
        assert wrap_distance([0.1], [0.9]) == pytest.approx(0.2)

    def test_max_over_coordinates(self):
        assert wrap_distance([0.0, 0.05], [0.5, 0.95]) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            wrap_distance([0.1, 0.2], [0.3])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 4).flatmap(lambda d: st.tuples(st.lists(unit, min_size=d, max_size=d),
                                                         st.lists(unit, min_size=d, max_size=d))))
    def test_matches_shift_oracle(self, pair):
        t, s = pair
        assert wrap_distance(t, s) == pytest.approx(shift_oracle(t, s), abs=1e-15)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(unit, min_size=3, max_size=3), st.lists(unit, min_size=3, max_size=3),
           st.lists(unit, min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
    def test_metric_properties(self, a, b, c, shift):
        dab = wrap_distance(a, b)
        assert 0.0 <= dab <= 0.5
        assert dab == pytest.approx(wrap_distance(b, a), abs=1e-15)
        assert dab <= wrap_distance(a, c) + wrap_distance(c, b) + 1e-12
        moved = np.asarray(a) + np.asarray(shift)
        assert wrap_distance(moved, b) == pytest.approx(dab, abs=1e-12)

    def test_pairwise_matrix(self):
        rng = np.random.default_rng(3)
        nodes = rng.random((6, 2))
        mat = pairwise_wrap_distances(nodes)
        for i, j in itertools.product(range(6), repeat=2):
            assert mat[i, j] == pytest.approx(shift_oracle(nodes[i], nodes[j]), abs=1e-15)


class TestNodeSet:
    def test_reduces_modulo_one(self):
        ns = NodeSet([[1.25, -0.25]])
        assert ns.nodes.tolist() == [[0.25, 0.75]]

    def test_tiny_negative_does_not_round_to_one(self):
        out = reduce_to_torus(np.array([-1e-20]))
        assert 0.0 <= out[0] < 1.0

    def test_rejects_duplicates_after_reduction(self):
        with pytest.raises(ValueError):
            NodeSet([[0.25], [1.25]])

    def test_rejects_empty_and_nonfinite(self):
        with pytest.raises(ValueError):
            NodeSet(np.empty((0, 2)))
        with pytest.raises(ValueError):
            NodeSet([[np.nan]])

    def test_read_only(self):
        ns = NodeSet([[0.1], [0.4]])
        with pytest.raises(ValueError):
            ns.nodes[0, 0] = 0.3

    def test_single_node_has_no_separation(self):
        ns = NodeSet([[0.3, 0.3]])
        with pytest.raises(NoPairsError):
            ns.separation
        assert ns.cached_separation is None

    def test_separation_cached(self):
        ns = NodeSet([[0.1], [0.4], [0.8]])
        assert ns.cached_separation is None
        assert separation(ns) == pytest.approx(0.3)
        assert ns.cached_separation == pytest.approx(0.3)

    def test_json_round_trip_is_exact(self):
        rng = np.random.default_rng(0)
        ns = NodeSet(rng.random((7, 3)))
        back = NodeSet.from_json(ns.to_json())
        assert back == ns
        assert set(json.loads(ns.to_json())) == {"dim", "nodes"}

    def test_text_round_trip_with_comments(self):
        rng = np.random.default_rng(1)
        ns = NodeSet(rng.random((5, 2)))
        text = "# header\n\n" + ns.to_text()
        assert NodeSet.from_text(text) == ns

    def test_text_rejects_ragged(self):
        with pytest.raises(ValueError):
            NodeSet.from_text("0.1 0.2\n0.3\n")

    def test_equality_and_hash(self):
        a = NodeSet([[0.25], [0.5]])
        b = NodeSet([[1.25], [0.5]])
        assert a == b and hash(a) == hash(b)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.integers(1, 3), st.integers(0, 2**31))
def test_separation_matches_brute_force(m, d, seed):
    nodes = np.random.default_rng(seed).random((m, d))
    assert NodeSet(nodes).separation == pytest.approx(brute_separation(nodes), abs=1e-15)


def test_separation_large_set_blocked_path():
    rng = np.random.default_rng(5)
    nodes = rng.random((700, 1))
    srt = np.sort(nodes[:, 0])
    gaps = np.diff(np.concatenate([srt, [srt[0] + 1]]))
    assert NodeSet(nodes).separation == pytest.approx(gaps.min(), abs=1e-15)


class TestGenerators:
    def test_equispaced(self):
        ns = gen_equispaced(3, 2)
        assert len(ns) == 9
        assert ns.separation == pytest.approx(1 / 3)
        assert brute_separation(ns.nodes) == pytest.approx(1 / 3)

    def test_equispaced_single(self):
        assert len(gen_equispaced(1, 3)) == 1

    def test_equispaced_cap(self):
        with pytest.raises(ResourceCapError):
            gen_equispaced(300, 2)

    @pytest.mark.parametrize("m,d,q", [(10, 2, 0.05), (12, 1, 0.04), (6, 3, 0.3)])
    def test_random_separated_meets_target(self, m, d, q):
        ns = gen_random_separated(m, d, q, seed=42)
        assert len(ns) == m and ns.dim == d
        assert brute_separation(ns.nodes) >= q

    def test_random_is_deterministic(self):
        assert gen_random_separated(8, 2, 0.1, seed=9) == gen_random_separated(8, 2, 0.1, seed=9)
        assert gen_random_separated(8, 2, 0.1, seed=9) != gen_random_separated(8, 2, 0.1, seed=10)

    def test_density_guard(self):
        with pytest.raises(ValueError):
            gen_random_separated(3, 1, 0.2, seed=0)

    def test_bad_target(self):
        with pytest.raises(ValueError):
            gen_random_separated(2, 1, 0.0, seed=0)
        with pytest.raises(ValueError):
            gen_random_separated(2, 1, 0.6, seed=0)

    def test_budget_exhaustion(self):
        with pytest.raises(FeasibilityError):
            gen_random_separated(12, 2, 0.2, seed=0, max_attempts=15)

    @pytest.mark.parametrize("seed", range(5))
    def test_quasi_grid_equality_condition(self, seed):
        ns = gen_quasi_grid(4, 2, seed)
        assert satisfies_equality_condition(ns, 4)

    def test_quasi_grid_needs_two_dims(self):
        with pytest.raises(ValueError):
            gen_quasi_grid(4, 1, 0)

    def test_grid_subset(self):
        ns = gen_grid_subset(5, 3, 20, seed=2)
        assert len(ns) == 20
        assert satisfies_equality_condition(ns, 5)

    def test_equality_condition_negative(self):
        assert not satisfies_equality_condition(NodeSet([[0.0], [0.1]]), 4)
