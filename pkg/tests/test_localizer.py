import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from vandal import localizer as lz
from vandal.errors import PreconditionError
from vandal.torus import NodeSet, gen_random_separated
from vandal.vandermonde import VandermondeSpec


def phi_hat_quad(v, r, h):
    f = lambda x: (1 - (2 * x / h) ** 2) ** r
    return 2 * quad(f, 0, h / 2, weight="cos", wvar=2 * math.pi * v, epsabs=1e-16, epsrel=1e-13)[0]


def conv_quad(x, r, h):
    lo, hi = max(-h / 2, x - h / 2), min(h / 2, x + h / 2)
    if hi <= lo:
        return 0.0
    return quad(lambda t: lz.phi(t, r, h) * lz.phi(x - t, r, h), lo, hi, epsabs=0, epsrel=1e-13)[0]


class TestPhiHat:
    @pytest.mark.parametrize("r", [1, 2, 3])
    @pytest.mark.parametrize("vh", [0.0, 0.2, 0.999, 1.0, 1.7, 6.3, 40.0])
    def test_against_quadrature(self, r, vh):
        h = 0.25
        v = vh / h
        assert lz.phi_hat(v, r, h) == pytest.approx(phi_hat_quad(v, r, h), abs=1e-14)

    def test_even_and_vectorized(self):
        v = np.array([-3.0, 3.0, 0.5])
        out = lz.phi_hat(v, 2, 0.4)
        assert out[0] == out[1] and out.shape == (3,)

    def test_envelope_dominates(self):
        h = 0.2
        v = np.linspace(1 / h, 300, 2000)
        for r in (1, 2, 3):
            assert np.all(np.abs(lz.phi_hat(v, r, h)) <= lz.phi_hat_envelope(v, r, h) * (1 + 1e-12))


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("x", [0.0, 0.05, -0.13, 0.21])
def test_autocorrelation_against_convolution(r, x):
    h = 0.25
    assert lz.phi_autocorrelation(r, h)(x) == pytest.approx(conv_quad(x, r, h), rel=1e-10, abs=1e-15)


def test_psi_d1_by_finite_differences():
    # d = 1, r = 1: psi = (2 pi b)^2 g + g''
    params = lz.PsiParams(1, 1, 3.0, 0.3)
    g = lambda x: conv_quad(x, 1, 0.3)
    step = 1e-3
    for x in (0.02, 0.1, -0.17):
        second = (g(x + step) - 2 * g(x) + g(x - step)) / step**2
        expect = (2 * math.pi * params.b) ** 2 * g(x) + second
        assert lz.psi_eval(np.array([x]), params) == pytest.approx(expect, rel=1e-5)


def test_psi_d2_by_finite_differences():
    params = lz.PsiParams(2, 1, 2.0, 0.35)
    g = lambda x: conv_quad(x, 1, 0.35)
    step = 1e-3

    def g2(x):
        return (g(x + step) - 2 * g(x) + g(x - step)) / step**2

    for x in ((0.03, -0.1), (0.2, 0.05)):
        expect = (2 * math.pi * params.b) ** 2 * g(x[0]) * g(x[1]) + g2(x[0]) * g(x[1]) + g(x[0]) * g2(x[1])
        assert lz.psi_eval(np.array(x), params) == pytest.approx(expect, rel=1e-5)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("r,v", [(1, 0.0), (1, 2.5), (2, 7.0), (3, 11.0)])
def test_psi_hat_is_fourier_transform_of_psi(r, v):
    params = lz.PsiParams(1, r, 4.0, 0.3)
    f = lambda x: lz.psi_eval(np.array([x]), params)
    num = 2 * quad(f, 0, params.h, weight="cos", wvar=2 * math.pi * v, epsabs=0, epsrel=1e-12)[0]
    scale = lz.psi_hat_at_zero(params)
    assert lz.psi_hat(np.array([v]), params) == pytest.approx(num, abs=1e-9 * scale)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_closed_forms_at_zero(d, r):
    params = lz.PsiParams(d, r, 5.0, lz.positivity_threshold(d, r, 5.0) * 1.3)
    assert lz.psi_eval(np.zeros(d), params) == pytest.approx(lz.psi_at_zero(params), rel=1e-10)
    assert lz.psi_hat(np.zeros(d), params) == pytest.approx(lz.psi_hat_at_zero(params), rel=1e-12)
    ratio = lz.psi_at_zero(params) / lz.psi_hat_at_zero(params)
    assert lz.ratio_closed_form(params) == pytest.approx(ratio, rel=1e-12)


def test_support_and_symmetry():
    params = lz.PsiParams(2, 2, 3.0, 0.3)
    rng = np.random.default_rng(0)
    x = rng.uniform(-0.5, 0.5, size=(500, 2))
    vals = lz.psi_eval(x, params)
    assert np.all(vals[np.any(np.abs(x) >= 0.3, axis=1)] == 0.0)
    assert np.allclose(vals, lz.psi_eval(-x, params), rtol=1e-12, atol=0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.floats(1.0, 50.0), st.floats(1.0, 3.0),
       st.floats(0.0, 1.0), st.integers(0, 2**31))
def test_sign_pattern(d, r, b, factor, radius, seed):
    params = lz.PsiParams(d, r, b, lz.positivity_threshold(d, r, b) * factor)
    direction = np.random.default_rng(seed).normal(size=d)
    direction /= np.sum(np.abs(direction) ** params.p) ** (1 / params.p)
    top = lz.psi_hat_at_zero(params)
    inner = lz.psi_hat(direction * b * radius, params)
    outer = lz.psi_hat(direction * b * (1 + 5 * radius), params)
    assert inner >= -1e-12 * top
    assert outer <= 1e-12 * top
    assert max(inner, outer) <= top * (1 + 1e-12)


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            lz.PsiParams(0, 1, 1.0, 0.1)
        with pytest.raises(ValueError):
            lz.PsiParams(1, 21, 1.0, 0.1)
        with pytest.raises(ValueError):
            lz.PsiParams(1, 1, -1.0, 0.1)

    def test_threshold_and_positivity(self):
        thr = lz.positivity_threshold(3, 2, 7.0)
        assert thr == pytest.approx(11 / (math.e * math.pi) * 3 ** 0.25 / 7.0)
        assert lz.PsiParams(3, 2, 7.0, thr).positive
        assert not lz.PsiParams(3, 2, 7.0, thr * 0.99).positive
        assert lz.psi_at_zero(lz.PsiParams(3, 2, 7.0, thr)) > 0

    def test_log_d_order(self):
        assert [lz.r_for_log_d(d) for d in (1, 2, 3, 7, 8, 21)] == [1, 1, 2, 2, 3, 4]

    def test_regime_h(self):
        assert lz.h_for_regime(5, 2, 3.0, "h_of_p") == lz.positivity_threshold(5, 2, 3.0)
        assert lz.h_for_regime(5, 3, 3.0, "log_d") == lz.positivity_threshold(5, 2, 3.0)
        with pytest.raises(ValueError):
            lz.h_for_regime(5, 2, 3.0, "general")


class TestRatioBounds:
    def test_general_below_exact(self):
        params = lz.PsiParams(3, 2, 10.0, 0.2)
        assert lz.ratio_lower_bounds(params, "general") <= lz.ratio_closed_form(params)

    @pytest.mark.parametrize("d", [1, 4, 30])
    @pytest.mark.parametrize("r", [1, 2, 5])
    def test_h_of_p_below_exact(self, d, r):
        params = lz.PsiParams(d, r, 6.0, lz.positivity_threshold(d, r, 6.0))
        assert lz.ratio_lower_bounds(params, "h_of_p") <= lz.ratio_closed_form(params)

    def test_log_d_below_exact(self):
        d = 12
        r = lz.r_for_log_d(d)
        params = lz.PsiParams(d, r, 6.0, lz.positivity_threshold(d, r, 6.0))
        assert lz.ratio_lower_bounds(params, "log_d") <= lz.ratio_closed_form(params)

    def test_regime_preconditions(self):
        params = lz.PsiParams(2, 1, 6.0, 0.3)
        with pytest.raises(PreconditionError):
            lz.ratio_lower_bounds(params, "h_of_p")
        d = 12
        wrong = lz.PsiParams(d, 2, 6.0, lz.positivity_threshold(d, 2, 6.0))
        with pytest.raises(PreconditionError):
            lz.ratio_lower_bounds(wrong, "log_d")
        with pytest.raises(ValueError):
            lz.ratio_lower_bounds(params, "bogus")

    def test_exact_bracket_reaches_half_for_every_order(self):
        for r in range(1, 11):
            params = lz.PsiParams(7, r, 2.0, lz.positivity_threshold(7, r, 2.0))
            assert lz.bracket_exact(params) >= 0.5

    def test_simplified_bracket_is_below_exact(self):
        for r in range(1, 11):
            params = lz.PsiParams(3, r, 2.0, lz.positivity_threshold(3, r, 2.0))
            assert lz.bracket_simplified(r, 3) <= lz.bracket_exact(params)

    def test_overflowing_ratio_saturates(self):
        params = lz.PsiParams(1000, 10, 11.0, lz.positivity_threshold(1000, 10, 11.0))
        assert lz.ratio_closed_form(params) == math.inf


class TestPoisson:
    def test_single_node(self):
        params = lz.PsiParams(1, 1, 2.0, 0.5)
        spec = VandermondeSpec(NodeSet([[0.3]]), 5)
        diag = lz.poisson_check(spec, params, [1.0])
        psi0 = lz.psi_at_zero(params)
        assert diag.mid == pytest.approx(psi0, rel=1e-12)
        assert diag.rhs == pytest.approx(psi0, rel=1e-12)
        assert abs(diag.lhs - diag.mid) <= diag.tail_estimate
        assert diag.tail_estimate < 1e-8 * lz.psi_hat_at_zero(params) or diag.truncation > 4

    def test_two_separated_nodes(self):
        params = lz.PsiParams(1, 2, 7.5, 0.3)
        spec = VandermondeSpec(NodeSet([[0.1], [0.55]]), 16)
        u = np.array([0.3 - 1j, 1.2 + 0.4j])
        diag = lz.poisson_check(spec, params, u, truncation=64)
        assert diag.mid == pytest.approx(diag.rhs, rel=1e-10)
        assert diag.sandwich >= diag.lhs

    def test_d2_truncation_sweep(self):
        params = lz.PsiParams(2, 1, 1.5, 0.5)
        spec = VandermondeSpec(NodeSet([[0.0, 0.0], [0.5, 0.5]]), 4)
        u = np.array([1.0 + 0.5j, -0.7j])
        gaps = []
        for t in (2, 4, 8):
            diag = lz.poisson_check(spec, params, u, truncation=t)
            gaps.append(abs(diag.lhs - diag.mid))
            assert gaps[-1] <= diag.tail_estimate
        assert gaps[0] > gaps[1] > gaps[2]

    def test_tail_estimate_dominates_and_shrinks(self):
        ns = gen_random_separated(3, 1, 0.15, seed=4)
        params = lz.PsiParams(1, 1, 15.5, ns.separation)
        spec = VandermondeSpec(ns, 32)
        u = np.array([1.0, -2.0j, 0.5])
        tails = []
        for t in (2, 8, 32, 128):
            diag = lz.poisson_check(spec, params, u, truncation=t)
            assert abs(diag.lhs - diag.mid) <= diag.tail_estimate
            tails.append(diag.tail_estimate)
        assert tails == sorted(tails, reverse=True)

    def test_not_separated(self):
        params = lz.PsiParams(1, 1, 2.0, 0.3)
        spec = VandermondeSpec(NodeSet([[0.1], [0.3]]), 5)
        with pytest.raises(PreconditionError):
            lz.poisson_check(spec, params, [1.0, 1.0], truncation=4)

    def test_h_too_large(self):
        params = lz.PsiParams(1, 1, 2.0, 0.6)
        with pytest.raises(PreconditionError):
            lz.poisson_check(VandermondeSpec(NodeSet([[0.1]]), 5), params, [1.0], truncation=4)

    def test_shape_errors(self):
        params = lz.PsiParams(1, 1, 2.0, 0.3)
        spec = VandermondeSpec(NodeSet([[0.1], [0.6]]), 5)
        with pytest.raises(ValueError):
            lz.poisson_check(spec, params, [1.0], truncation=4)
        with pytest.raises(ValueError):
            lz.poisson_check(spec, lz.PsiParams(2, 1, 2.0, 0.3), [1.0, 1.0], truncation=4)

    def test_diagnostic_dict(self):
        params = lz.PsiParams(1, 1, 2.0, 0.5)
        diag = lz.poisson_check(VandermondeSpec(NodeSet([[0.3]]), 5), params, [1.0], truncation=8)
        assert set(diag.to_dict()) == {"lhs", "mid", "rhs", "sandwich", "truncation", "tail_estimate"}
