import math
from fractions import Fraction

import pytest
from scipy.special import zeta

from vandal.special import MAX_HALF_INT, gamma_half, gamma_half_ratio, zeta_int


@pytest.mark.parametrize("n", [0, 1, 2, 5, 13, 40, MAX_HALF_INT])
def test_gamma_half_against_math_gamma(n):
    assert gamma_half(n) == pytest.approx(math.gamma(n + 0.5), rel=1e-14)


def test_gamma_half_ratio_exact():
    assert gamma_half_ratio(0) == 1
    assert gamma_half_ratio(1) == Fraction(1, 2)
    assert gamma_half_ratio(3) == Fraction(15, 8)


def test_gamma_half_range():
    with pytest.raises(ValueError):
        gamma_half(-1)
    with pytest.raises(ValueError):
        gamma_half(MAX_HALF_INT + 1)


@pytest.mark.parametrize("s", [3, 4, 5, 8, 13])
def test_zeta_against_scipy(s):
    assert zeta_int(s) == pytest.approx(float(zeta(s)), rel=1e-14)


def test_zeta_three():
    assert zeta_int(3) == pytest.approx(1.2020569031595942, rel=1e-15)


def test_zeta_rejects_invalid():
    with pytest.raises(ValueError):
        zeta_int(2)
    with pytest.raises(ValueError):
        zeta_int(2.5)
