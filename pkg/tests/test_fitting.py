import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from weilheights.enumeration import CountSeries, geometric_ladder, moebius_count_series
from weilheights.errors import DegenerateWindow, InsufficientRungs
from weilheights.fitting import fit_asymptotic, fit_window
from weilheights.nfcore import rationals


def synthetic(a, b, c, ladder):
    return CountSeries(list(ladder), [c * B ** a * math.log(B) ** (b - 1) for B in ladder])


LADDER12 = geometric_ladder(10, 2, 12)


def test_synthetic_exactness():
    fit = fit_asymptotic(synthetic(2, 2, 7, LADDER12))
    assert abs(fit.a - 2) < 1e-6 and abs(fit.b - 2) < 1e-6 and abs(fit.c / 7 - 1) < 1e-6
    fit = fit_asymptotic(synthetic(3, 1, 1, LADDER12))
    assert abs(fit.b - 1) < 1e-6


@given(a=st.floats(1, 4), b=st.integers(1, 4), c=st.floats(0.1, 10))
def test_synthetic_triples(a, b, c):
    fit = fit_asymptotic(synthetic(a, b, c, LADDER12))
    assert abs(fit.a - a) <= 1e-6 * a
    assert abs(fit.b - b) <= 1e-6 * b
    assert abs(fit.c - c) <= 1e-6 * c


def test_fifty_random_triples():
    rng = random.Random(0)
    for _ in range(50):
        a, b, c = rng.uniform(1, 4), rng.randint(1, 4), rng.uniform(0.1, 10)
        fit = fit_asymptotic(synthetic(a, b, c, LADDER12))
        assert max(abs(fit.a / a - 1), abs(fit.b / b - 1), abs(fit.c / c - 1)) <= 1e-6


def test_fix_a_no_worse_than_free():
    rng = np.random.default_rng(5)
    for _ in range(10):
        a, b, c = rng.uniform(1, 4), int(rng.integers(1, 5)), rng.uniform(0.1, 10)
        s = synthetic(a, b, c, LADDER12)
        noisy = CountSeries(s.ladder, [N * math.exp(rng.normal(0, 1e-3)) for N in s.counts])
        free = fit_asymptotic(noisy)
        fixed = fit_asymptotic(noisy, "fix_a", a=a)
        r_free = math.sqrt(sum(r[3] ** 2 for r in free.residuals) / len(free.residuals))
        r_fix = math.sqrt(sum(r[3] ** 2 for r in fixed.residuals) / len(fixed.residuals))
        assert r_fix - r_free <= 3 * max(free.se_a, 1e-12) * math.log(max(s.ladder))
        assert abs(fixed.b - b) <= max(5 * fixed.se_b, 1e-3)


def test_window_is_top_half():
    assert fit_window(list(range(12))) == list(range(6, 12))
    fit = fit_asymptotic(synthetic(2, 1, 1, LADDER12))
    assert fit.window == LADDER12[6:]
    assert set(fit.window) <= set(LADDER12)


def test_errors():
    with pytest.raises(InsufficientRungs):
        fit_asymptotic(synthetic(2, 1, 1, [3, 5, 9, 17, 33]))
    with pytest.raises(InsufficientRungs):
        fit_asymptotic(synthetic(2, 1, 1, [1, 2, 3, 4, 5, 6, 7]))
    flat = CountSeries([10] * 12, [100] * 12)
    with pytest.raises(DegenerateWindow):
        fit_asymptotic(flat)
    zero = CountSeries(LADDER12, [0] * 12)
    with pytest.raises(DegenerateWindow):
        fit_asymptotic(zero)


def test_p2_slope_free():
    ladder = geometric_ladder(10, 2, 14)
    s = CountSeries(ladder, list(moebius_count_series(rationals(), 2, ladder)))
    fit = fit_asymptotic(s, "free")
    assert abs(fit.a - 3) < 0.05
