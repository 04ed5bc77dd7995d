"""Singularity data, offspring laws, critical points, exponents."""
import math
from fractions import Fraction

import mpmath as mp
import pytest

import blockmaps.reference as ref
import blockmaps.transition as T


def rel_err(got, want: Fraction) -> float:
    with mp.workprec(200):
        wv = mp.mpf(want.numerator) / want.denominator
        return float(abs(got - wv) / abs(wv))


def test_scheme2_u1_anchors():
    tp = T.singular_point(2, 1, N=256)
    assert rel_err(tp.rho, Fraction(1, 12)) < 1e-12
    assert rel_err(tp.y, Fraction(1, 3)) < 1e-12
    assert rel_err(tp.mean, Fraction(2, 3)) < 1e-12
    assert tp.regime == "subcritical"
    assert tp.rho_ratio_estimate is not None


def test_scheme4_u1_anchors():
    tp = T.singular_point(4, 1, cross_check=False)
    assert rel_err(tp.rho, Fraction(1, 8)) < 1e-12
    assert rel_err(tp.y, Fraction(1, 4)) < 1e-12
    assert rel_err(1 - tp.mean, Fraction(5, 9)) < 1e-11


def test_scheme8_u1_anchors():
    tp = T.singular_point(8, 1, cross_check=False)
    assert rel_err(tp.rho, Fraction(27, 256)) < 1e-12
    assert rel_err(tp.mean, Fraction(1, 2)) < 1e-12


def test_scheme3_published_y_offset():
    u = Fraction(2)
    tp = T.singular_point(3, u, cross_check=False)
    assert rel_err(tp.y, ref.y_value(3, u)) < 1e-12


def test_supercritical_mean_is_one():
    for k, u in ((2, Fraction(5)), (1, Fraction(6)), (8, Fraction(3))):
        tp = T.singular_point(k, u, cross_check=False)
        assert tp.regime == "supercritical"
        assert abs(float(tp.mean) - 1.0) < 1e-8


def test_rho_monotone_in_u():
    prev = None
    for u in (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(9, 5),
              Fraction(3), Fraction(5)):
        tp = T.singular_point(2, u, cross_check=False)
        if prev is not None:
            assert float(tp.rho) <= prev + 1e-15
        prev = float(tp.rho)


def test_rejects_nonpositive_u():
    with pytest.raises(ValueError):
        T.singular_point(2, 0)
    with pytest.raises(ValueError):
        T.offspring_law(2, Fraction(-1))


def test_find_critical_examples():
    for k in (1, 2, 8):
        uc, residual = T.find_critical_u(k)
        assert rel_err(uc, ref.CRITICAL_U[k]) < 1e-9
        assert float(residual) < 1e-10


def test_offspring_law_scheme2_u1():
    law = T.offspring_law(2, 1, N=512)
    assert abs(law.mean - 2 / 3) < 1e-12
    # truncated empirical mean lies below, tail is positive and small
    assert 0 < law.tail_mass < 1e-4
    assert law.empirical_mean() < law.mean
    assert law.support_stride == 2
    assert law.probs[0] == pytest.approx(3 / 4, abs=1e-12)
    assert sum(law.probs[1::2]) == 0


def test_offspring_law_critical_mean_one():
    law = T.offspring_law(2, Fraction(9, 5), N=256)
    assert abs(law.mean - 1) < 1e-10
    assert law.regime == "critical"


def test_offspring_law_small_u_degenerates():
    law = T.offspring_law(2, Fraction(1, 10**6), N=64)
    assert law.probs[0] > 1 - 1e-5


def test_offspring_tail_exponent():
    # local exponent of mu(k) ~ C k^(-5/2) fitted on the tabulated tail
    for u in (Fraction(1), ref.CRITICAL_U[2]):
        law = T.offspring_law(2, u, N=2048)
        ks = [k for k in range(64, 2049) if law.probs[k] > 0]
        xs = [math.log(k) for k in ks]
        ys = [math.log(law.probs[k]) for k in ks]
        n = len(xs)
        xbar = sum(xs) / n
        ybar = sum(ys) / n
        slope = (sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
                 / sum((x - xbar) ** 2 for x in xs))
        assert abs(-slope - 2.5) < 0.2, (u, slope)


def test_exponent_estimate_subcritical_fast():
    fit = T.exponent_estimate(2, 1, N=512)
    assert abs(fit.alpha_estimate - 2.5) < 0.02
    assert fit.regime == "subcritical"
    assert fit.n_range == (128, 512)


@pytest.mark.slow
def test_exponent_estimate_supercritical():
    fit = T.exponent_estimate(2, Fraction(18, 5), N=768)
    assert abs(fit.alpha_estimate - 1.5) < 0.05
    assert fit.regime == "supercritical"


@pytest.mark.slow
def test_exponent_estimate_critical():
    fit = T.exponent_estimate(2, Fraction(9, 5), N=1024)
    assert abs(fit.alpha_estimate - 5 / 3) < 0.05
    assert fit.regime == "critical"


def test_ratio_cross_check_runs():
    tp = T.singular_point(5, Fraction(1, 2), N=384)
    assert tp.rho_ratio_estimate is not None
    assert float(abs(tp.rho_ratio_estimate - tp.rho) / tp.rho) < 1e-4
