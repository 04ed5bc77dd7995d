"""Exact series arithmetic: frozen examples, ring laws, reversion."""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockmaps.series import (
    CompositionError,
    ReversionError,
    DivergenceError,
    Series,
    lagrange_coefficient,
    series_from_text,
    series_to_text,
    solve_fixed_point,
)


def catalan(n: int) -> int:
    from math import comb
    return comb(2 * n, n) // (n + 1)


def catalan_series(order: int) -> Series:
    return Series([catalan(n) for n in range(order + 1)], order)


# ------------------------------------------------------------ add / mul


def test_add_cancellation():
    a = Series([1, 1], 1)
    b = Series([1, -1], 1)
    assert (a + b).coeffs == [2, 0]


def test_add_identity():
    s = Series([3, 5, 7], 2)
    assert (Series.zero(2) + s) == s


def test_add_componentwise():
    a = Series([0, 2, 9], 2)
    b = Series([0, 1, 1], 2)
    assert (a + b).coeffs == [0, 3, 10]


def test_mul_difference_of_squares():
    a = Series([1, 1, 0], 2)
    b = Series([1, -1, 0], 2)
    assert (a * b).coeffs == [1, 0, -1]


def test_mul_geometric_inverse_pair():
    n = 12
    g = Series.geometric(n)
    one_minus_z = Series([1, -1] + [0] * (n - 1), n)
    assert (g * one_minus_z) == Series.one(n)


def test_mul_catalan_recurrence():
    # z C(z)^2 = C(z) - 1, the Catalan convolution identity
    n = 16
    C = catalan_series(n)
    zC2 = (C * C).shift(1)
    assert zC2 == C - Series.one(n)


def test_mixed_order_truncates_to_min():
    a = Series([1, 2, 3, 4], 3)
    b = Series([1, 1], 1)
    assert (a + b).order == 1
    assert (a * b).order == 1


# ------------------------------------------------------------ compose


def test_compose_geometric():
    outer = Series.geometric(8)  # 1/(1-X)
    inner = Series.identity(8)
    assert outer.compose(inner) == outer


def test_compose_square():
    outer = Series([0, 0, 1], 4)  # X^2
    inner = Series([0, 1, 1, 0, 0], 4)  # z(1+z)
    assert outer.compose(inner).coeffs == [0, 0, 1, 2, 1]


def test_compose_rejects_nonzero_constant():
    with pytest.raises(CompositionError):
        Series.one(4).compose(Series.one(4))


def test_compose_blocks_reproduces_map_series():
    # B(z(1+M)^2) = M for the 2-connected decomposition of all maps;
    # first block counts from the brute-force oracle.
    n = 4
    B = Series([0, 2, 1, 2, 6], n)
    M = Series([0, 2, 9, 54, 378], n)
    H = (Series.one(n) + M).pow(2).shift(1)
    assert B.compose(H) == M


# ----------------------------------------------------------- reversion


def test_reversion_identity():
    z = Series.identity(8)
    assert z.reversion() == z


def test_reversion_moebius_pair():
    n = 10
    h = Series([0] + [1] * n, n)              # z/(1-z)
    g = Series([0] + [(-1) ** (k - 1) for k in range(1, n + 1)], n)  # z/(1+z)
    assert h.reversion() == g


def test_reversion_frozen_example():
    h = Series([0, 1, 2, 1, 0, 0, 0], 6)      # z(1+z)^2
    g = h.reversion()
    assert g.coeffs[1:4] == [Fraction(1), Fraction(-2), Fraction(7)]
    assert h.compose(g) == Series.identity(6)


def test_reversion_requires_valid_input():
    with pytest.raises(ReversionError):
        Series([1, 1], 1).reversion()
    with pytest.raises(ReversionError):
        Series([0, 0, 1], 2).reversion()


# ------------------------------------------------------------ lagrange


def test_lagrange_geometric_gives_catalan():
    phi = Series.geometric(16)
    assert lagrange_coefficient(phi, 4) == catalan(3) == 5
    for n in range(1, 10):
        assert lagrange_coefficient(phi, n) == catalan(n - 1)


def test_lagrange_binary():
    from math import comb
    phi = Series([1, 2, 1], 8)  # (1+X)^2
    assert lagrange_coefficient(phi, 2) == 2
    for n in range(1, 8):
        assert lagrange_coefficient(phi, n) == Fraction(comb(2 * n, n - 1), n)


def test_lagrange_trivial_phi():
    phi = Series.one(8)
    assert lagrange_coefficient(phi, 1) == 1
    assert lagrange_coefficient(phi, 5) == 0
    with pytest.raises(ValueError):
        lagrange_coefficient(phi, 0)


# --------------------------------------------------------- fixed point


def test_fixed_point_geometric():
    n = 12
    sol = solve_fixed_point(lambda M: (Series.one(n) + M).shift(1), n)
    assert sol == Series([0] + [1] * n, n)


def test_fixed_point_catalan():
    n = 12
    sol = solve_fixed_point(lambda M: (Series.one(n) + M).pow(2).shift(1), n)
    assert [sol[k] for k in range(1, 6)] == [1, 2, 5, 14, 42]


def test_fixed_point_divergence_error():
    with pytest.raises(DivergenceError):
        solve_fixed_point(lambda M: M + Series.one(8), 8)


def test_lagrange_matches_fixed_point():
    n = 64
    phi = Series([3, 1, 4, 1, 5] + [0] * (n - 4), n)
    sol = solve_fixed_point(lambda M: phi.compose(M).shift(1), n)
    for m in (1, 2, 7, 33, 64):
        assert lagrange_coefficient(phi, m) == sol[m]


# -------------------------------------------------------- text round trip


def test_text_round_trip():
    s = Series([Fraction(3, 7), Fraction(-2), Fraction(0), Fraction(22, 9)], 3)
    assert series_from_text(series_to_text(s)) == s
    assert series_to_text(s).splitlines()[0] == "order=3"


@given(st.lists(st.fractions(max_denominator=50), min_size=1, max_size=9))
@settings(max_examples=60, deadline=None)
def test_text_round_trip_random(coeffs):
    s = Series(coeffs)
    t = series_to_text(s)
    assert series_from_text(t).coeffs == s.coeffs


# ------------------------------------------------------------ ring laws

small_series = st.builds(
    lambda c: Series(c, 5),
    st.lists(st.integers(min_value=-9, max_value=9), min_size=6, max_size=6),
)


@given(small_series, small_series, small_series)
@settings(max_examples=80, deadline=None)
def test_mul_associativity_distributivity(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(st.lists(st.integers(min_value=-6, max_value=6), min_size=5, max_size=5))
@settings(max_examples=60, deadline=None)
def test_reversion_round_trip_random(tail):
    h = Series([0, 1] + tail, 6)
    g = h.reversion()
    assert g.compose(h) == Series.identity(6)
    assert h.compose(g) == Series.identity(6)
