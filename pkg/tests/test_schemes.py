"""Scheme registry, fixtures, block extraction, weighted solving."""
import shutil
from fractions import Fraction

import pytest

import blockmaps.schemes as S
from blockmaps import curves
from blockmaps.series import Series, lagrange_coefficient


def test_load_scheme_rows():
    sp2 = S.load_scheme(2)
    assert sp2.map_family == "all_maps"
    assert sp2.h_exponent == 2 and sp2.tree_size == (2, 1)
    sp7 = S.load_scheme(7)
    assert sp7.h_exponent == 3
    assert sp7.block_symbol == "z+zT2"
    sp8 = S.load_scheme(8)
    assert sp8.equation_form == "EQ2"
    assert sp8.lagrangian_recipe == "sequence"
    with pytest.raises(KeyError):
        S.load_scheme(9)


def test_h_exponents_match_table():
    d = {sp.id: sp.h_exponent for sp in S.all_schemes()}
    assert d == {1: 1, 2: 2, 3: 1, 4: 1, 5: 2, 6: 1, 7: 3, 8: 2}
    assert all(sp.equation_form == ("EQ2" if sp.id == 8 else "EQ1")
               for sp in S.all_schemes())


def test_base_series_anchor_values():
    M = S.base_series("all_maps", 4)
    assert [int(c) for c in M.coeffs] == [0, 2, 9, 54, 378]
    L = S.base_series("loopless_maps", 4)
    assert [int(c) for c in L.coeffs] == [0, 1, 3, 13, 68]


def test_base_series_partial_sums_approach_table_value():
    # scheme 2 at u=1: sum m_n (1/12)^n increases toward M(rho(1),1) = 1/3
    M = S.base_series("all_maps", 200)
    rho = Fraction(1, 12)
    partial = sum(M[n] * rho**n for n in range(1, 201))
    assert Fraction(32, 100) < partial < Fraction(1, 3)
    shorter = sum(M[n] * rho**n for n in range(1, 101))
    assert shorter < partial


def test_fixture_validation_and_stamp(tmp_path, monkeypatch):
    src = S.FIXTURES_DIR
    dst = tmp_path / "fixtures"
    shutil.copytree(src, dst)
    monkeypatch.setattr(S, "FIXTURES_DIR", dst)
    (dst / "all_maps.txt").write_text(
        (dst / "all_maps.txt").read_text().replace(
            "validated_to: 4", "validated_to: -1").replace(
            "validated_to: 5", "validated_to: -1"))
    with pytest.raises(S.FixtureError):
        S.fixture_curve("all_maps")
    S.validate_fixture("all_maps", depth=4)
    assert S.read_fixture("all_maps")[2] >= 4
    assert S.fixture_curve("all_maps") == curves.P_ALL_MAPS


def test_fixture_rejects_wrong_counts(tmp_path, monkeypatch):
    src = S.FIXTURES_DIR
    dst = tmp_path / "fixtures"
    shutil.copytree(src, dst)
    monkeypatch.setattr(S, "FIXTURES_DIR", dst)
    text = (dst / "all_maps.txt").read_text().replace(
        "poly: 1 0 -2", "poly: 1 0 -3")
    (dst / "all_maps.txt").write_text(text)
    with pytest.raises(S.FixtureError):
        S.validate_fixture("all_maps", depth=3)


def test_extraction_matches_curve_and_is_integral():
    for sp in S.all_schemes():
        ext = S.extract_block_series(sp, 40)
        assert ext == S.block_series(sp, 40)
        assert all(c.denominator == 1 and c >= 0 for c in ext.coeffs)


def test_scheme2_block_convention_order2():
    # 8 + b_2 = 9 at order 2 of M = B(z(1+M)^2)
    B = S.block_series(2, 4)
    assert B[1] == 2 and B[2] == 1


def test_chain_adjustments():
    N = 48
    b2 = S.family_series_int("two_connected", N)
    m3 = S.family_series_int("two_connected_less_edge", N)
    assert all(b2[n] == m3[n] + (1 if n == 1 else 0) for n in range(1, N + 1))
    b7 = S.family_series_int("tri_blocks", N)
    t2 = S.family_series_int("simple_triangulations", N)
    assert b7[1] == 1
    assert all(b7[n] == t2[n - 1] for n in range(2, N + 1))


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 7, 8])
def test_weighted_at_u1_is_base_series(k):
    sp = S.load_scheme(k)
    assert S.solve_weighted(sp, 1, 24) == S.map_series(sp, 24)


@pytest.mark.parametrize("k", [2, 3, 7, 8])
def test_solver_methods_agree(k):
    for u in (Fraction(1, 2), Fraction(2)):
        a = S.solve_weighted(k, u, 18, method="curve")
        b = S.solve_weighted(k, u, 18, method="fixed-point")
        c = S.solve_weighted(k, u, 18, method="newton")
        assert a == b == c


def test_weighted_order1_is_u_b1():
    for sp in S.all_schemes():
        b1 = S.block_series(sp, 1)[1]
        for u in (Fraction(1, 3), Fraction(7, 2)):
            M = S.solve_weighted(sp, u, 1)
            assert M[1] == u * b1


def test_solve_weighted_rejects_nonpositive_u():
    with pytest.raises(ValueError):
        S.solve_weighted(2, 0, 4)
    with pytest.raises(ValueError):
        S.solve_weighted(2, Fraction(-1, 2), 4)


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2, 5, 8])
def test_lagrange_agreement_to_64(k):
    sp = S.load_scheme(k)
    for u in (Fraction(1, 2), Fraction(1), Fraction(2)):
        M = S.solve_weighted(sp, u, 64)
        lf = S.lagrangian(sp, u, 64 * sp.tree_size[0] + 1)
        a, b = lf.tree_size
        for n in (1, 2, 3, 5, 13, 31, 64):
            assert lagrange_coefficient(lf.phi, a * n + b) == M[n]


def test_lagrangian_support_and_nonnegativity():
    for k in (2, 5, 7):
        sp = S.load_scheme(k)
        lf = S.lagrangian(sp, Fraction(3, 2), 24)
        d = sp.h_exponent
        assert lf.phi[0] == 1
        for i, c in enumerate(lf.phi.coeffs):
            assert c >= 0
            if i % d:
                assert c == 0
        assert lf.block_size_of_degree(2 * d) == 2
        if d > 1:
            with pytest.raises(ValueError):
                lf.block_size_of_degree(d + 1)


def test_lagrangian_sequence_scheme():
    lf = S.lagrangian(8, Fraction(1), 12)
    # q_0 = 1, q_2 = u t3_1 = 1, support even
    assert lf.phi[0] == 1 and lf.phi[2] == 1
    assert all(lf.phi[i] == 0 for i in range(1, 12, 2))
    assert lf.recipe == "sequence"
    with pytest.raises(ValueError):
        lf.block_size_of_degree(4)


def test_lagrangian_small_u_tends_to_one():
    lf = S.lagrangian(2, Fraction(1, 10**6), 8)
    assert lf.phi[0] == 1
    assert all(c <= Fraction(1, 10**5) for c in lf.phi.coeffs[1:])


def test_bivariate_sanity():
    biv = S.solve_weighted_bivariate(2, 6)
    direct = S.solve_weighted(2, 1, 6)
    assert biv.at_u(1) == direct
    assert biv.coeffs[2].c == [0, 1, 8]
    for n in range(1, 7):
        assert all(c >= 0 and c.denominator == 1 for c in biv.coeffs[n].c)
    with pytest.raises(ValueError):
        S.solve_weighted_bivariate(2, 128)
