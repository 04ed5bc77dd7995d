"""Brute-force enumeration against classical census formulas."""
import pytest

from blockmaps import curves, oracle


def test_all_maps_counts():
    want = [1, 2, 9, 54, 378]
    got = [oracle.enumerate_rooted_maps(n, "all") for n in range(5)]
    assert got == want


def test_vertex_map_and_single_edge():
    assert oracle.enumerate_rooted_maps(0, "all") == 1
    assert oracle.enumerate_rooted_maps(1, "all") == 2  # edge and loop


@pytest.mark.parametrize("family,term", [
    ("all", curves.term_all_maps),
    ("loopless", curves.term_loopless_maps),
    ("bipartite", curves.term_bipartite_maps),
])
def test_census_formulas(family, term):
    for n in range(5):
        assert oracle.enumerate_rooted_maps(n, family) == term(n)


def test_block_families_small():
    # two-connected includes both one-edge maps; see fixtures notes
    assert [oracle.enumerate_rooted_maps(n, "two-connected")
            for n in range(1, 5)] == [2, 1, 2, 6]
    assert [oracle.enumerate_rooted_maps(n, "simple")
            for n in range(1, 5)] == [1, 2, 6, 23]
    assert [oracle.enumerate_rooted_maps(n, "two-connected-simple")
            for n in range(1, 5)] == [1, 0, 1, 1]
    assert [oracle.enumerate_rooted_maps(n, "bipartite-two-connected")
            for n in range(1, 5)] == [1, 1, 1, 2]


def test_triangulation_counts():
    for n, want in [(1, 1), (2, 4), (3, 24)]:
        got = oracle.enumerate_rooted_maps(n, "loopless-triangulation",
                                           max_edges=n * 3)
        assert got == curves.term_tri_loopless(n) == want
    assert [oracle.enumerate_rooted_maps(n, "simple-triangulation", max_edges=9)
            for n in (1, 2, 3)] == [1, 3, 13]
    assert [oracle.enumerate_rooted_maps(n, "irreducible-triangulation",
                                         max_edges=9)
            for n in (1, 2, 3)] == [1, 0, 1]


def test_enumeration_cap():
    with pytest.raises(ValueError):
        oracle.enumerate_rooted_maps(9, "all", max_edges=5)
    with pytest.raises(KeyError):
        oracle.enumerate_rooted_maps(2, "no-such-family")


def test_counts_deterministic():
    a = oracle.enumerate_rooted_maps(3, "loopless")
    b = oracle.enumerate_rooted_maps(3, "loopless")
    assert a == b == 13


# ------------------------------------------------------- block counting


def _map_single_edge():
    return oracle.DartMap(1, (0, 1), (1, 0))


def _map_loop():
    return oracle.DartMap(1, (1, 0), (1, 0))


def _map_path_two_edges():
    # vertices: {0}, {1,2}, {3}; rotation at middle vertex (1 2)
    return oracle.DartMap(2, (0, 2, 1, 3), (1, 0, 3, 2))


def test_count_blocks_examples():
    assert oracle.count_blocks_2conn(None) == 0  # vertex map
    assert oracle.count_blocks_2conn(_map_single_edge()) == 1
    assert oracle.count_blocks_2conn(_map_loop()) == 1
    assert oracle.count_blocks_2conn(_map_path_two_edges()) == 2


def test_census_row_sums_and_values():
    table = oracle.bivariate_census(3)
    assert table[(0, 0)] == 1
    assert table[(1, 1)] == 2
    assert table[(2, 1)] == 1 and table[(2, 2)] == 8
    for n, want in [(1, 2), (2, 9), (3, 54)]:
        assert sum(c for (nn, _), c in table.items() if nn == n) == want


# ---------------------------------------------------------- structure


def test_genus_and_faces():
    assert _map_loop().genus() == 0
    assert len(_map_loop().faces()) == 2
    assert _map_single_edge().genus() == 0
    assert len(_map_single_edge().faces()) == 1


def test_relabel_invariance():
    import random
    rng = random.Random(7)
    for m in oracle.planar_maps(3):
        perm = [0] + rng.sample(range(1, 6), 5)
        m2 = m.relabel(perm)
        for fam, pred in oracle.FAMILIES.items():
            assert pred(m) == pred(m2), fam
        assert oracle.count_blocks_2conn(m) == oracle.count_blocks_2conn(m2)


def test_dual_is_involution_on_counts():
    maps3 = list(oracle.planar_maps(3))
    duals = [m.dual() for m in maps3]
    assert all(d.genus() == 0 for d in duals)
    # Euler data swaps vertices and faces
    for m, d in zip(maps3, duals):
        assert len(m.vertices()) == len(d.faces())
        assert len(m.faces()) == len(d.vertices())
