"""Algebraic curves for the counting series of all decomposition schemes.

Each base map family satisfies a polynomial equation P(z, M) = 0 in its
positive-size counting series.  Block families are obtained by a rational
substitution (inverting H inside the composition identity), and the
u-weighted series of every scheme satisfies a polynomial equation derived
the same way, so coefficients to high order come from an O(N^2) integer
recurrence instead of series reversion.

The four independent families also come with classical closed-form term
formulas, used to cross-validate the curves and to generate base series in
O(N) integer operations.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .poly import (
    Poly,
    normalize_int,
    padd,
    pmul,
    ppow,
    pscale,
    strip_unit_factors,
    subst_rational,
    subst_var_value,
)

# --------------------------------------------------------------- fixtures
# positive-size series (zero constant term) in (z, m)

P_ALL_MAPS: Poly = {
    (0, 1): 1, (1, 0): -2, (1, 1): -18, (2, 0): 27, (2, 1): 54, (2, 2): 27,
}
P_BIPARTITE: Poly = {
    (0, 1): 1, (1, 0): -1, (1, 1): -12, (2, 0): 9, (2, 1): 24, (2, 2): 16,
}
P_LOOPLESS: Poly = {
    (0, 1): 1, (1, 0): -1, (1, 1): -14, (1, 2): 3,
    (2, 0): 11, (2, 1): 25, (2, 2): 17, (2, 3): 3,
    (3, 0): 1, (3, 1): 4, (3, 2): 6, (3, 3): 4, (3, 4): 1,
}
P_TRI_LOOPLESS: Poly = {
    (0, 1): 1, (1, 0): -1, (1, 1): -20, (1, 2): 8,
    (2, 0): 16, (2, 1): 48, (2, 2): 48, (2, 3): 16,
}


def term_all_maps(n: int) -> int:
    """Rooted planar maps with n edges: 2*3^n*(2n)!/(n!(n+2)!)."""
    t = 1
    for k in range(n):
        t = t * 3 * (2 * k + 1) * (2 * k + 2) // ((k + 1) * (k + 3))
    return t


def term_loopless_maps(n: int) -> int:
    """Rooted loopless planar maps with n edges: 2(4n+1)!/((n+1)!(3n+2)!)."""
    t = 1
    for k in range(n):
        num = (4 * k + 2) * (4 * k + 3) * (4 * k + 4) * (4 * k + 5)
        den = (k + 2) * (3 * k + 3) * (3 * k + 4) * (3 * k + 5)
        t = t * num // den
    return t


def term_bipartite_maps(n: int) -> int:
    """Rooted bipartite planar maps with n edges: 3*2^(n-1)(2n)!/(n!(n+2)!)
    for n >= 1."""
    if n == 0:
        return 1
    t = 1
    for k in range(1, n):
        t = t * 2 * (2 * k + 1) * (2 * k + 2) // ((k + 1) * (k + 3))
    return t


def term_tri_loopless(n: int) -> int:
    """Rooted loopless triangulations with n+2 vertices (n >= 1)."""
    if n == 0:
        return 0
    t = 1
    for k in range(1, n):
        num = 3 * (3 * k + 1) * (3 * k + 2)
        den = (2 * k + 3) * (k + 2)
        t = t * num // den
    return t


BASE_FAMILIES = {
    "all_maps": (P_ALL_MAPS, term_all_maps),
    "loopless_maps": (P_LOOPLESS, term_loopless_maps),
    "bipartite_maps": (P_BIPARTITE, term_bipartite_maps),
    "loopless_triangulations": (P_TRI_LOOPLESS, term_tri_loopless),
}

# ------------------------------------------------------- curve derivations

_W = {(1, 0): 1}
_V = {(0, 1): 1}
_ONE2 = {(0, 0): 1}


def block_curve(P_map: Poly, d: int) -> Poly:
    """Curve of the block series extracted from P_map with H = z(1+M)^d.

    B(w) = M(zeta) on w = zeta (1 + M(zeta))^d, so zeta = w/(1+v)^d.
    """
    den_z = ppow(padd(_ONE2, _V), d)
    return strip_unit_factors(subst_rational(P_map, _W, den_z, _V, _ONE2))


def shifted_curve(Q: Poly) -> Poly:
    """Curve of M(z) - z given the curve of M (the `- z` row adjustment)."""
    return strip_unit_factors(
        subst_rational(Q, _W, _ONE2, padd(_V, _W), _ONE2))


def t2_curve(Q_B7: Poly) -> Poly:
    """Simple triangulations from scheme 7 blocks: B7(w) = w (1 + T2(w))."""
    return strip_unit_factors(
        subst_rational(Q_B7, _W, _ONE2, pmul(_W, padd(_ONE2, _V)), _ONE2))


def t3_curve(Q_T2: Poly) -> Poly:
    """Irreducible triangulations from the scheme 8 identity at u = 1:
    T3(w) = T2(zeta)/(1 + T2(zeta)) on w = zeta (1 + T2(zeta))^2,
    i.e. substitute t = s/(1-s), zeta = w (1-s)^2."""
    one_minus = padd(_ONE2, pscale(_V, -1))
    return strip_unit_factors(
        subst_rational(Q_T2, pmul(_W, ppow(one_minus, 2)), _ONE2, _V, one_minus))


_Z3 = {(1, 0, 0): 1}
_M3 = {(0, 1, 0): 1}
_U3 = {(0, 0, 1): 1}
_ONE3 = {(0, 0, 0): 1}


def _lift3(P2: Poly) -> Poly:
    return {(i, j, 0): c for (i, j), c in P2.items()}


def _subst3(P3: Poly, num_z: Poly, den_z: Poly, num_m: Poly, den_m: Poly) -> Poly:
    di = max(k[0] for k in P3)
    dj = max(k[1] for k in P3)
    out: Poly = {}
    for (i, j, k), c in P3.items():
        term = pscale(
            pmul(
                pmul(ppow(num_z, i), ppow(den_z, di - i)),
                pmul(pmul(ppow(num_m, j), ppow(den_m, dj - j)), ppow(_U3, k)),
            ),
            c,
        )
        out = padd(out, term)
    return normalize_int(out)


def weighted_curve_eq1(P_map: Poly, d: int) -> Poly:
    """Trivariate curve of M(z, u) for M = u B(z (1+M)^d).

    Eliminates the conjugate base variable: P_map(zeta, M/u) = 0 with
    zeta = z (1+M)^d u^d / (u+M)^d.
    """
    num_z = pmul(pmul(_Z3, ppow(padd(_ONE3, _M3), d)), ppow(_U3, d))
    den_z = ppow(padd(_U3, _M3), d)
    return _subst3(_lift3(P_map), num_z, den_z, _M3, _U3)


def weighted_curve_eq2(P_blocks: Poly) -> Poly:
    """Trivariate curve of M(z, u) for M = (1+M) u B(z (1+M)^2), where
    P_blocks is the curve of the block family: substitute
    v = M/(u (1+M)), w = z (1+M)^2."""
    num_z = pmul(_Z3, ppow(padd(_ONE3, _M3), 2))
    den_m = pmul(_U3, padd(_ONE3, _M3))
    return _subst3(_lift3(P_blocks), num_z, _ONE3, _M3, den_m)


# ------------------------------------------------------ curve registry


@lru_cache(maxsize=None)
def family_curve(name: str) -> Poly:
    """Bivariate curve (z/w first variable) for a named counting family."""
    if name in BASE_FAMILIES:
        return dict(BASE_FAMILIES[name][0])
    if name == "two_connected":
        return block_curve(P_ALL_MAPS, 2)
    if name == "simple":
        return block_curve(P_LOOPLESS, 1)
    if name == "two_connected_less_edge":
        return shifted_curve(family_curve("two_connected"))
    if name == "two_connected_simple":
        return block_curve(family_curve("two_connected_less_edge"), 1)
    if name == "bipartite_simple":
        return block_curve(P_BIPARTITE, 1)
    if name == "bipartite_two_connected":
        return block_curve(P_BIPARTITE, 2)
    if name == "bipartite_two_connected_simple":
        return block_curve(family_curve("bipartite_two_connected"), 1)
    if name == "tri_blocks":  # z + z*T2(z), scheme 7's block series
        return block_curve(P_TRI_LOOPLESS, 3)
    if name == "simple_triangulations":
        return t2_curve(family_curve("tri_blocks"))
    if name == "irreducible_triangulations":
        return t3_curve(family_curve("simple_triangulations"))
    raise KeyError(f"unknown family {name!r}")


# --------------------------------------------------- series from a curve


def series_from_curve(P2: Poly, N: int):
    """Integer power-series root M (with M(0)=0) of P2(z, M) = 0.

    The coefficient m_n enters [z^n] P2(z, M) linearly with constant
    coefficient dP/dm(0,0), so a triangular recurrence determines the series.
    Powers of M are maintained online; total cost O(deg_m * N^2) big-int
    multiplications. Raises if the branch is not integral (wrong curve).
    """
    jmax = max(j for _, j in P2)
    A = [dict() for _ in range(jmax + 1)]
    for (i, j), c in P2.items():
        A[j][i] = c
    c1 = A[1].get(0, 0)
    if c1 == 0:
        raise ValueError("curve is singular at the origin: dP/dm(0,0) = 0")
    if A[0].get(0, 0) != 0:
        raise ValueError("curve does not pass through the origin")
    m = [0] * (N + 1)
    pows = [[0] * (N + 1) for _ in range(jmax + 1)]
    pows[0][0] = 1
    for n in range(1, N + 1):
        for j in range(2, jmax + 1):
            pj1 = pows[j - 1]
            acc = 0
            for i in range(1, n):
                if m[i]:
                    acc += m[i] * pj1[n - i]
            pows[j][n] = acc
        s = 0
        for j in range(jmax + 1):
            pj = pows[j]
            for i, c in A[j].items():
                if i <= n and (j != 1 or i != 0):
                    s += c * pj[n - i]
        q, r = divmod(-s, c1)
        if r:
            raise ArithmeticError(f"non-integral coefficient at order {n}")
        m[n] = q
        pows[1][n] = q
    return m


def series_from_curve_frac(P2: Poly, N: int):
    """Fraction-valued variant of series_from_curve (rational coefficients)."""
    jmax = max(j for _, j in P2)
    A = [dict() for _ in range(jmax + 1)]
    for (i, j), c in P2.items():
        A[j][i] = Fraction(c)
    c1 = A[1].get(0, Fraction(0))
    if not c1:
        raise ValueError("curve is singular at the origin")
    m = [Fraction(0)] * (N + 1)
    pows = [[Fraction(0)] * (N + 1) for _ in range(jmax + 1)]
    pows[0][0] = Fraction(1)
    for n in range(1, N + 1):
        for j in range(2, jmax + 1):
            acc = Fraction(0)
            for i in range(1, n):
                if m[i]:
                    acc += m[i] * pows[j - 1][n - i]
            pows[j][n] = acc
        s = Fraction(0)
        for j in range(jmax + 1):
            for i, c in A[j].items():
                if i <= n and (j != 1 or i != 0):
                    s += c * pows[j][n - i]
        m[n] = -s / c1
        pows[1][n] = m[n]
    return m


def weighted_series_int(W3: Poly, u: Fraction, N: int):
    """Exact integer list [m_n(u) * q^n] for the weighted curve W3 at u = p/q.

    Block counts enter with u^b, b <= n, so m_n(u) q^n is an integer; the
    returned list is the series of M(q z, u).
    """
    u = Fraction(u)
    q = u.denominator
    C = subst_var_value(W3, 2, u)
    C = normalize_int({k: Fraction(c) * Fraction(q) ** k[0] for k, c in C.items()})
    return series_from_curve(C, N), q
