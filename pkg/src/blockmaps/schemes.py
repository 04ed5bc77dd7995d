"""The eight block-decomposition schemes: registry, fixtures, solvers.

Scheme k relates a map family M and a block family B through
    M(z,u) = u B(H(z, M(z,u))),        H(z, M) = z (1+M)^d        (EQ1)
or, for scheme 8,
    M(z,u) = (1+M(z,u)) u B(H(z, M(z,u))),   H = z (1+M)^2        (EQ2)

Block families are never fixtures: they are extracted от the map family
at u = 1 (series reversion), and independently via the algebraic curves in
`curves`, which also provide the fast path for high-order weighted series.
"""
from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import curves, oracle
from .poly import Poly
from .series import Series, UPoly, UPolySeries, solve_fixed_point

FIXTURES_DIR = Path(os.environ.get(
    "BLOCKMAPS_FIXTURES", str(Path(__file__).parent / "fixtures")))

#: minimum oracle depth a fixture must carry before it may be used
REQUIRED_VALIDATION_DEPTH = 4


@dataclass(frozen=True)
class SchemeSpec:
    """One row of the decomposition table."""

    id: int
    map_family: str
    map_symbol: str
    block_family: str
    block_symbol: str
    h_exponent: int              # d in H(z, M) = z (1+M)^d
    equation_form: str           # "EQ1" or "EQ2"
    lagrangian_recipe: str       # direct-K | root-substitution | sequence
    tree_size: tuple             # tree vertices = a*n + b for map size n
    oracle_map_family: str       # family name understood by the oracle
    oracle_block_family: str
    convention_adjustments: tuple = ()
    #: Table y-column offset: y_published = (Phi(yhat)-1) + this * rho
    y_offset_rho: int = 0

    @property
    def size_power(self) -> int:
        """rho(u) = rho_hat(u)^size_power (z -> z^power reparametrization)."""
        return self.tree_size[0]


_SCHEMES = {
    1: SchemeSpec(
        id=1, map_family="loopless_maps", map_symbol="M2",
        block_family="simple", block_symbol="M3",
        h_exponent=1, equation_form="EQ1", lagrangian_recipe="direct-K",
        tree_size=(1, 1), oracle_map_family="loopless",
        oracle_block_family="simple",
    ),
    2: SchemeSpec(
        id=2, map_family="all_maps", map_symbol="M1",
        block_family="two_connected", block_symbol="M4",
        h_exponent=2, equation_form="EQ1", lagrangian_recipe="root-substitution",
        tree_size=(2, 1), oracle_map_family="all",
        oracle_block_family="two-connected",
    ),
    3: SchemeSpec(
        id=3, map_family="two_connected_less_edge", map_symbol="M4-z",
        block_family="two_connected_simple", block_symbol="M5",
        h_exponent=1, equation_form="EQ1", lagrangian_recipe="direct-K",
        tree_size=(1, 1), oracle_map_family="two-connected",
        oracle_block_family="two-connected-simple",
        convention_adjustments=("maps = M4(z) - z",),
        y_offset_rho=1,
    ),
    4: SchemeSpec(
        id=4, map_family="bipartite_maps", map_symbol="B1",
        block_family="bipartite_simple", block_symbol="B2",
        h_exponent=1, equation_form="EQ1", lagrangian_recipe="direct-K",
        tree_size=(1, 1), oracle_map_family="bipartite",
        oracle_block_family="bipartite-simple",
    ),
    5: SchemeSpec(
        id=5, map_family="bipartite_maps", map_symbol="B1",
        block_family="bipartite_two_connected", block_symbol="B4",
        h_exponent=2, equation_form="EQ1", lagrangian_recipe="root-substitution",
        tree_size=(2, 1), oracle_map_family="bipartite",
        oracle_block_family="bipartite-two-connected",
    ),
    6: SchemeSpec(
        id=6, map_family="bipartite_two_connected", map_symbol="B4",
        block_family="bipartite_two_connected_simple", block_symbol="B5",
        h_exponent=1, equation_form="EQ1", lagrangian_recipe="direct-K",
        tree_size=(1, 1), oracle_map_family="bipartite-two-connected",
        oracle_block_family="bipartite-two-connected-simple",
    ),
    7: SchemeSpec(
        id=7, map_family="loopless_triangulations", map_symbol="T1",
        block_family="tri_blocks", block_symbol="z+zT2",
        h_exponent=3, equation_form="EQ1", lagrangian_recipe="root-substitution",
        tree_size=(3, 1), oracle_map_family="loopless-triangulation",
        oracle_block_family="simple-triangulation",
        convention_adjustments=("blocks = z + z*T2(z), T2 positive-size",),
    ),
    8: SchemeSpec(
        id=8, map_family="simple_triangulations", map_symbol="T2",
        block_family="irreducible_triangulations", block_symbol="T3",
        h_exponent=2, equation_form="EQ2", lagrangian_recipe="sequence",
        tree_size=(2, 1), oracle_map_family="simple-triangulation",
        oracle_block_family="irreducible-triangulation",
        convention_adjustments=(
            "sizes counted in internal faces for the tree bijection "
            "(n+3 vertices <-> 2n+1 internal faces)",
        ),
    ),
}


def load_scheme(scheme_id: int) -> SchemeSpec:
    try:
        return _SCHEMES[int(scheme_id)]
    except (KeyError, ValueError):
        raise KeyError(f"unknown scheme id {scheme_id!r} (valid: 1..8)") from None


def all_schemes():
    return [_SCHEMES[k] for k in sorted(_SCHEMES)]


# ------------------------------------------------------------- fixtures


class FixtureError(RuntimeError):
    pass


def fixture_path(family: str) -> Path:
    return FIXTURES_DIR / f"{family}.txt"


def read_fixture(family: str):
    """Parse a fixture file -> (poly, coeffs, validated_to)."""
    path = fixture_path(family)
    if not path.exists():
        raise FixtureError(f"no fixture file for family {family!r} at {path}")
    poly: Poly = {}
    coeffs = None
    validated_to = -1
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("poly:"):
            i, j, c = line.split(None, 4)[1:4]
            poly[(int(i), int(j))] = int(c)
        elif line.startswith("coeffs:"):
            coeffs = [int(x) for x in line.split()[1:]]
        elif line.startswith("validated_to:"):
            validated_to = int(line.split()[1])
    if not poly and coeffs is None:
        raise FixtureError(f"fixture {family!r} has neither poly: nor coeffs:")
    return poly, coeffs, validated_to


def write_fixture_stamp(family: str, validated_to: int) -> None:
    path = fixture_path(family)
    lines = [ln for ln in path.read_text().splitlines()
             if not ln.startswith("validated_to:")]
    lines.append(f"validated_to: {validated_to}")
    path.write_text("\n".join(lines) + "\n")


def validate_fixture(family: str, depth: int = REQUIRED_VALIDATION_DEPTH,
                     stamp: bool = True) -> int:
    """Compare the fixture series with brute-force counts up to `depth`.

    Returns the validated depth; raises FixtureError on any mismatch.
    """
    spec_oracle = {
        "all_maps": "all",
        "loopless_maps": "loopless",
        "bipartite_maps": "bipartite",
        "loopless_triangulations": "loopless-triangulation",
    }[family]
    poly, coeffs, _ = read_fixture(family)
    series = curves.series_from_curve(poly, depth) if poly else coeffs
    for n in range(1, depth + 1):
        got = oracle.enumerate_rooted_maps(n, spec_oracle, max_edges=depth)
        if series[n] != got:
            raise FixtureError(
                f"fixture {family!r} disagrees with oracle at n={n}: "
                f"fixture {series[n]}, oracle {got}")
    if stamp:
        try:
            write_fixture_stamp(family, depth)
        except OSError:
            pass  # read-only install; validation still succeeded
    return depth


def fixture_curve(family: str) -> Poly:
    """The fixture's algebraic equation, refusing unvalidated fixtures."""
    poly, _, validated_to = read_fixture(family)
    if validated_to < REQUIRED_VALIDATION_DEPTH:
        raise FixtureError(
            f"fixture {family!r} not validated to depth "
            f"{REQUIRED_VALIDATION_DEPTH} (stamp: {validated_to}); "
            "run `blockmaps verify` or validate_fixture() first")
    if poly != curves.BASE_FAMILIES[family][0]:
        raise FixtureError(f"fixture {family!r} differs from built-in curve")
    return poly


# ------------------------------------------------------- series plumbing

_cache_lock = threading.Lock()
_series_cache: dict = {}


def family_series_int(family: str, N: int):
    """Positive-size counting series of any named family, as ints, cached."""
    with _cache_lock:
        hit = _series_cache.get(family)
        if hit is not None and len(hit) > N:
            return hit[: N + 1]
    if family in curves.BASE_FAMILIES:
        fixture_curve(family)  # enforces validation for base families
    coeffs = curves.series_from_curve(curves.family_curve(family), N)
    with _cache_lock:
        old = _series_cache.get(family)
        if old is None or len(old) <= N:
            _series_cache[family] = coeffs
    return coeffs


def base_series(family: str, N: int) -> Series:
    """Counting series of a map family (positive-size convention)."""
    return Series(family_series_int(family, N), N)


def map_series(scheme: SchemeSpec | int, N: int) -> Series:
    scheme = scheme if isinstance(scheme, SchemeSpec) else load_scheme(scheme)
    return base_series(scheme.map_family, N)


def block_series(scheme: SchemeSpec | int, N: int) -> Series:
    """Block counting series via the algebraic curve (fast path)."""
    scheme = scheme if isinstance(scheme, SchemeSpec) else load_scheme(scheme)
    return base_series(scheme.block_family, N)


# ------------------------------------------------- extraction (reversion)


class ConventionError(RuntimeError):
    pass


def extract_block_series(scheme: SchemeSpec | int, N: int) -> Series:
    """Blocks from the u=1 identity: B = M o h^{<-1>}, h = z (1+M)^d.

    For EQ2 the left-hand side is M/(1+M) instead of M. This is the
    independent route; `block_series` (algebraic curve) must agree with it.
    """
    scheme = scheme if isinstance(scheme, SchemeSpec) else load_scheme(scheme)
    M0 = map_series(scheme, N)
    one = Series.one(N)
    h = (one + M0).pow(scheme.h_exponent).shift(1)
    g = h.reversion()
    target = M0 if scheme.equation_form == "EQ1" else M0 * (one + M0).inverse()
    B = target.compose(g)
    for n, c in enumerate(B.coeffs):
        if c.denominator != 1 or c < 0:
            raise ConventionError(
                f"scheme {scheme.id}: extracted block coefficient at order {n} "
                f"is {c}; convention adjustments are wrong")
    return B


# ----------------------------------------------------- weighted solving


def weighted_curve(scheme: SchemeSpec | int) -> Poly:
    """Trivariate algebraic equation P(z, M; u) = 0 for the weighted series."""
    scheme = scheme if isinstance(scheme, SchemeSpec) else load_scheme(scheme)
    key = ("wcurve", scheme.id)
    with _cache_lock:
        if key in _series_cache:
            return _series_cache[key]
    if scheme.equation_form == "EQ1":
        W = curves.weighted_curve_eq1(
            curves.family_curve(scheme.map_family), scheme.h_exponent)
    else:
        W = curves.weighted_curve_eq2(curves.family_curve(scheme.block_family))
    with _cache_lock:
        _series_cache[key] = W
    return W


def solve_weighted(scheme: SchemeSpec | int, u, N: int,
                   method: str = "auto") -> Series:
    """M(z, u) to order N, exact.

    methods: "curve" (algebraic recurrence, default), "fixed-point"
    (z-adic iteration of the defining equation), "newton" (Newton iteration
    on the same equation). All agree; the slower two exist as cross-checks.
    """
    scheme = scheme if isinstance(scheme, SchemeSpec) else load_scheme(scheme)
    u = Fraction(u)
    if u <= 0:
        raise ValueError("block weight u must be positive")
    if method in ("auto", "curve"):
        ints, q = curves.weighted_series_int(weighted_curve(scheme), u, N)
        return Series([Fraction(c, q**n) for n, c in enumerate(ints)], N)
    B = block_series(scheme, N)
    one = Series.one(N)
    d = scheme.h_exponent

    def F(M):
        H = (one + M).pow(d).shift(1)
        BH = B.compose(H).scale(u)
        return BH if scheme.equation_form == "EQ1" else (one + M) * BH

    if method == "fixed-point":
        return solve_fixed_point(F, N)
    if method == "newton":
        Bp = block_series(scheme, N + 1).derivative()
        M = Series.zero(N)
        prec = 1
        while True:
            H = (one + M).pow(d).shift(1)
            BH = B.compose(H)
            BpH = Bp.compose(H)
            dH = (one + M).pow(d - 1).shift(1).scale(d)
            if scheme.equation_form == "EQ1":
                G = M - BH.scale(u)
                Gp = one - (BpH * dH).scale(u)
            else:
                G = M - ((one + M) * BH).scale(u)
                Gp = one - (BH + (one + M) * BpH * dH).scale(u)
            M = (M - G * Gp.inverse()).truncate(N)
            if prec >= N:
                return M
            prec = min(2 * prec, N)
    raise ValueError(f"unknown method {method!r}")


def solve_weighted_bivariate(scheme: SchemeSpec | int, N: int = 16,
                             max_order: int = 64) -> UPolySeries:
    """M(z, u) with polynomial-in-u coefficients (oracle validation mode)."""
    scheme = scheme if isinstance(scheme, SchemeSpec) else load_scheme(scheme)
    if N > max_order:
        raise ValueError(f"bivariate mode capped at order {max_order}")
    B = block_series(scheme, N)
    one_u = UPolySeries([UPoly(1)] + [UPoly(0)] * N, N)
    u1 = UPoly([0, 1])
    d = scheme.h_exponent

    M = UPolySeries.zero(N)
    for _ in range(N + 2):
        P = one_u + M
        H = P
        for _ in range(d - 1):
            H = H * P
        H = UPolySeries([UPoly(0)] + H.coeffs[:N], N)  # shift by z
        BH = H.compose_univariate(B).scale(u1)
        nxt = BH if scheme.equation_form == "EQ1" else (one_u + M) * BH
        if nxt == M:
            break
        M = nxt
    return M


# ------------------------------------------------------------ Lagrangian


@dataclass(frozen=True)
class LagrangianForm:
    """Phi with M(z,u) = z Phi(M(z,u), u) after the size reparametrization."""

    scheme_id: int
    u: Fraction
    phi: Series                  # [X^k] Phi(X, u), exact
    tree_size: tuple             # (a, b): tree vertices = a*n + b
    stride: int                  # node degrees live on multiples (except seq)
    recipe: str

    def block_size_of_degree(self, k: int):
        if self.recipe == "sequence":
            raise ValueError("sequence recipe: block sizes are sampled, "
                             "not determined by the degree")
        if k % self.stride:
            raise ValueError(f"degree {k} not a multiple of stride {self.stride}")
        return k // self.stride


def lagrangian(scheme: SchemeSpec | int, u, N: int) -> LagrangianForm:
    """The Lagrangian rewrite of the scheme equation at weight u.

    EQ1 schemes: Phi(X) = 1 + u B(X^d) (support on multiples of d).
    Scheme 8:    Phi(X) = 1/(1 - u T3(X^2)) (sequences of blocks).
    Coefficients are checked nonnegative.
    """
    scheme = scheme if isinstance(scheme, SchemeSpec) else load_scheme(scheme)
    u = Fraction(u)
    if u <= 0:
        raise ValueError("block weight u must be positive")
    d = scheme.h_exponent
    if scheme.equation_form == "EQ1":
        b = family_series_int(scheme.block_family, N // d if d else N)
        phi = [Fraction(0)] * (N + 1)
        phi[0] = Fraction(1)
        for k in range(1, len(b)):
            if d * k <= N:
                phi[d * k] = u * b[k]
    else:
        t3 = family_series_int(scheme.block_family, N // 2 + 1)
        phi = [Fraction(0)] * (N + 1)
        phi[0] = Fraction(1)
        for k in range(2, N + 1):
            s = Fraction(0)
            for i in range(1, k // 2 + 1):
                if k - 2 * i >= 0 and t3[i]:
                    s += t3[i] * phi[k - 2 * i]
            phi[k] = u * s
    for k, c in enumerate(phi):
        if c < 0:
            raise ConventionError(f"Phi coefficient negative at {k}")
    return LagrangianForm(
        scheme_id=scheme.id, u=u, phi=Series(phi, N),
        tree_size=scheme.tree_size,
        stride=d if scheme.equation_form == "EQ1" else 2,
        recipe=scheme.lagrangian_recipe,
    )
