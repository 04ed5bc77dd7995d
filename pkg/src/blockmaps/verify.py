"""Verification suite: fixtures vs oracle, chain consistency, closed-form
table matching, critical-point identities, and exponent recovery.

Each check returns {"name", "passed", "detail"}; the CLI `verify`
subcommand and the acceptance tests share these.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath as mp

from . import oracle, reference, schemes, transition

TABLE_RTOL = 1e-6
CRITICAL_RTOL = 1e-6
MEAN_ATOL = 1e-8
EXPONENT_SCHEMES = (2, 1, 4)
EXPONENT_TOL = {"subcritical": 0.1, "supercritical": 0.1, "critical": 0.15}


def _check(name, passed, detail=""):
    return {"name": name, "passed": bool(passed), "detail": str(detail)}


def check_fixtures(depth: int = 4, schemes_filter=None):
    """Fixture files vs brute force; block families vs brute force;
    bivariate census vs the weighted solve."""
    out = []
    for fam in ("all_maps", "loopless_maps", "bipartite_maps",
                "loopless_triangulations"):
        try:
            schemes.validate_fixture(fam, depth=depth)
            out.append(_check(f"fixture:{fam}", True, f"oracle depth {depth}"))
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            out.append(_check(f"fixture:{fam}", False, exc))
    for sp in schemes.all_schemes():
        if schemes_filter and sp.id not in schemes_filter:
            continue
        fam = sp.oracle_block_family
        series = schemes.family_series_int(sp.block_family, depth)
        ok, detail = True, []
        for n in range(1, depth + 1):
            try:
                got = oracle.enumerate_rooted_maps(n, fam, max_edges=depth)
            except ValueError:
                break
            if got != series[n]:
                ok = False
                detail.append(f"n={n}: oracle {got} != series {series[n]}")
        out.append(_check(f"blocks-vs-oracle:scheme{sp.id}", ok,
                          "; ".join(detail) or f"n <= {depth}"))
    if not schemes_filter or 2 in schemes_filter:
        census = oracle.bivariate_census(min(depth, 4))
        biv = schemes.solve_weighted_bivariate(2, min(depth, 4))
        ok, bad = True, []
        for n in range(0, min(depth, 4) + 1):
            poly = biv.coeffs[n].c
            for b in range(len(poly)):
                want = census.get((n, b), 0)
                if poly[b] != want:
                    ok = False
                    bad.append(f"(n={n},b={b}): {poly[b]} != {want}")
        out.append(_check("bivariate-census:scheme2", ok, "; ".join(bad)))
    return out


def check_chain(N: int = 128, schemes_filter=None):
    """Dual-route block extraction and cross-scheme chain identities."""
    out = []
    for sp in schemes.all_schemes():
        if schemes_filter and sp.id not in schemes_filter:
            continue
        try:
            ext = schemes.extract_block_series(sp, N)
            curve = schemes.block_series(sp, N)
            same = ext == curve
            nonneg = all(c >= 0 and c.denominator == 1 for c in ext.coeffs)
            out.append(_check(
                f"extraction-vs-curve:scheme{sp.id}", same and nonneg,
                "" if same else "series differ"))
        except Exception as exc:  # noqa: BLE001
            out.append(_check(f"extraction-vs-curve:scheme{sp.id}", False, exc))

    def _pair(name, a, b):
        out.append(_check(name, a == b,
                          "" if a == b else f"{a[:6]} != {b[:6]}"))

    b2 = schemes.family_series_int("two_connected", N)
    m3 = schemes.family_series_int("two_connected_less_edge", N)
    _pair("chain:2->3 (blocks = maps + z)", b2,
          [m3[n] + (1 if n == 1 else 0) for n in range(N + 1)])
    b5 = schemes.family_series_int("bipartite_two_connected", N)
    m6 = schemes.family_series_int("bipartite_two_connected", N)
    _pair("chain:5->6 (blocks = maps)", b5, m6)
    b7 = schemes.family_series_int("tri_blocks", N)
    t2 = schemes.family_series_int("simple_triangulations", N)
    _pair("chain:7->8 (blocks = z + z T2)", b7,
          [0] + [(1 if n == 1 else 0) + (t2[n - 1] if n >= 1 else 0)
                 for n in range(1, N + 1)])
    return out


def check_table(N: int = 512, schemes_filter=None, rtol: float = TABLE_RTOL):
    """rho(u), M(rho,u), E(u) against the closed forms on the u-grid."""
    out = []
    for sp in schemes.all_schemes():
        if schemes_filter and sp.id not in schemes_filter:
            continue
        uc = reference.CRITICAL_U[sp.id]
        worst = 0.0
        bad = []
        for u in (uc / 2, 3 * uc / 4, uc):
            tp = transition.singular_point(sp, u, N=N)
            with mp.workprec(220):
                for name, got, want in (
                    ("rho", tp.rho, reference.rho(sp.id, u)),
                    ("y", tp.y, reference.y_value(sp.id, u)),
                    ("E", tp.mean, reference.mean_offspring(sp.id, u)),
                ):
                    wv = mp.mpf(want.numerator) / want.denominator
                    rel = float(abs(got - wv) / abs(wv))
                    worst = max(worst, rel)
                    if rel > rtol:
                        bad.append(f"u={u} {name}: rel {rel:.2e}")
        out.append(_check(f"table-closed-forms:scheme{sp.id}", not bad,
                          "; ".join(bad) or f"worst rel {worst:.1e}"))
    return out


def check_critical(schemes_filter=None):
    """u_C recovery and the E(u_C) = 1 internal-consistency identity."""
    out = []
    for sp in schemes.all_schemes():
        if schemes_filter and sp.id not in schemes_filter:
            continue
        want = reference.CRITICAL_U[sp.id]
        uc, residual = transition.find_critical_u(sp)
        wv = mp.mpf(want.numerator) / want.denominator
        rel = float(abs(uc - wv) / wv)
        tp = transition.singular_point(sp, want, cross_check=False)
        dev = float(abs(tp.mean - 1))
        ok = rel <= CRITICAL_RTOL and dev <= MEAN_ATOL
        out.append(_check(
            f"critical-u:scheme{sp.id}", ok,
            f"u_c rel {rel:.1e}, |E(u_C)-1| = {dev:.1e}"))
    return out


def check_exponents(schemes_filter=None, N_sub: int = 1024, N_crit: int = 2048):
    """Coefficient exponents 5/2, 3/2, 5/3 in the three regimes."""
    out = []
    targets = {"subcritical": 2.5, "supercritical": 1.5, "critical": 5 / 3}
    ids = schemes_filter or EXPONENT_SCHEMES
    for sid in ids:
        if sid not in range(1, 9):
            continue
        uc = reference.CRITICAL_U[sid]
        for u, regime, N in (
            (Fraction(1), "subcritical", N_sub),
            (2 * uc, "supercritical", N_sub),
            (uc, "critical", N_crit),
        ):
            fit = transition.exponent_estimate(sid, u, N=N)
            err = abs(fit.alpha_estimate - targets[regime])
            tol = EXPONENT_TOL[regime]
            out.append(_check(
                f"exponent:scheme{sid}:{regime}", err <= tol,
                f"alpha {fit.alpha_estimate:.4f} (target {targets[regime]:.4f}"
                f" +- {tol}), stderr {fit.alpha_stderr:.1e}, N={N}"))
    return out


GROUPS = {
    "fixtures": check_fixtures,
    "chain": check_chain,
    "table": check_table,
    "critical": check_critical,
    "exponents": check_exponents,
}


def run_all(schemes_filter=None, groups=None, **kwargs):
    checks = []
    for name in (groups or GROUPS):
        fn = GROUPS[name]
        extra = {}
        if name == "fixtures" and "depth" in kwargs:
            extra["depth"] = kwargs["depth"]
        if name == "chain" and "chain_N" in kwargs:
            extra["N"] = kwargs["chain_N"]
        if name == "table" and "table_N" in kwargs:
            extra["N"] = kwargs["table_N"]
        if name == "exponents":
            if "N_sub" in kwargs:
                extra["N_sub"] = kwargs["N_sub"]
            if "N_crit" in kwargs:
                extra["N_crit"] = kwargs["N_crit"]
        checks.extend(fn(schemes_filter=schemes_filter, **extra))
    return checks
