"""Sparse multivariate polynomials over exact rationals.

A polynomial is a dict mapping exponent tuples to int/Fraction coefficients.
Used for the algebraic curves satisfied by the counting series; everything
here is exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

Poly = dict


def nvars(p: Poly) -> int:
    return len(next(iter(p))) if p else 0


def padd(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, c in b.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            s = out.get(k, 0) + ca * cb
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def pscale(a: Poly, c) -> Poly:
    return {k: v * c for k, v in a.items()} if c else {}


def ppow(a: Poly, n: int) -> Poly:
    out: Poly = {tuple([0] * nvars(a)): 1} if a else {}
    base = a
    while n:
        if n & 1:
            out = pmul(out, base)
        base = pmul(base, base)
        n >>= 1
    return out


def normalize_int(p: Poly) -> Poly:
    """Clear denominators, strip numeric and monomial content, fix sign."""
    den = 1
    for c in p.values():
        f = Fraction(c)
        den = den * f.denominator // gcd(den, f.denominator)
    q = {k: int(Fraction(c) * den) for k, c in p.items()}
    g = 0
    for c in q.values():
        g = gcd(g, abs(c))
    if g > 1:
        q = {k: c // g for k, c in q.items()}
    if q:
        nv = len(next(iter(q)))
        shift = tuple(min(k[t] for k in q) for t in range(nv))
        if any(shift):
            q = {tuple(x - s for x, s in zip(k, shift)): c for k, c in q.items()}
        if q[max(q)] < 0:
            q = {k: -c for k, c in q.items()}
    return q


def subst_rational(P: Poly, num_z: Poly, den_z: Poly, num_m: Poly, den_m: Poly) -> Poly:
    """Substitute z -> num_z/den_z and m -> num_m/den_m into bivariate P,
    clearing denominators. The num/den polys fix the output variable tuple."""
    di = max(i for i, _ in P)
    dj = max(j for _, j in P)
    out: Poly = {}
    for (i, j), c in P.items():
        term = pscale(
            pmul(
                pmul(ppow(num_z, i), ppow(den_z, di - i)),
                pmul(ppow(num_m, j), ppow(den_m, dj - j)),
            ),
            c,
        )
        out = padd(out, term)
    return normalize_int(out)


def divide_linear(P: Poly, var: int, c0) -> Poly | None:
    """Exact division of P by (c0 + x_var); None if the remainder is nonzero."""
    if not P:
        return None
    dmax = max(k[var] for k in P)
    coeffs = [dict() for _ in range(dmax + 1)]
    for k, c in P.items():
        rest = k[:var] + (0,) + k[var + 1:]
        coeffs[k[var]][rest] = coeffs[k[var]].get(rest, 0) + c
    q = [dict() for _ in range(dmax)]
    carry = coeffs[dmax]
    for j in range(dmax - 1, -1, -1):
        q[j] = carry
        nxt = dict(coeffs[j])
        for rest, c in carry.items():
            s = nxt.get(rest, 0) - c0 * c
            if s:
                nxt[rest] = s
            else:
                nxt.pop(rest, None)
        carry = nxt
    if carry:
        return None
    out: Poly = {}
    for j, cj in enumerate(q):
        for rest, c in cj.items():
            k = rest[:var] + (j,) + rest[var + 1:]
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def strip_unit_factors(P: Poly, var: int = 1) -> Poly:
    """Remove (1 + x_var)^k and (x_var - 1)^k factors.

    These arise from denominator clearing and are units along the counting
    branch (1 + B(w) > 0), so removing them does not change the branch.
    """
    for c0 in (1, -1):
        while True:
            Q = divide_linear(P, var, c0)
            if Q is None:
                break
            P = Q
    return normalize_int(P)


def partial(P: Poly, var: int) -> Poly:
    out: Poly = {}
    for k, c in P.items():
        e = k[var]
        if e:
            kk = k[:var] + (e - 1,) + k[var + 1:]
            out[kk] = out.get(kk, 0) + c * e
    return out


def peval_frac(P: Poly, point) -> Fraction:
    s = Fraction(0)
    for k, c in P.items():
        t = Fraction(c)
        for x, e in zip(point, k):
            t *= Fraction(x) ** e
        s += t
    return s


def subst_var_value(P3: Poly, var: int, value) -> Poly:
    """Substitute an exact rational for one variable (drops that variable)."""
    value = Fraction(value)
    out: Poly = {}
    for k, c in P3.items():
        key = k[:var] + k[var + 1:]
        out[key] = out.get(key, 0) + Fraction(c) * value ** k[var]
    return normalize_int({k: c for k, c in out.items() if c})


def rescale_z(P2: Poly, q) -> Poly:
    """Curve satisfied by M(q z): multiply the z^i coefficient by q^i."""
    q = Fraction(q)
    return normalize_int({k: Fraction(c) * q ** k[0] for k, c in P2.items()})
