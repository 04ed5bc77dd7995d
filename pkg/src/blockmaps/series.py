"""Exact truncated power series over arbitrary-precision rationals.

A Series carries its truncation order explicitly: coefficients beyond the
order are unknown, not zero, and mixed-order arithmetic truncates to the
minimum order. All arithmetic is exact (fractions.Fraction); nothing here
rounds.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence


class SeriesError(ValueError):
    pass


class CompositionError(SeriesError):
    pass


class ReversionError(SeriesError):
    pass


class DivergenceError(SeriesError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Series:
    """Truncated univariate power series with Fraction coefficients."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        coeffs = [_frac(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise SeriesError("order must be >= 0")
        if len(coeffs) < order + 1:
            coeffs = coeffs + [Fraction(0)] * (order + 1 - len(coeffs))
        self.coeffs = coeffs[: order + 1]
        self.order = order

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, order: int) -> "Series":
        return cls([Fraction(0)] * (order + 1), order)

    @classmethod
    def one(cls, order: int) -> "Series":
        c = [Fraction(0)] * (order + 1)
        c[0] = Fraction(1)
        return cls(c, order)

    @classmethod
    def identity(cls, order: int) -> "Series":
        c = [Fraction(0)] * (order + 1)
        if order >= 1:
            c[1] = Fraction(1)
        return cls(c, order)

    @classmethod
    def geometric(cls, order: int) -> "Series":
        return cls([Fraction(1)] * (order + 1), order)

    # -- basics -----------------------------------------------------------
    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        n = min(self.order, other.order)
        return self.coeffs[: n + 1] == other.coeffs[: n + 1]

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.order > 5 else ""
        return f"Series([{head}{tail}], order={self.order})"

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise SeriesError("cannot extend truncation order")
        return Series(self.coeffs[: order + 1], order)

    def valuation(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    # -- ring operations ---------------------------------------------------
    def __add__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    def __sub__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        return Series([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)], n)

    def __neg__(self) -> "Series":
        return Series([-c for c in self.coeffs], self.order)

    def scale(self, c) -> "Series":
        c = _frac(c)
        return Series([c * x for x in self.coeffs], self.order)

    def __mul__(self, other: "Series") -> "Series":
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += ai * b[j]
        return Series(out, n)

    def shift(self, k: int = 1) -> "Series":
        """Multiply by z^k (drops the top k coefficients)."""
        return Series([Fraction(0)] * k + self.coeffs[: self.order + 1 - k], self.order)

    def inverse(self) -> "Series":
        """Multiplicative inverse; requires nonzero constant term."""
        if not self.coeffs[0]:
            raise SeriesError("inverse requires nonzero constant term")
        n = self.order
        inv0 = 1 / self.coeffs[0]
        out = [Fraction(0)] * (n + 1)
        out[0] = inv0
        for m in range(1, n + 1):
            s = Fraction(0)
            for k in range(1, m + 1):
                if self.coeffs[k]:
                    s += self.coeffs[k] * out[m - k]
            out[m] = -inv0 * s
        return Series(out, n)

    def pow(self, e: int) -> "Series":
        if e < 0:
            return self.inverse().pow(-e)
        out = Series.one(self.order)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def derivative(self) -> "Series":
        if self.order == 0:
            return Series.zero(0)
        return Series(
            [self.coeffs[i + 1] * (i + 1) for i in range(self.order)], self.order - 1
        )

    # -- composition / reversion -------------------------------------------
    def compose(self, inner: "Series") -> "Series":
        """self(inner(z)); inner must have zero constant term."""
        if inner.coeffs[0]:
            raise CompositionError("inner series must have zero constant term")
        n = min(self.order, inner.order)
        inner = inner.truncate(n)
        out = Series.zero(n)
        for k in range(n, -1, -1):
            out = out * inner
            if self.coeffs[k]:
                out = Series(
                    [out.coeffs[0] + self.coeffs[k]] + out.coeffs[1:], n
                )
        return out

    def reversion(self) -> "Series":
        """Compositional inverse g with self(g(z)) = z; needs h(0)=0, h'(0)!=0."""
        if self.coeffs[0]:
            raise ReversionError("reversion requires zero constant term")
        if self.order < 1 or not self.coeffs[1]:
            raise ReversionError("reversion requires nonzero linear term")
        n = self.order
        h1 = self.coeffs[1]
        g = [Fraction(0)] * (n + 1)
        if n >= 1:
            g[1] = 1 / h1
        # triangular recurrence: [z^m] h(g) = 0 for m >= 2
        pows = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]  # pows[k] = g^k
        pows[0][0] = Fraction(1)
        if n >= 1:
            pows[1] = list(g)
        for m in range(2, n + 1):
            # fill g^k at order m using g_1..g_{m-1}; g^k[m] lacks the g_m term
            for k in range(2, m + 1):
                s = Fraction(0)
                for i in range(1, m):
                    if g[i] and pows[k - 1][m - i]:
                        s += g[i] * pows[k - 1][m - i]
                pows[k][m] = s
            s = Fraction(0)
            for k in range(2, m + 1):
                if k <= self.order and self.coeffs[k]:
                    s += self.coeffs[k] * pows[k][m]
            gm = -s / h1
            g[m] = gm
            pows[1][m] = gm
            # add the g_m contribution to g^k[m] (only via k * g_m * (g^{k-1})[0]=0)
        return Series(g, n)


def lagrange_coefficient(phi: Series, n: int) -> Fraction:
    """[z^n] of the solution of M = z*phi(M), by Lagrange inversion.

    Returns (1/n) [X^{n-1}] phi(X)^n; requires phi(0) != 0 and n >= 1.
    """
    if n < 1:
        raise SeriesError("lagrange_coefficient requires n >= 1")
    if not phi.coeffs[0]:
        raise SeriesError("phi must have nonzero constant term")
    p = phi.truncate(min(phi.order, n - 1)) if phi.order > n - 1 else phi
    if p.order < n - 1:
        p = Series(p.coeffs + [Fraction(0)] * (n - 1 - p.order), n - 1)
    return p.pow(n).coeffs[n - 1] / n


def solve_fixed_point(F: Callable[[Series], Series], order: int,
                      max_passes: int | None = None) -> Series:
    """Solve M = F(M) by z-adic iteration from M = 0.

    Each pass must determine at least one further coefficient, otherwise a
    DivergenceError is raised.
    """
    M = Series.zero(order)
    settled = -1
    passes = 0
    limit = max_passes if max_passes is not None else order + 2
    while settled < order:
        if passes > limit:
            raise DivergenceError("fixed-point iteration made no progress")
        nxt = F(M).truncate(order)
        diff = nxt - M
        v = diff.valuation()
        if v is None:
            return nxt
        if v <= settled:
            raise DivergenceError("fixed-point iteration regressed")
        settled = v - 1 if v <= order else order
        M = nxt
        passes += 1
    return M


# ---------------------------------------------------------------- text I/O


def series_to_text(s: Series) -> str:
    lines = [f"order={s.order}"]
    for n, c in enumerate(s.coeffs):
        lines.append(f"{n} {c.numerator}/{c.denominator}")
    return "\n".join(lines) + "\n"


def series_from_text(text: str) -> Series:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("order="):
        raise SeriesError("missing order= header")
    order = int(lines[0].split("=", 1)[1])
    coeffs = [Fraction(0)] * (order + 1)
    for ln in lines[1:]:
        idx, val = ln.split(None, 1)
        num, den = val.split("/")
        coeffs[int(idx)] = Fraction(int(num), int(den))
    return Series(coeffs, order)


# ------------------------------------------------------------- bivariate


class UPoly:
    """Dense polynomial in the block weight u with Fraction coefficients."""

    __slots__ = ("c",)

    def __init__(self, c):
        if isinstance(c, UPoly):
            c = c.c
        if not isinstance(c, (list, tuple)):
            c = [c]
        c = [_frac(x) for x in c]
        while len(c) > 1 and not c[-1]:
            c.pop()
        self.c = list(c)

    def __add__(self, other):
        other = other if isinstance(other, UPoly) else UPoly(other)
        n = max(len(self.c), len(other.c))
        out = [Fraction(0)] * n
        for i, x in enumerate(self.c):
            out[i] += x
        for i, x in enumerate(other.c):
            out[i] += x
        return UPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-(other if isinstance(other, UPoly) else UPoly(other)))

    def __mul__(self, other):
        other = other if isinstance(other, UPoly) else UPoly(other)
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        out[i + j] += x * y
        return UPoly(out)

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        other = other if isinstance(other, UPoly) else UPoly(other)
        return self.c == other.c

    def __call__(self, u) -> Fraction:
        u = _frac(u)
        s = Fraction(0)
        for x in reversed(self.c):
            s = s * u + x
        return s

    def __repr__(self):
        return f"UPoly({self.c})"


class UPolySeries:
    """Truncated series in z whose coefficients are polynomials in u."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order=None):
        coeffs = [c if isinstance(c, UPoly) else UPoly(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) < order + 1:
            coeffs = coeffs + [UPoly(0)] * (order + 1 - len(coeffs))
        self.coeffs = coeffs[: order + 1]
        self.order = order

    @classmethod
    def zero(cls, order):
        return cls([UPoly(0)] * (order + 1), order)

    def __add__(self, other):
        n = min(self.order, other.order)
        return UPolySeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    def __sub__(self, other):
        n = min(self.order, other.order)
        return UPolySeries([self.coeffs[i] - other.coeffs[i] for i in range(n + 1)], n)

    def __mul__(self, other):
        n = min(self.order, other.order)
        out = [UPoly(0)] * (n + 1)
        for i in range(n + 1):
            if self.coeffs[i]:
                for j in range(n + 1 - i):
                    if other.coeffs[j]:
                        out[i + j] = out[i + j] + self.coeffs[i] * other.coeffs[j]
        return UPolySeries(out, n)

    def scale(self, k) -> "UPolySeries":
        k = k if isinstance(k, UPoly) else UPoly(k)
        return UPolySeries([c * k for c in self.coeffs], self.order)

    def truncate(self, order):
        return UPolySeries(self.coeffs[: order + 1], order)

    def valuation(self):
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def at_u(self, u) -> Series:
        return Series([c(u) for c in self.coeffs], self.order)

    def __eq__(self, other):
        n = min(self.order, other.order)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n + 1))

    def compose_univariate(self, outer: Series) -> "UPolySeries":
        """outer(self) for a plain Series outer; self must have valuation >= 1."""
        if self.coeffs[0]:
            raise CompositionError("inner series must have zero constant term")
        n = self.order
        out = UPolySeries.zero(n)
        for k in range(min(outer.order, n), -1, -1):
            out = out * self
            if outer.coeffs[k]:
                c0 = out.coeffs[0] + UPoly(outer.coeffs[k])
                out = UPolySeries([c0] + out.coeffs[1:], n)
        return out
