"""Published closed forms for the eight schemes: u_C, rho(u), M(rho(u),u),
E(u), valid for u <= u_C.

These are verification targets only; nothing in the computation path reads
them. All are exact rational functions of the weight u.
"""
from __future__ import annotations

from fractions import Fraction

F = Fraction

CRITICAL_U = {
    1: F(81, 17),
    2: F(9, 5),
    3: F(135, 7),
    4: F(36, 11),
    5: F(52, 27),
    6: F(68, 3),
    7: F(16, 7),
    8: F(64, 37),
}


def rho(scheme_id: int, u) -> Fraction:
    u = F(u)
    return {
        1: lambda: F(27, 8) / (5 * u + 27),
        2: lambda: F(4, 3) / (u**2 + 6 * u + 9),
        3: lambda: F(128, 27) / (5 * u + 27),
        4: lambda: F(5, 8) / (u + 4),
        5: lambda: F(25, 8) / (u**2 + 8 * u + 16),
        6: lambda: F(125, 128) / (u + 4),
        7: lambda: 54 / (u**3 + 24 * u**2 + 192 * u + 512),
        8: lambda: F(25, 6912) * u**2 - F(5, 108) * u + F(4, 27),
    }[scheme_id]()


def y_value(scheme_id: int, u) -> Fraction:
    """M(rho(u), u) in the published convention."""
    u = F(u)
    return {
        1: lambda: 5 * u / 27,
        2: lambda: u / 3,
        3: lambda: (25 * u**2 + 135 * u + 128) / (27 * (5 * u + 27)),
        4: lambda: u / 4,
        5: lambda: u / 4,
        6: lambda: u / 4,
        7: lambda: u / 8,
        8: lambda: 5 * u / (32 - 5 * u),
    }[scheme_id]()


def mean_offspring(scheme_id: int, u) -> Fraction:
    """E(u), the expectation of the offspring law."""
    u = F(u)
    return {
        1: lambda: 32 * u / (3 * (5 * u + 27)),
        2: lambda: 8 * u / (3 * (u + 3)),
        3: lambda: 32 * u / (5 * (5 * u + 27)),
        4: lambda: 20 * u / (9 * (u + 4)),
        5: lambda: 40 * u / (13 * (u + 4)),
        6: lambda: 20 * u / (17 * (u + 4)),
        7: lambda: 9 * u / (2 * (u + 8)),
        8: lambda: 27 * u / (2 * (32 - 5 * u)),
    }[scheme_id]()


ONE_MINUS_E_AT_1 = {
    1: F(2, 3), 2: F(1, 3), 3: F(4, 5), 4: F(5, 9),
    5: F(5, 13), 6: F(13, 17), 7: F(1, 2), 8: F(1, 2),
}
