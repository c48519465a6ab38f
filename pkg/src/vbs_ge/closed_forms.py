"""Closed-form overlaps for s = 1 and s = 2, for comparison with the contractions.

All functions return base-2 logarithms so they stay finite for long chains.
"""

from __future__ import annotations

import math

import numpy as np

from .contraction import log2_c_L, overlap_obc
from .core import Chain

__all__ = [
    "s1_pbc_eps",
    "s1_obc_asymptotic",
    "s2_odd_obc_published",
    "s2_odd_obc_sum_squares",
    "s2_even_readings",
    "s2_even_report",
]


def _log2_sum(terms) -> float:
    # terms: iterable of (sign, log2|x|)
    terms = list(terms)
    peak = max(t[1] for t in terms)
    total = sum(sign * 2.0 ** (lg - peak) for sign, lg in terms)
    return math.log2(total) + peak


def s1_pbc_eps(L: int) -> float:
    """``-log2(4 / (3**L + 3)) / L``: even-L spin-1 periodic chain, either sector."""
    return (_log2_sum([(1, L * math.log2(3)), (1, math.log2(3))]) - 2) / L


def s1_obc_asymptotic(L: int) -> float:
    """``log2 3**-L``."""
    return -L * math.log2(3)


def s2_odd_obc_published(L: int) -> float:
    """``log2(3**L / c_L)`` as published for the odd-sector spin-2 open chain."""
    return L * math.log2(3) - log2_c_L(2, L)


def s2_odd_obc_sum_squares(L: int) -> float:
    """``log2(2 * 12**L / c_L)``: what the odd-sector spin-2 row product actually gives."""
    return 1 + L * math.log2(12) - log2_c_L(2, L)


def s2_even_readings(L: int) -> dict[str, float]:
    """Candidate readings of the even-sector spin-2 numerator, as ``log2`` values.

    ``prefix-first``: ``(4/3)^L (1+r)^L + (1-r)^L + 4^L``;
    ``prefix-all``: ``(4/3)^L [(1+r)^L + (1-r)^L + 4^L]``;
    ``prefix-all-squared``: ``(4/3)^L [(1+r)^2L + (1-r)^2L + 4^L]``,
    with ``r = sqrt(6)``.
    """
    r = math.sqrt(6)
    a, b, c = math.log2(1 + r), math.log2(r - 1), 2.0
    sign_b = -1 if L % 2 else 1
    pre = L * math.log2(4 / 3)
    return {
        "prefix-first": _log2_sum([(1, pre + L * a), (sign_b, L * b), (1, L * c)]),
        "prefix-all": pre + _log2_sum([(1, L * a), (sign_b, L * b), (1, L * c)]),
        "prefix-all-squared": pre + _log2_sum([(1, 2 * L * a), (1, 2 * L * b), (1, L * c)]),
    }


def s2_even_report(lengths=(2, 3, 4, 6, 10, 20, 50)) -> dict:
    """Compare each reading with the contracted sum of squares (times ``c_L``).

    Returns the largest absolute ``log2`` deviation per reading and the names
    of readings that agree within ``1e-9`` at every length.
    """
    dev = {}
    for L in lengths:
        lam = overlap_obc(Chain(2, L, "obc-avg"), "even", "asymptotic")
        numerator = lam.log2value + log2_c_L(2, L)
        for name, val in s2_even_readings(L).items():
            dev[name] = max(dev.get(name, 0.0), abs(val - numerator))
    matches = [k for k, v in dev.items() if v < 1e-9]
    return {"lengths": list(lengths), "max_log2_deviation": dev, "matching": matches}
