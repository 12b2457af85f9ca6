"""Reference decimal expansions of e and pi with proven truncation.

Both constants are bracketed between exact rational bounds; digits are only
released once the lower and upper bound truncate to the same string.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .numerics import DecimalString, rat_to_decimal

BASES = ("e", "pi")


def e_bounds(tolerance: Fraction) -> tuple[Fraction, Fraction]:
    """Sum of 1/k! for k <= N with the tail bound 2/(N+1)! below ``tolerance``."""
    total, term, n = Fraction(1), Fraction(1), 0
    while True:
        n += 1
        term /= n
        total += term
        tail = 2 * term / (n + 1)
        if tail < tolerance:
            return total, total + tail


def arctan_inv_bounds(x: int, tolerance: Fraction) -> tuple[Fraction, Fraction]:
    """Bracket arctan(1/x) by consecutive partial sums of its alternating series."""
    x2 = x * x
    power = Fraction(1, x)
    total, k = Fraction(0), 0
    while True:
        term = power / (2 * k + 1)
        nxt = total + (term if k % 2 == 0 else -term)
        if term < tolerance:
            return min(total, nxt), max(total, nxt)
        total = nxt
        power /= x2
        k += 1


def pi_bounds(tolerance: Fraction) -> tuple[Fraction, Fraction]:
    """pi = 16 arctan(1/5) - 4 arctan(1/239)."""
    lo5, hi5 = arctan_inv_bounds(5, tolerance / 32)
    lo239, hi239 = arctan_inv_bounds(239, tolerance / 8)
    return 16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239


_BOUNDS = {"e": e_bounds, "pi": pi_bounds}


@lru_cache(maxsize=None)
def reference_constant(base: str, digits: int) -> DecimalString:
    """Decimal expansion of e or pi truncated (toward zero) to ``digits`` places."""
    if base not in _BOUNDS:
        raise ValueError(f"unknown constant {base!r}; expected one of {BASES}")
    if digits < 1:
        raise ValueError("digits must be >= 1")
    guard = max(digits // 5, 2)
    while True:
        lo, hi = _BOUNDS[base](Fraction(1, 10 ** (digits + guard)))
        low, high = rat_to_decimal(lo, digits), rat_to_decimal(hi, digits)
        if low == high:
            return low
        guard *= 2  # value sits next to a digit boundary; tighten until it resolves


def reference_value(base: str, digits: int) -> Fraction:
    """Rational within 10**-digits of the constant."""
    return reference_constant(base, digits).to_fraction()
