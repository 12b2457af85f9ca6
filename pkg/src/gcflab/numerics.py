"""Exact rationals, fixed-precision binary reals, and truncated decimal rendering.

Rationals are plain :class:`fractions.Fraction` values; the helpers here add
the normalization contract, the ``"p/q"`` wire format and digit matching.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import gmpy2

from .errors import InsufficientReferenceDigits, SpecFormatError, ZeroDenominator

Rational = Fraction

DEFAULT_PRECISION = 256

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
_DECIMAL_RE = re.compile(r"^\s*([+-]?)(\d+)(?:\.(\d*))?\s*$")


def rat_make(num: int, den: int = 1) -> Fraction:
    """Build a normalized rational: positive denominator, lowest terms, zero as 0/1."""
    if den == 0:
        raise ZeroDenominator(f"{num}/0")
    return Fraction(int(num), int(den))


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose; they would smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, (type(gmpy2.mpz(0)), type(gmpy2.mpq(0)))):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise SpecFormatError(f"not a rational of the form p/q: {text!r}")
    num, den = m.group(1), m.group(2)
    return rat_make(int(num), int(den) if den is not None else 1)


def format_rational(r: Fraction) -> str:
    """Wire format: ``"p/q"``, or ``"p"`` when q = 1."""
    r = as_rational(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


@dataclass(frozen=True)
class DecimalString:
    """A decimal expansion truncated toward zero after ``digits`` fractional places."""

    negative: bool
    integer: int
    fraction: str

    def __post_init__(self):
        if self.integer < 0:
            raise ValueError("integer part must be non-negative; sign lives in `negative`")
        if self.fraction and not self.fraction.isdigit():
            raise ValueError(f"bad fractional digits {self.fraction!r}")

    @property
    def digits(self) -> int:
        return len(self.fraction)

    @classmethod
    def parse(cls, text: str) -> DecimalString:
        m = _DECIMAL_RE.match(text)
        if not m:
            raise SpecFormatError(f"not a decimal string: {text!r}")
        sign, ipart, fpart = m.groups()
        fpart = fpart or ""
        is_zero = int(ipart) == 0 and not fpart.strip("0")
        return cls(sign == "-" and not is_zero, int(ipart), fpart)

    def to_fraction(self) -> Fraction:
        scale = 10 ** self.digits
        mag = Fraction(self.integer * scale + (int(self.fraction) if self.fraction else 0), scale)
        return -mag if self.negative else mag

    def truncate(self, digits: int) -> DecimalString:
        if digits > self.digits:
            raise InsufficientReferenceDigits(f"have {self.digits} digits, asked for {digits}")
        frac = self.fraction[:digits]
        is_zero = self.integer == 0 and not frac.strip("0")
        return DecimalString(self.negative and not is_zero, self.integer, frac)

    def __str__(self) -> str:
        sign = "-" if self.negative else ""
        if not self.fraction:
            return f"{sign}{self.integer}"
        return f"{sign}{self.integer}.{self.fraction}"


def rat_to_decimal(r: Fraction, digits: int) -> DecimalString:
    """First ``digits`` fractional digits of ``r``, truncated toward zero (exact long division)."""
    if digits < 0:
        raise ValueError("digits must be >= 0")
    r = as_rational(r)
    scale = 10 ** digits
    q = abs(r.numerator) * scale // r.denominator
    ipart, fpart = divmod(q, scale)
    frac = str(fpart).zfill(digits) if digits else ""
    return DecimalString(r < 0 and q != 0, ipart, frac)


@dataclass(frozen=True)
class ApproxReal:
    """A binary floating value carrying its mantissa precision in bits.

    All arithmetic rounds to nearest at ``precision``; mixing precisions is an error.
    """

    value: object  # gmpy2.mpfr
    precision: int = DEFAULT_PRECISION

    @classmethod
    def from_rational(cls, r, precision: int = DEFAULT_PRECISION) -> ApproxReal:
        r = as_rational(r)
        with gmpy2.context(precision=precision, round=gmpy2.RoundToNearest):
            v = gmpy2.mpfr(gmpy2.mpq(r.numerator, r.denominator))
        return cls(v, precision)

    def _binop(self, other, op):
        if isinstance(other, ApproxReal):
            if other.precision != self.precision:
                raise ValueError(f"precision mismatch: {self.precision} vs {other.precision}")
            rhs = other.value
        else:
            r = as_rational(other)
            rhs = gmpy2.mpq(r.numerator, r.denominator)
        with gmpy2.context(precision=self.precision, round=gmpy2.RoundToNearest):
            return ApproxReal(op(self.value, rhs), self.precision)

    def __add__(self, other):
        return self._binop(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binop(other, lambda x, y: x - y)

    def __mul__(self, other):
        return self._binop(other, lambda x, y: x * y)

    def __truediv__(self, other):
        return self._binop(other, lambda x, y: x / y)

    def _unary(self, op):
        with gmpy2.context(precision=self.precision, round=gmpy2.RoundToNearest):
            return ApproxReal(op(self.value), self.precision)

    def __neg__(self):
        return self._unary(lambda x: -x)

    def __abs__(self):
        return self._unary(abs)

    def to_fraction(self) -> Fraction:
        if not gmpy2.is_finite(self.value):
            raise ValueError(f"non-finite value {self.value}")
        n, d = self.value.as_integer_ratio()
        return Fraction(int(n), int(d))

    def to_decimal(self, digits: int) -> DecimalString:
        return rat_to_decimal(self.to_fraction(), digits)

    def __str__(self) -> str:
        # ~0.3 decimal digits per bit
        return str(self.to_decimal(max(1, int(self.precision * 0.30103))))


Real = Union[Fraction, ApproxReal, int]


def to_exact(x: Real) -> Fraction:
    if isinstance(x, ApproxReal):
        return x.to_fraction()
    return as_rational(x)


def _digits_below(diff: Fraction) -> int:
    """Largest d >= 0 with diff < 10**-d, for 0 < diff."""
    if diff >= 1:
        return 0
    # log10(diff) from bit lengths, then fix up by exact comparison
    est = int((diff.denominator.bit_length() - diff.numerator.bit_length()) * math.log10(2))
    d = max(est - 1, 0)
    while diff * 10 ** (d + 1) < 1:
        d += 1
    while d > 0 and not diff * 10 ** d < 1:
        d -= 1
    return d


def matched_digits(x: Real, y: DecimalString, resolution: int | None = None) -> int:
    """Count the decimal places to which ``x`` agrees with ``y``.

    The count is the largest d with |x - y| < 10**-d, capped at y's digit count;
    0 when the two differ by 1 or more. Pass ``resolution`` to demand that ``y``
    carries at least that many digits.
    """
    if resolution is not None and y.digits < resolution:
        raise InsufficientReferenceDigits(
            f"reference has {y.digits} digits, resolution {resolution} requested")
    diff = abs(to_exact(x) - y.to_fraction())
    if diff == 0:
        return y.digits
    return min(_digits_below(diff), y.digits)
