"""Build continued fractions from series and from prescribed convergent sequences."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .core import CFSpec, ExplicitRule, HybridRule, InterleavedRule, Poly, PolyRule
from .errors import (
    BadInitialConditions,
    SingularStep,
    SpecFormatError,
    ZeroB,
    ZeroSeriesTerm,
)
from .numerics import as_rational, format_rational, parse_rational


def _positive_integer_roots(p: Poly) -> list[int]:
    if not p.coeffs:
        return [1]  # identically zero
    return [int(r) for r in p.rational_roots() if r.denominator == 1 and r >= 1]


@dataclass(frozen=True)
class ExplicitSeries:
    terms: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(as_rational(t) for t in self.terms))

    def raw_term(self, k: int) -> Fraction:
        if not 1 <= k <= len(self.terms):
            raise IndexError(f"explicit series has {len(self.terms)} terms; c_{k} requested")
        return self.terms[k - 1]


@dataclass(frozen=True)
class SignedQuotient:
    """c_k = s_k * num(k) / den(k), with s_k = (-1)^(k+1) when alternating, else 1."""

    num: Poly
    den: Poly
    alternating: bool = False

    def __post_init__(self):
        bad = _positive_integer_roots(self.den)
        if bad:
            raise SpecFormatError(f"series denominator vanishes at k={bad[0]}")

    def raw_term(self, k: int) -> Fraction:
        v = self.num(k) / self.den(k)
        return -v if self.alternating and k % 2 == 0 else v


@dataclass(frozen=True)
class SeriesSum:
    parts: tuple[SignedQuotient, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise SpecFormatError("sum series needs at least one part")

    def raw_term(self, k: int) -> Fraction:
        return sum((p.raw_term(k) for p in self.parts), Fraction(0))


SeriesSpec = Union[ExplicitSeries, SignedQuotient, SeriesSum]


def series_term(series: SeriesSpec, k: int) -> Fraction:
    c = series.raw_term(k)
    if c == 0:
        raise ZeroSeriesTerm(k)
    return c


def partial_sum(series: SeriesSpec, n: int) -> Fraction:
    """Exact sum c_1 + ... + c_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum((series_term(series, k) for k in range(1, n + 1)), Fraction(0))


def partial_sums(series: SeriesSpec, n: int) -> list[Fraction]:
    out, acc = [], Fraction(0)
    for k in range(1, n + 1):
        acc += series_term(series, k)
        out.append(acc)
    return out


def _ratio_rule(num_now: Poly, num_prev: Poly, den: Poly) -> PolyRule:
    """Terms a_n = -4r, b_n = 2(1 + r) for r = c_n/c_{n-1} given as polynomials in n.

    c_n = num_now(n)/den(n) and c_{n-1} = num_prev(n-1)/den(n-1).
    """
    shifted_num = num_prev.compose_linear(1, -1)
    shifted_den = den.compose_linear(1, -1)
    top = num_now * shifted_den           # r = top / bottom
    bottom = den * shifted_num
    return PolyRule(top * -4, (bottom + top) * 2, bottom, bottom)


def _combine(parts: Sequence[SignedQuotient], sign_of_alternating: int) -> tuple[Poly, Poly]:
    """Common-denominator numerator/denominator with alternating parts multiplied by a sign."""
    den = Poly([1])
    for p in parts:
        den = den * p.den
    num = Poly()
    for i, p in enumerate(parts):
        others = Poly([1])
        for j, q in enumerate(parts):
            if j != i:
                others = others * q.den
        term = p.num * others
        num = num + (term * sign_of_alternating if p.alternating else term)
    return num, den


def series_to_cf(series: SeriesSpec) -> CFSpec:
    """Continued fraction whose n-th convergent is the n-th partial sum.

    Uses A_n = 2^n (c_1 + ... + c_n), B_n = 2^n, which forces b_0 = 0,
    (a_1, b_1) = (2c_1, 2) and, for n >= 2, a_n = -4c_n/c_{n-1},
    b_n = 2(c_n + c_{n-1})/c_{n-1}.

    Quotient series keep the tail as a rational-function rule so later
    transforms can see the closed form; explicit series give explicit terms.
    """
    c1 = series_term(series, 1)
    head = (2 * c1, Fraction(2))
    if isinstance(series, ExplicitSeries):
        out = [head]
        for n in range(2, len(series.terms) + 1):
            r = series_term(series, n) / series_term(series, n - 1)
            out.append((-4 * r, 2 * (1 + r)))
        return CFSpec(Fraction(0), ExplicitRule(tuple(out)))

    parts = series.parts if isinstance(series, SeriesSum) else (series,)
    flags = {p.alternating for p in parts}
    if len(flags) == 1:
        # one sign pattern: c_n/c_{n-1} = sigma * N(n)D(n-1) / (D(n)N(n-1))
        num, den = _combine(parts, 1)
        _check_numerator(num)
        sigma = -1 if flags == {True} else 1
        tail = _ratio_rule(num * sigma, num, den)
        return CFSpec(Fraction(0), HybridRule(ExplicitRule((head,)), tail))

    # mixed: odd k sees every part with sign +, even k flips the alternating ones
    num_odd, den = _combine(parts, 1)
    num_even, _ = _combine(parts, -1)
    _check_numerator(num_odd)
    _check_numerator(num_even)
    odd_n = _ratio_rule(num_odd, num_even, den).compose_linear(2, -1)    # n = 2m - 1
    even_n = _ratio_rule(num_even, num_odd, den).compose_linear(2, 0)    # n = 2m
    return CFSpec(Fraction(0), HybridRule(ExplicitRule((head,)), InterleavedRule(2, (odd_n, even_n))))


def _check_numerator(num: Poly) -> None:
    zeros = _positive_integer_roots(num)
    if zeros:
        raise ZeroSeriesTerm(zeros[0])


# -- from convergent sequences ---------------------------------------------


@dataclass(frozen=True)
class SequencePair:
    """A and B indexed from -1: A[0] is A_{-1}, A[1] is A_0, and so on."""

    A: tuple[Fraction, ...]
    B: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(as_rational(x) for x in self.A))
        object.__setattr__(self, "B", tuple(as_rational(x) for x in self.B))
        if len(self.A) != len(self.B):
            raise SpecFormatError("A and B must have the same length")

    @property
    def depth(self) -> int:
        return len(self.A) - 2

    def a_(self, n: int) -> Fraction:
        return self.A[n + 1]

    def b_(self, n: int) -> Fraction:
        return self.B[n + 1]


def _validate_initial(seqs: SequencePair) -> None:
    if len(seqs.A) < 2:
        raise BadInitialConditions("need at least A_{-1}, A_0 and B_{-1}, B_0")
    if seqs.a_(-1) != 1 or seqs.b_(-1) != 0 or seqs.b_(0) != 1:
        raise BadInitialConditions(
            f"need A_-1 = 1, B_-1 = 0, B_0 = 1; got {seqs.a_(-1)}, {seqs.b_(-1)}, {seqs.b_(0)}")


def sequences_to_cf(seqs: SequencePair) -> CFSpec:
    """Recover b_0 = A_0 and (a_n, b_n) from prescribed convergent numerators/denominators.

    Solves the 2x2 system [[A_{n-1}, A_{n-2}], [B_{n-1}, B_{n-2}]] (b_n, a_n) = (A_n, B_n).
    The nonsingularity condition is checked for every n the data determines,
    including n = depth + 1, since it only involves A_{n-1}, A_{n-2}, B_{n-1}, B_{n-2}.
    """
    _validate_initial(seqs)
    A, B = seqs.a_, seqs.b_
    out = []
    for n in range(1, seqs.depth + 2):
        det = A(n - 1) * B(n - 2) - A(n - 2) * B(n - 1)
        if det == 0:
            raise SingularStep(n)
        if n > seqs.depth:
            break
        b = (A(n) * B(n - 2) - A(n - 2) * B(n)) / det
        a = (-A(n) * B(n - 1) + A(n - 1) * B(n)) / det
        out.append((a, b))
    return CFSpec(A(0), ExplicitRule(tuple(out)))


def rewrite_ratio_form(seqs: SequencePair, n: int) -> tuple[Fraction, Fraction]:
    """(a_n, b_n) computed from the convergents x_k = A_k/B_k instead of A, B directly."""
    for k in (n - 2, n - 1, n):
        if seqs.b_(k) == 0:
            raise ZeroB(k)
    A, B = seqs.a_, seqs.b_
    x0, x1, x2 = A(n - 2) / B(n - 2), A(n - 1) / B(n - 1), A(n) / B(n)
    if x1 == x0:
        raise SingularStep(n)
    b = (x2 - x0) / (x1 - x0) * (B(n) / B(n - 1))
    a = (x1 - x2) / (x1 - x0) * (B(n) / B(n - 2))
    return a, b


def twisted_sequences(series: SeriesSpec, depth: int) -> SequencePair:
    """A_n = 2^n (c_1 + ... + c_n), B_n = 2^n with A_0 = 0."""
    A = [Fraction(1), Fraction(0)]
    B = [Fraction(0), Fraction(1)]
    for n, s in enumerate(partial_sums(series, depth), start=1):
        A.append(2 ** n * s)
        B.append(Fraction(2 ** n))
    return SequencePair(tuple(A), tuple(B))


# -- JSON -------------------------------------------------------------------


def _quotient_to_dict(q: SignedQuotient) -> dict:
    return {"kind": "signed_quotient",
            "num": [format_rational(c) for c in q.num.coeffs],
            "den": [format_rational(c) for c in q.den.coeffs],
            "alternating": q.alternating}


def series_to_dict(series: SeriesSpec) -> dict:
    if isinstance(series, ExplicitSeries):
        return {"kind": "explicit", "terms": [format_rational(t) for t in series.terms]}
    if isinstance(series, SignedQuotient):
        return _quotient_to_dict(series)
    return {"kind": "sum", "parts": [_quotient_to_dict(p) for p in series.parts]}


def _poly_in(obj) -> Poly:
    if not isinstance(obj, list):
        raise SpecFormatError(f"polynomial must be a list of \"p/q\" strings, got {obj!r}")
    return Poly(parse_rational(str(c)) for c in obj)


def series_from_dict(obj: dict) -> SeriesSpec:
    if not isinstance(obj, dict):
        raise SpecFormatError("series must be a JSON object")
    kind = obj.get("kind")
    try:
        if kind == "explicit":
            return ExplicitSeries(tuple(parse_rational(str(t)) for t in obj["terms"]))
        if kind == "signed_quotient":
            return SignedQuotient(_poly_in(obj["num"]), _poly_in(obj["den"]),
                                  bool(obj.get("alternating", False)))
        if kind == "sum":
            parts = [series_from_dict(p) for p in obj["parts"]]
            if not all(isinstance(p, SignedQuotient) for p in parts):
                raise SpecFormatError("sum parts must be signed_quotient series")
            return SeriesSum(tuple(parts))
    except KeyError as exc:
        raise SpecFormatError(f"{kind} series is missing field {exc}") from None
    raise SpecFormatError(f"unknown series kind {kind!r}")


def sequences_from_dict(obj: dict) -> SequencePair:
    try:
        return SequencePair(tuple(parse_rational(str(x)) for x in obj["A"]),
                            tuple(parse_rational(str(x)) for x in obj["B"]))
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"sequence file needs \"A\" and \"B\" lists: {exc}") from None


def sequences_to_dict(seqs: SequencePair) -> dict:
    return {"A": [format_rational(x) for x in seqs.A], "B": [format_rational(x) for x in seqs.B]}
