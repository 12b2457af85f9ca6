"""Generalized continued fractions and their convergents.

A spec is ``b0 + a1/(b1 + a2/(b2 + ...))``. Convergents ``A_n/B_n`` come from
the three-term recurrences

    A_n = b_n A_{n-1} + a_n A_{n-2},   B_n = b_n B_{n-1} + a_n B_{n-2}

started at ``A_{-1} = 1, A_0 = b0, B_{-1} = 0, B_0 = 1``.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

import gmpy2
import numpy as np

from .errors import IndexOutOfRule, SpecFormatError, ZeroDenominatorConvergent
from .numerics import (
    DEFAULT_PRECISION,
    ApproxReal,
    as_rational,
    format_rational,
    parse_rational,
)

Term = tuple[Fraction, Fraction]


class Poly:
    """Polynomial with rational coefficients, constant term first, trailing zeros trimmed."""

    __slots__ = ("coeffs", "_int_coeffs")

    def __init__(self, coeffs=()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._int_coeffs = (tuple(c.numerator for c in cs)
                            if all(c.denominator == 1 for c in cs) else None)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        if self._int_coeffs is not None and isinstance(x, int):
            acc = 0
            for c in reversed(self._int_coeffs):
                acc = acc * x + c
            return Fraction(acc)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = as_rational(other)
            return Poly(x * c for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def compose_linear(self, s, t) -> Poly:
        """Return the polynomial m -> p(s*m + t)."""
        lin = Poly([t, s])
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * lin + Poly([c])
        return acc

    def content(self) -> Fraction:
        """Positive rational g with self/g having coprime integer coefficients."""
        if not self.coeffs:
            return Fraction(0)
        L = math.lcm(*(c.denominator for c in self.coeffs))
        g = math.gcd(*(int(c * L) for c in self.coeffs))
        return Fraction(g, L)

    def divide_linear(self, r) -> tuple[Poly, Fraction]:
        """Synthetic division by (x - r): returns (quotient, remainder)."""
        r = as_rational(r)
        if not self.coeffs:
            return Poly(), Fraction(0)
        out = []
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * r + c
            out.append(acc)
        rem = out.pop()
        return Poly(reversed(out)), rem

    def rational_roots(self) -> list[Fraction]:
        """Distinct rational roots, located numerically and confirmed exactly."""
        if self.degree < 1:
            return []
        p, roots = self, []
        while p.coeffs and p.coeffs[0] == 0:
            p = Poly(p.coeffs[1:])
            if Fraction(0) not in roots:
                roots.append(Fraction(0))
        if p.degree < 1:
            return roots
        scaled = [float(c / p.content()) for c in reversed(p.coeffs)]
        lead = abs(int(p.coeffs[-1] / p.content()))
        for z in np.roots(scaled):
            if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
                continue
            cand = Fraction(float(z.real)).limit_denominator(max(lead, 1))
            for guess in (cand, Fraction(round(z.real))):
                if guess not in roots and p(guess) == 0:
                    roots.append(guess)
        return sorted(roots)

    @classmethod
    def from_roots(cls, *factors) -> Poly:
        """Product of linear factors given as (constant, slope) pairs."""
        acc = Poly([1])
        for c, s in factors:
            acc = acc * Poly([c, s])
        return acc


ONE = Poly([1])


@dataclass(frozen=True)
class PolyRule:
    """Closed-form term pair: a(x) = a_num/a_den, b(x) = b_num/b_den.

    With unit denominators this is an ordinary polynomial rule.
    """

    a: Poly
    b: Poly
    a_den: Poly = ONE
    b_den: Poly = ONE

    @property
    def is_polynomial(self) -> bool:
        return self.a_den == ONE and self.b_den == ONE

    def at(self, x: int) -> Term:
        a = self.a(x)
        b = self.b(x)
        if self.a_den != ONE:
            d = self.a_den(x)
            if d == 0:
                raise IndexOutOfRule(f"a-denominator vanishes at {x}")
            a /= d
        if self.b_den != ONE:
            d = self.b_den(x)
            if d == 0:
                raise IndexOutOfRule(f"b-denominator vanishes at {x}")
            b /= d
        return a, b

    def term(self, n: int) -> Term:
        return self.at(n)

    def compose_linear(self, s, t) -> PolyRule:
        return PolyRule(*(p.compose_linear(s, t) for p in (self.a, self.b, self.a_den, self.b_den)))

    def negate_a(self) -> PolyRule:
        return PolyRule(-self.a, self.b, self.a_den, self.b_den)

    def negate_b(self) -> PolyRule:
        return PolyRule(self.a, -self.b, self.a_den, self.b_den)


@dataclass(frozen=True)
class ExplicitRule:
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms",
                           tuple((as_rational(a), as_rational(b)) for a, b in self.terms))

    def term(self, n: int) -> Term:
        if not 1 <= n <= len(self.terms):
            raise IndexOutOfRule(f"explicit rule has {len(self.terms)} terms; index {n} requested")
        return self.terms[n - 1]


@dataclass(frozen=True)
class InterleavedRule:
    """Period-p rule: index n uses rules[(n-1) % p] evaluated at block m = ceil(n/p)."""

    period: int
    rules: tuple[PolyRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        if self.period < 1 or len(self.rules) != self.period:
            raise SpecFormatError(f"interleaved rule needs period >= 1 and exactly period sub-rules")

    def term(self, n: int) -> Term:
        m = (n + self.period - 1) // self.period
        return self.rules[(n - 1) % self.period].at(m)


@dataclass(frozen=True)
class HybridRule:
    """Explicit prefix, then a closed-form tail evaluated at the global index n."""

    prefix: ExplicitRule
    tail: Union[PolyRule, InterleavedRule]

    def term(self, n: int) -> Term:
        if n <= len(self.prefix.terms):
            return self.prefix.term(n)
        return self.tail.term(n)


TermRule = Union[ExplicitRule, PolyRule, InterleavedRule, HybridRule]


@dataclass(frozen=True)
class CFSpec:
    b0: Fraction
    rule: TermRule
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "b0", as_rational(self.b0))

    def renamed(self, name):
        return CFSpec(self.b0, self.rule, name)


def term_at(spec: CFSpec, n: int) -> Term:
    if n < 1:
        raise IndexOutOfRule(f"term index must be >= 1, got {n}")
    return spec.rule.term(n)


def terms(spec: CFSpec, depth: int, start: int = 1) -> Iterator[Term]:
    for n in range(start, depth + 1):
        yield term_at(spec, n)


def explicit_spec(spec: CFSpec, depth: int) -> CFSpec:
    """Truncate any spec to an explicit rule of ``depth`` terms."""
    return CFSpec(spec.b0, ExplicitRule(tuple(terms(spec, depth))), spec.name)


# -- recurrences ------------------------------------------------------------


@dataclass(frozen=True)
class ConvergentState:
    n: int
    A_curr: Fraction
    A_prev: Fraction
    B_curr: Fraction
    B_prev: Fraction
    a_product: Fraction = Fraction(1)


def init_state(b0) -> ConvergentState:
    return ConvergentState(0, as_rational(b0), Fraction(1), Fraction(1), Fraction(0))


def step(state: ConvergentState, a, b) -> ConvergentState:
    a, b = as_rational(a), as_rational(b)
    return ConvergentState(
        state.n + 1,
        b * state.A_curr + a * state.A_prev,
        state.A_curr,
        b * state.B_curr + a * state.B_prev,
        state.B_curr,
        state.a_product * a,
    )


def convergent(state: ConvergentState) -> Fraction:
    if state.B_curr == 0:
        raise ZeroDenominatorConvergent(state.n)
    return state.A_curr / state.B_curr


def determinant(state: ConvergentState) -> Fraction:
    """A_n B_{n-1} - A_{n-1} B_n, which equals (-1)^(n-1) * prod(a_k)."""
    if state.n < 1:
        raise ValueError("determinant needs n >= 1")
    return state.A_curr * state.B_prev - state.A_prev * state.B_curr


def states(spec: CFSpec, depth: int) -> Iterator[ConvergentState]:
    """Yield the states for n = 0..depth."""
    s = init_state(spec.b0)
    yield s
    for a, b in terms(spec, depth):
        s = step(s, a, b)
        yield s


def convergent_sequences(spec: CFSpec, depth: int) -> tuple[list[Fraction], list[Fraction]]:
    """(A, B) lists indexed from -1, i.e. A[0] = A_{-1}, through A_depth."""
    A = [Fraction(1)]
    B = [Fraction(0)]
    for s in states(spec, depth):
        A.append(s.A_curr)
        B.append(s.B_curr)
    return A, B


# -- evaluation -------------------------------------------------------------


@dataclass
class EvalReport:
    depth: int
    value: Union[Fraction, ApproxReal]
    error_estimate: Union[Fraction, ApproxReal]
    backend: str
    wall_time: float
    value_depth: int = 0
    precision: int | None = None
    renormalizations: int = 0
    rigorous: bool = False
    notes: list[str] = field(default_factory=list)


def evaluate(spec: CFSpec, depth: int, backend: str = "exact",
             precision: int = DEFAULT_PRECISION) -> EvalReport:
    """Fold the recurrences over terms 1..depth.

    When B_n vanishes the depth is skipped and the report carries the last defined
    convergent (``value_depth`` tells which). The error estimate is |x_n - x_{n-1}|
    over the last two defined convergents, which is a heuristic, not a bound.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if backend == "exact":
        return _evaluate_exact(spec, depth)
    if backend == "approx":
        return _evaluate_approx(spec, depth, precision)
    raise ValueError(f"unknown backend {backend!r}")


def _evaluate_exact(spec: CFSpec, depth: int) -> EvalReport:
    t0 = time.perf_counter()
    A_prev, A, B_prev, B = Fraction(1), spec.b0, Fraction(0), Fraction(1)
    last, last_n, before = spec.b0, 0, None
    for n in range(1, depth + 1):
        a, b = term_at(spec, n)
        A_prev, A = A, b * A + a * A_prev
        B_prev, B = B, b * B + a * B_prev
        if B != 0:
            before, last, last_n = last, A / B, n
    err = abs(last - before) if before is not None else Fraction(0)
    report = EvalReport(depth, last, err, "exact", time.perf_counter() - t0, value_depth=last_n)
    if last_n != depth:
        report.notes.append(f"B_{depth} = 0; value is the depth-{last_n} convergent")
    return report


def _evaluate_approx(spec: CFSpec, depth: int, precision: int) -> EvalReport:
    t0 = time.perf_counter()
    ctx = gmpy2.context(precision=precision, round=gmpy2.RoundToNearest)
    renorms = 0
    with ctx:
        mpfr = gmpy2.mpfr
        limit = mpfr(2) ** (precision // 2)
        A_prev, A, B_prev, B = mpfr(1), mpfr(gmpy2.mpq(spec.b0.numerator, spec.b0.denominator)), mpfr(0), mpfr(1)
        last, last_n, before = A, 0, None
        for n in range(1, depth + 1):
            a, b = term_at(spec, n)
            a = mpfr(gmpy2.mpq(a.numerator, a.denominator))
            b = mpfr(gmpy2.mpq(b.numerator, b.denominator))
            A_prev, A = A, b * A + a * A_prev
            B_prev, B = B, b * B + a * B_prev
            if abs(B) > limit or abs(A) > limit:
                # exact scaling by a power of two; the ratio is untouched
                shift = max(gmpy2.get_exp(B) if B else 0, gmpy2.get_exp(A) if A else 0)
                A_prev, A = gmpy2.mul_2exp(A_prev, -shift), gmpy2.mul_2exp(A, -shift)
                B_prev, B = gmpy2.mul_2exp(B_prev, -shift), gmpy2.mul_2exp(B, -shift)
                renorms += 1
            if B != 0:
                before, last, last_n = last, A / B, n
        err = abs(last - before) if before is not None else mpfr(0)
    report = EvalReport(depth, ApproxReal(last, precision), ApproxReal(err, precision), "approx",
                        time.perf_counter() - t0, value_depth=last_n, precision=precision,
                        renormalizations=renorms)
    if last_n != depth:
        report.notes.append(f"B_{depth} = 0; value is the depth-{last_n} convergent")
    return report


# -- JSON file format -------------------------------------------------------


def _poly_out(p: Poly) -> list[str]:
    return [format_rational(c) for c in p.coeffs]


def _poly_in(obj) -> Poly:
    if not isinstance(obj, list):
        raise SpecFormatError(f"polynomial must be a list of \"p/q\" strings, got {obj!r}")
    return Poly(parse_rational(str(c)) for c in obj)


def _terms_out(terms_) -> list[list[str]]:
    return [[format_rational(a), format_rational(b)] for a, b in terms_]


def _terms_in(obj) -> tuple[Term, ...]:
    try:
        return tuple((parse_rational(str(a)), parse_rational(str(b))) for a, b in obj)
    except (TypeError, ValueError) as exc:
        raise SpecFormatError(f"terms must be a list of [a, b] pairs: {exc}") from None


def rule_to_dict(rule: TermRule) -> dict:
    if isinstance(rule, ExplicitRule):
        return {"kind": "explicit", "terms": _terms_out(rule.terms)}
    if isinstance(rule, PolyRule):
        if rule.is_polynomial:
            return {"kind": "polynomial", "a": _poly_out(rule.a), "b": _poly_out(rule.b)}
        return {"kind": "rational", "a": _poly_out(rule.a), "a_den": _poly_out(rule.a_den),
                "b": _poly_out(rule.b), "b_den": _poly_out(rule.b_den)}
    if isinstance(rule, InterleavedRule):
        return {"kind": "interleaved", "period": rule.period,
                "rules": [rule_to_dict(r) for r in rule.rules]}
    if isinstance(rule, HybridRule):
        return {"kind": "hybrid", "prefix": _terms_out(rule.prefix.terms),
                "tail": rule_to_dict(rule.tail)}
    raise TypeError(f"not a term rule: {rule!r}")


def rule_from_dict(obj: dict) -> TermRule:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SpecFormatError("rule must be an object with a \"kind\" field")
    kind = obj["kind"]
    try:
        if kind == "explicit":
            return ExplicitRule(_terms_in(obj["terms"]))
        if kind == "polynomial":
            return PolyRule(_poly_in(obj["a"]), _poly_in(obj["b"]))
        if kind == "rational":
            return PolyRule(_poly_in(obj["a"]), _poly_in(obj["b"]),
                            _poly_in(obj.get("a_den", ["1"])), _poly_in(obj.get("b_den", ["1"])))
        if kind == "interleaved":
            rules = tuple(rule_from_dict(r) for r in obj["rules"])
            if not all(isinstance(r, PolyRule) for r in rules):
                raise SpecFormatError("interleaved sub-rules must be polynomial or rational")
            return InterleavedRule(int(obj["period"]), rules)
        if kind == "hybrid":
            tail = rule_from_dict(obj["tail"])
            if not isinstance(tail, (PolyRule, InterleavedRule)):
                raise SpecFormatError("hybrid tail must be polynomial, rational or interleaved")
            return HybridRule(ExplicitRule(_terms_in(obj["prefix"])), tail)
    except KeyError as exc:
        raise SpecFormatError(f"{kind} rule is missing field {exc}") from None
    raise SpecFormatError(f"unknown rule kind {kind!r}")


def spec_to_dict(spec: CFSpec) -> dict:
    out = {}
    if spec.name is not None:
        out["name"] = spec.name
    out["b0"] = format_rational(spec.b0)
    out["rule"] = rule_to_dict(spec.rule)
    return out


def spec_from_dict(obj: dict) -> CFSpec:
    if not isinstance(obj, dict) or "b0" not in obj or "rule" not in obj:
        raise SpecFormatError("spec must be an object with \"b0\" and \"rule\"")
    return CFSpec(parse_rational(str(obj["b0"])), rule_from_dict(obj["rule"]), obj.get("name"))


def dumps_spec(spec: CFSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2) + "\n"


def loads_spec(text: str) -> CFSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"invalid JSON: {exc}") from None
    return spec_from_dict(obj)


def make_spec(b0, pairs: Sequence[tuple] = (), name=None) -> CFSpec:
    """Convenience constructor for an explicit spec from (a, b) pairs."""
    return CFSpec(as_rational(b0), ExplicitRule(tuple(pairs)), name)
