"""Value-preserving and value-negating rewrites of continued fraction terms."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence, Union

from .core import (
    CFSpec,
    ExplicitRule,
    HybridRule,
    InterleavedRule,
    ONE,
    Poly,
    PolyRule,
    TermRule,
    term_at,
)
from .errors import ZeroScalar
from .numerics import as_rational

ScalarSequence = Union[Sequence, Callable[[int], Fraction]]


def _negate_rule(rule: TermRule) -> TermRule:
    if isinstance(rule, ExplicitRule):
        return ExplicitRule(tuple((a, -b) for a, b in rule.terms))
    if isinstance(rule, PolyRule):
        return rule.negate_b()
    if isinstance(rule, InterleavedRule):
        return InterleavedRule(rule.period, tuple(r.negate_b() for r in rule.rules))
    if isinstance(rule, HybridRule):
        return HybridRule(_negate_rule(rule.prefix), _negate_rule(rule.tail))
    raise TypeError(f"not a term rule: {rule!r}")


def negate(spec: CFSpec) -> CFSpec:
    """b_n -> -b_n for every n >= 0; each convergent changes sign."""
    return CFSpec(-spec.b0, _negate_rule(spec.rule), spec.name)


def _flip_explicit(terms):
    return tuple((-a, -b if i % 2 == 0 else b) for i, (a, b) in enumerate(terms))


def _flip_interleaved(rule: InterleavedRule) -> InterleavedRule:
    p = rule.period
    if p % 2 == 0:
        # slot j always sees indices n = j+1 (mod p), so parity is fixed per slot
        return InterleavedRule(p, tuple(
            r.negate_a().negate_b() if j % 2 == 0 else r.negate_a()
            for j, r in enumerate(rule.rules)))
    # odd period: widen to 2p so parity is fixed; new block m' maps to old block 2m' - 2 + ceil(j/p)
    new_rules = []
    for j in range(1, 2 * p + 1):
        base = rule.rules[(j - 1) % p].compose_linear(2, -1 if j <= p else 0)
        base = base.negate_a()
        new_rules.append(base.negate_b() if j % 2 == 1 else base)
    return InterleavedRule(2 * p, tuple(new_rules))


def _flip_rule(rule: TermRule) -> TermRule:
    if isinstance(rule, ExplicitRule):
        return ExplicitRule(_flip_explicit(rule.terms))
    if isinstance(rule, PolyRule):
        return _flip_interleaved(InterleavedRule(1, (rule,)))
    if isinstance(rule, InterleavedRule):
        return _flip_interleaved(rule)
    if isinstance(rule, HybridRule):
        prefix = ExplicitRule(_flip_explicit(rule.prefix.terms))
        return HybridRule(prefix, _flip_rule(rule.tail))
    raise TypeError(f"not a term rule: {rule!r}")


def sign_flip(spec: CFSpec) -> CFSpec:
    """a_n -> -a_n for all n >= 1 and b_n -> -b_n for odd n; every convergent is kept."""
    return CFSpec(spec.b0, _flip_rule(spec.rule), spec.name)


def _scalar(c: ScalarSequence, n: int) -> Fraction:
    v = as_rational(c(n) if callable(c) else c[n - 1])
    if v == 0:
        raise ZeroScalar(f"scalar c_{n} is zero")
    return v


def equivalence_scale(spec: CFSpec, c: ScalarSequence, depth: int) -> CFSpec:
    """Rescale a_n -> c_n c_{n-1} a_n and b_n -> c_n b_n (c_0 = 1) for n <= depth.

    ``c`` is either a sequence holding c_1..c_depth or a callable n -> c_n.
    """
    out = []
    prev = Fraction(1)
    for n in range(1, depth + 1):
        cn = _scalar(c, n)
        a, b = term_at(spec, n)
        out.append((cn * prev * a, cn * b))
        prev = cn
    return CFSpec(spec.b0, ExplicitRule(tuple(out)), spec.name)


def least_clearing_scalar(x: Fraction, y: Fraction) -> Fraction:
    """Least positive c with c*x and c*y both integers.

    With L = lcm of the denominators and g = gcd(x*L, y*L), c = L/g.
    """
    x, y = as_rational(x), as_rational(y)
    L = math.lcm(x.denominator, y.denominator)
    g = math.gcd(x.numerator * (L // x.denominator), y.numerator * (L // y.denominator))
    return Fraction(L, g) if g else Fraction(L)


def _least_square_multiple(q: int) -> int:
    """Least j >= 1 with q dividing j*j."""
    j, d = 1, 2
    while d * d <= q:
        e = 0
        while q % d == 0:
            q //= d
            e += 1
        j *= d ** ((e + 1) // 2)
        d += 1
    return j * q  # leftover q is 1 or prime


def _polynomial_scalar(tail: PolyRule, start: int, depth: int):
    """Scalar c_n = kappa * L(n)/F(n) that turns a closed-form tail into integer polynomials.

    L is the tail's denominator; F collects linear factors f with f(n) | b'_n and
    f(n) f(n-1) | a'_n, which would otherwise inflate every term. kappa is the least
    positive constant giving integer coefficients. Returns None when L/F vanishes
    somewhere in start..depth or a term polynomial is identically zero.
    """
    same = tail.a_den == tail.b_den
    L = tail.a_den if same else tail.a_den * tail.b_den
    A = tail.a * (ONE if same else tail.b_den) * L.compose_linear(1, -1)
    B = tail.b * (ONE if same else tail.a_den)
    if not A.coeffs or not B.coeffs:
        return None
    F = ONE
    reduced = True
    while reduced:
        reduced = False
        for r in B.rational_roots():
            q1, rem1 = A.divide_linear(r)
            if rem1:
                continue
            q2, rem2 = q1.divide_linear(r + 1)
            if rem2:
                continue
            A, B, F = q2, B.divide_linear(r)[0], F * Poly([-r, 1])
            reduced = True
            break
    alpha, beta = A.content(), B.content()
    kappa = Fraction(_least_square_multiple((alpha / beta ** 2).denominator)) / beta
    for n in range(start, depth + 1):
        if L(n) == 0 or F(n) == 0:
            return None
    return lambda n: kappa * L(n) / F(n)


def clearing_scalars(spec: CFSpec, depth: int, closed_form: bool = True) -> list[Fraction]:
    """Scalars c_1..c_depth that make every rescaled term an integer.

    Explicit terms get the least positive scalar, chosen left to right. A closed-form
    tail (polynomial or rational rule, alone or behind an explicit prefix) gets a
    polynomial scalar instead, so the cleared tail stays polynomial in n; set
    ``closed_form=False`` to force the term-by-term choice everywhere.
    """
    rule = spec.rule
    tail, start = None, depth + 1
    if closed_form and isinstance(rule, PolyRule):
        tail, start = rule, 1
    elif closed_form and isinstance(rule, HybridRule) and isinstance(rule.tail, PolyRule):
        tail, start = rule.tail, len(rule.prefix.terms) + 1
    poly_scalar = _polynomial_scalar(tail, start, depth) if tail is not None and start <= depth else None
    if poly_scalar is None:
        start = depth + 1

    scalars = []
    prev = Fraction(1)
    for n in range(1, min(start, depth + 1)):
        a, b = term_at(spec, n)
        cn = least_clearing_scalar(prev * a, b)
        scalars.append(cn)
        prev = cn
    if start <= depth:
        # the first tail term couples to the last explicit scalar; an integer factor fixes it
        a, _ = term_at(spec, start)
        t = (poly_scalar(start) * prev * a).denominator
        scalars.extend(t * poly_scalar(n) for n in range(start, depth + 1))
    return scalars


def clear_denominators(spec: CFSpec, depth: int, closed_form: bool = True) -> CFSpec:
    """Explicit integer terms for 1..depth with the same convergents as ``spec``.

    See :func:`clearing_scalars` for how the scalars are picked. b0 is left alone.
    """
    out = equivalence_scale(spec, clearing_scalars(spec, depth, closed_form), depth)
    if any(a.denominator != 1 or b.denominator != 1 for a, b in out.rule.terms):
        # closed-form scalar missed an integrality condition; fall back to term by term
        out = equivalence_scale(spec, clearing_scalars(spec, depth, False), depth)
    return out
