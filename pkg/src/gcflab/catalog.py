"""Named expansions of e and pi, closed-form convergent oracles, and verification.

Each entry pairs a spec with the constant it should converge to. Entries whose
printed form disagrees with its own derivation are kept twice: the corrected
form under the plain name and the printed one under a ``_printed`` name, so the
discrepancy can be demonstrated rather than hidden.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .constants import reference_value
from .core import (
    CFSpec,
    ExplicitRule,
    HybridRule,
    InterleavedRule,
    Poly,
    PolyRule,
    evaluate,
)
from .errors import NoOracle, SpecFormatError, UnknownEntry
from .generate import SeriesSpec, SeriesSum, SignedQuotient, series_term
from .numerics import (
    DEFAULT_PRECISION,
    DecimalString,
    as_rational,
    format_rational,
    matched_digits,
    parse_rational,
    rat_to_decimal,
    to_exact,
)
from .transforms import negate, sign_flip

STATUSES = ("theorem", "conjecture", "classical")


@dataclass(frozen=True)
class ConstantExpr:
    """scale * base + offset, with base one of e, pi."""

    base: str
    scale: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        if self.base not in ("e", "pi"):
            raise ValueError(f"base must be 'e' or 'pi', got {self.base!r}")
        object.__setattr__(self, "scale", as_rational(self.scale))
        object.__setattr__(self, "offset", as_rational(self.offset))

    def approximate(self, digits: int) -> Fraction:
        # guard digits cover the amplification by |scale|
        extra = len(str(abs(self.scale.numerator))) + 2
        return self.scale * reference_value(self.base, digits + extra) + self.offset

    def reference(self, digits: int) -> DecimalString:
        return rat_to_decimal(self.approximate(digits), digits)

    def __str__(self):
        if self.scale == 1:
            head = self.base
        elif self.scale == -1:
            head = f"-{self.base}"
        else:
            head = f"{format_rational(self.scale)}*{self.base}"
        if self.offset == 0:
            return head
        sign = "+" if self.offset > 0 else "-"
        return f"{head}{sign}{format_rational(abs(self.offset))}"

    _PATTERN = re.compile(
        r"^\s*(?:(?P<scale>[+-]?\d+(?:/\d+)?)\s*\*\s*|(?P<neg>-)?)(?P<base>e|pi)"
        r"\s*(?:(?P<sign>[+-])\s*(?P<off>\d+(?:/\d+)?))?\s*$")

    @classmethod
    def parse(cls, text: str) -> ConstantExpr:
        """Parse ``"[scale*]base[+-offset]"``, e.g. ``"-1/2*e"``, ``"e-2"``, ``"1/2*pi+1"``."""
        m = cls._PATTERN.match(text)
        if not m:
            raise SpecFormatError(f"bad target expression {text!r}; expected e.g. -1/2*pi+1")
        if m.group("scale"):
            scale = parse_rational(m.group("scale"))
        else:
            scale = Fraction(-1 if m.group("neg") else 1)
        offset = Fraction(0)
        if m.group("off"):
            offset = parse_rational(m.group("off"))
            if m.group("sign") == "-":
                offset = -offset
        return cls(m.group("base"), scale, offset)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    spec: CFSpec
    target: ConstantExpr
    status: str
    description: str = ""
    oracle: Optional[Callable[[int], tuple[Fraction, Fraction]]] = None
    errata: tuple[str, ...] = ()
    series: Optional[SeriesSpec] = None
    as_printed: bool = False
    depth: int = 50
    digits: int = 10
    backend: str = "exact"

    @property
    def gates_exit(self) -> bool:
        """Whether a failed verification of this entry should fail the run."""
        return self.status != "conjecture" and not self.as_printed


# -- closed forms ------------------------------------------------------------


def subfactorial(n: int) -> int:
    """Number of derangements of n letters, n! * sum_{k<=n} (-1)^k/k!."""
    if n < 0:
        raise ValueError("n must be >= 0")
    total, term = 0, 1  # term = n!/k!, running from k = n down to 0
    for k in range(n, -1, -1):
        total += term if k % 2 == 0 else -term
        term *= k
    return total


def _e_half_oracle(n: int) -> tuple[Fraction, Fraction]:
    return Fraction(math.factorial(n + 2), 2), Fraction(subfactorial(n + 2))


def _e_minus_2_oracle(n: int) -> tuple[Fraction, Fraction]:
    if n % 2 == 1:
        m = (n + 1) // 2
        d = subfactorial(m + 1)
        return Fraction(math.factorial(m + 1) - 2 * d), Fraction(d)
    m = n // 2
    B = subfactorial(m + 1) + subfactorial(m + 2)
    return Fraction(math.factorial(m + 1) + math.factorial(m + 2) - 2 * B), Fraction(B)


# -- series behind the pi entries ---------------------------------------------

LEIBNIZ = SignedQuotient(Poly([1]), Poly([-1, 2]), alternating=True)
LANGE = SignedQuotient(Poly([1]), Poly.from_roots((0, 2), (1, 2), (2, 2)), alternating=True)
PI_THIRDS = SeriesSum((SignedQuotient(Poly([1]), Poly([-5, 6]), alternating=True),
                       SignedQuotient(Poly([1]), Poly([-1, 6]), alternating=True)))

SERIES = {
    "leibniz": (LEIBNIZ, ConstantExpr("pi", Fraction(1, 4))),
    "lange": (LANGE, ConstantExpr("pi", Fraction(1, 4), Fraction(-3, 4))),
    "pi_thirds": (PI_THIRDS, ConstantExpr("pi", Fraction(1, 3))),
}


# -- specs -------------------------------------------------------------------


def _p(*coeffs):
    return Poly(coeffs)


def _hybrid(prefix, tail):
    return HybridRule(ExplicitRule(tuple(prefix)), tail)


E_HALF = CFSpec(1, _hybrid([(1, 2)], PolyRule(_p(1, 1), _p(1, 1))), "e_half")
E_MINUS_2 = CFSpec(1, InterleavedRule(2, (PolyRule(_p(-1), _p(1)), PolyRule(_p(1, 1), _p(1)))),
                   "e_minus_2")
LU_WEI_E = CFSpec(3, PolyRule(_p(0, -1), _p(3, 1)), "lu_wei_e")

NEG_E = CFSpec(-3, PolyRule(_p(0, -1), _p(-3, -1)), "neg_e")
NEG_E_HALF = CFSpec(-1, _hybrid([(1, -2)], PolyRule(_p(1, 1), _p(-1, -1))), "neg_e_half")
NEG_E_HALF_PRINTED = CFSpec(-1, PolyRule(_p(1, 1), _p(-1, -1)), "neg_e_half_printed")
TWO_MINUS_E = CFSpec(-1, InterleavedRule(2, (PolyRule(_p(-1), _p(-1)), PolyRule(_p(1, 1), _p(-1)))),
                     "two_minus_e")
E_MINUS_2_ALT = CFSpec(1, InterleavedRule(2, (PolyRule(_p(1), _p(-1)), PolyRule(_p(-1, -1), _p(1)))),
                       "e_minus_2_alt")

# a_n = -(n+1)(2n-1), b_n = -3(n+1)
PI2_FORM1 = CFSpec(-3, PolyRule(_p(1, -1, -2), _p(-3, -3)), "pi_plus_2_half_form1")
# sign-flipped form 1 written per block m: n = 2m-1 and n = 2m
PI2_FORM3 = CFSpec(-3, InterleavedRule(2, (PolyRule(_p(0, -6, 8), _p(0, 6)),
                                           PolyRule(_p(-1, 2, 8), _p(-3, -6)))),
                   "pi_plus_2_half_form3")
PI2_FORM2 = negate(PI2_FORM1).renamed("pi_plus_2_half_form2")
PI2_FORM4 = negate(sign_flip(PI2_FORM1)).renamed("pi_plus_2_half_form4")
PI2_FORM2_PRINTED = CFSpec(3, _hybrid([(-2, 6), (9, 9)], PolyRule(_p(1, -1, -2), _p(3, 3))),
                           "pi_plus_2_half_form2_printed")
PI2_FORM4_PRINTED = CFSpec(3, _hybrid([(2, -6), (-9, 9)],
                                      InterleavedRule(2, (PolyRule(_p(0, -6, 8), _p(0, -6)),
                                                          PolyRule(_p(-1, 2, 8), _p(3, 6))))),
                           "pi_plus_2_half_form4_printed")

BROUNCKER = CFSpec(0, _hybrid([(1, 1)], PolyRule(_p(9, -12, 4), _p(2))), "brouncker_pi_4")
LANGE_CF = CFSpec(0, _hybrid([(1, 24), (36, 6)], PolyRule(_p(1, -4, 4), _p(6))), "lange_pi_minus_3_4")

# a_n = (2n-1)(2n-5)(6n-11)^2(6n-7)^2, b_n = 2(36n^2 - 72n + 31) for n >= 2
_PI3_A = Poly.from_roots((-1, 2), (-5, 2), (-11, 6), (-11, 6), (-7, 6), (-7, 6))
_PI3_B = _p(62, -144, 72)
PI_THIRDS_CF = CFSpec(0, _hybrid([(-6, -5)], PolyRule(_PI3_A, _PI3_B)), "pi_thirds")
PI_THIRDS_PRINTED = CFSpec(0, _hybrid([(-6, -5), (-75, 63)], PolyRule(_PI3_A, _PI3_B)),
                           "pi_thirds_printed")

_NEG_HALF_PI_MINUS_1 = ConstantExpr("pi", Fraction(-1, 2), -1)
_HALF_PI_PLUS_1 = ConstantExpr("pi", Fraction(1, 2), 1)
_COR7_ERRATUM = ("printed a_2 = +3*3 in the (pi+2)/2 forms disagrees with the sign identities "
                 "applied to form 1, which require a_2 = -3*3; the printed variant "
                 "converges to about 2.7275 instead")
_FORM4_ERRATUM = ("printed a_2 = -3*3 disagrees with negate(sign_flip(form 1)), "
                  "which requires a_2 = +3*3")

_ENTRIES = [
    CatalogEntry("e_half", E_HALF, ConstantExpr("e", Fraction(1, 2)), "theorem",
                 "e/2 = 1 + 1/2 + 3/3 + 4/4 + ...", oracle=_e_half_oracle,
                 errata=("the proof states a_n = n+1 for n >= 1, but the expansion has a_1 = 1; "
                         "the expansion is used",),
                 depth=20, digits=15),
    CatalogEntry("e_minus_2", E_MINUS_2, ConstantExpr("e", 1, -2), "theorem",
                 "e - 2 = 1 + -1/1 + 2/1 + -1/1 + 3/1 + ...", oracle=_e_minus_2_oracle,
                 errata=("odd-index closed forms hold with n+1 in place of n: "
                         "B_{2n-1} = D(n+1) and A_{2n-1} = (n+1)! - 2 D(n+1)",),
                 depth=40, digits=12),
    CatalogEntry("lu_wei_e", LU_WEI_E, ConstantExpr("e"), "classical",
                 "e = 3 + -1/4 + -2/5 + -3/6 + ...", depth=40, digits=15),
    CatalogEntry("neg_e", NEG_E, ConstantExpr("e", -1), "theorem",
                 "-e = -3 + -1/-4 + -2/-5 + ... (negation of lu_wei_e)", depth=40, digits=15),
    CatalogEntry("neg_e_half", NEG_E_HALF, ConstantExpr("e", Fraction(-1, 2)), "theorem",
                 "-e/2 = -1 + 1/-2 + 3/-3 + 4/-4 + ... (negation of e_half)",
                 errata=("printed with a_1 = 2, which converges to 1 - e; negating e_half "
                         "gives a_1 = 1",),
                 depth=20, digits=15),
    CatalogEntry("neg_e_half_printed", NEG_E_HALF_PRINTED, ConstantExpr("e", Fraction(-1, 2)),
                 "theorem", "-1 + 2/-2 + 3/-3 + 4/-4 + ... as printed",
                 errata=("converges to 1 - e, not -e/2",), as_printed=True, depth=20, digits=15),
    CatalogEntry("two_minus_e", TWO_MINUS_E, ConstantExpr("e", -1, 2), "theorem",
                 "2 - e = -1 + -1/-1 + 2/-1 + ... (negation of e_minus_2)", depth=40, digits=12),
    CatalogEntry("e_minus_2_alt", E_MINUS_2_ALT, ConstantExpr("e", 1, -2), "theorem",
                 "e - 2 = 1 + 1/-1 + -2/1 + 1/-1 + ... (sign flip of e_minus_2)",
                 depth=40, digits=12),
    CatalogEntry("pi_plus_2_half_form1", PI2_FORM1, _NEG_HALF_PI_MINUS_1, "conjecture",
                 "-(pi+2)/2 = -3 + -2/-6 + -9/-9 + -20/-12 + ...", depth=200, digits=10),
    CatalogEntry("pi_plus_2_half_form2", PI2_FORM2, _HALF_PI_PLUS_1, "conjecture",
                 "(pi+2)/2, negation of form 1", errata=(_COR7_ERRATUM,), depth=200, digits=10),
    CatalogEntry("pi_plus_2_half_form3", PI2_FORM3, _NEG_HALF_PI_MINUS_1, "conjecture",
                 "-(pi+2)/2, sign flip of form 1", depth=200, digits=10),
    CatalogEntry("pi_plus_2_half_form4", PI2_FORM4, _HALF_PI_PLUS_1, "conjecture",
                 "(pi+2)/2, negation of the sign flip of form 1", errata=(_FORM4_ERRATUM,),
                 depth=200, digits=10),
    CatalogEntry("pi_plus_2_half_form2_printed", PI2_FORM2_PRINTED, _HALF_PI_PLUS_1, "conjecture",
                 "(pi+2)/2 form 2 as printed (a_2 = +9)", errata=(_COR7_ERRATUM,),
                 as_printed=True, depth=200, digits=10),
    CatalogEntry("pi_plus_2_half_form4_printed", PI2_FORM4_PRINTED, _HALF_PI_PLUS_1, "conjecture",
                 "(pi+2)/2 form 4 as printed (a_2 = -9)", errata=(_FORM4_ERRATUM,),
                 as_printed=True, depth=200, digits=10),
    CatalogEntry("brouncker_pi_4", BROUNCKER, ConstantExpr("pi", Fraction(1, 4)), "classical",
                 "pi/4 = 1/1 + 1/2 + 9/2 + 25/2 + ...", series=LEIBNIZ,
                 depth=10_000, digits=4, backend="approx"),
    CatalogEntry("lange_pi_minus_3_4", LANGE_CF, ConstantExpr("pi", Fraction(1, 4), Fraction(-3, 4)),
                 "classical", "(pi-3)/4 = 1/24 + 36/6 + 25/6 + 49/6 + ...", series=LANGE,
                 depth=100, digits=7),
    CatalogEntry("pi_thirds", PI_THIRDS_CF, ConstantExpr("pi", Fraction(1, 3)), "theorem",
                 "pi/3 = -6/-5 + -75/62 + 29645/278 + ...", series=PI_THIRDS,
                 errata=("printed b_2 = 63; the closed form for n >= 2 and the partial-sum "
                         "identity both give 62",
                         "the generator's a_1 is printed as 6/5; 2*c_1 = 12/5",
                         "the generator's printed a_n omits the factor 4 of -4 c_n/c_(n-1)"),
                 depth=10_000, digits=4, backend="approx"),
    CatalogEntry("pi_thirds_printed", PI_THIRDS_PRINTED, ConstantExpr("pi", Fraction(1, 3)),
                 "theorem", "pi/3 expansion as printed (b_2 = 63)",
                 errata=("b_2 = 63 breaks the partial-sum identity; the value is not pi/3",),
                 as_printed=True, depth=10_000, digits=4, backend="approx"),
]

CATALOG = {e.name: e for e in _ENTRIES}


def catalog_names() -> list[str]:
    return [e.name for e in _ENTRIES]


def catalog_get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownEntry(name) from None


def oracle_convergent(name: str, n: int) -> tuple[Fraction, Fraction]:
    """Closed-form (A_n, B_n) for entries whose convergents are known exactly."""
    entry = catalog_get(name)
    if entry.oracle is None:
        raise NoOracle(f"{name} has no closed-form convergent oracle")
    if n < 0:
        raise ValueError("n must be >= 0")
    return entry.oracle(n)


# -- verification ------------------------------------------------------------


@dataclass
class VerifyReport:
    name: str
    depth: int
    backend: str
    digits_matched: int
    threshold: int
    passed: bool
    target: str
    value: str
    status: str = "theorem"
    as_printed: bool = False
    gates_exit: bool = True
    error_estimate: str = ""
    rigorous_bound: Optional[str] = None
    wall_time: float = 0.0
    errata: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name, "depth": self.depth, "backend": self.backend,
            "digits_matched": self.digits_matched, "threshold": self.threshold,
            "pass": self.passed, "target": self.target, "value": self.value,
            "status": self.status, "as_printed": self.as_printed, "gates_exit": self.gates_exit,
            "error_estimate": self.error_estimate, "error_estimate_rigorous": False,
            "rigorous_bound": self.rigorous_bound, "wall_time": round(self.wall_time, 6),
            "errata": list(self.errata),
        }


def _series_remainder(series: SeriesSpec, n: int) -> Fraction:
    # alternating series with decreasing |c_k|: the tail is bounded by the first omitted term
    return abs(series_term(series, n + 1))


def verify_spec(spec: CFSpec, target: ConstantExpr, depth: int, digit_threshold: int,
                backend: str = "exact", precision: int = DEFAULT_PRECISION,
                name: str | None = None) -> VerifyReport:
    """Evaluate ``spec`` and count matched digits against ``target``."""
    t0 = time.perf_counter()
    report = evaluate(spec, depth, backend, precision)
    ref_digits = max(digit_threshold + 20, 40)
    reference = target.reference(ref_digits)
    digits = matched_digits(report.value, reference)
    shown = min(ref_digits, 40)
    return VerifyReport(
        name=name or spec.name or "<spec>",
        depth=depth,
        backend=backend if backend == "exact" else f"approx@{precision}",
        digits_matched=digits,
        threshold=digit_threshold,
        passed=digits >= digit_threshold,
        target=str(target),
        value=str(rat_to_decimal(to_exact(report.value), shown)),
        error_estimate=str(rat_to_decimal(to_exact(report.error_estimate), shown)),
        wall_time=time.perf_counter() - t0,
    )


def verify_entry(name: str, depth: int | None = None, backend: str | None = None,
                 digit_threshold: int | None = None,
                 precision: int = DEFAULT_PRECISION) -> VerifyReport:
    """Check one catalog entry; unspecified settings fall back to the entry's defaults."""
    entry = catalog_get(name)
    depth = entry.depth if depth is None else depth
    backend = entry.backend if backend is None else backend
    threshold = entry.digits if digit_threshold is None else digit_threshold
    rep = verify_spec(entry.spec, entry.target, depth, threshold, backend, precision, name)
    rep.status = entry.status
    rep.as_printed = entry.as_printed
    rep.gates_exit = entry.gates_exit
    rep.errata = list(entry.errata)
    if entry.series is not None and not entry.as_printed:
        rep.rigorous_bound = str(rat_to_decimal(_series_remainder(entry.series, depth), 12))
    return rep
