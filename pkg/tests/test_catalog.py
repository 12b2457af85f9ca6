from fractions import Fraction

import pytest

import oracles
from gcflab.catalog import (
    ConstantExpr,
    catalog_get,
    catalog_names,
    oracle_convergent,
    subfactorial,
    verify_entry,
    verify_spec,
)
from gcflab.constants import reference_constant
from gcflab.core import convergent_sequences, dumps_spec, evaluate, term_at
from gcflab.errors import NoOracle, UnknownEntry
from gcflab.transforms import negate, sign_flip


def test_catalog_get_examples():
    e_half = catalog_get("e_half")
    assert e_half.spec.b0 == 1 and e_half.status == "theorem"
    assert [term_at(e_half.spec, n) for n in (1, 2, 3)] == [(1, 2), (3, 3), (4, 4)]
    pi3 = catalog_get("pi_thirds")
    assert [term_at(pi3.spec, n) for n in (1, 2)] == [(-6, -5), (-75, 62)]
    assert any("63" in e for e in pi3.errata)
    br = catalog_get("brouncker_pi_4")
    assert br.status == "classical"
    assert [term_at(br.spec, n) for n in range(1, 5)] == [(1, 1), (1, 2), (9, 2), (25, 2)]


def test_unknown_entry():
    with pytest.raises(UnknownEntry):
        catalog_get("nope")
    with pytest.raises(KeyError):
        catalog_get("nope")


def test_subfactorial():
    assert [subfactorial(n) for n in range(6)] == [1, 0, 1, 2, 9, 44]
    assert all(subfactorial(n) == oracles.derangement(n) for n in range(80))


def test_oracle_examples():
    assert oracle_convergent("e_half", 4) == (360, 265)
    assert oracle_convergent("e_minus_2", 2) == (2, 3)
    # the index-9 pair (odd, 2*5-1) of the printed sequences; (222, 309) sits at index 8
    assert oracle_convergent("e_minus_2", 9) == (190, 265)
    assert oracle_convergent("e_minus_2", 8) == (222, 309)
    with pytest.raises(NoOracle):
        oracle_convergent("brouncker_pi_4", 3)


@pytest.mark.parametrize("name,depth,closed", [("e_half", 50, oracles.e_half_convergent),
                                               ("e_minus_2", 60, oracles.e_minus_2_convergent)])
def test_oracles_match_recurrence(name, depth, closed):
    A, B = convergent_sequences(catalog_get(name).spec, depth)
    for n in range(depth + 1):
        assert (A[n + 1], B[n + 1]) == oracle_convergent(name, n) == closed(n)


def test_e_minus_2_subsequences_converge_monotonically():
    target = oracles.e_value(60) - 2
    A, B = convergent_sequences(catalog_get("e_minus_2").spec, 60)
    errs = [abs(A[n + 1] / B[n + 1] - target) for n in range(61)]
    for parity in (0, 1):
        sub = [errs[n] for n in range(4, 61) if n % 2 == parity]
        assert all(x > y for x, y in zip(sub, sub[1:]))


@pytest.mark.parametrize("derived,op,source", [
    ("neg_e", negate, "lu_wei_e"),
    ("neg_e_half", negate, "e_half"),
    ("two_minus_e", negate, "e_minus_2"),
    ("e_minus_2_alt", sign_flip, "e_minus_2"),
    ("pi_plus_2_half_form2", negate, "pi_plus_2_half_form1"),
    ("pi_plus_2_half_form3", sign_flip, "pi_plus_2_half_form1"),
])
def test_transform_wiring_byte_identical(derived, op, source):
    built = op(catalog_get(source).spec).renamed(derived)
    assert dumps_spec(built) == dumps_spec(catalog_get(derived).spec)


def test_form4_is_negated_sign_flip():
    f1 = catalog_get("pi_plus_2_half_form1").spec
    built = negate(sign_flip(f1)).renamed("pi_plus_2_half_form4")
    assert dumps_spec(built) == dumps_spec(catalog_get("pi_plus_2_half_form4").spec)


def test_cor7_family_relations_every_depth():
    A1, B1 = convergent_sequences(catalog_get("pi_plus_2_half_form1").spec, 120)
    x1 = [a / b for a, b in zip(A1[1:], B1[1:])]
    for name, sign in (("pi_plus_2_half_form2", -1), ("pi_plus_2_half_form3", 1),
                       ("pi_plus_2_half_form4", -1)):
        A, B = convergent_sequences(catalog_get(name).spec, 120)
        assert [a / b for a, b in zip(A[1:], B[1:])] == [sign * x for x in x1]


def test_printed_variants_differ_where_documented():
    assert term_at(catalog_get("pi_plus_2_half_form2_printed").spec, 2) == (9, 9)
    assert term_at(catalog_get("pi_plus_2_half_form2").spec, 2) == (-9, 9)
    assert term_at(catalog_get("pi_thirds_printed").spec, 2) == (-75, 63)
    assert term_at(catalog_get("neg_e_half_printed").spec, 1) == (2, -2)


def test_cor7_desk_values():
    form1 = evaluate(catalog_get("pi_plus_2_half_form1").spec, 4).value
    assert f"{float(form1):.4f}" == "-2.5746"
    printed = evaluate(catalog_get("pi_plus_2_half_form2_printed").spec, 50).value
    assert abs(printed - Fraction(27269, 10000)) < Fraction(1, 1000)


def test_neg_e_half_printed_converges_to_one_minus_e():
    value = evaluate(catalog_get("neg_e_half_printed").spec, 30).value
    assert abs(value - (1 - oracles.e_value(40))) < Fraction(1, 10**20)


@pytest.mark.parametrize("base", ["e", "pi"])
def test_reference_prefix_consistency(base):
    longest = str(reference_constant(base, 80))
    for d in (1, 2, 10, 25, 50, 79):
        assert longest.startswith(str(reference_constant(base, d)))


def test_reference_examples():
    assert str(reference_constant("e", 10)) == "2.7182818284"
    assert str(reference_constant("pi", 10)) == "3.1415926535"
    assert str(reference_constant("e", 1)) == "2.7"
    assert str(reference_constant("pi", 40)) == oracles.pi_digits(40)
    with pytest.raises(ValueError):
        reference_constant("tau", 5)


@pytest.mark.parametrize("text,base,scale,offset", [
    ("e", "e", 1, 0), ("-1/2*e", "e", Fraction(-1, 2), 0), ("e-2", "e", 1, -2),
    ("1/2*pi+1", "pi", Fraction(1, 2), 1), ("-e+2", "e", -1, 2), ("1/4*pi-3/4", "pi", Fraction(1, 4), Fraction(-3, 4)),
])
def test_constant_expr_parse(text, base, scale, offset):
    c = ConstantExpr.parse(text)
    assert (c.base, c.scale, c.offset) == (base, scale, offset)
    assert ConstantExpr.parse(str(c)) == c


def test_constant_expr_reference_negative():
    assert str(ConstantExpr.parse("-1/2*e").reference(5)) == "-1.35914"


def test_verify_examples():
    rep = verify_entry("e_half", 20, "exact", 15)
    assert rep.passed and rep.digits_matched >= 18
    rep = verify_entry("pi_thirds", 10_000, "approx", 4)
    assert rep.passed and rep.rigorous_bound is not None
    value = Fraction(rep.value)
    assert abs(value - oracles.pi_value(30) / 3) <= Fraction(2, 3 * 10**4)
    printed = verify_entry("pi_plus_2_half_form2_printed", 50, "exact", 4)
    assert not printed.passed and not printed.gates_exit
    assert printed.value.startswith("2.72")  # not (pi+2)/2 = 2.5707...


@pytest.mark.parametrize("name", catalog_names())
def test_every_entry_verifies_as_expected(name):
    entry = catalog_get(name)
    rep = verify_entry(name)
    assert rep.passed == (not entry.as_printed)
    assert rep.gates_exit == (entry.status != "conjecture" and not entry.as_printed)


def test_verify_spec_reports_failure():
    rep = verify_spec(catalog_get("e_half").spec, ConstantExpr("e"), 20, 15)
    assert not rep.passed and rep.digits_matched == 0
    assert rep.to_dict()["error_estimate_rigorous"] is False
