from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from newton_filtrations.poly import (LaurentPoly, PolynomialSyntaxError, laurent_divide,
                                     parse_polynomial as P, principal_part, weight)

exps = st.tuples(*[st.integers(0, 4)] * 3)
polys = st.dictionaries(exps, st.integers(-5, 5), min_size=1, max_size=5).map(LaurentPoly).filter(bool)


def test_parse_and_format_round_trip():
    f = P("x^9 + x^4*y^2 - 3*x^2*y^4 + y^7 + z^7")
    assert f.terms[(2, 4, 0)] == -3
    assert P(str(f)) == f


@pytest.mark.parametrize("bad", ["x^", "2**x", "x+*y", "w", ""])
def test_parse_errors(bad):
    with pytest.raises(PolynomialSyntaxError):
        P(bad)


def test_coefficients_stay_exact():
    q = laurent_divide(P("x^2-y^2"), P("2*x-2*y"))
    assert q.terms == {(1, 0, 0): Fraction(1, 2), (0, 1, 0): Fraction(1, 2)}


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_division_inverts_multiplication(a, b):
    assert laurent_divide(a * b, b) == a


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_division_rejects_non_multiples(a, b):
    c = a * b + LaurentPoly({(9, 9, 9): 1})
    q = laurent_divide(c, b)
    assert q is None or q * b == c


def test_laurent_quotient_may_have_negative_exponents():
    f = P("x^2*y + y^3")
    g = LaurentPoly({(1, 1, 0): 1, (-1, 3, 0): 1})
    h = laurent_divide(g, f)
    assert h == LaurentPoly({(-1, 0, 0): 1})
    assert not h.is_polynomial()


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.tuples(*[st.integers(1, 9)] * 3))
def test_weight_is_additive(a, b, ell):
    assert weight(a * b, ell) == weight(a, ell) + weight(b, ell)
    assert principal_part(a * b, ell) == principal_part(a, ell) * principal_part(b, ell)


def test_principal_part():
    f = P("x^9+x^4*y^2+x^2*y^4+y^7+z^7")
    assert principal_part(f, (3, 2, 2)) == P("x^2*y^4+y^7+z^7")
    assert weight(f, (3, 2, 2)) == 14
