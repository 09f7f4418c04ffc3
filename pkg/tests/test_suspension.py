import random
from fractions import Fraction
from math import gcd

import pytest

from newton_filtrations.newton import Diagram
from newton_filtrations.poly import parse_polynomial as P
from newton_filtrations.suspension import (GateFailure, NotSuspensionError, Suspension,
                                           characteristic_polynomial, detect_suspension,
                                           end_group, formula_alphas, h_order,
                                           milnor_number_2d, random_suspension)
from conftest import GOLDEN


@pytest.fixture(scope="module")
def susp():
    return Suspension.from_polynomial(P(GOLDEN))


def _gated(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f0, N = random_suspension(rng)
        try:
            out.append(Suspension(f0, N))
        except GateFailure:
            pass
    return out


def test_detect():
    f0, N = detect_suspension(P(GOLDEN))
    assert N == 7 and f0 == P("x^9+x^4*y^2+x^2*y^4+y^7")
    assert detect_suspension(P("x^4+y^6+z^4+x*y*z")) is None
    with pytest.raises(NotSuspensionError):
        Suspension.from_polynomial(P("x^4+y^6+z^4+x*y*z"))


def test_golden_data(susp):
    sd = susp.data
    assert (sd.s_x, sd.alpha_x, sd.s_y, sd.alpha_y, sd.s_z) == (7, 2, 1, 2, 4)
    assert sd.s == (1, 2, 1) and sd.alpha == (1, 7, 7) and sd.redundant_legs
    assert h_order(sd) == susp.group.order == 21952
    assert susp.group.invariants == (2, 2, 2, 14, 14, 14)


def test_literal_generator_list_gives_larger_group(susp):
    # regression pin for the documented relation-list discrepancy
    assert end_group(susp.data, literal=True).order == 153664


def test_golden_delta(susp):
    delta = characteristic_polynomial(susp.data)
    assert delta.value_at_one() == 21952
    assert delta.degree == milnor_number_2d(susp.f0) * (susp.N - 1) == 174


def test_golden_closed_form(susp):
    cf = susp.closed_form()
    assert cf.numerator == (14, 42, 126)
    assert set(cf.denominators) == {(3, 7, 14), (2, 7, 35), (2, 6, 18)}


def test_milnor_numbers():
    assert milnor_number_2d(P("x^2+y^3")) == 2
    assert milnor_number_2d(P("x^9+x^4*y^2+x^2*y^4+y^7")) == 29


def test_random_triple_agreement():
    for s in _gated(11, 12):
        sd = s.data
        delta = characteristic_polynomial(sd)
        assert h_order(sd) == delta.value_at_one() == s.group.order
        assert delta.degree == milnor_number_2d(s.f0) * (s.N - 1)


def test_formula_alphas_agree_with_normals():
    for s in _gated(12, 12):
        sd = s.data
        fa = formula_alphas(sd)
        assert (fa["alpha_x_reduced"], fa["alpha_y_reduced"]) == (sd.alpha_x, sd.alpha_y)
        if gcd(sd.a[1] // sd.s[0], sd.N) == 1:
            assert fa["alpha_x"] == sd.alpha_x


def test_unreduced_alpha_formula_counterexample():
    # x^13 + y^20 + z^8: the y-leg index is lcm(13,20,8)/lcm(13,8) = 5, not 20
    sd = Suspension(P("x^13+y^20"), 8).data
    assert sd.alpha_y == 5 and formula_alphas(sd)["alpha_y"] == 20


def test_zeta_matches_closed_form_small_box():
    for s in _gated(13, 6):
        box = s.default_box(20)
        assert s.zeta(box) == s.closed_form().expand(box)


def test_gate_failure_is_raised():
    with pytest.raises(GateFailure):
        Suspension(P("x^4+y^4"), 4)
