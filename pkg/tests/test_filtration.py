import random

import pytest

from newton_filtrations.filtration import (Filtrations, Status, ZeroClassError,
                                           random_member_candidates)
from newton_filtrations.poly import LaurentPoly, parse_polynomial as P
from conftest import GOLDEN


@pytest.fixture(scope="module")
def fil(golden):
    return Filtrations(golden)


@pytest.fixture(scope="module")
def tri(triangle):
    return Filtrations(triangle)


def test_div_examples(fil):
    assert fil.div_vector(P("x")).ints() == (3, 7, 14)
    g = P(GOLDEN) + P("x^10")
    assert fil.div_weight(g, 0).value == 30
    assert fil.div_vector(g).ints() == (30, 70, 140)
    assert fil.order_vector(g).ints() == (30, 70, 140)


def test_zero_class(fil):
    with pytest.raises(ZeroClassError):
        fil.div_weight(P(GOLDEN) * P("x+y"), 1)


def test_monomials_have_equal_weights(fil):
    for m in ("x", "y^3", "x*y*z", "z^5"):
        assert fil.div_vector(P(m)) == fil.order_vector(P(m))


def test_membership_examples(fil):
    k = (14, 42, 126)
    assert fil.in_F(P(GOLDEN) + P("x^10"), k).member
    for w in "FGI":
        assert getattr(fil, f"in_{w}")(P("x"), k).member is False
        assert getattr(fil, f"in_{w}")(P("x+y"), (0, 0, 0)).member


def test_hilbert_small(fil):
    assert fil.hilbert_Ghat((1, 1, 1)) == 1
    assert fil.hilbert_I((1, 1, 1)) == (1, Status.CERTIFIED)
    assert fil.hilbert_Ghat((0, 0, 0)) == 0 and fil.hilbert_I((-1, 0, 0))[0] == 0
    assert fil.hilbert_I((14, 42, 126))[0] == fil.hilbert_Ghat((14, 42, 126))


def test_truncated_verdict_is_flagged(golden):
    small = Filtrations(golden, degree=12)
    v = small.in_I(P("x^9"), (28, 84, 252))
    assert v.status in (Status.STABILIZED, Status.INCONCLUSIVE)
    full = Filtrations(golden).in_I(P("x^9"), (28, 84, 252))
    assert full.status is Status.CERTIFIED


def test_inclusion_chain_and_monotonicity(fil, tri):
    rng = random.Random(2)
    for F in (fil, tri):
        for _ in range(15):
            k = tuple(rng.randint(1, 2 * lv) for lv in F.diagram.levels())
            g = LaurentPoly({tuple(rng.randint(0, 6) for _ in range(3)): rng.randint(-3, 3)
                             for _ in range(3)}) + P("x*y") * F.f
            if not g:
                continue
            I, G, Fv = F.in_I(g, k), F.in_G(g, k), F.in_F(g, k)
            assert (not I.member or G.member) and (not G.member or Fv.member)
            lower = tuple(max(0, x - 3) for x in k)
            if Fv.member:
                assert F.in_F(g, lower).member


def test_lift_nontrivial(fil):
    k = (28, 84, 252)
    g = P("x^20") + P("1+y") * fil.f
    assert fil.in_F(g, k).member and not all(
        a >= b for a, b in zip(fil.diagram.weight_vector(g), k))
    res = fil.lift(g, k)
    assert res.ok and res.steps > 0
    assert all(a >= b for a, b in zip(fil.diagram.weight_vector(res.representative), k))


def test_lift_identity_and_preconditions(fil):
    g = P("x^10")
    assert fil.lift(g, (1, 3, 9)).representative == g
    with pytest.raises(ValueError):
        fil.lift(P("x"), (2, 6, 17))
    with pytest.raises(ValueError):
        fil.lift(P("x^10"), (1, 1, 1))  # not in the cone


def test_suspension_div_equals_wt(fil):
    rng = random.Random(9)
    for g in random_member_candidates(fil, (20, 60, 150), rng, 20):
        assert fil.div_vector(g) == fil.order_vector(g)
