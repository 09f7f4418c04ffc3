"""The seven acceptance criteria, each timed against its budget."""
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import floor

import pytest

from conftest import ACCEPTANCE, CHAIN, CUSP, GOLDEN, TRIANGLE
from newton_filtrations.cone import (check_dilation_containment, cone_contains, cone_sample,
                                     integral_points, sample_dilations)
from newton_filtrations.filtration import Filtrations, random_member_candidates
from newton_filtrations.lattice import build_intersection, is_negative_definite, lipman_contains
from newton_filtrations.newton import Diagram
from newton_filtrations.poly import LaurentPoly, parse_polynomial as P
from newton_filtrations.series import MultiSeries
from newton_filtrations.suspension import (GateFailure, Suspension, characteristic_polynomial,
                                           h_order, random_suspension)
from newton_filtrations.verify import image_series_check, suite_intro

SEED = 1
N_RANDOM = 25


def random_gated(seed=SEED, count=N_RANDOM):
    """Seeded random suspensions (r <= 4, N <= 9, coordinates <= 30) passing the gate."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f0, N = random_suspension(rng, max_r=4, max_N=9, max_coord=30)
        try:
            out.append(Suspension(f0, N))
        except GateFailure:
            pass
    return out


@contextmanager
def criterion(n, limit):
    state = {"note": ""}
    start = time.perf_counter()
    try:
        yield state
    except BaseException:
        ACCEPTANCE[n] = (False, time.perf_counter() - start, limit, state["note"])
        raise
    secs = time.perf_counter() - start
    ACCEPTANCE[n] = (secs < limit, secs, limit, state["note"])
    assert secs < limit, f"criterion {n} took {secs:.1f}s, budget {limit}s"


def test_criterion_1_golden_fixture():
    with criterion(1, 5) as st:
        s = Suspension.from_polynomial(P(GOLDEN))
        d = s.diagram
        assert {v: d.weight_vector(P(v)) for v in "xyz"} == {
            "x": (3, 7, 14), "y": (2, 7, 35), "z": (2, 6, 18)}
        assert d.weight_vector(d.f) == (14, 42, 126)
        sd = s.data
        assert (sd.s_x, sd.alpha_x, sd.s_y, sd.alpha_y, sd.s_z) == (7, 2, 1, 2, 4)
        assert s.group.order == h_order(sd) == 21952
        st["note"] = "|H| = 21952"


def test_criterion_2_zeta_equals_closed_form():
    with criterion(2, 60) as st:
        cases = [Suspension.from_polynomial(P(GOLDEN))] + random_gated()
        terms = 0
        for s in cases:
            box = s.default_box(45)
            z = s.zeta(box)
            assert z == s.closed_form().expand(box), f"mismatch for {s.f0} + z^{s.N}"
            terms += len(z.coeffs)
        st["note"] = f"{len(cases)} diagrams, {terms} coefficients"


def test_criterion_3_triple_agreement():
    with criterion(3, 10) as st:
        cases = [Suspension.from_polynomial(P(GOLDEN))] + random_gated()
        for s in cases:
            assert h_order(s.data) == characteristic_polynomial(s.data).value_at_one() == s.group.order
        st["note"] = f"{len(cases)} diagrams"


def test_criterion_4_image_series_oracle():
    with criterion(4, 120) as st:
        points = []
        for text, hbox in ((GOLDEN, (7, 15, 37)), (CUSP, (201,))):
            fil = Filtrations(Diagram(P(text)), degree=60)
            got, want = image_series_check(fil, hbox)
            n = 1
            for b in got.box:
                n *= b + 1
            assert n >= 200
            assert got == want, text
            points.append(n)
        st["note"] = f"k-boxes of {points[0]} and {points[1]} points"


def test_criterion_5_lifting_and_agreement(tmp_path):
    with criterion(5, 120) as st:
        total = 0
        for i, text in enumerate((GOLDEN, TRIANGLE)):
            rep = suite_intro(Diagram(P(text)), seed=SEED + i, n_points=5, per_point=50)
            if not rep.passed:
                dump = tmp_path / f"counterexamples_{i}.json"
                dump.write_text(json.dumps(rep.counterexamples, indent=2))
                pytest.fail(f"{text}: {len(rep.counterexamples)} counterexamples, dumped to {dump}")
            assert len(rep.notes["points"]) >= 5 and rep.checks >= 5 * 50
            assert rep.notes["nontrivial_lifts"] > 0
            total += rep.checks
        st["note"] = f"{total} samples"


def test_criterion_6_inclusion_chain():
    with criterion(6, 60) as st:
        rng = random.Random(SEED)
        fils = [Filtrations(Diagram(P(t))) for t in (GOLDEN, TRIANGLE, CUSP, CHAIN)]
        pairs = violations = in_image = 0
        while pairs < 600:
            F = fils[pairs % len(fils)]
            k = tuple(rng.randint(1, 2 * lv) for lv in F.diagram.levels())
            if rng.random() < 0.5:
                cands = random_member_candidates(F, k, rng, 1)
            else:
                cands = [LaurentPoly({tuple(rng.randint(0, 5) for _ in range(3)): rng.randint(-3, 3)
                                      for _ in range(rng.randint(1, 4))})
                         + P("1+x") * F.f]
            for g in cands:
                if not g:
                    continue
                pairs += 1
                I, G, Fv = F.in_I(g, k), F.in_G(g, k), F.in_F(g, k)
                in_image += I.member is True
                if (I.member and not G.member) or (G.member and not Fv.member):
                    violations += 1
        assert violations == 0
        assert 0 < in_image < pairs
        st["note"] = f"{pairs} pairs, {in_image} in the image filtration, 0 violations"


def _accepted_points(graph, D, rng, count):
    base = cone_sample(graph, D=D).Z
    out = []
    while len(out) < count:
        lam = rng.randint(1, 30)
        Z = tuple(floor(lam * x) + rng.randint(-1, 1) for x in base)
        if min(Z) > 0 and cone_contains(graph, Z, D).verdict:
            out.append(Z)
    return out


def test_criterion_7_structural_invariants():
    with criterion(7, 60) as st:
        rng = random.Random(SEED)
        diagrams = [Diagram(P(t)) for t in (GOLDEN, TRIANGLE, CUSP)]
        diagrams += [s.diagram for s in random_gated(count=10)]
        closure = dilations = 0
        for d in diagrams:
            D = build_intersection(d.graph)  # raises if the e_n relation is inconsistent
            assert is_negative_definite(D.matrix)
            g = d.graph
            for n in g.nodes:
                for i in range(3):
                    total = D.matrix[n][n] * g.normal(n)[i] + sum(
                        Fraction(g.edge(n, k).t, g.edge(n, k).alpha) * g.normal(k)[i]
                        for k in g.neighbors(n))
                    assert total == 0
            for eps in (Fraction(1, 4), Fraction(1, 64), Fraction(1, 1024)):
                Z = cone_sample(g, eps=eps, D=D).Z
                assert lipman_contains(D, Z)
            if d in diagrams[:3]:
                pts = _accepted_points(g, D, rng, 12)
                for _ in range(40):
                    a, b = rng.choice(pts), rng.choice(pts)
                    c = Fraction(rng.randint(1, 12), rng.randint(1, 5))
                    assert cone_contains(g, tuple(x + y for x, y in zip(a, b)), D).verdict
                    assert cone_contains(g, tuple(c * x for x in a), D).verdict
                    closure += 1
                Z = cone_sample(g, D=D).Z
                for n in g.nodes:
                    for rho, u in sample_dilations(g, Z, n, rng, 40 // g.n_nodes + 1):
                        assert check_dilation_containment(g, Z, n, rho, u)
                        dilations += 1
        assert closure >= 100 and dilations >= 100
        st["note"] = f"{len(diagrams)} diagrams, {closure} closure pairs, {dilations} dilations"
