import random
from fractions import Fraction

import pytest

from newton_filtrations.cone import (PreconditionError, check_dilation_containment,
                                     cone_contains, cone_sample, integral_points, replay,
                                     sample_dilations)
from newton_filtrations.lattice import build_intersection, lipman_contains


def test_golden_sample(golden):
    s = cone_sample(golden.graph)
    assert s.Z == (14, Fraction(2687, 64), Fraction(16113, 128))
    assert s.certificate.verdict


def test_levels_and_weights_in_cone(golden, triangle, cusp):
    for d in (golden, triangle, cusp):
        assert cone_contains(d.graph, d.levels()).verdict


def test_golden_failures_replay(golden):
    g = golden.graph
    for Z in [(1, 1, 1), (14, 42, 200), (3, 7, 14 * 9), (20, 42, 126)]:
        cert = cone_contains(g, Z)
        if not cert.verdict:
            assert replay(g, Z, cert), cert


def test_random_failures_replay(golden, triangle):
    rng = random.Random(4)
    seen = 0
    for d in (golden, triangle):
        for _ in range(60):
            Z = tuple(rng.randint(1, 3 * lv) for lv in d.levels())
            cert = cone_contains(d.graph, Z)
            if not cert.verdict:
                seen += 1
                assert replay(d.graph, Z, cert)
    assert seen > 20


def test_integral_points(golden, cusp):
    s = cone_sample(golden.graph)
    pts = integral_points(golden.graph, s.Z, 4)
    assert pts == [(1, 3, 8), (1, 3, 9), (2, 6, 17), (2, 6, 18)]
    assert integral_points(cusp.graph, cone_sample(cusp.graph).Z, 2) == [(1,), (2,)]


def test_dilation_precondition(golden):
    with pytest.raises(PreconditionError):
        check_dilation_containment(golden.graph, golden.levels(), 0, 0, (0, 0, 0))
    with pytest.raises(PreconditionError):
        check_dilation_containment(golden.graph, golden.levels(), 0, 2, (0, 0, 0))


def test_dilation_containment(golden, triangle):
    rng = random.Random(8)
    for d in (golden, triangle):
        Z = cone_sample(d.graph).Z
        for n in d.graph.nodes:
            for rho, u in sample_dilations(d.graph, Z, n, rng, 10):
                assert check_dilation_containment(d.graph, Z, n, rho, u)


def test_lipman_and_closure(golden):
    D = build_intersection(golden.graph)
    Z = cone_sample(golden.graph).Z
    pts = [Z] + integral_points(golden.graph, Z, 6)
    for a in pts:
        assert lipman_contains(D, a)
        for b in pts:
            assert cone_contains(golden.graph, tuple(x + y for x, y in zip(a, b)), D).verdict
        assert cone_contains(golden.graph, tuple(Fraction(5, 2) * x for x in a), D).verdict
