import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from newton_filtrations.newton import (Diagram, build_polyhedron, is_convenient,
                                       lattice_length, rhs_gate)
from newton_filtrations.poly import LaurentPoly, pair, parse_polynomial as P


def test_golden_facets(golden):
    g = golden.graph
    assert [g.normal(n) for n in g.nodes] == [(3, 2, 2), (7, 7, 6), (14, 35, 18)]
    assert golden.levels() == (14, 42, 126)
    assert (g.edge(0, 1).t, g.edge(0, 1).alpha) == (1, 1)
    assert (g.edge(1, 2).t, g.edge(1, 2).alpha) == (1, 21)
    assert g.edge(0, 2) is None
    assert golden.gate.passed


def test_golden_weights(golden):
    w = {v: golden.weight_vector(P(v)) for v in "xyz"}
    assert w == {"x": (3, 7, 14), "y": (2, 7, 35), "z": (2, 6, 18)}
    assert golden.weight_vector(golden.f) == golden.levels()


def test_one_node_and_non_tree(cusp, triangle):
    assert [cusp.graph.normal(0)] == [(21, 14, 6)] and cusp.levels() == (42,)
    assert cusp.gate.passed
    assert triangle.graph.n_nodes == 3 and not triangle.gate.tree


def test_non_convenient():
    assert not is_convenient(Diagram(P("x^2*y+y^5+z^3")).polyhedron)


def test_lattice_length():
    assert lattice_length((0, 7, 0), (2, 4, 0)) == 1
    assert lattice_length((0, 0, 0), (4, 6, 2)) == 2


supports = st.lists(st.tuples(*[st.integers(0, 7)] * 3), min_size=1, max_size=7)


@settings(max_examples=60, deadline=None)
@given(supports, st.randoms(use_true_random=False))
def test_hull_against_support_functions(pts, rnd):
    """Minimum of a positive functional: support points vs. vertices."""
    pts = pts + [(9, 0, 0), (0, 9, 0), (0, 0, 9)]
    np = build_polyhedron(pts)
    assert set(np.vertices) <= set(pts)
    for _ in range(10):
        w = tuple(rnd.randint(1, 20) for _ in range(3))
        assert min(pair(w, u) for u in pts) == min(pair(w, v) for v in np.vertices)
    for F in np.facets:
        assert min(pair(F.normal, u) for u in pts) == F.level
        assert all(pair(F.normal, v) == F.level for v in F.vertices)
    for u in pts:
        assert np.contains(u)


def test_compact_normals_are_positive(golden, triangle):
    for d in (golden, triangle):
        assert all(min(d.graph.normal(n)) > 0 for n in d.graph.nodes)
