"""Newton polyhedra of trivariate series and their dual graphs.

Everything here is exact: vertices are integer points, facet normals are
primitive integer functionals, and cycle polyhedra are handled with
:class:`fractions.Fraction` coordinates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Iterable, Mapping, Sequence

from .poly import Exponent, LaurentPoly, pair, primitive

AXES: tuple[Exponent, ...] = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _det3(m) -> object:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _rank(vectors: Sequence[Sequence[int]]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors if any(v)]
    rank = 0
    ncols = 3
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _ccw_order(points: Sequence[tuple], normal: Sequence[int]) -> tuple:
    """Order coplanar points counter-clockwise (monotone chain), lexicographic start."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return tuple(pts)
    drop = max(range(3), key=lambda i: abs(normal[i]))
    keep = [i for i in range(3) if i != drop]
    proj = {p: (p[keep[0]], p[keep[1]]) for p in pts}

    def cross(o, a, b):
        o, a, b = proj[o], proj[a], proj[b]
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    ordered = sorted(pts, key=lambda p: proj[p])
    lower: list = []
    for p in ordered:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(ordered):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    start = hull.index(min(hull))
    return tuple(hull[start:] + hull[:start])


def lattice_length(a: Sequence, b: Sequence) -> int:
    """Lattice length (content) of the segment [a, b]."""
    diff = []
    for x, y in zip(a, b):
        d = Fraction(y) - Fraction(x)
        if Fraction(x).denominator != 1 or Fraction(y).denominator != 1:
            raise ValueError("lattice length needs integral endpoints")
        diff.append(int(d))
    g = 0
    for d in diff:
        g = gcd(g, d)
    if g == 0:
        raise ValueError("segment has zero length")
    return g


def alpha_index(l1: Sequence[int], l2: Sequence[int]) -> int:
    """Index of the lattice spanned by two functionals in its saturation.

    This is the product of the invariant factors of the 2x3 matrix, i.e. the
    gcd of its 2x2 minors.
    """
    minors = _cross(l1, l2)
    g = 0
    for m in minors:
        g = gcd(g, m)
    if g == 0:
        raise ValueError(f"functionals {tuple(l1)} and {tuple(l2)} are dependent")
    return g


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, int, int]
    level: int
    vertices: tuple[Exponent, ...]
    compact: bool

    def contains(self, u: Sequence) -> bool:
        return pair(self.normal, u) == self.level


@dataclass(frozen=True)
class NewtonPolyhedron:
    """conv(support + R^3_{>=0}) as an H- and V-description.

    Compact facets come first in ``facets`` (sorted by normal); their
    positions are the node ids used throughout the package.
    """

    support: frozenset
    vertices: frozenset
    facets: tuple[Facet, ...]

    @property
    def compact_facets(self) -> tuple[Facet, ...]:
        return tuple(F for F in self.facets if F.compact)

    @property
    def n_compact(self) -> int:
        return sum(1 for F in self.facets if F.compact)

    def contains(self, u: Sequence) -> bool:
        return all(x >= 0 for x in u) and all(pair(F.normal, u) >= F.level for F in self.facets)

    def to_json(self) -> dict:
        return {
            "support": sorted(list(u) for u in self.support),
            "vertices": sorted(list(u) for u in self.vertices),
            "facets": [
                {"normal": list(F.normal), "level": F.level, "compact": F.compact,
                 "vertices": [list(v) for v in F.vertices]}
                for F in self.facets
            ],
        }


def build_polyhedron(points: Iterable[Sequence[int]]) -> NewtonPolyhedron:
    """Newton polyhedron of a finite set of exponent vectors in N^3."""
    pts = sorted({tuple(int(a) for a in p) for p in points})
    if not pts:
        raise ValueError("empty support")
    if any(min(p) < 0 for p in pts):
        raise ValueError("support must lie in N^3")
    if any(len(p) != 3 for p in pts):
        raise ValueError("exponent vectors must be triples")

    candidates: set[tuple[int, int, int]] = set(AXES)
    for p, q, r in combinations(pts, 3):
        candidates.add(_cross(_sub(q, p), _sub(r, p)))
    for p, q in combinations(pts, 2):
        for d in AXES:
            candidates.add(_cross(_sub(q, p), d))

    normals: dict[tuple, int] = {}
    for n in candidates:
        if not any(n):
            continue
        if all(a <= 0 for a in n):
            n = tuple(-a for a in n)
        if any(a < 0 for a in n):
            continue
        n = primitive(n)
        if n in normals:
            continue
        level = min(pair(n, p) for p in pts)
        on = [p for p in pts if pair(n, p) == level]
        dirs = [d for d, a in zip(AXES, n) if a == 0]
        spanning = [_sub(p, on[0]) for p in on[1:]] + list(dirs)
        if _rank(spanning) == 2:
            normals[n] = level

    incident: dict[Exponent, list] = {p: [] for p in pts}
    for n, level in normals.items():
        for p in pts:
            if pair(n, p) == level:
                incident[p].append(n)
    vertices = frozenset(p for p in pts if _rank(incident[p]) == 3)

    facets = []
    for n, level in normals.items():
        verts = [v for v in vertices if pair(n, v) == level]
        compact = all(a > 0 for a in n)
        facets.append(Facet(n, level, _ccw_order(verts, n), compact))
    facets.sort(key=lambda F: (not F.compact, F.normal))
    return NewtonPolyhedron(frozenset(pts), vertices, tuple(facets))


def polyhedron_of(f: LaurentPoly) -> NewtonPolyhedron:
    if not f.is_polynomial():
        raise ValueError("Newton polyhedron needs nonnegative exponents")
    return build_polyhedron(f.terms.keys())


def is_convenient(np: NewtonPolyhedron) -> bool:
    """True when the support meets all three coordinate axes."""
    return all(
        any(p[i] > 0 and all(p[j] == 0 for j in range(3) if j != i) for p in np.support)
        for i in range(3)
    )


def interior_lattice_points(F: Facet) -> int:
    """Number of lattice points in the relative interior of a compact facet."""
    if not F.compact:
        raise ValueError("interior point count needs a compact facet")
    verts = F.vertices
    if len(verts) < 3:
        return 0
    a, b, c = F.normal
    m = F.level
    edges = list(zip(verts, verts[1:] + verts[:1]))
    count = 0
    for x in range(m // a + 1):
        for y in range((m - a * x) // b + 1):
            rest = m - a * x - b * y
            if rest % c:
                continue
            u = (x, y, rest // c)
            signs = {
                (s > 0) - (s < 0)
                for s in (pair(F.normal, _cross(_sub(q, p), _sub(u, p))) for p, q in edges)
            }
            if signs == {1} or signs == {-1}:
                count += 1
    return count


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    segment: tuple[Exponent, Exponent]
    t: int
    alpha: int


class DualGraph:
    """Dual graphs over compact facets (nodes) and all facets (extended nodes).

    Node ids coincide with facet indices; compact facets occupy
    ``range(n_nodes)``.
    """

    def __init__(self, np: NewtonPolyhedron):
        self.polyhedron = np
        self.facets = np.facets
        self.n_nodes = np.n_compact
        self.edges: dict[tuple[int, int], Edge] = {}
        for i, j in combinations(range(len(self.facets)), 2):
            if i >= self.n_nodes and j >= self.n_nodes:
                continue
            Fi, Fj = self.facets[i], self.facets[j]
            shared = sorted(set(Fi.vertices) & set(Fj.vertices))
            if len(shared) < 2:
                continue
            seg = (shared[0], shared[-1])
            self.edges[(i, j)] = Edge(i, j, seg, lattice_length(*seg), alpha_index(Fi.normal, Fj.normal))
        self._adj: dict[int, list[int]] = {k: [] for k in range(len(self.facets))}
        for i, j in self.edges:
            self._adj[i].append(j)
            self._adj[j].append(i)

    @property
    def nodes(self) -> range:
        return range(self.n_nodes)

    @property
    def extended_nodes(self) -> range:
        return range(len(self.facets))

    def normal(self, n: int) -> tuple[int, int, int]:
        return self.facets[n].normal

    def level(self, n: int) -> int:
        return self.facets[n].level

    def facet(self, n: int) -> Facet:
        return self.facets[n]

    def edge(self, i: int, j: int) -> Edge | None:
        return self.edges.get((min(i, j), max(i, j)))

    def neighbors(self, n: int) -> list[int]:
        return sorted(self._adj[n])

    def compact_neighbors(self, n: int) -> list[int]:
        return [k for k in self.neighbors(n) if k < self.n_nodes]

    def legs(self, n: int) -> list[Edge]:
        """Edges from node ``n`` to noncompact facets."""
        return [self.edge(n, k) for k in self.neighbors(n) if k >= self.n_nodes]

    def leg_count(self, n: int) -> int:
        # one leg per primitive boundary segment, redundant legs included
        return sum(e.t for e in self.legs(n))

    def degree(self, n: int) -> int:
        return sum(self.edge(n, k).t for k in self.compact_neighbors(n)) + self.leg_count(n)

    def compact_edges(self) -> list[Edge]:
        return [e for (i, j), e in sorted(self.edges.items()) if j < self.n_nodes]

    def closed_neighborhood(self, A: Iterable[int]) -> set[int]:
        """Nodes in A or adjacent in the compact graph to a node of A."""
        out = set(A)
        for a in list(out):
            out.update(self.compact_neighbors(a))
        return out

    def is_connected(self) -> bool:
        if self.n_nodes == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            n = stack.pop()
            for k in self.compact_neighbors(n):
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        return len(seen) == self.n_nodes

    def is_tree(self) -> bool:
        return self.is_connected() and len(self.compact_edges()) == self.n_nodes - 1

    def bfs_order(self, root: int) -> tuple[list[int], dict[int, int | None]]:
        """Breadth-first order of the compact graph with parent pointers."""
        parent: dict[int, int | None] = {root: None}
        order = [root]
        i = 0
        while i < len(order):
            n = order[i]
            i += 1
            for k in self.compact_neighbors(n):
                if k not in parent:
                    parent[k] = n
                    order.append(k)
        return order, parent

    def meets_all_coordinate_planes(self, n: int) -> bool:
        verts = self.facets[n].vertices
        return all(any(v[i] == 0 for v in verts) for i in range(3))

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"id": n, "normal": list(self.normal(n)), "level": self.level(n),
                 "legs": self.leg_count(n), "degree": self.degree(n)}
                for n in self.nodes
            ],
            "extended_nodes": [
                {"id": k, "normal": list(self.normal(k)), "compact": self.facets[k].compact}
                for k in self.extended_nodes
            ],
            "edges": [
                {"a": e.a, "b": e.b, "t": e.t, "alpha": e.alpha,
                 "segment": [list(e.segment[0]), list(e.segment[1])]}
                for _, e in sorted(self.edges.items())
            ],
        }

    def to_dot(self, self_intersections: Mapping[int, Fraction] | None = None,
               extended: bool = False) -> str:
        lines = ["graph G {"]
        shown = self.extended_nodes if extended else self.nodes
        for k in shown:
            label = f"l={self.normal(k)}"
            if k < self.n_nodes:
                label += f"\\nm={self.level(k)}"
                if self_intersections is not None:
                    label += f"\\ne={self_intersections[k]}"
                lines.append(f'  n{k} [label="{label}"];')
            else:
                lines.append(f'  n{k} [label="{label}", shape=box];')
        for (i, j), e in sorted(self.edges.items()):
            if i in shown and j in shown:
                lines.append(f'  n{i} -- n{j} [label="t={e.t}, alpha={e.alpha}"];')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class GateResult:
    passed: bool
    tree: bool
    interior_points: tuple[int, ...]
    edge_lengths: tuple[int, ...]

    def to_json(self) -> dict:
        return {"passed": self.passed, "tree": self.tree,
                "interior_points": list(self.interior_points),
                "compact_edge_lengths": list(self.edge_lengths)}


def rhs_gate(graph: DualGraph) -> GateResult:
    """Heuristic stand-in for the rational homology sphere link assumption.

    Passes when the compact dual graph is a tree, every compact facet has
    no interior lattice points and adjacent compact facets meet in
    primitive segments.
    """
    interior = tuple(interior_lattice_points(graph.facet(n)) for n in graph.nodes)
    lengths = tuple(e.t for e in graph.compact_edges())
    tree = graph.n_nodes > 0 and graph.is_tree()
    passed = tree and not any(interior) and all(t == 1 for t in lengths)
    return GateResult(passed, tree, interior, lengths)


def edge_nondegenerate(f: LaurentPoly, np: NewtonPolyhedron) -> bool:
    """Check that f restricted to every bounded edge of the diagram is squarefree.

    Necessary (not sufficient) for Newton nondegeneracy.
    """
    import sympy

    t = sympy.Symbol("t")
    terms = f.terms
    for i, j in combinations(range(len(np.facets)), 2):
        shared = sorted(set(np.facets[i].vertices) & set(np.facets[j].vertices))
        if len(shared) < 2:
            continue
        p, q = shared[0], shared[-1]
        length = lattice_length(p, q)
        step = tuple((b - a) // length for a, b in zip(p, q))
        poly = 0
        for k in range(length + 1):
            u = tuple(a + k * s for a, s in zip(p, step))
            c = terms.get(u)
            if c:
                poly += sympy.Rational(c.numerator, c.denominator) * t**k
        if sympy.degree(sympy.gcd(poly, sympy.diff(poly, t)), t) > 0:
            return False
    return True


class CyclePolyhedron:
    """{u >= 0 : l_n(u) >= m_n for n in N_A} for a cycle with coordinates m."""

    def __init__(self, graph: DualGraph, m: Sequence, A: Iterable[int] | None = None):
        self.graph = graph
        self.m = tuple(Fraction(x) for x in m)
        if len(self.m) != graph.n_nodes:
            raise ValueError("cycle has the wrong number of coordinates")
        self.used = sorted(graph.nodes if A is None else graph.closed_neighborhood(A))
        self.inequalities: list[tuple[tuple[int, int, int], Fraction]] = [
            (graph.normal(n), self.m[n]) for n in self.used
        ] + [(ax, Fraction(0)) for ax in AXES]

    def contains(self, u: Sequence) -> bool:
        return all(pair(ell, u) >= b for ell, b in self.inequalities)

    def face(self, a: int) -> tuple[tuple[Fraction, ...], ...]:
        """Vertices of {u in polyhedron : l_a(u) = m_a}, counter-clockwise; () if empty."""
        ell_a = self.graph.normal(a)
        ma = self.m[a]
        others = [(ell, b) for ell, b in self.inequalities if ell != ell_a]
        pts = set()
        for (l1, b1), (l2, b2) in combinations(others, 2):
            rows = (ell_a, l1, l2)
            d = _det3(rows)
            if not d:
                continue
            rhs = (ma, b1, b2)
            sol = []
            for col in range(3):
                mm = [list(r) for r in rows]
                for r in range(3):
                    mm[r][col] = rhs[r]
                sol.append(Fraction(_det3(mm)) / d)
            if self.contains(sol):
                pts.add(tuple(sol))
        if not pts:
            return ()
        return _ccw_order(list(pts), ell_a)

    def vertices(self) -> list[tuple[Fraction, ...]]:
        pts = set()
        for (l1, b1), (l2, b2), (l3, b3) in combinations(self.inequalities, 3):
            rows = (l1, l2, l3)
            d = _det3(rows)
            if not d:
                continue
            rhs = (b1, b2, b3)
            sol = []
            for col in range(3):
                mm = [list(r) for r in rows]
                for r in range(3):
                    mm[r][col] = rhs[r]
                sol.append(Fraction(_det3(mm)) / d)
            if self.contains(sol):
                pts.add(tuple(sol))
        return sorted(pts)


def cycle_polyhedron(graph: DualGraph, m: Sequence, A: Iterable[int] | None = None) -> CyclePolyhedron:
    return CyclePolyhedron(graph, m, A)


@dataclass
class Diagram:
    """A polynomial together with its Newton polyhedron and dual graph."""

    f: LaurentPoly
    polyhedron: NewtonPolyhedron = field(init=False)
    graph: DualGraph = field(init=False)

    def __post_init__(self):
        self.polyhedron = polyhedron_of(self.f)
        self.graph = DualGraph(self.polyhedron)

    @cached_property
    def gate(self) -> GateResult:
        return rhs_gate(self.graph)

    def weight_vector(self, p: LaurentPoly) -> tuple[int, ...]:
        from .poly import weight
        return tuple(weight(p, self.graph.normal(n)) for n in self.graph.nodes)

    def levels(self) -> tuple[int, ...]:
        return tuple(self.graph.level(n) for n in self.graph.nodes)


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True)
