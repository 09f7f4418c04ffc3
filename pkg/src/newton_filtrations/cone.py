"""Membership in the cone C, a sampler for it, and dilation containment checks."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from .lattice import IntersectionData, build_intersection, lipman_contains
from .newton import CyclePolyhedron, DualGraph
from .poly import pair


class NoCentralFacetError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class InvariantViolation(AssertionError):
    """An internal consistency check failed; indicates a bug, not bad input."""


Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class ConeCertificate:
    verdict: bool
    clause: int | None = None
    node: int | None = None
    edge: tuple[int, int] | None = None
    rho: Fraction | None = None
    u: Point | None = None
    witness: Point | None = None
    detail: str = ""

    def to_json(self) -> dict:
        def q(x):
            return {"num": str(x.numerator), "den": str(x.denominator)}
        out: dict = {"verdict": self.verdict}
        if not self.verdict:
            out.update(clause=self.clause, node=self.node, detail=self.detail)
            if self.edge is not None:
                out["edge"] = list(self.edge)
            if self.rho is not None:
                out["rho"] = q(self.rho)
            if self.u is not None:
                out["u"] = [q(x) for x in self.u]
            if self.witness is not None:
                out["witness"] = [q(x) for x in self.witness]
        return out


def _in_face(P: CyclePolyhedron, n: int, x: Sequence) -> bool:
    return pair(P.graph.normal(n), x) == P.m[n] and P.contains(x)


def _edge_data(graph: DualGraph, P: CyclePolyhedron, n: int, k: int):
    """(p, d, P0, lam): the f-edge p + [0,1] d and the Z-edge P0 + [0, lam] d.

    lam is None when the Z-edge is empty and 0 when it is a point.
    """
    p, q = graph.edge(n, k).segment
    d = tuple(b - a for a, b in zip(p, q))
    common = [x for x in P.face(n) if pair(graph.normal(k), x) == P.m[k]]
    if not common:
        return p, d, None, None
    # coordinates of the Z-edge points along d
    i = next(j for j in range(3) if d[j])
    common.sort(key=lambda x: x[i] / d[i])
    lo, hi = common[0], common[-1]
    lam = (hi[i] - lo[i]) / d[i]
    return p, d, lo, lam


def _placement(rho: Fraction, sigma: Fraction, p, d, P0) -> Point:
    """u with rho*p + u = P0 + sigma*d."""
    return tuple(P0[j] + sigma * d[j] - rho * p[j] for j in range(3))


def _dilated_violation(graph: DualGraph, P: CyclePolyhedron, n: int, rho, u) -> Point | None:
    for w in graph.facet(n).vertices:
        x = tuple(rho * a + b for a, b in zip(w, u))
        if not _in_face(P, n, x):
            return x
    return None


def cone_contains(graph: DualGraph, Z: Sequence, D: IntersectionData | None = None) -> ConeCertificate:
    m = tuple(Fraction(x) for x in Z)
    full = CyclePolyhedron(graph, m)
    for n in graph.nodes:
        local = CyclePolyhedron(graph, m, [n]).face(n)
        whole = full.face(n)
        if not local:
            return ConeCertificate(False, 1, node=n, detail="local face is empty")
        if set(local) != set(whole):
            extra = next(iter(set(local) - set(whole)))
            return ConeCertificate(False, 1, node=n, witness=extra,
                                   detail="local face is larger than the face of Z")
    for e in graph.compact_edges():
        for n, k in ((e.a, e.b), (e.b, e.a)):
            p, d, P0, lam = _edge_data(graph, full, n, k)
            if lam is None or lam == 0:
                continue  # only rho = 0 fits, which is trivially fine
            # parameter triangle rho, sigma >= 0, rho + sigma <= lam
            corners = [(Fraction(0), Fraction(0)), (Fraction(0), lam), (lam, Fraction(0))]
            mids = [((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
                    for i, a in enumerate(corners) for b in corners[i + 1:]]
            bad_corner = None
            for rho, sigma in corners:
                u = _placement(rho, sigma, p, d, P0)
                x = _dilated_violation(graph, full, n, rho, u)
                if x is not None and bad_corner is None:
                    bad_corner = (rho, u, x)
            bad_mid = any(_dilated_violation(graph, full, n, r, _placement(r, s, p, d, P0))
                          for r, s in mids)
            if bad_mid and bad_corner is None:
                raise InvariantViolation("clause 2 fails at a midpoint but at no corner")
            if bad_corner is not None:
                rho, u, x = bad_corner
                return ConeCertificate(False, 2, node=n, edge=(n, k), rho=rho, u=u, witness=x,
                                       detail="dilated facet leaves the face of Z")
    cert = ConeCertificate(True)
    D = D or build_intersection(graph)
    if not lipman_contains(D, m):
        raise InvariantViolation("cone member outside the Lipman cone")
    return cert


def replay(graph: DualGraph, Z: Sequence, cert: ConeCertificate) -> bool:
    """Check that a failure certificate really witnesses a violation."""
    if cert.verdict:
        return False
    m = tuple(Fraction(x) for x in Z)
    full = CyclePolyhedron(graph, m)
    n = cert.node
    if cert.clause == 1:
        local = CyclePolyhedron(graph, m, [n]).face(n)
        if cert.witness is None:
            return not local
        return cert.witness in local and not _in_face(full, n, cert.witness)
    _, k = cert.edge
    p, q = graph.edge(n, k).segment
    for w in (p, q):
        x = tuple(cert.rho * a + b for a, b in zip(w, cert.u))
        if not (_in_face(full, n, x) and _in_face(full, k, x)):
            return False
    return _dilated_violation(graph, full, n, cert.rho, cert.u) is not None


def central_node(graph: DualGraph) -> int:
    """First compact facet meeting all three coordinate planes."""
    for n in graph.nodes:
        if graph.meets_all_coordinate_planes(n):
            return n
    raise NoCentralFacetError("no compact facet meets all coordinate planes")


def _sample_once(graph: DualGraph, eps: Fraction, root: int) -> tuple[Fraction, ...]:
    order, parent = graph.bfs_order(root)
    m: dict[int, Fraction] = {root: Fraction(graph.level(root))}
    for n in order[1:]:
        p = parent[n]
        if p == root:
            m[n] = graph.level(n) - eps
            continue
        g = parent[p]
        # grandparent face, all of whose neighbours already have values
        nbhd = graph.closed_neighborhood([g])
        ineq = [(graph.normal(k), m[k]) for k in sorted(nbhd)]
        face = _local_face(graph.normal(g), m[g], ineq)
        if not face:
            raise ValueError("empty face during sampling")
        ell = graph.normal(n)
        m[n] = min(pair(ell, x) for x in face) - eps
    return tuple(m[n] for n in graph.nodes)


def _local_face(ell_a, ma, ineq) -> list[Point]:
    from .newton import AXES, _det3
    cons = [(l, b) for l, b in ineq if tuple(l) != tuple(ell_a)] + [(ax, Fraction(0)) for ax in AXES]
    allc = cons + [(ell_a, ma)]
    pts = set()
    for i in range(len(cons)):
        for j in range(i + 1, len(cons)):
            rows = (ell_a, cons[i][0], cons[j][0])
            d = _det3(rows)
            if not d:
                continue
            rhs = (ma, cons[i][1], cons[j][1])
            sol = []
            for col in range(3):
                mm = [list(r) for r in rows]
                for r in range(3):
                    mm[r][col] = rhs[r]
                sol.append(Fraction(_det3(mm)) / d)
            if all(pair(l, sol) >= b for l, b in allc):
                pts.add(tuple(sol))
    return sorted(pts)


@dataclass
class SampleResult:
    Z: tuple[Fraction, ...]
    epsilon: Fraction
    attempts: int
    root: int
    certificate: ConeCertificate = field(repr=False)


def cone_sample(graph: DualGraph, eps=Fraction(1, 64), max_halvings: int = 40,
                D: IntersectionData | None = None) -> SampleResult:
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    root = central_node(graph)
    D = D or build_intersection(graph)
    last = None
    for attempt in range(max_halvings + 1):
        try:
            Z = _sample_once(graph, eps, root)
        except ValueError:
            Z = None
        if Z is not None:
            cert = cone_contains(graph, Z, D)
            if cert.verdict:
                return SampleResult(Z, eps, attempt + 1, root, cert)
            last = cert
        eps /= 2
    raise RuntimeError(f"no cone element found after {max_halvings} halvings; last failure {last}")


def integral_points(graph: DualGraph, Z: Sequence, count: int, root: int | None = None,
                    D: IntersectionData | None = None, max_scale: int = 64,
                    start: int = 1) -> list[tuple[int, ...]]:
    """Small integral cone points near the ray through Z.

    For s = start, start + 1, ... the ray point with root coordinate s is rounded
    coordinatewise up and down in all combinations; members of C are kept.
    """
    from itertools import product
    D = D or build_intersection(graph)
    Z = tuple(Fraction(x) for x in Z)
    root = central_node(graph) if root is None else root
    out: list[tuple[int, ...]] = []
    for s in range(start, start + max_scale):
        base = tuple(x * s / Z[root] for x in Z)
        options = [sorted({floor(x), -floor(-x)}) for x in base]
        for k in product(*options):
            if k in out or not any(k):
                continue
            if cone_contains(graph, k, D).verdict:
                out.append(k)
                if len(out) == count:
                    return out
    return out


def check_dilation_containment(graph: DualGraph, Z: Sequence, n: int, rho, u: Sequence) -> bool:
    """Does rho*Gamma(f) + u lie in Gamma(Z), given rho*F_n(f) + u lies in F_n(Z)?"""
    m = tuple(Fraction(x) for x in Z)
    rho = Fraction(rho)
    u = tuple(Fraction(x) for x in u)
    full = CyclePolyhedron(graph, m)
    if rho <= 0:
        raise PreconditionError("rho must be positive")
    if _dilated_violation(graph, full, n, rho, u) is not None:
        raise PreconditionError("rho*F_n(f) + u is not contained in F_n(Z)")
    # the recession cone of both polyhedra is the orthant, so vertices suffice
    for v in graph.polyhedron.vertices:
        if not full.contains(tuple(rho * a + b for a, b in zip(v, u))):
            return False
    return True


def sample_dilations(graph: DualGraph, Z: Sequence, n: int, rng: random.Random,
                     count: int) -> list[tuple[Fraction, Point]]:
    """Pairs (rho, u) with rho > 0 and rho*F_n(f) + u inside F_n(Z).

    The admissible pairs form a convex set; we take random convex
    combinations of known admissible pairs, one of which has rho > 0.
    """
    m = tuple(Fraction(x) for x in Z)
    full = CyclePolyhedron(graph, m)
    base: list[tuple[Fraction, Point]] = [(Fraction(0), x) for x in full.face(n)]
    for k in graph.compact_neighbors(n):
        p, d, P0, lam = _edge_data(graph, full, n, k)
        if lam:
            base.append((lam, _placement(lam, Fraction(0), p, d, P0)))
    r0 = m[n] / graph.level(n)
    if r0 > 0 and _dilated_violation(graph, full, n, r0, (Fraction(0),) * 3) is None:
        base.append((r0, (Fraction(0),) * 3))
    base = [b for b in base if _dilated_violation(graph, full, n, *b) is None]
    positive = [b for b in base if b[0] > 0]
    if not positive:
        return []
    out = positive[:count]
    while len(out) < count:
        w = [Fraction(rng.randint(0, 8)) for _ in base]
        j = rng.randrange(len(positive))
        pts = base + [positive[j]]
        w.append(Fraction(rng.randint(1, 8)))
        tot = sum(w)
        rho = sum(wi * b[0] for wi, b in zip(w, pts)) / tot
        u = tuple(sum(wi * b[1][c] for wi, b in zip(w, pts)) / tot for c in range(3))
        if rho > 0:
            out.append((rho, u))
    return out
