"""Suspensions f = f0(x, y) + z^N: chain data, |H|, the end-generator group and zeta."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, prod
from typing import Sequence

from .abelian import FiniteAbelianGroup, build_group
from .lattice import IntersectionData, build_intersection
from .newton import AXES, Diagram, DualGraph, lattice_length
from .poly import LaurentPoly, weight
from .series import Box, MultiSeries, ZetaFactor, rational_product, zeta_reduced


class NotSuspensionError(ValueError):
    pass


class GateFailure(ValueError):
    pass


def detect_suspension(f: LaurentPoly) -> tuple[LaurentPoly, int] | None:
    """Split f as f0(x, y) + c z^N with c = 1; None if f has another shape."""
    zterms = [(u, c) for u, c in f.items() if u[2]]
    if len(zterms) != 1:
        return None
    (u, c), = zterms
    if u[0] or u[1] or c != 1 or u[2] < 2:
        return None
    f0 = f - LaurentPoly.monomial(u)
    return f0, u[2]


@dataclass(frozen=True)
class End:
    kind: str  # "x", "y" or "z"
    chain_index: int  # 0-based position of its node along the chain
    alpha: int


@dataclass(frozen=True)
class SuspensionData:
    N: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    s: tuple[int, ...]
    m: tuple[int, ...]
    alpha: tuple[int, ...]
    s_x: int
    s_y: int
    alpha_x: int
    alpha_y: int
    chain: tuple[int, ...]  # node id of each chain segment

    @property
    def r(self) -> int:
        return len(self.s)

    @property
    def s_z(self) -> int:
        return sum(self.s)

    @property
    def redundant_legs(self) -> bool:
        return (self.s_x == self.N or self.s_y == self.N
                or self.a[1] == 1 or self.b[-2] == 1)

    def ends(self) -> list[End]:
        out = [End("x", 0, self.alpha_x)] * self.s_x
        out += [End("y", self.r - 1, self.alpha_y)] * self.s_y
        for i, (si, ai) in enumerate(zip(self.s, self.alpha)):
            out += [End("z", i, ai)] * si
        return out

    def to_json(self) -> dict:
        return {
            "N": self.N, "a": list(self.a), "b": list(self.b), "s": list(self.s),
            "m": list(self.m), "alpha": list(self.alpha), "s_x": self.s_x,
            "s_y": self.s_y, "s_z": self.s_z, "alpha_x": self.alpha_x,
            "alpha_y": self.alpha_y, "chain": list(self.chain),
            "redundant_legs": self.redundant_legs,
        }


def _plane(graph: DualGraph, axis: int) -> int:
    target = AXES[axis]
    for k in graph.extended_nodes:
        if graph.normal(k) == target:
            return k
    raise NotSuspensionError(f"no noncompact facet orthogonal to axis {axis}")


def suspension_of(f0: LaurentPoly, N: int) -> LaurentPoly:
    return f0 + LaurentPoly.monomial((0, 0, N))


def analyze_suspension(f0: LaurentPoly, N: int, diagram: Diagram | None = None) -> SuspensionData:
    if N <= 1:
        raise NotSuspensionError("N must be at least 2")
    if not f0 or any(u[2] for u in f0.terms):
        raise NotSuspensionError("f0 must be a nonzero polynomial in x and y")
    if not any(u[1] == 0 and u[0] > 0 for u in f0.terms) or not any(
            u[0] == 0 and u[1] > 0 for u in f0.terms):
        raise NotSuspensionError("f0 is not convenient")
    D = diagram or Diagram(suspension_of(f0, N))
    g = D.graph
    apex = (0, 0, N)
    segs = []
    for n in g.nodes:
        verts = g.facet(n).vertices
        if apex not in verts:
            raise NotSuspensionError("a compact facet misses the apex (0,0,N)")
        base = sorted(v for v in verts if v[2] == 0)
        if len(base) != 2 or len(verts) != 3:
            raise NotSuspensionError("compact facet is not a cone over a segment")
        segs.append((base[0], base[1], n))
    segs.sort()
    a = [segs[0][0][0]] + [q[0] for _, q, _ in segs]
    b = [segs[0][0][1]] + [q[1] for _, q, _ in segs]
    for (p, _, _), (_, q, _) in zip(segs[1:], segs):
        if p != q:
            raise NotSuspensionError("compact facets do not form a chain")
    chain = tuple(n for _, _, n in segs)
    s = tuple(lattice_length(p, q) for p, q, _ in segs)
    xp, yp, zp = (_plane(g, i) for i in range(3))
    s_x = g.edge(chain[0], xp).t
    s_y = g.edge(chain[-1], yp).t
    if s_x != gcd(N, b[0]) or s_y != gcd(N, a[-1]):
        raise AssertionError("boundary leg lengths disagree with the gcd formula")
    alpha = tuple(g.edge(n, zp).alpha for n in chain)
    for n, si in zip(chain, s):
        if g.edge(n, zp).t != si:
            raise AssertionError("z-leg count differs from the segment content")
    return SuspensionData(
        N=N, a=tuple(a), b=tuple(b), s=s, m=tuple(g.level(n) for n in chain),
        alpha=alpha, s_x=s_x, s_y=s_y,
        alpha_x=g.edge(chain[0], xp).alpha, alpha_y=g.edge(chain[-1], yp).alpha,
        chain=chain)


def formula_alphas(sd: SuspensionData) -> dict[str, int | Fraction]:
    """Leg indices from the chain formulas, for cross-checking the normals."""
    r = sd.r
    ax, ay = Fraction(sd.a[1], sd.s[0]), Fraction(sd.b[r - 1], sd.s[-1])

    def reduced(v: Fraction):
        # the leg index drops by the part of a_1/s_1 shared with N
        return v / gcd(v.numerator, sd.N) if v.denominator == 1 else None
    return {
        "alpha_x": ax,
        "alpha_y": ay,
        "alpha_x_reduced": reduced(ax),
        "alpha_y_reduced": reduced(ay),
        "alpha_first": Fraction(sd.N, sd.s_x) if r > 1 else None,
        "alpha_last": Fraction(sd.N, sd.s_y) if r > 1 else None,
        "alpha_inner": [sd.N] * max(r - 2, 0),
    }


@dataclass(frozen=True)
class FactoredRational:
    """prod (t^e - 1)^mult; (1, k) stands for (t - 1)^k."""

    factors: tuple[tuple[Fraction, int], ...]

    @property
    def degree(self) -> Fraction:
        return sum((e * k for e, k in self.factors), Fraction(0))

    def value_at_one(self) -> Fraction:
        # (t^e - 1) ~ e (t - 1) near 1; the (t - 1) powers must cancel
        if sum(k for _, k in self.factors) != 0:
            raise ArithmeticError("pole or zero at t = 1")
        return prod((Fraction(e) ** k for e, k in self.factors), start=Fraction(1))

    def to_json(self) -> list:
        return [{"exponent": {"num": str(e.numerator), "den": str(e.denominator)},
                 "multiplicity": k} for e, k in self.factors]


def characteristic_polynomial(sd: SuspensionData) -> FactoredRational:
    m, s, al = sd.m, sd.s, sd.alpha
    F = Fraction
    fac: list[tuple[Fraction, int]] = []
    fac += [(F(mi), si) for mi, si in zip(m, s)]
    fac += [(F(m[0]), sd.s_x - 1), (F(m[-1]), sd.s_y - 1)]
    fac += [(F(mi, ai), -si) for mi, si, ai in zip(m, s, al)]
    fac += [(F(m[0], sd.alpha_x), -sd.s_x), (F(m[-1], sd.alpha_y), -sd.s_y)]
    # N/s_x and N/s_y are the z-leg indices at the chain ends; they equal
    # alpha[0] and alpha[-1] unless the chain has a single segment
    a1, ar = sd.N // sd.s_x, sd.N // sd.s_y
    fac += [(F(m[0], a1 * sd.alpha_x), 1), (F(m[-1], ar * sd.alpha_y), 1), (F(sd.N), 1)]
    fac.append((F(1), -1))
    return FactoredRational(tuple((e, k) for e, k in fac if k))


def h_order(sd: SuspensionData) -> int:
    return sd.N ** (sd.s_z - 1) * sd.alpha_x ** (sd.s_x - 1) * sd.alpha_y ** (sd.s_y - 1)


def relation_matrix(sd: SuspensionData, literal: bool = False) -> list[list[int]]:
    """Relations among the end generators, in the order of ``sd.ends()``.

    With ``literal`` only the generator list of the end lattice is used.
    By default the compatibility relations alpha_e e - alpha_e' e' between
    ends at the same node are added; without them the quotient is too big
    as soon as some node carries ends with different indices.
    """
    ends = sd.ends()
    n = len(ends)
    rows: list[list[int]] = []

    def unit(i: int, c: int = 1) -> list[int]:
        v = [0] * n
        v[i] = c
        return v

    for i, e in enumerate(ends):
        c = {"z": sd.N, "x": sd.alpha_x * sd.s_x, "y": sd.alpha_y * sd.s_y}[e.kind]
        rows.append(unit(i, c))
    for kind, al in (("x", sd.alpha_x), ("y", sd.alpha_y)):
        idx = [i for i, e in enumerate(ends) if e.kind == kind]
        for i, j in zip(idx, idx[1:]):
            v = unit(i, al)
            v[j] -= al
            rows.append(v)
    for kind in "xyz":
        rows.append([int(e.kind == kind) for e in ends])
    if not literal:
        for c in range(sd.r):
            idx = [i for i, e in enumerate(ends) if e.chain_index == c]
            for i, j in zip(idx, idx[1:]):
                v = unit(i, ends[i].alpha)
                v[j] -= ends[j].alpha
                rows.append(v)
    return rows


def top_index(sd: SuspensionData) -> int:
    """Index of the diagonal sublattice spanned by the first block of relations."""
    return ((sd.alpha_x * sd.s_x) ** sd.s_x * (sd.alpha_y * sd.s_y) ** sd.s_y
            * sd.N ** sd.s_z)


def end_group(sd: SuspensionData, literal: bool = False) -> FiniteAbelianGroup:
    labels = [f"{e.kind}{e.chain_index}_{k}" for k, e in enumerate(sd.ends())]
    return build_group(relation_matrix(sd, literal), labels)


@dataclass(frozen=True)
class ClosedForm:
    """(1 - t^numerator) / prod (1 - t^d) over the node variables."""

    numerator: tuple[int, ...]
    denominators: tuple[tuple[int, ...], ...]

    def expand(self, box: Box) -> MultiSeries:
        return rational_product([(self.numerator, 1)], self.denominators, box)

    def to_json(self) -> dict:
        return {"numerator": list(self.numerator), "denominators": [list(d) for d in self.denominators]}


def zeta_closed_form(diagram: Diagram, N: int | None = None, check_gate: bool = True) -> ClosedForm:
    if check_gate and not diagram.gate.passed:
        raise GateFailure("diagram fails the rational homology sphere gate")
    g = diagram.graph
    wf = diagram.levels()
    den = tuple(tuple(g.normal(n)[i] for n in g.nodes) for i in range(3))
    if N is not None:
        if wf != tuple(N * w for w in den[2]):
            raise AssertionError("weight of f is not N times the weight of z")
        if any(weight(diagram.f, g.normal(n)) != wf[n] for n in g.nodes):
            raise AssertionError("facet levels disagree with the weights of f")
    return ClosedForm(wf, den)


class Suspension:
    """Everything attached to one suspension diagram."""

    def __init__(self, f0: LaurentPoly, N: int, check_gate: bool = True):
        self.f0 = f0
        self.N = N
        self.diagram = Diagram(suspension_of(f0, N))
        if check_gate and not self.diagram.gate.passed:
            raise GateFailure("diagram fails the rational homology sphere gate")
        self.data = analyze_suspension(f0, N, self.diagram)

    @classmethod
    def from_polynomial(cls, f: LaurentPoly, check_gate: bool = True) -> "Suspension":
        split = detect_suspension(f)
        if split is None:
            raise NotSuspensionError("polynomial is not of the form f0(x,y) + z^N")
        return cls(*split, check_gate=check_gate)

    @cached_property
    def intersection(self) -> IntersectionData:
        return build_intersection(self.diagram.graph)

    @cached_property
    def group(self) -> FiniteAbelianGroup:
        return end_group(self.data)

    def closed_form(self) -> ClosedForm:
        return zeta_closed_form(self.diagram, self.N, check_gate=False)

    def zeta_factors(self) -> list[ZetaFactor]:
        """Node and end factors of the zeta product restricted to nodes."""
        sd, g, G = self.data, self.diagram.graph, self.group
        duals = self.intersection.duals
        ends = sd.ends()
        out = []
        node_class = {}
        for k, e in enumerate(ends):
            n = sd.chain[e.chain_index]
            cls = G.generator(k)
            out.append(ZetaFactor(tuple(x / e.alpha for x in duals[n]), cls, -1))
            nc = G.mul(e.alpha, cls)
            if node_class.setdefault(n, nc) != nc:
                raise AssertionError("ends of one node give different node classes")
        for n in g.nodes:
            out.append(ZetaFactor(tuple(duals[n]), node_class[n], g.degree(n) - 2))
        return out

    def zeta(self, box: Box) -> MultiSeries:
        return zeta_reduced(self.zeta_factors(), self.group, box)

    def default_box(self, bound: int = 45) -> Box:
        """Bound the coordinate of the first chain node only."""
        box = [None] * self.diagram.graph.n_nodes
        box[self.data.chain[0]] = bound
        return tuple(box)


def milnor_number_2d(f0: LaurentPoly) -> int:
    """Kouchnirenko number 2V - a - b + 1 of a convenient plane curve germ."""
    a = min(u[0] for u in f0.terms if u[1] == 0 and u[2] == 0)
    b = min(u[1] for u in f0.terms if u[0] == 0 and u[2] == 0)
    pts = sorted({(u[0], u[1]) for u in f0.terms if u[0] <= a and u[1] <= b})
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    hull = hull[hull.index((0, b)):hull.index((a, 0)) + 1]
    twice_area = sum((q[0] - p[0]) * (p[1] + q[1]) for p, q in zip(hull, hull[1:]))
    return twice_area - a - b + 1


def random_suspension(rng: random.Random, max_r: int = 4, max_N: int = 9,
                      max_coord: int = 30) -> tuple[LaurentPoly, int]:
    """A random convenient f0 with a strictly convex chain of at most max_r segments."""
    while True:
        r = rng.randint(1, max_r)
        steps = {}
        for _ in range(r):
            p, q = rng.randint(1, max_coord // r), rng.randint(1, max_coord // r)
            steps[Fraction(q, p)] = (p, q)
        if len(steps) != r:
            continue
        ordered = [steps[k] for k in sorted(steps, reverse=True)]
        a0, b0 = 0, sum(q for _, q in ordered)
        if sum(p for p, _ in ordered) > max_coord or b0 > max_coord:
            continue
        pts = [(a0, b0)]
        for p, q in ordered:
            pts.append((pts[-1][0] + p, pts[-1][1] - q))
        f0 = LaurentPoly({(x, y, 0): 1 for x, y in pts})
        return f0, rng.randint(2, max_N)
