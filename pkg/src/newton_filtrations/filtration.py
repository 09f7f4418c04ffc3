"""Divisorial, order and image filtrations on O/(f), lifting, and Hilbert oracles."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from .cone import central_node, cone_contains
from .lattice import IntersectionData, build_intersection
from .newton import Diagram
from .poly import Exponent, LaurentPoly, laurent_divide, pair, principal_part, weight


class ZeroClassError(ArithmeticError):
    """The element is a multiple of f, so every weight is infinite."""


class LiftError(RuntimeError):
    pass


class Status(str, enum.Enum):
    CERTIFIED = "certified"
    STABILIZED = "stabilized"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class WeightValue:
    value: int
    capped: bool = False  # True means "at least value"

    def at_least(self, k: int) -> bool:
        return self.value >= k

    def to_json(self) -> dict:
        return {"value": self.value, "capped": self.capped}


@dataclass(frozen=True)
class WeightVector:
    values: tuple[WeightValue, ...]

    def ints(self) -> tuple[int, ...]:
        return tuple(w.value for w in self.values)

    @property
    def exact(self) -> bool:
        return not any(w.capped for w in self.values)

    def to_json(self) -> list:
        return [w.to_json() for w in self.values]


@dataclass(frozen=True)
class Verdict:
    member: bool | None  # None when inconclusive
    status: Status
    degree: int | None = None

    def __bool__(self) -> bool:
        if self.member is None:
            raise ValueError("inconclusive verdict has no truth value")
        return self.member

    def to_json(self) -> dict:
        return {"member": self.member, "status": self.status.value, "degree": self.degree}


def _order_key(u: Exponent):
    return (sum(u), u)


class _Echelon:
    """Row echelon basis of sparse rational vectors indexed by monomials."""

    def __init__(self):
        self.rows: dict[Exponent, dict[Exponent, Fraction]] = {}

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        while True:
            hits = [m for m in v if m in self.rows]
            if not hits:
                return v
            m = max(hits, key=_order_key)
            c = v[m]
            for key, a in self.rows[m].items():
                x = v.get(key, 0) - c * a
                if x:
                    v[key] = x
                else:
                    v.pop(key, None)

    def add(self, v: dict) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        lead = max(r, key=_order_key)
        c = r[lead]
        self.rows[lead] = {k: Fraction(a) / c for k, a in r.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _monomials_up_to(d: int):
    for total in range(d + 1):
        for a in range(total + 1):
            for b in range(total - a + 1):
                yield (a, b, total - a - b)


class Filtrations:
    """Weights and filtration membership for a fixed f.

    ``degree`` caps the truncation used by the image filtration; ``cap``
    bounds the number of reduction steps in the weight loops.
    """

    def __init__(self, diagram: Diagram, degree: int = 60, cap: int = 200):
        self.diagram = diagram
        self.f = diagram.f
        self.graph = diagram.graph
        self.normals = [self.graph.normal(n) for n in self.graph.nodes]
        self.principal = [principal_part(self.f, ell) for ell in self.normals]
        self.degree = degree
        self.cap = cap
        self._fdeg = max(sum(u) for u in self.f.terms)
        self._image_cache: dict[tuple, tuple] = {}
        self._intersection: IntersectionData | None = None

    @property
    def n_nodes(self) -> int:
        return len(self.normals)

    # weight loops

    def _reduce_loop(self, g: LaurentPoly, n: int, polynomial_only: bool,
                     target: int | None) -> WeightValue:
        if not g:
            raise ZeroClassError("zero element")
        ell, fn = self.normals[n], self.principal[n]
        cur = g
        w = weight(cur, ell)
        for _ in range(self.cap):
            if target is not None and w >= target:
                return WeightValue(w)
            h = laurent_divide(principal_part(cur, ell), fn)
            if h is None or (polynomial_only and not h.is_polynomial()):
                return WeightValue(w)
            cur = cur - h * self.f
            if not cur:
                raise ZeroClassError("element is a multiple of f")
            w2 = weight(cur, ell)
            if w2 <= w:
                raise AssertionError("reduction step did not raise the weight")
            w = w2
        return WeightValue(w, capped=True)

    def div_weight(self, g: LaurentPoly, n: int, target: int | None = None) -> WeightValue:
        """Divisorial weight at node n; with ``target``, stop once it is reached."""
        return self._reduce_loop(g, n, False, target)

    def order_weight(self, g: LaurentPoly, n: int, target: int | None = None) -> WeightValue:
        # A representative of higher weight must cancel the principal part
        # g_n, which forces the step g - h f with h = g_n / f_n; the quotient
        # is unique, so a quotient with a negative exponent ends the search.
        return self._reduce_loop(g, n, True, target)

    def div_vector(self, g: LaurentPoly) -> WeightVector:
        return WeightVector(tuple(self.div_weight(g, n) for n in range(self.n_nodes)))

    def order_vector(self, g: LaurentPoly) -> WeightVector:
        return WeightVector(tuple(self.order_weight(g, n) for n in range(self.n_nodes)))

    # memberships

    def in_F(self, g: LaurentPoly, k: Sequence[int]) -> Verdict:
        return self._weights_reach(g, k, self.div_weight)

    def in_G(self, g: LaurentPoly, k: Sequence[int]) -> Verdict:
        return self._weights_reach(g, k, self.order_weight)

    def _weights_reach(self, g, k, fn) -> Verdict:
        if not g:
            return Verdict(True, Status.CERTIFIED)
        capped = False
        for n, kn in enumerate(k):
            if kn <= 0:
                continue
            try:
                w = fn(g, n, target=kn)
            except ZeroClassError:
                return Verdict(True, Status.CERTIFIED)
            if w.value >= kn:
                continue
            if w.capped:
                capped = True
                continue
            return Verdict(False, Status.CERTIFIED)
        return Verdict(None, Status.INCONCLUSIVE) if capped else Verdict(True, Status.CERTIFIED)

    def staircase(self, k: Sequence[int]) -> list[Exponent]:
        """Monomials outside the monomial ideal {u : l_n(u) >= k_n for all n}."""
        active = [(ell, kn) for ell, kn in zip(self.normals, k) if kn > 0]
        if not active:
            return []
        d = max(ceil(Fraction(kn, min(ell))) for ell, kn in active)
        return [u for u in _monomials_up_to(d) if any(pair(ell, u) < kn for ell, kn in active)]

    def certified_degree(self, k: Sequence[int]) -> int:
        S = self.staircase(k)
        return max((sum(u) for u in S), default=0) + self._fdeg

    def _image_basis(self, k: tuple, D: int | None) -> tuple[set, _Echelon]:
        key = (k, D)
        if key not in self._image_cache:
            S = self.staircase(k)
            if D is not None:
                S = [u for u in S if sum(u) <= D]
            inside = set(S)
            E = _Echelon()
            for m in S:
                if D is not None and sum(m) + self._fdeg > D:
                    continue
                row = {}
                for u, c in self.f.items():
                    v = (u[0] + m[0], u[1] + m[1], u[2] + m[2])
                    if v in inside:
                        row[v] = row.get(v, 0) + c
                E.add(row)
            self._image_cache[key] = (inside, E)
        return self._image_cache[key]

    def _image_verdict(self, g: LaurentPoly, k: tuple, D: int | None) -> bool:
        inside, E = self._image_basis(k, D)
        v = {u: c for u, c in g.items() if u in inside}
        return not E.reduce(v)

    def in_I(self, g: LaurentPoly, k: Sequence[int], degree: int | None = None) -> Verdict:
        """Membership in the image of the monomial filtration, by linear algebra.

        Exact once the truncation covers the staircase plus deg f; below that
        the verdicts at the cap and the two degrees under it are compared.
        """
        if not g.is_polynomial():
            raise ValueError("power series representatives need nonnegative exponents")
        k = tuple(k)
        D = self.degree if degree is None else degree
        need = self.certified_degree(k)
        if need <= D:
            return Verdict(self._image_verdict(g, k, None), Status.CERTIFIED, need)
        vs = {self._image_verdict(g.truncate(d), k, d) for d in (D - 2, D - 1, D)}
        if len(vs) == 1:
            return Verdict(vs.pop(), Status.STABILIZED, D)
        return Verdict(None, Status.INCONCLUSIVE, D)

    # Hilbert functions

    def hilbert_Ghat(self, k: Sequence[int]) -> int:
        return len(self.staircase(k))

    def hilbert_I(self, k: Sequence[int], degree: int | None = None) -> tuple[int, Status]:
        k = tuple(k)
        D = self.degree if degree is None else degree
        if self.certified_degree(k) <= D:
            inside, E = self._image_basis(k, None)
            return len(inside) - E.rank, Status.CERTIFIED
        vals = set()
        for d in (D - 2, D - 1, D):
            inside, E = self._image_basis(k, d)
            vals.add(len(inside) - E.rank)
        if len(vals) == 1:
            return vals.pop(), Status.STABILIZED
        raise LiftError(f"Hilbert coefficient at {k} not stable up to degree {D}")

    # lifting

    @property
    def intersection(self) -> IntersectionData:
        if self._intersection is None:
            self._intersection = build_intersection(self.graph)
        return self._intersection

    def lift(self, g: LaurentPoly, k: Sequence[int], check_cone: bool = True) -> "LiftResult":
        """A representative of g mod f whose weight is at least k at every node."""
        k = tuple(int(x) for x in k)
        if check_cone and not cone_contains(self.graph, k, self.intersection).verdict:
            raise ValueError(f"{k} is not in the cone C")
        if not self.in_F(g, k):
            raise ValueError("divisorial weights of g do not reach k")
        root = central_node(self.graph)
        order, _ = self.graph.bfs_order(root)
        cur = g
        steps = 0
        done: list[int] = []
        for n in order:
            ell, fn = self.normals[n], self.principal[n]
            while cur and weight(cur, ell) < k[n]:
                if steps >= self.cap:
                    return LiftResult(None, steps, f"step cap reached at node {n}")
                h = laurent_divide(principal_part(cur, ell), fn)
                if h is None:
                    return LiftResult(None, steps, f"principal part at node {n} is not divisible")
                if not h.is_polynomial():
                    return LiftResult(None, steps, f"quotient at node {n} is not a polynomial: {h}")
                cur = cur - h * self.f
                steps += 1
                for p in done:
                    if cur and weight(cur, self.normals[p]) < k[p]:
                        raise AssertionError(f"weight at node {p} regressed while lifting")
            done.append(n)
        q = laurent_divide(cur - g, self.f) if cur != g else LaurentPoly()
        if q is None or not q.is_polynomial():
            raise AssertionError("lift changed the class of g")
        return LiftResult(cur, steps, "ok")


@dataclass(frozen=True)
class LiftResult:
    representative: LaurentPoly | None
    steps: int
    message: str

    @property
    def ok(self) -> bool:
        return self.representative is not None


def hilbert_box(fil: Filtrations, box: Sequence[int], which: str = "I") -> dict[tuple, int]:
    """Hilbert coefficients over 0 <= k <= box."""
    from itertools import product
    out = {}
    for k in product(*(range(b + 1) for b in box)):
        if which == "I":
            out[k] = fil.hilbert_I(k)[0]
        else:
            out[k] = fil.hilbert_Ghat(k)
    return out


def _ideal_generators(fil: Filtrations, k: Sequence[int]) -> list[Exponent]:
    """Monomials of the monomial ideal in a band just above its staircase."""
    top = max((sum(u) for u in fil.staircase(k)), default=0) + 2
    return [u for u in _monomials_up_to(top)
            if all(pair(ell, u) >= kn for ell, kn in zip(fil.normals, k))]


def random_member_candidates(fil: Filtrations, k: Sequence[int], rng, count: int,
                             max_terms: int = 4) -> list[LaurentPoly]:
    """Random elements whose divisorial weights reach k.

    Three shapes, filtered by in_F: monomial-ideal elements plus a
    multiple of f, products of two such elements for a halved k, and
    low-degree noise plus one ideal monomial.
    """
    k = tuple(k)
    half = tuple((x + 1) // 2 for x in k)
    gens, half_gens = _ideal_generators(fil, k), _ideal_generators(fil, half)
    low = list(_monomials_up_to(3))

    def shifted(pool):
        g = LaurentPoly({rng.choice(pool): rng.randint(1, 5) for _ in range(rng.randint(1, max_terms))})
        h = LaurentPoly({rng.choice(low): rng.randint(-3, 3) for _ in range(rng.randint(1, 3))})
        return g + h * fil.f

    out: list[LaurentPoly] = []
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        kind = tries % 3
        if kind == 0:
            g = shifted(gens)
        elif kind == 1:
            g = shifted(half_gens) * shifted(half_gens)
        else:
            g = LaurentPoly({rng.choice(low): rng.randint(-4, 4) for _ in range(rng.randint(1, max_terms))})
            g = g + LaurentPoly({rng.choice(gens): 1})
        if g and fil.in_F(g, k).member:
            out.append(g)
    return out
