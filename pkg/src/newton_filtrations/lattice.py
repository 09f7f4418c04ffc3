"""The rational intersection form on cycles supported on the compact facets."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _exact
from .newton import DualGraph


class InconsistentRelationError(ArithmeticError):
    """The self-intersection relation disagrees between coordinates."""


class NotNegativeDefiniteError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Cycle:
    """Rational cycle sum_n m_n E_n; ``m[n]`` is the coordinate at node n."""

    m: tuple[Fraction, ...]

    def __init__(self, m: Iterable):
        object.__setattr__(self, "m", tuple(Fraction(x) for x in m))

    def __len__(self) -> int:
        return len(self.m)

    def __getitem__(self, n: int) -> Fraction:
        return self.m[n]

    def __iter__(self):
        return iter(self.m)

    def __add__(self, other: "Cycle") -> "Cycle":
        return Cycle(a + b for a, b in zip(self.m, other.m))

    def __sub__(self, other: "Cycle") -> "Cycle":
        return Cycle(a - b for a, b in zip(self.m, other.m))

    def __neg__(self) -> "Cycle":
        return Cycle(-a for a in self.m)

    def scale(self, lam) -> "Cycle":
        lam = Fraction(lam)
        return Cycle(lam * a for a in self.m)

    def __mul__(self, lam) -> "Cycle":
        return self.scale(lam)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.m)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.m)

    def __le__(self, other: "Cycle") -> bool:
        return all(a <= b for a, b in zip(self.m, other.m))

    def __ge__(self, other: "Cycle") -> bool:
        return all(a >= b for a, b in zip(self.m, other.m))

    def __repr__(self) -> str:
        return "Cycle(" + ", ".join(str(a) for a in self.m) + ")"


def _self_intersection(graph: DualGraph, n: int) -> Fraction:
    ell = graph.normal(n)
    rest = [Fraction(0)] * 3
    for k in graph.neighbors(n):
        e = graph.edge(n, k)
        coef = Fraction(e.t, e.alpha)
        for i, a in enumerate(graph.normal(k)):
            rest[i] += coef * a
    # solve from the largest coordinate, then check the others
    i0 = max(range(3), key=lambda i: abs(ell[i]))
    e_n = -rest[i0] / ell[i0]
    for i in range(3):
        if e_n * ell[i] + rest[i] != 0:
            raise InconsistentRelationError(
                f"self-intersection of node {n} is inconsistent in coordinate {i}")
    return e_n


@dataclass(frozen=True)
class IntersectionData:
    matrix: tuple[tuple[Fraction, ...], ...]
    duals: tuple[tuple[Fraction, ...], ...]  # duals[n] = n-th column of -M^{-1}

    @property
    def self_intersections(self) -> tuple[Fraction, ...]:
        return tuple(self.matrix[i][i] for i in range(len(self.matrix)))

    def pairing(self, Z: Sequence, W: Sequence) -> Fraction:
        return sum((Fraction(a) * self.matrix[i][j] * Fraction(b)
                    for i, a in enumerate(Z) for j, b in enumerate(W)), Fraction(0))

    def apply(self, Z: Sequence) -> list[Fraction]:
        """The vector ((Z, E_n))_n."""
        return _exact.matvec(self.matrix, list(Z))

    def to_json(self) -> dict:
        def q(x: Fraction) -> dict:
            return {"num": str(x.numerator), "den": str(x.denominator)}
        return {
            "matrix": [[q(x) for x in row] for row in self.matrix],
            "self_intersections": [q(x) for x in self.self_intersections],
            "dual_cycles": [[q(x) for x in row] for row in self.duals],
        }


def is_negative_definite(M: Sequence[Sequence]) -> bool:
    """Sylvester's criterion with exact leading principal minors."""
    n = len(M)
    if n == 0:
        return True
    for k in range(1, n + 1):
        d = _exact.determinant([row[:k] for row in M[:k]])
        if (d > 0) != (k % 2 == 0) or d == 0:
            return False
    return True


def build_intersection(graph: DualGraph) -> IntersectionData:
    nn = graph.n_nodes
    M = [[Fraction(0)] * nn for _ in range(nn)]
    for n in graph.nodes:
        M[n][n] = _self_intersection(graph, n)
        for k in graph.compact_neighbors(n):
            e = graph.edge(n, k)
            M[n][k] = Fraction(e.t, e.alpha)
    if not is_negative_definite(M):
        raise NotNegativeDefiniteError("intersection form is not negative definite")
    inv = _exact.inverse(M)
    duals = tuple(tuple(-inv[i][n] for i in range(nn)) for n in range(nn))
    return IntersectionData(tuple(tuple(r) for r in M), duals)


def lipman_contains(D: IntersectionData, Z: Sequence) -> bool:
    """(Z, E_n) <= 0 for every node n."""
    return all(v <= 0 for v in D.apply(Z))


def dual_cycle(D: IntersectionData, n: int) -> Cycle:
    return Cycle(D.duals[n])
