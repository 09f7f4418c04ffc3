"""Finitely presented abelian groups via the Smith normal form."""
from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence


class InfiniteQuotientError(ValueError):
    pass


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Return (D, P, Q) with P*A*Q = D in Smith normal form.

    P and Q are unimodular. Diagonal entries are nonnegative and each
    divides the next.
    """
    a = [list(map(int, row)) for row in A]
    m = len(a)
    n = len(a[0]) if m else 0
    P = _identity(m)
    Q = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in Q:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        P[dst] = [x + c * y for x, y in zip(P[dst], P[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in Q:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        changed = True
            if changed:
                cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            P[t] = [-x for x in P[t]]
    return a, P, Q


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z^labels modulo the row span of ``relations``.

    Elements are tuples in the canonical coordinates prod Z/d_i over the
    nontrivial invariant factors d_i.
    """

    labels: tuple
    relations: tuple[tuple[int, ...], ...]
    invariants: tuple[int, ...]
    _basis_change: tuple[tuple[int, ...], ...]
    _coords: tuple[int, ...]  # which columns of vQ are kept

    @property
    def order(self) -> int:
        return prod(self.invariants)

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.invariants)

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        Q = self._basis_change
        w = [sum(v[i] * Q[i][j] for i in range(len(v))) for j in self._coords]
        return tuple(x % d for x, d in zip(w, self.invariants))

    def generator(self, k: int) -> tuple[int, ...]:
        v = [0] * len(self.labels)
        v[k] = 1
        return self.project(v)

    def add(self, g, h) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(g, h, self.invariants))

    def mul(self, k: int, g) -> tuple[int, ...]:
        return tuple((k * x) % d for x, d in zip(g, self.invariants))

    def is_zero(self, g) -> bool:
        return not any(g)


def build_group(relations: Sequence[Sequence[int]], labels: Sequence | None = None) -> FiniteAbelianGroup:
    rel = [tuple(int(x) for x in row) for row in relations]
    if not rel:
        raise InfiniteQuotientError("no relations")
    n = len(rel[0])
    labels = tuple(labels) if labels is not None else tuple(range(n))
    if len(labels) != n:
        raise ValueError("label count does not match relation width")
    D, _, Q = smith_normal_form(rel)
    diag = [D[i][i] if i < len(D) else 0 for i in range(n)]
    if any(d == 0 for d in diag):
        raise InfiniteQuotientError("relation lattice does not have full rank")
    coords = tuple(j for j, d in enumerate(diag) if d != 1)
    invariants = tuple(diag[j] for j in coords)
    return FiniteAbelianGroup(labels, tuple(rel), invariants, tuple(tuple(r) for r in Q), coords)
