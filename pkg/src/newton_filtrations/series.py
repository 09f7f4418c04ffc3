"""Truncated multi-index series, the Poincare transform and reduced zeta functions."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb, lcm
from typing import Iterable, Mapping, Sequence

from .abelian import FiniteAbelianGroup, build_group

Box = tuple  # per-coordinate upper bound, None meaning unbounded


class BoxTooSmallError(ValueError):
    pass


class IllPosedDenominatorError(ValueError):
    pass


class BoxOverflowError(ValueError):
    """A factor would contribute infinitely many terms inside the box."""


def in_box(e: Sequence, box: Box) -> bool:
    return all(b is None or x <= b for x, b in zip(e, box))


def _box_points(box: Box):
    if any(b is None for b in box):
        raise BoxTooSmallError("cannot enumerate an unbounded box")
    return product(*(range(b + 1) for b in box))


@dataclass(frozen=True)
class MultiSeries:
    """Integer coefficients on Z^N, certified on ``box``; zeros are not stored."""

    box: Box
    coeffs: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {tuple(k): int(v) for k, v in self.coeffs.items() if v}
        for k in clean:
            if len(k) != len(self.box) or not in_box(k, self.box) or min(k, default=0) < 0:
                raise ValueError(f"exponent {k} lies outside the box {self.box}")
        object.__setattr__(self, "box", tuple(self.box))
        object.__setattr__(self, "coeffs", clean)

    @property
    def rank(self) -> int:
        return len(self.box)

    def __getitem__(self, k) -> int:
        return self.coeffs.get(tuple(k), 0)

    def restrict(self, box: Box) -> "MultiSeries":
        new = intersect_boxes(self.box, box)
        return MultiSeries(new, {k: v for k, v in self.coeffs.items() if in_box(k, new)})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.box == other.box and self.coeffs == other.coeffs

    def agrees_with(self, other: "MultiSeries") -> bool:
        """Coefficientwise equality on the common box."""
        box = intersect_boxes(self.box, other.box)
        return self.restrict(box).coeffs == other.restrict(box).coeffs

    def __mul__(self, other: "MultiSeries") -> "MultiSeries":
        box = intersect_boxes(self.box, other.box)
        out: dict[tuple, int] = defaultdict(int)
        for a, x in self.coeffs.items():
            for b, y in other.coeffs.items():
                e = tuple(i + j for i, j in zip(a, b))
                if in_box(e, box):
                    out[e] += x * y
        return MultiSeries(box, out)

    def specialize(self, weights: Sequence[int]) -> dict[int, int]:
        """Substitute t_n = t^{w_n}; exact only for degrees covered by the box."""
        out: dict[int, int] = defaultdict(int)
        for k, v in self.coeffs.items():
            out[sum(a * w for a, w in zip(k, weights))] += v
        return {d: c for d, c in sorted(out.items()) if c}

    def to_json(self) -> dict:
        return {
            "box": list(self.box),
            "terms": [{"exponent": list(k), "coefficient": str(v)}
                      for k, v in sorted(self.coeffs.items())],
        }


def intersect_boxes(a: Box, b: Box) -> Box:
    if len(a) != len(b):
        raise ValueError("boxes have different ranks")
    return tuple(y if x is None else x if y is None else min(x, y) for x, y in zip(a, b))


def poincare_from_hilbert(H: MultiSeries) -> MultiSeries:
    """P(t) = -H(t) * prod_n (1 - t_n^{-1}), with h_k read as h_{max(k,0)}."""
    if any(b is None or b < 1 for b in H.box):
        raise BoxTooSmallError("need a finite box with every bound at least 1")
    box = tuple(b - 1 for b in H.box)
    r = len(box)
    out = {}
    for k in _box_points(box):
        total = 0
        for S in product((0, 1), repeat=r):
            total += (-1) ** sum(S) * H[tuple(a + s for a, s in zip(k, S))]
        out[k] = -total
    return MultiSeries(box, out)


def expand_rational(numer: Iterable[tuple[int, Sequence[int]]],
                    denom: Iterable[Sequence[int]], box: Box) -> MultiSeries:
    """Expand sum(c t^a) / prod(1 - t^v) on ``box``.

    ``numer`` holds (coefficient, exponent) pairs. Every exponent is
    nonnegative, so truncating intermediate products to the box is exact.
    """
    box = tuple(box)
    cur: dict[tuple, int] = defaultdict(int)
    for c, a in numer:
        a = tuple(a)
        if min(a, default=0) < 0:
            raise IllPosedDenominatorError("numerator exponents must be nonnegative")
        if in_box(a, box):
            cur[a] += c
    for v in denom:
        v = tuple(v)
        if len(v) != len(box) or min(v) < 0 or not any(v):
            raise IllPosedDenominatorError(f"bad denominator exponent {v}")
        if not any(x > 0 and b is not None for x, b in zip(v, box)):
            raise IllPosedDenominatorError(f"{v} has no positive entry in a bounded coordinate")
        # multiply by 1/(1 - t^v): process in an order where e - v is done before e
        nxt: dict[tuple, int] = defaultdict(int)
        for e in sorted(cur, key=lambda e: [x * y for x, y in zip(e, v)]):
            c = cur[e]
            while in_box(e, box):
                nxt[e] += c
                e = tuple(x + y for x, y in zip(e, v))
        cur = nxt
    return MultiSeries(box, cur)


def rational_product(numer_factors: Iterable[tuple[Sequence[int], int]],
                     denom: Iterable[Sequence[int]], box: Box) -> MultiSeries:
    """Expand prod (1 - t^a)^{p_a} / prod (1 - t^v) with p_a >= 0."""
    terms = {(0,) * len(box): 1}
    for a, p in numer_factors:
        nxt: dict[tuple, int] = defaultdict(int)
        for e, c in terms.items():
            for j in range(p + 1):
                f = tuple(x + j * y for x, y in zip(e, a))
                if not in_box(f, box):
                    break
                nxt[f] += c * (-1) ** j * comb(p, j)
        terms = nxt
    return expand_rational([(c, e) for e, c in terms.items()], denom, box)


@dataclass(frozen=True)
class ZetaFactor:
    """(1 - [cls] t^exponent)^power with a rational exponent vector."""

    exponent: tuple[Fraction, ...]
    cls: tuple[int, ...]
    power: int


def _power_coefficient(p: int, j: int) -> int:
    """Coefficient of X^j in (1 - X)^p."""
    if p >= 0:
        return (-1) ** j * comb(p, j) if j <= p else 0
    return comb(-p + j - 1, j)


def merge_factors(factors: Iterable[ZetaFactor]) -> list[ZetaFactor]:
    """Combine factors with equal exponent and class; drop those of power 0."""
    acc: dict[tuple, int] = defaultdict(int)
    for f in factors:
        acc[(f.exponent, f.cls)] += f.power
    return [ZetaFactor(e, c, p) for (e, c), p in sorted(acc.items()) if p]


def _span_quotient(group: FiniteAbelianGroup, classes: Sequence[tuple[int, ...]]) -> FiniteAbelianGroup:
    """H / <classes>, presented on the canonical coordinates of H."""
    k = len(group.invariants)
    rows = [[d if i == j else 0 for j in range(k)] for i, d in enumerate(group.invariants)]
    rows += [list(c) for c in classes]
    return build_group(rows)


def _order_factors(fs: list[ZetaFactor], group: FiniteAbelianGroup) -> list[ZetaFactor]:
    """Greedy order: next take the factor whose class is least shared by the others."""
    if not group.invariants:
        return sorted(fs, key=lambda f: [-x for x in f.exponent])
    rest = list(fs)
    out = []
    while rest:
        full = _span_quotient(group, [f.cls for f in rest]).order

        def score(i):
            others = [f.cls for j, f in enumerate(rest) if j != i]
            return (-_span_quotient(group, others).order // full, [-x for x in rest[i].exponent])
        best = min(range(len(rest)), key=score)
        out.append(rest.pop(best))
    return out


def zeta_reduced(factors: Sequence[ZetaFactor], group: FiniteAbelianGroup, box: Box,
                 merge: bool = True, reorder: bool = True) -> MultiSeries:
    """Trivial-class part of prod (1 - [c] t^v)^p, truncated to ``box``.

    Every exponent vector must be strictly positive in some bounded
    coordinate. After each factor, states whose class cannot be cancelled
    by the classes of the factors still to come are dropped; this is exact
    and keeps the state space small.
    """
    box = tuple(box)
    fs = merge_factors(factors) if merge else [f for f in factors if f.power]
    if reorder:
        fs = _order_factors(fs, group)
    den = 1
    for f in fs:
        for x in f.exponent:
            den = lcm(den, Fraction(x).denominator)
    sbox = tuple(None if b is None else b * den for b in box)
    zero = group.zero
    # quotients by the span of the remaining classes, for pruning
    tails = [_span_quotient(group, [f.cls for f in fs[i:]]) if group.invariants else None
             for i in range(1, len(fs) + 1)]
    dp: dict[tuple, int] = {((0,) * len(box), zero): 1}
    for f, tail in zip(fs, tails):
        v = tuple(int(Fraction(x) * den) for x in f.exponent)
        if min(v) < 0 or not any(x > 0 and b is not None for x, b in zip(v, sbox)):
            raise BoxOverflowError(f"factor exponent {f.exponent} is not bounded by the box")
        steps = []
        j, cls = 0, zero
        while in_box(tuple(j * x for x in v), sbox) and not (f.power >= 0 and j > f.power):
            steps.append((j, _power_coefficient(f.power, j), cls))
            j += 1
            cls = group.add(cls, f.cls)
        nxt: dict[tuple, int] = defaultdict(int)
        for (e, g), c in dp.items():
            for j, a, cls in steps:
                e2 = tuple(x + j * y for x, y in zip(e, v))
                if not in_box(e2, sbox):
                    break
                if a:
                    nxt[(e2, group.add(g, cls))] += a * c
        if tail is not None and tail.invariants:
            keep = {}
            for g in {g for _, g in nxt}:
                keep[g] = tail.is_zero(tail.project(g))
            dp = {k: c for k, c in nxt.items() if c and keep[k[1]]}
        else:
            dp = {k: c for k, c in nxt.items() if c}
    out = {}
    for (e, g), c in dp.items():
        if not group.is_zero(g):
            continue
        if any(x % den for x in e):
            raise ArithmeticError(f"trivial class at a non-integral exponent {e}/{den}")
        out[tuple(x // den for x in e)] = c
    return MultiSeries(box, out)
