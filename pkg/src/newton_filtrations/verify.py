"""Seeded property suites behind ``newton-filt verify``.

Each suite returns a :class:`SuiteReport`; a nonempty ``counterexamples``
list means the run failed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .cone import cone_sample, integral_points
from .filtration import Filtrations, random_member_candidates
from .newton import Diagram
from .poly import LaurentPoly
from .series import MultiSeries, expand_rational, poincare_from_hilbert
from .suspension import Suspension


@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: int = 0
    counterexamples: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def fail(self, **info) -> None:
        self.counterexamples.append({k: _plain(v) for k, v in info.items()})

    def to_json(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "checks": self.checks, "counterexamples": self.counterexamples,
                "notes": self.notes}


def _plain(v):
    if isinstance(v, LaurentPoly):
        return str(v)
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    return v


def cone_points(fil: Filtrations, count: int, eps=None) -> list[tuple[int, ...]]:
    """Integral cone points past the level of the central node.

    Below the levels every multiple of f already has large weight, so
    lifting is vacuous; the points used here force real reduction steps.
    """
    kw = {} if eps is None else {"eps": eps}
    s = cone_sample(fil.graph, D=fil.intersection, **kw)
    start = 2 * fil.graph.level(s.root)
    return integral_points(fil.graph, s.Z, count, root=s.root, D=fil.intersection, start=start)


def suite_intro(diagram: Diagram, seed: int, n_points: int = 5, per_point: int = 50,
                degree: int = 60, cap: int = 200, eps=None) -> SuiteReport:
    """Lifting succeeds and F, G, I agree at integral points of the cone."""
    rep = SuiteReport("intro", seed)
    rng = random.Random(seed)
    fil = Filtrations(diagram, degree=degree, cap=cap)
    ks = cone_points(fil, n_points, eps)
    rep.notes["points"] = [list(k) for k in ks]
    if len(ks) < n_points:
        rep.fail(reason=f"only {len(ks)} integral cone points found")
    nontrivial = 0
    for k in ks:
        for g in random_member_candidates(fil, k, rng, per_point):
            rep.checks += 1
            lifted = fil.lift(g, k)
            if not lifted.ok:
                rep.fail(k=k, g=g, reason="lift failed: " + lifted.message)
                continue
            nontrivial += lifted.steps > 0
            G, I = fil.in_G(g, k), fil.in_I(g, k)
            if G.member is not True or I.member is not True:
                rep.fail(k=k, g=g, reason="memberships differ",
                         G=G.to_json(), I=I.to_json())
    rep.notes["nontrivial_lifts"] = nontrivial
    return rep


def suite_susp(diagram: Diagram, seed: int, n_points: int = 8, per_point: int = 20,
               degree: int = 60, cap: int = 200) -> SuiteReport:
    """On a suspension, div = wt and F = G = I for arbitrary k >= 1."""
    rep = SuiteReport("susp", seed)
    Suspension.from_polynomial(diagram.f, check_gate=False)
    rng = random.Random(seed)
    fil = Filtrations(diagram, degree=degree, cap=cap)
    for _ in range(n_points):
        k = tuple(rng.randint(1, 2 * lv) for lv in diagram.levels())
        for g in random_member_candidates(fil, k, rng, per_point):
            rep.checks += 1
            div, wt = fil.div_vector(g), fil.order_vector(g)
            if div != wt:
                rep.fail(k=k, g=g, reason="div and wt differ", div=div.to_json(), wt=wt.to_json())
            G, I = fil.in_G(g, k), fil.in_I(g, k)
            if G.member is not True or I.member is not True:
                rep.fail(k=k, g=g, reason="memberships differ",
                         G=G.to_json(), I=I.to_json())
    return rep


def image_series_check(fil: Filtrations, hbox: Sequence[int]) -> tuple[MultiSeries, MultiSeries]:
    """(brute force P^I, closed form) on the box one smaller than ``hbox``."""
    H = MultiSeries(tuple(hbox), {k: fil.hilbert_I(k)[0] for k in _points(hbox)})
    got = poincare_from_hilbert(H)
    want = expand_rational([(1, (0,) * len(hbox)), (-1, fil.diagram.levels())],
                           list(zip(*fil.normals)), got.box)
    return got, want


def _points(box):
    from itertools import product
    return product(*(range(b + 1) for b in box))


def suite_series(diagram: Diagram, seed: int, bound: int = 45, hbox: Sequence[int] | None = None,
                 degree: int = 60) -> SuiteReport:
    """Zeta expansion against the closed form, and P^I against the Hilbert oracle."""
    rep = SuiteReport("series", seed)
    fil = Filtrations(diagram, degree=degree)
    if hbox is None:
        hbox = tuple(min(8, lv) for lv in diagram.levels())
    got, want = image_series_check(fil, hbox)
    rep.checks += 1
    if got != want:
        diff = sorted(k for k in set(got.coeffs) | set(want.coeffs) if got[k] != want[k])
        rep.fail(reason="P^I differs from the closed form", exponents=[list(k) for k in diff[:10]])
    try:
        susp = Suspension.from_polynomial(diagram.f, check_gate=False)
    except ValueError:
        rep.notes["zeta"] = "skipped: not a suspension"
        return rep
    box = susp.default_box(bound)
    z, cf = susp.zeta(box), susp.closed_form().expand(box)
    rep.checks += 1
    rep.notes["zeta_terms"] = len(z.coeffs)
    if z != cf:
        diff = sorted(k for k in set(z.coeffs) | set(cf.coeffs) if z[k] != cf[k])
        rep.fail(reason="zeta differs from the closed form", exponents=[list(k) for k in diff[:10]])
    return rep


SUITES = {"intro": suite_intro, "susp": suite_susp, "series": suite_series}
