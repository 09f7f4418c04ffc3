"""Command-line front end: ``newton-filt <verb> ...``.

Every report is a JSON object with a schema tag, the seed and the run
configuration. Exit codes: 0 success, 1 verification failure, 2 usage or
parse error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import enum
import json
import random
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

from . import verify
from .cone import InvariantViolation, cone_contains, cone_sample, integral_points
from .filtration import Filtrations, ZeroClassError
from .lattice import build_intersection
from .newton import Diagram, is_convenient
from .poly import LaurentPoly, PolynomialSyntaxError, parse_polynomial
from .series import MultiSeries, poincare_from_hilbert
from .suspension import (Suspension, characteristic_polynomial, end_group, formula_alphas,
                         h_order, random_suspension)

SCHEMA = "newton-filt/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    degree: int
    box: str | None
    cap: int
    epsilon: Fraction
    seed: int
    rhs_gate: bool
    format: str

    def __post_init__(self):
        if self.degree < 3 or self.cap < 1 or self.epsilon <= 0:
            raise UsageError("degree must be at least 3, cap and epsilon positive")

    def to_json(self) -> dict:
        d = asdict(self)
        d["epsilon"] = self.epsilon
        return d


def jsonable(obj):
    if isinstance(obj, Fraction):
        return {"num": str(obj.numerator), "den": str(obj.denominator)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, LaurentPoly):
        return str(obj)
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return obj


def _text(obj, prefix="") -> list[str]:
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        return [f"{prefix}: {obj['num']}" + ("" if obj["den"] == "1" else f"/{obj['den']}")]
    if isinstance(obj, dict):
        return [line for k, v in obj.items() for line in _text(v, f"{prefix}.{k}" if prefix else k)]
    if isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        return [line for i, v in enumerate(obj) for line in _text(v, f"{prefix}[{i}]")]
    return [f"{prefix}: {json.dumps(obj)}"]


def _ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"{what} must be comma separated integers, got {text!r}") from None


def _box(text: str | None, rank: int) -> tuple | None:
    """'8,8,*' with '*' meaning unbounded."""
    if text is None:
        return None
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != rank:
        raise UsageError(f"box needs {rank} entries, got {len(parts)}")
    try:
        return tuple(None if p == "*" else int(p) for p in parts)
    except ValueError:
        raise UsageError(f"bad box {text!r}") from None


def _k(args, diagram: Diagram) -> tuple[int, ...]:
    k = _ints(args.k, "k")
    if len(k) != diagram.graph.n_nodes:
        raise UsageError(f"k needs {diagram.graph.n_nodes} entries")
    return k


def _diagram(args) -> Diagram:
    return Diagram(parse_polynomial(args.poly))


# commands; each returns (result, exit code)

def cmd_analyze(args, cfg):
    d = _diagram(args)
    conv = is_convenient(d.polyhedron)
    out = {"polynomial": str(d.f), "convenient": conv, "polyhedron": d.polyhedron,
           "dual_graph": d.graph, "gate": d.gate}
    if not conv:
        out["warning"] = "diagram is not convenient; downstream results are not meaningful"
    if d.graph.n_nodes:
        D = build_intersection(d.graph)
        out["intersection"] = D
        out["weights"] = {v: d.weight_vector(parse_polynomial(v)) for v in ("x", "y", "z")}
        out["levels"] = d.levels()
        if cfg.format == "dot":
            return d.graph.to_dot(dict(enumerate(D.self_intersections))), EXIT_OK
    elif cfg.format == "dot":
        return d.graph.to_dot(extended=True), EXIT_OK
    return out, EXIT_OK


def cmd_cone(args, cfg):
    d = _diagram(args)
    D = build_intersection(d.graph)
    if args.action == "check":
        cert = cone_contains(d.graph, _k(args, d), D)
        return {"k": _k(args, d), "certificate": cert}, EXIT_OK
    s = cone_sample(d.graph, eps=cfg.epsilon, D=D)
    pts = integral_points(d.graph, s.Z, args.count, root=s.root, D=D)
    return {"Z": s.Z, "epsilon": s.epsilon, "attempts": s.attempts, "root": s.root,
            "integral_points": pts}, EXIT_OK


def _fil(args, cfg) -> Filtrations:
    return Filtrations(_diagram(args), degree=cfg.degree, cap=cfg.cap)


def cmd_weight(args, cfg):
    fil = _fil(args, cfg)
    g = parse_polynomial(args.g)
    vec = fil.div_vector(g) if args.verb == "div" else fil.order_vector(g)
    return {"g": g, "weights": vec, "status": "exact" if vec.exact else "lower-bound-at-cap"}, EXIT_OK


def cmd_member(args, cfg):
    fil = _fil(args, cfg)
    g, k = parse_polynomial(args.g), _k(args, fil.diagram)
    which = "FGI" if args.which == "all" else args.which
    res = {w: getattr(fil, f"in_{w}")(g, k) for w in which}
    return {"g": g, "k": k, "membership": res}, EXIT_OK


def cmd_lift(args, cfg):
    fil = _fil(args, cfg)
    g, k = parse_polynomial(args.g), _k(args, fil.diagram)
    try:
        res = fil.lift(g, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = {"g": g, "k": k, "ok": res.ok, "steps": res.steps, "message": res.message,
           "representative": res.representative}
    if res.ok:
        out["weights"] = fil.diagram.weight_vector(res.representative)
    return out, EXIT_OK if res.ok else EXIT_FAIL


def cmd_hilbert(args, cfg):
    fil = _fil(args, cfg)
    k = _k(args, fil.diagram)
    if args.which == "Ghat":
        return {"k": k, "which": "Ghat", "value": fil.hilbert_Ghat(k), "status": "exact"}, EXIT_OK
    value, status = fil.hilbert_I(k)
    return {"k": k, "which": "I", "value": value, "status": status}, EXIT_OK


def cmd_series(args, cfg):
    d = _diagram(args)
    rank = d.graph.n_nodes
    if args.which == "zeta":
        susp = Suspension.from_polynomial(d.f, check_gate=cfg.rhs_gate)
        box = _box(cfg.box, rank) or susp.default_box()
        if any(b is not None and b < 0 for b in box):
            return {"which": "zeta", "series": MultiSeries(box, {})}, EXIT_OK
        z = susp.zeta(box)
        return {"which": "zeta", "status": "certified-on-box", "series": z,
                "closed_form": susp.closed_form(), "matches_closed_form": z == susp.closed_form().expand(box)}, EXIT_OK
    box = _box(cfg.box, rank) or tuple(min(8, lv) for lv in d.levels())
    if any(b is None for b in box):
        raise UsageError("Hilbert series need a finite box")
    if any(b < 0 for b in box):
        return {"which": args.which, "series": MultiSeries(box, {})}, EXIT_OK
    fil = Filtrations(d, degree=cfg.degree, cap=cfg.cap)
    hbox = tuple(b + 1 for b in box)
    h = fil.hilbert_I if args.which == "PI" else (lambda k: (fil.hilbert_Ghat(k), None))
    H = MultiSeries(hbox, {k: h(k)[0] for k in verify._points(hbox)})
    return {"which": args.which, "status": "certified-on-box", "series": poincare_from_hilbert(H)}, EXIT_OK


def _suspension_order(susp: Suspension) -> dict:
    sd = susp.data
    delta = characteristic_polynomial(sd)
    return {"h_order": h_order(sd), "delta_at_one": delta.value_at_one(),
            "delta_degree": delta.degree, "group_order": susp.group.order,
            "group_invariants": list(susp.group.invariants),
            "literal_group_order": end_group(sd, literal=True).order}


def cmd_suspension(args, cfg):
    if args.action == "fuzz":
        rng = random.Random(cfg.seed)
        cases, failures = [], 0
        while len(cases) < args.count:
            f0, N = random_suspension(rng)
            try:
                susp = Suspension(f0, N, check_gate=True)
            except ValueError:
                continue
            box = susp.default_box(args.bound)
            order = _suspension_order(susp)
            ok = (susp.zeta(box) == susp.closed_form().expand(box)
                  and order["h_order"] == order["delta_at_one"] == order["group_order"])
            failures += not ok
            cases.append({"f0": f0, "N": N, "passed": ok, **order})
        return {"cases": cases, "failures": failures}, EXIT_FAIL if failures else EXIT_OK
    d = _diagram(args)
    susp = Suspension.from_polynomial(d.f, check_gate=cfg.rhs_gate)
    if args.action == "analyze":
        return {"f0": susp.f0, "N": susp.N, "data": susp.data,
                "formula_alphas": formula_alphas(susp.data),
                "delta": characteristic_polynomial(susp.data)}, EXIT_OK
    if args.action == "order":
        return _suspension_order(susp), EXIT_OK
    box = _box(cfg.box, d.graph.n_nodes) or susp.default_box()
    return {"closed_form": susp.closed_form(), "series": susp.zeta(box)}, EXIT_OK


def cmd_verify(args, cfg):
    d = _diagram(args)
    if args.suite == "intro":
        rep = verify.suite_intro(d, cfg.seed, degree=cfg.degree, cap=cfg.cap, eps=cfg.epsilon)
    elif args.suite == "susp":
        rep = verify.suite_susp(d, cfg.seed, degree=cfg.degree, cap=cfg.cap)
    else:
        rep = verify.suite_series(d, cfg.seed, degree=cfg.degree)
    if rep.counterexamples and args.dump:
        with open(args.dump, "w") as fh:
            json.dump(jsonable(rep.counterexamples), fh, indent=2, sort_keys=True)
    return rep, EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=60, help="truncation degree D")
    common.add_argument("--box", help="series box, comma separated; '*' is unbounded")
    common.add_argument("--cap", type=int, default=200, help="reduction step cap")
    common.add_argument("--epsilon", type=Fraction, default=Fraction(1, 64))
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--no-rhs-gate", action="store_true", help="skip the homology sphere gate")

    p = argparse.ArgumentParser(prog="newton-filt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name, fn, **kw):
        q = sub.add_parser(name, parents=[common], **kw)
        q.set_defaults(fn=fn)
        return q

    verb("analyze", cmd_analyze).add_argument("poly")
    q = verb("cone", cmd_cone)
    q.add_argument("action", choices=("check", "sample"))
    q.add_argument("poly")
    q.add_argument("--k", default="")
    q.add_argument("--count", type=int, default=5)
    for name in ("wt", "div"):
        q = verb(name, cmd_weight)
        q.add_argument("poly")
        q.add_argument("g")
    q = verb("member", cmd_member)
    q.add_argument("poly")
    q.add_argument("g")
    q.add_argument("--k", required=True)
    q.add_argument("--which", choices=("F", "G", "I", "all"), default="all")
    q = verb("lift", cmd_lift)
    q.add_argument("poly")
    q.add_argument("g")
    q.add_argument("--k", required=True)
    q = verb("hilbert", cmd_hilbert)
    q.add_argument("poly")
    q.add_argument("--k", required=True)
    q.add_argument("--which", choices=("I", "Ghat"), default="I")
    q = verb("series", cmd_series)
    q.add_argument("which", choices=("PI", "PGhat", "zeta"))
    q.add_argument("poly")
    q = verb("suspension", cmd_suspension)
    q.add_argument("action", choices=("analyze", "zeta", "order", "fuzz"))
    q.add_argument("poly", nargs="?")
    q.add_argument("--count", type=int, default=20)
    q.add_argument("--bound", type=int, default=45)
    q = verb("verify", cmd_verify)
    q.add_argument("poly")
    q.add_argument("--suite", choices=tuple(verify.SUITES), default="intro")
    q.add_argument("--dump", help="write counterexamples to this file")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = RunConfig(args.degree, args.box, args.cap, args.epsilon, args.seed,
                        not args.no_rhs_gate, args.format)
        if args.verb == "suspension" and args.action != "fuzz" and not args.poly:
            raise UsageError("a polynomial is required")
        if cfg.format == "dot" and args.verb != "analyze":
            raise UsageError("dot output is only available for analyze")
        started = time.perf_counter()
        result, code = args.fn(args, cfg)
        elapsed = time.perf_counter() - started
    except (UsageError, PolynomialSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, ZeroClassError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, str):
        print(result)
        return code
    report = {"schema": SCHEMA, "command": args.verb, "seed": cfg.seed,
              "config": jsonable(cfg), "result": jsonable(result)}
    if args.verb == "verify" or getattr(args, "action", None) == "fuzz":
        # timing would break byte-identical reruns, so it goes to stderr
        print(f"elapsed {elapsed:.2f}s", file=sys.stderr)
    if cfg.format == "text":
        print("\n".join(_text(report)))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
