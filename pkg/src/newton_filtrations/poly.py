"""Exact Laurent polynomials in x, y, z.

Coefficients are exact rationals (``int`` when integral, else
:class:`fractions.Fraction`); exponents are integer triples.
Instances are immutable and hashable.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

Exponent = tuple[int, int, int]
VARS = ("x", "y", "z")


class ZeroPolynomialError(ValueError):
    """Raised when an operation is undefined on the zero polynomial."""


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def _add_exp(u: Exponent, v: Exponent) -> Exponent:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def _sub_exp(u: Exponent, v: Exponent) -> Exponent:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def pair(ell: Iterable[int], u: Iterable) -> int:
    """Standard pairing of a functional with an exponent vector."""
    return sum(a * b for a, b in zip(ell, u))


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for u, c in terms.items():
                c = Fraction(c)
                if c.denominator == 1:
                    c = c.numerator  # integer arithmetic is much faster
                if c:
                    u = tuple(int(e) for e in u)
                    if len(u) != 3:
                        raise ValueError(f"exponent {u} is not a triple")
                    clean[u] = clean.get(u, 0) + c
                    if not clean[u]:
                        del clean[u]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[Exponent, Fraction]) -> "LaurentPoly":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, u: Iterable[int], coeff=1) -> "LaurentPoly":
        return cls({tuple(u): coeff})

    @classmethod
    def constant(cls, c=1) -> "LaurentPoly":
        return cls({(0, 0, 0): c})

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, u: Exponent) -> Fraction:
        return self._terms.get(tuple(u), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({u: -c for u, c in self._terms.items()})

    def __add__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for u, c in other._terms.items():
            s = out.get(u, 0) + c
            if s:
                out[u] = s
            else:
                out.pop(u, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly()
            return LaurentPoly._raw({u: c * other for u, c in self._terms.items()})
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                w = _add_exp(u, v)
                s = out.get(w, 0) + a * b
                if s:
                    out[w] = s
                else:
                    del out[w]
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = LaurentPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, u: Iterable[int]) -> "LaurentPoly":
        """Multiply by the monomial x^u."""
        u = tuple(u)
        return LaurentPoly._raw({_add_exp(v, u): c for v, c in self._terms.items()})

    def is_polynomial(self) -> bool:
        return all(min(u) >= 0 for u in self._terms)

    def min_exponents(self) -> Exponent:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no exponents")
        return tuple(min(u[i] for u in self._terms) for i in range(3))

    def max_exponents(self) -> Exponent:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no exponents")
        return tuple(max(u[i] for u in self._terms) for i in range(3))

    def total_degree(self) -> int:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no degree")
        return max(sum(u) for u in self._terms)

    def truncate(self, degree: int) -> "LaurentPoly":
        """Drop terms of total degree above ``degree``."""
        return LaurentPoly._raw({u: c for u, c in self._terms.items() if sum(u) <= degree})

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_polynomial(self)!r})"


def _coerce(obj) -> LaurentPoly | None:
    if isinstance(obj, LaurentPoly):
        return obj
    if isinstance(obj, (int, Fraction)):
        return LaurentPoly.constant(obj)
    return None


# ---------------------------------------------------------------- printing

def _format_monomial(u: Exponent) -> str:
    parts = []
    for name, e in zip(VARS, u):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(p: LaurentPoly) -> str:
    """Canonical text form; terms in decreasing lexicographic exponent order."""
    if not p:
        return "0"
    out = []
    for u in sorted(p._terms, reverse=True):
        c = p._terms[u]
        mono = _format_monomial(u)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


# ----------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xyz])|(?P<op>[-+*^()])|(?P<bad>\S))"
)


def parse_polynomial(text: str, allow_negative: bool = False) -> LaurentPoly:
    """Parse a sum of monomials in x, y, z.

    Grammar: ``term (('+'|'-') term)*`` where a term is an optional rational
    coefficient followed by factors ``var`` or ``var^int`` joined by optional
    ``*``. Negative exponents (written ``x^-2`` or ``x^(-2)``) are rejected
    unless ``allow_negative`` is set.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group("bad"):
            raise PolynomialSyntaxError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))

    i = 0
    terms: dict[Exponent, Fraction] = {}

    def peek():
        return tokens[i]

    def expect_int() -> int:
        nonlocal i
        sign = 1
        paren = False
        kind, val, p = tokens[i]
        if kind == "op" and val == "(":
            paren = True
            i += 1
            kind, val, p = tokens[i]
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            kind, val, p = tokens[i]
        if kind != "num" or "/" in val:
            raise PolynomialSyntaxError("expected integer exponent", text, p)
        i += 1
        if paren:
            kind, val, p = tokens[i]
            if not (kind == "op" and val == ")"):
                raise PolynomialSyntaxError("expected ')'", text, p)
            i += 1
        return sign * int(val)

    def parse_term(sign: int):
        nonlocal i
        coeff = Fraction(sign)
        exps = [0, 0, 0]
        seen_any = False
        kind, val, p = peek()
        if kind == "num":
            coeff *= Fraction(val)
            i += 1
            seen_any = True
            kind, val, p = peek()
            if kind == "op" and val == "*":
                i += 1
                kind, val, p = peek()
                if kind != "var":
                    raise PolynomialSyntaxError("expected variable after '*'", text, p)
        while kind == "var":
            i += 1
            idx = VARS.index(val)
            kind2, val2, p2 = peek()
            e = 1
            if kind2 == "op" and val2 == "^":
                i += 1
                e = expect_int()
                if e < 0 and not allow_negative:
                    raise PolynomialSyntaxError("negative exponent not allowed", text, p2)
            exps[idx] += e
            seen_any = True
            kind, val, p = peek()
            if kind == "op" and val == "*":
                i += 1
                kind, val, p = peek()
                if kind != "var":
                    raise PolynomialSyntaxError("expected variable after '*'", text, p)
        if not seen_any:
            raise PolynomialSyntaxError("expected term", text, p)
        u = tuple(exps)
        s = terms.get(u, 0) + coeff
        if s:
            terms[u] = s
        else:
            terms.pop(u, None)

    kind, val, p = peek()
    sign = 1
    if kind == "op" and val in "+-":
        sign = -1 if val == "-" else 1
        i += 1
    parse_term(sign)
    while True:
        kind, val, p = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            i += 1
            parse_term(-1 if val == "-" else 1)
        else:
            raise PolynomialSyntaxError("expected '+' or '-'", text, p)
    return LaurentPoly._raw(terms)


# ------------------------------------------------------- weight functionals

def support(p: LaurentPoly) -> frozenset[Exponent]:
    return frozenset(p._terms)


def weight(p: LaurentPoly, ell: Iterable[int]) -> int:
    """Minimum of the functional ``ell`` over the support of ``p``."""
    if not p:
        raise ZeroPolynomialError("weight of the zero polynomial is undefined")
    ell = tuple(ell)
    return min(pair(ell, u) for u in p._terms)


def principal_part(p: LaurentPoly, ell: Iterable[int]) -> LaurentPoly:
    """Sum of the terms of ``p`` on which ``ell`` attains its minimum."""
    ell = tuple(ell)
    w = weight(p, ell)
    return LaurentPoly._raw({u: c for u, c in p._terms.items() if pair(ell, u) == w})


def primitive(v: Iterable[int]) -> tuple[int, ...]:
    v = tuple(int(a) for a in v)
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(a // g for a in v)


# ---------------------------------------------------------------- division

def _grlex_key(u: Exponent):
    return (sum(u), u)


def _poly_divide_exact(g: dict, f: dict) -> dict | None:
    """Exact division of polynomials g / f (both with nonnegative exponents).

    Uses the division algorithm for a single divisor in graded-lex order,
    for which a nonzero remainder certifies non-divisibility.
    """
    lf = max(f, key=_grlex_key)
    lc = f[lf]
    r = dict(g)
    q: dict[Exponent, Fraction] = {}
    while r:
        lr = max(r, key=_grlex_key)
        t = _sub_exp(lr, lf)
        if min(t) < 0:
            return None
        c = Fraction(r[lr]) / lc
        q[t] = c
        for v, b in f.items():
            w = _add_exp(v, t)
            s = r.get(w, 0) - c * b
            if s:
                r[w] = s
            else:
                r.pop(w, None)
    return q


def laurent_divide(g: LaurentPoly, f: LaurentPoly) -> LaurentPoly | None:
    """Return ``h`` with ``h * f == g`` in the Laurent ring, or None."""
    if not f:
        raise ZeroPolynomialError("division by the zero polynomial")
    if not g:
        return LaurentPoly()
    gmin, fmin = g.min_exponents(), f.min_exponents()
    gmax, fmax = g.max_exponents(), f.max_exponents()
    # Newton polytopes add under multiplication, so coordinate spans must fit
    if any(gmax[i] - gmin[i] < fmax[i] - fmin[i] for i in range(3)):
        return None
    if len(f) == 1:
        (u, c), = f._terms.items()
        return LaurentPoly._raw({_sub_exp(v, u): Fraction(a) / c for v, a in g._terms.items()})
    g0 = {_sub_exp(u, gmin): c for u, c in g._terms.items()}
    f0 = {_sub_exp(u, fmin): c for u, c in f._terms.items()}
    q = _poly_divide_exact(g0, f0)
    if q is None:
        return None
    offset = _sub_exp(gmin, fmin)
    return LaurentPoly._raw({_add_exp(u, offset): c for u, c in q.items()})
