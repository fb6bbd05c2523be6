"""Parsing and validation of ring presentations F_p[x]/(f) and ideals.

Input grammar (whitespace insignificant, ``#`` comments to end of line)::

    p=<int>; vars=<ident>(,<ident>)*; quotient=[<poly>,...]; ideal=[<poly>,...];

optionally followed by task settings ``emax=<int>; order=<name>;
estimator=<name>;``.  Polynomials use ``+ - * ^``, integer literals and
parentheses.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from .groebner import GroebnerBasis, buchberger, colength, INFINITE, krull_dimension
from .polyfield import (
    DEGREVLEX,
    MonomialOrder,
    ORDER_KINDS,
    Poly,
    PolyRing,
    format_poly,
    is_prime,
    P_MAX,
)


class PresentationError(ValueError):
    """Syntax or semantic error in a presentation, with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class ValidationError(ValueError):
    """The ideal is not supported at the origin with finite colength."""


# ---------------------------------------------------------------- types


@dataclass(frozen=True, eq=False)
class RingPresentation:
    p: int
    vars: tuple[str, ...]
    defining: tuple[Poly, ...]
    order: MonomialOrder = DEGREVLEX

    def __post_init__(self):
        for f in self.defining:
            if f.constant_term():
                raise PresentationError(f"defining polynomial {f} has a nonzero constant term")

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.p, self.vars, self.order)

    @cached_property
    def defining_basis(self) -> GroebnerBasis:
        return buchberger(list(self.defining), ring=self.ring)

    @cached_property
    def dimension(self) -> int:
        return krull_dimension(self.defining_basis)

    @property
    def maximal_ideal(self) -> list[Poly]:
        return self.ring.gens

    @cached_property
    def embedding_dimension(self) -> int:
        """mu(m): number of variables minus the rank of the linear parts."""
        p, n = self.p, len(self.vars)
        rows = []
        for f in self.defining:
            row = [0] * n
            for exps, c in f.terms():
                if sum(exps) == 1:
                    row[exps.index(1)] = c.value
            rows.append(row)
        rank = 0
        for col in range(n):
            piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            inv = pow(rows[rank][col], -1, p)
            rows[rank] = [v * inv % p for v in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [(a - f * b) % p for a, b in zip(rows[r], rows[rank])]
            rank += 1
        return n - rank

    @property
    def is_hypersurface(self) -> bool:
        return len(self.defining) == 1 and self.dimension == len(self.vars) - 1

    def with_order(self, order: MonomialOrder) -> RingPresentation:
        ring = self.ring.with_order(order)
        return RingPresentation(self.p, self.vars, tuple(ring.convert(f) for f in self.defining), order)


@dataclass(frozen=True, eq=False)
class IdealSpec:
    generators: tuple[Poly, ...]
    ambient: RingPresentation

    def __post_init__(self):
        for g in self.generators:
            if g.constant_term():
                raise PresentationError(f"ideal generator {g} has a nonzero constant term")

    @property
    def t(self) -> int:
        """Number of generators (an upper bound for the minimal number)."""
        return len(self.generators)

    def with_defining(self) -> list[Poly]:
        return list(self.generators) + list(self.ambient.defining)


@dataclass(frozen=True, eq=False)
class ParsedProblem:
    ring: RingPresentation
    ideal: IdealSpec
    emax: int | None = None
    estimator: str = "auto"

    @property
    def p(self) -> int:
        return self.ring.p

    @cached_property
    def ideal_is_maximal(self) -> bool:
        """Whether I + defining equals m + defining."""
        r = self.ring
        return buchberger(self.ideal.with_defining(), ring=r.ring) == buchberger(
            r.maximal_ideal + list(r.defining), ring=r.ring
        )


# ---------------------------------------------------------------- lexer

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[=;,\[\]()+\-*^])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks, line, line_start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PresentationError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected: str) -> PresentationError:
        t = self.cur
        got = "end of input" if t.kind == "eof" else repr(t.text)
        return PresentationError(f"expected {expected}, got {got}", t.line, t.col)

    def take(self, kind: str, text: str | None = None, expected: str | None = None) -> _Tok:
        t = self.cur
        if t.kind != kind or (text is not None and t.text != text):
            raise self.error(expected or repr(text or kind))
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.cur.kind == "op" and self.cur.text == text:
            self.i += 1
            return True
        return False

    # -- polynomials
    def poly_list(self, ring: PolyRing) -> list[Poly]:
        self.take("op", "[")
        out = []
        if self.accept("]"):
            return out
        while True:
            out.append(self.expr(ring))
            if self.accept("]"):
                return out
            if not self.accept(","):
                raise self.error("',' or ']'")

    def expr(self, ring: PolyRing) -> Poly:
        if self.accept("-"):
            acc = -self.term(ring)
        else:
            self.accept("+")
            acc = self.term(ring)
        while True:
            if self.accept("+"):
                acc = acc + self.term(ring)
            elif self.accept("-"):
                acc = acc - self.term(ring)
            else:
                return acc

    def term(self, ring: PolyRing) -> Poly:
        acc = self.power(ring)
        while self.accept("*"):
            acc = acc * self.power(ring)
        return acc

    def power(self, ring: PolyRing) -> Poly:
        base = self.atom(ring)
        if self.accept("^"):
            k = int(self.take("int", expected="integer exponent").text)
            base = base**k
        return base

    def atom(self, ring: PolyRing) -> Poly:
        t = self.cur
        if t.kind == "int":
            self.i += 1
            return ring.const(int(t.text))
        if t.kind == "ident":
            if t.text not in ring.names:
                raise PresentationError(f"unknown variable {t.text!r}", t.line, t.col)
            self.i += 1
            return ring.gen(ring.names.index(t.text))
        if self.accept("("):
            inner = self.expr(ring)
            self.take("op", ")")
            return inner
        if self.accept("-"):
            return -self.atom(ring)
        raise self.error("variable, integer or '('")

    def key(self, name: str) -> _Tok:
        t = self.take("ident", name, expected=f"'{name}'")
        self.take("op", "=")
        return t

    def end_statement(self, last: bool = False):
        if not self.accept(";") and not (last and self.cur.kind == "eof"):
            raise self.error("';'")


def parse(text: str) -> ParsedProblem:
    """Parse and validate a presentation (see module docstring for the grammar)."""
    ps = _Parser(text)
    ps.key("p")
    ptok = ps.take("int", expected="prime integer")
    p = int(ptok.text)
    if not is_prime(p) or p > P_MAX:
        raise PresentationError(f"{p} is not prime", ptok.line, ptok.col)
    ps.end_statement()
    ps.key("vars")
    names = [ps.take("ident", expected="variable name").text]
    while ps.accept(","):
        names.append(ps.take("ident", expected="variable name").text)
    if len(set(names)) != len(names):
        raise PresentationError("duplicate variable name", ptok.line, ptok.col)
    ps.end_statement()
    order = DEGREVLEX
    settings: dict[str, str] = {}
    ring = PolyRing(p, names, order)
    ps.key("quotient")
    qtok = ps.cur
    defining = ps.poly_list(ring)
    ps.end_statement()
    ps.key("ideal")
    itok = ps.cur
    ideal = ps.poly_list(ring)
    ps.end_statement(last=True)
    while ps.cur.kind != "eof":
        t = ps.take("ident", expected="setting name")
        ps.take("op", "=")
        v = ps.cur
        if v.kind not in ("int", "ident"):
            raise ps.error("setting value")
        ps.i += 1
        if t.text not in ("emax", "order", "estimator"):
            raise PresentationError(f"unknown setting {t.text!r}", t.line, t.col)
        if t.text == "order" and v.text not in ORDER_KINDS:
            raise PresentationError(f"unknown monomial order {v.text!r}", v.line, v.col)
        if t.text == "emax" and v.kind != "int":
            raise PresentationError("emax must be an integer", v.line, v.col)
        settings[t.text] = v.text
        ps.end_statement(last=True)
    for f in defining:
        if f.constant_term():
            raise PresentationError(f"defining polynomial {f} has a nonzero constant term", qtok.line, qtok.col)
    for g in ideal:
        if g.constant_term():
            raise PresentationError(f"ideal generator {g} has a nonzero constant term", itok.line, itok.col)
    if not ideal:
        raise PresentationError("ideal must have at least one generator", itok.line, itok.col)
    if "order" in settings:
        order = MonomialOrder(settings["order"])
        new = PolyRing(p, names, order)
        defining = [new.convert(f) for f in defining]
        ideal = [new.convert(f) for f in ideal]
    rp = RingPresentation(p, tuple(names), tuple(f for f in defining if f), order)
    return ParsedProblem(
        rp,
        IdealSpec(tuple(ideal), rp),
        emax=int(settings["emax"]) if "emax" in settings else None,
        estimator=settings.get("estimator", "auto"),
    )


def parse_polys(text: str, ring: PolyRing) -> list[Poly]:
    """Parse a comma-separated polynomial list such as ``"x+y, z"``."""
    ps = _Parser("[" + text + "]")
    out = ps.poly_list(ring)
    if ps.cur.kind != "eof":
        raise ps.error("end of input")
    return out


def format_problem(prob: ParsedProblem) -> str:
    """Canonical text form; ``parse(format_problem(x))`` reproduces ``x``."""
    r = prob.ring
    quot = ", ".join(format_poly(f) for f in r.defining)
    ideal = ", ".join(format_poly(f) for f in prob.ideal.generators)
    parts = [f"p={r.p}; vars={','.join(r.vars)}; quotient=[{quot}]; ideal=[{ideal}];"]
    if prob.emax is not None:
        parts.append(f"emax={prob.emax};")
    if r.order != DEGREVLEX:
        parts.append(f"order={r.order.kind};")
    if prob.estimator != "auto":
        parts.append(f"estimator={prob.estimator};")
    return " ".join(parts)


def problem_key(prob: ParsedProblem) -> tuple:
    """Hashable canonical content of a problem (ignores task settings)."""
    return (
        prob.ring.p,
        prob.ring.vars,
        tuple(sorted(format_poly(f) for f in prob.ring.defining)),
        tuple(format_poly(f) for f in prob.ideal.generators),
        prob.ring.order.kind,
    )


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class OriginToken:
    """Certificate that I + defining is supported only at the origin."""

    exponents: tuple[int, ...]
    colength: int


def validate_origin_primary(I: IdealSpec, defining: RingPresentation | None = None) -> OriginToken:
    """Check that F_p[x]/(I + defining) is finite and local at the origin.

    For each variable, find the least N with x_i^N reducing to 0; N never
    exceeds the colength when the support is the origin.
    """
    rp = defining or I.ambient
    G = buchberger(list(I.generators) + list(rp.defining), ring=rp.ring)
    c = colength(G)
    if c == INFINITE:
        raise ValidationError("infinite colength: the ideal is not zero-dimensional")
    exps = []
    for i in range(rp.ring.n):
        x = rp.ring.gen(i)
        cur = G.reduce(x)
        N = 1
        while not cur.is_zero():
            N += 1
            if N > c:
                raise ValidationError(
                    f"support off origin: no power of {rp.vars[i]} lies in the ideal"
                )
            cur = G.reduce(cur * x)
        exps.append(N)
    return OriginToken(tuple(exps), c)
