"""Prime-field arithmetic and sparse multivariate polynomials over F_p.

Monomials are packed into single Python integers whose integer order *is* the
monomial order and whose integer sum *is* monomial multiplication (up to a
fixed offset).  Everything above this module (Groebner bases, colengths,
Frobenius powers) relies on that encoding for speed, so the public surface
converts to and from plain exponent tuples at the boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]

P_MAX = 2**31
# per-field width of the packed encoding; exponents must stay well below it
FIELD_BITS = 32
EXP_MAX = 2**24
_COMPLEMENT = 2**31 - 1


class DomainError(ValueError):
    """Arithmetic outside the domain of an operation (0^-1, bad q, ...)."""


class AmbientMismatch(TypeError):
    """Operands live in different polynomial rings."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p) or p > P_MAX:
        raise DomainError(f"{p} is not a prime <= 2^31")
    return p


def prime_power_exponent(q: int, p: int) -> int:
    """Return e with q == p**e, or raise DomainError."""
    if q < 1:
        raise DomainError(f"q={q} is not a power of p={p}")
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    if q != 1:
        raise DomainError(f"q is not a power of p={p}")
    return e


# ---------------------------------------------------------------- field


@dataclass(frozen=True)
class FieldElem:
    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _check(self, other: FieldElem | int) -> int:
        if isinstance(other, int):
            return other % self.p
        if other.p != self.p:
            raise AmbientMismatch(f"F_{self.p} vs F_{other.p}")
        return other.value

    def __add__(self, other):
        return FieldElem((self.value + self._check(other)) % self.p, self.p)

    def __sub__(self, other):
        return FieldElem((self.value - self._check(other)) % self.p, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._check(other) % self.p, self.p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value % self.p, self.p)

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        return FieldElem(pow(self.value, k, self.p), self.p)

    def inv(self) -> FieldElem:
        if self.value == 0:
            raise DomainError("inverse of zero")
        return FieldElem(pow(self.value, -1, self.p), self.p)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        check_prime(self.p)

    def __call__(self, v: int) -> FieldElem:
        return FieldElem(v % self.p, self.p)

    def add(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return a + b

    def sub(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return a - b

    def mul(self, a: FieldElem, b: FieldElem) -> FieldElem:
        return a * b

    def inv(self, a: FieldElem) -> FieldElem:
        return a.inv()


# ---------------------------------------------------------------- orders

ORDER_KINDS = ("degrevlex", "deglex", "lex")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``kind`` plus a variable priority permutation.

    ``priority[0]`` is the index of the largest variable.  ``None`` means the
    natural order x_0 > x_1 > ... .  ``elim`` > 0 prepends a block weight on
    the first ``elim`` variables, giving an elimination order for them.
    """

    kind: str = "degrevlex"
    priority: tuple[int, ...] | None = None
    elim: int = 0

    def __post_init__(self):
        if self.kind not in ORDER_KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def perm(self, n: int) -> tuple[int, ...]:
        if self.priority is None:
            return tuple(range(n))
        if sorted(self.priority) != list(range(n)):
            raise ValueError(f"priority {self.priority} is not a permutation of {n} variables")
        return tuple(self.priority)

    def key(self, u: Sequence[int]) -> tuple:
        """Sort key: larger key means larger monomial."""
        perm = self.perm(len(u))
        head = (sum(u[: self.elim]),) if self.elim else ()
        ordered = [u[i] for i in perm]
        if self.kind == "lex":
            return head + tuple(ordered)
        if self.kind == "deglex":
            return head + (sum(u),) + tuple(ordered)
        return head + (sum(u),) + tuple(-a for a in reversed(ordered))


DEGREVLEX = MonomialOrder("degrevlex")
DEGLEX = MonomialOrder("deglex")
LEX = MonomialOrder("lex")


def compare(u: Sequence[int], v: Sequence[int], order: MonomialOrder = DEGREVLEX) -> int:
    """Three-way comparison of exponent vectors: -1, 0 or 1."""
    if len(u) != len(v):
        raise AmbientMismatch("monomials of different length")
    ku, kv = order.key(u), order.key(v)
    return (ku > kv) - (ku < kv)


class MonomialCodec:
    """Packs exponent vectors into ints that are ordered and added like monomials.

    Field layout, most significant first: optional elimination weight, optional
    total degree, then one field per variable holding either ``a_i`` (lex-like
    orders) or ``C - a_i`` (reverse-lex tail).  Since the code is an affine
    function of the exponents, ``code(u*v) = code(u) + code(v) - code(1)``.
    """

    def __init__(self, n: int, order: MonomialOrder = DEGREVLEX):
        self.n = n
        self.order = order
        perm = order.perm(n)
        B = FIELD_BITS
        # (var index, negated) per low field, least significant first
        if order.kind == "degrevlex":
            var_fields = [(i, True) for i in perm]  # last var most significant
            has_deg = True
        else:
            var_fields = [(i, False) for i in reversed(perm)]
            has_deg = order.kind == "deglex"
        self._var_fields = var_fields
        self._shift = [0] * n
        self._neg = [False] * n
        for k, (i, neg) in enumerate(var_fields):
            self._shift[i] = B * k
            self._neg[i] = neg
        top = B * n
        self._deg_shift = None
        if has_deg:
            self._deg_shift = top
            top += B
        self._elim_shift = top if order.elim else None
        fmask = (1 << B) - 1
        self.varmask = (1 << (B * n)) - 1
        self.flip = sum(_COMPLEMENT << self._shift[i] for i in range(n) if self._neg[i])
        self.guard = sum(1 << (self._shift[i] + B - 1) for i in range(n))
        self._fmask = fmask
        self.one = self.flip  # exponents all zero
        self._var_codes = [self.encode(tuple(int(j == i) for j in range(n))) for i in range(n)]

    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise AmbientMismatch(f"expected {self.n} exponents, got {len(exps)}")
        code = 0
        for i, a in enumerate(exps):
            if a < 0 or a > EXP_MAX:
                raise DomainError(f"exponent {a} outside [0, {EXP_MAX}]")
            code += ((_COMPLEMENT - a) if self._neg[i] else a) << self._shift[i]
        if self._deg_shift is not None:
            code += sum(exps) << self._deg_shift
        if self._elim_shift is not None:
            code += sum(exps[: self.order.elim]) << self._elim_shift
        return code

    def decode(self, code: int) -> Monomial:
        m = self._fmask
        out = []
        for i in range(self.n):
            v = (code >> self._shift[i]) & m
            out.append(_COMPLEMENT - v if self._neg[i] else v)
        return tuple(out)

    def exps_packed(self, code: int) -> int:
        """Exponent-only packing (guard bits clear), used for divisibility."""
        return (code ^ self.flip) & self.varmask

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((self.exps_packed(b) | g) - self.exps_packed(a)) & g == g

    def mul(self, a: int, b: int) -> int:
        return a + b - self.one

    def div(self, a: int, b: int) -> int:
        return a - b + self.one

    def lcm(self, a: int, b: int) -> int:
        return self.encode([max(x, y) for x, y in zip(self.decode(a), self.decode(b))])

    def degree(self, code: int) -> int:
        if self._deg_shift is not None and self._elim_shift is None:
            return code >> self._deg_shift
        return sum(self.decode(code))

    def var(self, i: int) -> int:
        return self._var_codes[i]


# ---------------------------------------------------------------- polynomials


class PolyRing:
    """F_p[x_1..x_n] with a fixed monomial order."""

    def __init__(self, p: int, names: Sequence[str] | int, order: MonomialOrder = DEGREVLEX):
        self.p = check_prime(p)
        if isinstance(names, int):
            names = [f"x{i + 1}" for i in range(names)]
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.n = len(self.names)
        self.order = order
        self.codec = MonomialCodec(self.n, order)
        self.field = PrimeField(p)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and (self.p, self.names, self.order) == (other.p, other.names, other.order)
        )

    def __hash__(self):
        return hash((self.p, self.names, self.order))

    def __repr__(self):
        return f"PolyRing(F_{self.p}[{','.join(self.names)}], {self.order.kind})"

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.p, self.names, order)

    def from_dict(self, terms: Mapping[Sequence[int], int]) -> Poly:
        p = self.p
        enc = self.codec.encode
        out: dict[int, int] = {}
        for exps, c in terms.items():
            c = int(c) % p
            if c:
                k = enc(tuple(exps))
                v = (out.get(k, 0) + c) % p
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Poly(self, out)

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> Poly:
        return self.from_dict({tuple(exps): coeff})

    def const(self, c: int) -> Poly:
        return self.monomial((0,) * self.n, c)

    @property
    def zero(self) -> Poly:
        return Poly(self, {})

    @property
    def one(self) -> Poly:
        return self.const(1)

    def gen(self, i: int) -> Poly:
        return Poly(self, {self.codec.var(i): 1})

    @property
    def gens(self) -> list[Poly]:
        return [self.gen(i) for i in range(self.n)]

    def convert(self, f: Poly) -> Poly:
        """Re-encode ``f`` (same p and variables) under this ring's order."""
        if f.ring == self:
            return f
        if f.ring.p != self.p or f.ring.names != self.names:
            raise AmbientMismatch(f"cannot convert {f.ring} to {self}")
        return self.from_dict(dict(f.terms()))


class Poly:
    """Immutable sparse polynomial; ``_c`` maps packed monomial -> coeff in [1, p)."""

    def __init__(self, ring: PolyRing, coeffs: dict[int, int]):
        self.ring = ring
        self._c = coeffs

    # -- structure
    def _same(self, other: Poly) -> None:
        if not isinstance(other, Poly) or other.ring != self.ring:
            raise AmbientMismatch("polynomials live in different rings")

    @cached_property
    def _sorted(self) -> list[tuple[int, int]]:
        return sorted(self._c.items(), reverse=True)

    def terms(self) -> list[tuple[Monomial, FieldElem]]:
        """Terms in strictly descending monomial order."""
        dec, p = self.ring.codec.decode, self.ring.p
        return [(dec(m), FieldElem(c, p)) for m, c in self._sorted]

    def items(self) -> list[tuple[int, int]]:
        """Packed (monomial, coefficient) pairs, descending."""
        return list(self._sorted)

    def __len__(self):
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    @property
    def leading_monomial(self) -> Monomial:
        if not self._c:
            raise DomainError("zero polynomial has no leading monomial")
        return self.ring.codec.decode(self._sorted[0][0])

    @property
    def leading_coefficient(self) -> int:
        return self._sorted[0][1] if self._c else 0

    def constant_term(self) -> int:
        return self._c.get(self.ring.codec.one, 0)

    def total_degree(self) -> int:
        if not self._c:
            return -1
        deg = self.ring.codec.degree
        return max(deg(m) for m in self._c)

    def lowest_degree(self) -> int:
        deg = self.ring.codec.degree
        return min(deg(m) for m in self._c) if self._c else -1

    def monic(self) -> Poly:
        if not self._c:
            return self
        p = self.ring.p
        inv = pow(self.leading_coefficient, -1, p)
        return Poly(self.ring, {m: c * inv % p for m, c in self._c.items()})

    # -- arithmetic
    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        self._same(other)
        p = self.ring.p
        out = dict(self._c)
        for m, c in other._c.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly(self.ring, {m: p - c for m, c in self._c.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> Poly:
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero
        return Poly(self.ring, {m: v * c % p for m, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElem)):
            return self.scale(int(other))
        self._same(other)
        p = self.ring.p
        one = self.ring.codec.one
        out: dict[int, int] = {}
        for m1, c1 in self._c.items():
            for m2, c2 in other._c.items():
                k = m1 + m2 - one
                out[k] = (out.get(k, 0) + c1 * c2) % p
        return Poly(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_monomial(self, code: int, coeff: int = 1) -> Poly:
        p = self.ring.p
        shift = code - self.ring.codec.one
        return Poly(self.ring, {m + shift: c * coeff % p for m, c in self._c.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return isinstance(other, Poly) and other.ring == self.ring and other._c == self._c

    def __hash__(self):
        return hash((self.ring, frozenset(self._c.items())))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def frobenius_power_poly(f: Poly, q: int) -> Poly:
    """f**q for q a power of p, computed term by term (freshman's dream)."""
    ring = f.ring
    prime_power_exponent(q, ring.p)
    codec, p = ring.codec, ring.p
    out = {}
    for m, c in f._c.items():
        exps = codec.decode(m)
        out[codec.encode([a * q for a in exps])] = pow(c, q, p)
    return Poly(ring, out)


def format_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for a, name in zip(exps, names):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    if not f._c:
        return "0"
    out = []
    for exps, c in f.terms():
        mono = format_monomial(exps, f.ring.names)
        if not mono:
            out.append(str(c.value))
        elif c.value == 1:
            out.append(mono)
        else:
            out.append(f"{c.value}*{mono}")
    return " + ".join(out)


def random_poly(ring: PolyRing, rng, max_deg: int = 4, max_terms: int = 6) -> Poly:
    """Random polynomial for property tests (``rng`` is a random.Random)."""
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        deg = rng.randint(0, max_deg)
        exps = [0] * ring.n
        for _ in range(deg):
            exps[rng.randrange(ring.n)] += 1
        terms[tuple(exps)] = rng.randrange(ring.p)
    return ring.from_dict(terms)


def all_monomials(n: int, max_deg: int) -> Iterable[Monomial]:
    """Every exponent vector of total degree <= max_deg."""
    for deg in range(max_deg + 1):
        # stars and bars
        for bars in combinations(range(deg + n - 1), n - 1):
            prev, exps = -1, []
            for b in bars:
                exps.append(b - prev - 1)
                prev = b
            exps.append(deg + n - 2 - prev)
            yield tuple(exps)
