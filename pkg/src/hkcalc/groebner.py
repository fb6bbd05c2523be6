"""Buchberger's algorithm over F_p, normal forms, colon ideals, colengths.

The engine works on packed monomial codes (see ``polyfield.MonomialCodec``).
Pairs are selected by the normal strategy (smallest total degree of the lcm,
ties broken by pair indices) and pruned with the Gebauer-Moeller criteria, so
the resulting reduced basis is identical across runs.
"""
from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .polyfield import (
    AmbientMismatch,
    DomainError,
    Monomial,
    MonomialOrder,
    Poly,
    PolyRing,
)

INFINITE = math.inf


class ResourceExceeded(RuntimeError):
    """A computation crossed its deadline."""


class _Reducer:
    """Growing list of monic reducers with a divisor-lookup memo."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.codec = ring.codec
        self.p = ring.p
        self.lms: list[int] = []
        self.lmA: list[int] = []
        self.tails: list[list[tuple[int, int]]] = []
        self.memo: dict[int, int] = {}
        self.memo_neg: dict[int, int] = {}

    def add(self, lm: int, tail: list[tuple[int, int]]) -> int:
        self.lms.append(lm)
        self.lmA.append(self.codec.exps_packed(lm))
        self.tails.append(tail)
        return len(self.lms) - 1

    def find(self, m: int) -> int:
        hit = self.memo.get(m)
        if hit is not None:
            return hit
        start = self.memo_neg.get(m, 0)
        lmA = self.lmA
        n = len(lmA)
        if start == n:
            return -1
        g = self.codec.guard
        a = self.codec.exps_packed(m) | g
        for i in range(start, n):
            if (a - lmA[i]) & g == g:
                self.memo[m] = i
                self.memo_neg.pop(m, None)
                return i
        if len(self.memo_neg) > 4_000_000:
            self.memo_neg.clear()
        self.memo_neg[m] = n
        return -1

    def nf(self, work: dict[int, int], full: bool = True) -> list[tuple[int, int]]:
        """Reduce ``work`` (consumed) and return the remainder, descending."""
        p = self.p
        heap = [-m for m in work]
        heapq.heapify(heap)
        pop, push = heapq.heappop, heapq.heappush
        lms, tails, find = self.lms, self.tails, self.find
        out: list[tuple[int, int]] = []
        while heap:
            m = -pop(heap)
            c = work.pop(m, 0)
            if not c:
                continue
            r = find(m)
            if r < 0:
                out.append((m, c))
                if not full:
                    rest = sorted(work.items(), reverse=True)
                    out.extend((k, v) for k, v in rest if v)
                    return out
                continue
            delta = m - lms[r]
            get = work.get
            for t, a in tails[r]:
                mm = t + delta
                v = get(mm)
                if v is None:
                    work[mm] = (-c * a) % p
                    push(heap, -mm)
                else:
                    v = (v - c * a) % p
                    if v:
                        work[mm] = v
                    else:
                        del work[mm]
        return out


def _monic_terms(terms: list[tuple[int, int]], p: int) -> tuple[int, list[tuple[int, int]]]:
    lm, lc = terms[0]
    if lc == 1:
        return lm, terms[1:]
    inv = pow(lc, -1, p)
    return lm, [(m, c * inv % p) for m, c in terms[1:]]


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """Reduced Groebner basis; generators are monic and sorted by leading monomial."""

    ring: PolyRing
    generators: tuple[Poly, ...]

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    @cached_property
    def leading_terms(self) -> tuple[Monomial, ...]:
        return tuple(g.leading_monomial for g in self.generators)

    def is_unit(self) -> bool:
        return any(all(a == 0 for a in lt) for lt in self.leading_terms)

    def is_zero(self) -> bool:
        return not self.generators

    @cached_property
    def _reducer(self) -> _Reducer:
        red = _Reducer(self.ring)
        for g in self.generators:
            items = g.items()
            red.add(items[0][0], items[1:])
        return red

    def reduce(self, f: Poly) -> Poly:
        if f.ring != self.ring:
            f = self.ring.convert(f)
        out = self._reducer.nf(dict(f._c))
        return Poly(self.ring, dict(out))

    def contains(self, f: Poly) -> bool:
        return self.reduce(f).is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and other.ring == self.ring
            and other.generators == self.generators
        )

    def __hash__(self):
        return hash((self.ring, self.generators))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def buchberger(
    gens: Sequence[Poly],
    ring: PolyRing | None = None,
    order: MonomialOrder | None = None,
    deadline: float | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``deadline`` is a ``time.monotonic()`` value; crossing it raises
    ResourceExceeded.
    """
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring.p != ring.p or g.ring.names != ring.names:
            raise AmbientMismatch("generators from different rings")
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
    gens = [ring.convert(g) for g in gens if not g.is_zero()]
    return _Buchberger(ring, deadline).run(gens)


class _Buchberger:
    def __init__(self, ring: PolyRing, deadline: float | None):
        self.ring = ring
        self.codec = ring.codec
        self.p = ring.p
        self.red = _Reducer(ring)
        self.deadline = deadline
        self.active: list[int] = []
        self.pairs: dict[tuple[int, int], int] = {}
        self.heap: list[tuple[int, int, int]] = []
        self.unit = False

    def _tick(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceExceeded("Groebner basis computation exceeded its time limit")

    def run(self, gens: list[Poly]) -> GroebnerBasis:
        ring = self.ring
        # small leading monomials first: they prune the most
        for g in sorted(gens, key=lambda f: (f.total_degree(), f.items()[0][0], len(f))):
            self._tick()
            h = self.red.nf(dict(g._c))
            if h and self._insert(h):
                break
        while self.pairs and not self.unit:
            self._tick()
            _, i, j = heapq.heappop(self.heap)
            lcm = self.pairs.pop((i, j), None)
            if lcm is None:
                continue
            h = self.red.nf(self._spoly(i, j, lcm))
            if h and self._insert(h):
                break
        if self.unit:
            return GroebnerBasis(ring, (ring.one,))
        return self._reduced()

    def _spoly(self, i: int, j: int, lcm: int) -> dict[int, int]:
        red, p = self.red, self.p
        di = lcm - red.lms[i]
        dj = lcm - red.lms[j]
        work = {m + di: c for m, c in red.tails[i]}
        get = work.get
        for m, c in red.tails[j]:
            k = m + dj
            v = (get(k, 0) - c) % p
            if v:
                work[k] = v
            else:
                work.pop(k, None)
        return work

    def _insert(self, terms: list[tuple[int, int]]) -> bool:
        """Add a reduced nonzero polynomial; True if the ideal became the unit ideal."""
        lm, tail = _monic_terms(terms, self.p)
        codec = self.codec
        if lm == codec.one:
            self.unit = True
            return True
        h = self.red.add(lm, tail)
        self._update(h)
        return False

    def _update(self, h: int) -> None:
        codec = self.codec
        lms = self.red.lms
        one, guard = codec.one, codec.guard
        A = codec.exps_packed
        lm_h = lms[h]

        def divides(a: int, b: int) -> bool:
            return ((A(b) | guard) - A(a)) & guard == guard

        cand = []
        for g in self.active:
            lcm = codec.lcm(lms[g], lm_h)
            coprime = lcm == lms[g] + lm_h - one
            cand.append((g, lcm, coprime))
        # Gebauer-Moeller: drop new pairs whose lcm is a multiple of another's
        kept = []
        rest = list(cand)
        while rest:
            g, lcm, coprime = rest.pop(0)
            if coprime or not (
                any(divides(l2, lcm) for _, l2, _ in rest) or any(divides(l2, lcm) for _, l2, _ in kept)
            ):
                kept.append((g, lcm, coprime))
        # old pairs made redundant by h
        lmA_h = A(lm_h)
        for (i, j), lcm in list(self.pairs.items()):
            if ((A(lcm) | guard) - lmA_h) & guard == guard:
                if lcm != codec.lcm(lms[i], lm_h) and lcm != codec.lcm(lms[j], lm_h):
                    del self.pairs[(i, j)]
        for g, lcm, coprime in kept:
            if coprime:
                continue
            key = (g, h)
            self.pairs[key] = lcm
            heapq.heappush(self.heap, (codec.degree(lcm), g, h))
        self.active = [g for g in self.active if not divides(lm_h, lms[g])] + [h]

    def _reduced(self) -> GroebnerBasis:
        red = self.red
        ring = self.ring
        active = sorted(self.active, key=lambda i: red.lms[i])
        final = _Reducer(ring)
        for i in active:
            final.add(red.lms[i], red.tails[i])
        gens = []
        for k, i in enumerate(active):
            tail = final.nf(dict(red.tails[i]))
            final.tails[k] = tail
            coeffs = dict(tail)
            coeffs[red.lms[i]] = 1
            gens.append(Poly(ring, coeffs))
        return GroebnerBasis(ring, tuple(gens))


def normal_form(f: Poly, G: GroebnerBasis) -> Poly:
    """Fully reduced remainder of ``f`` modulo ``G``."""
    return G.reduce(f)


def s_polynomial(f: Poly, g: Poly) -> Poly:
    codec = f.ring.codec
    fi, gi = f.items(), g.items()
    lcm = codec.lcm(fi[0][0], gi[0][0])
    a = f.mul_monomial(lcm - fi[0][0] + codec.one, pow(fi[0][1], -1, f.ring.p))
    b = g.mul_monomial(lcm - gi[0][0] + codec.one, pow(gi[0][1], -1, g.ring.p))
    return a - b


# ---------------------------------------------------------------- counting


def minimalize(monos: Sequence[Monomial]) -> list[Monomial]:
    """Minimal generators (divisibility antichain) of a monomial ideal."""
    out: list[Monomial] = []
    for m in sorted(set(monos), key=sum):
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return out


def count_standard_monomials(gens: Sequence[Monomial], n: int) -> int | float:
    """Number of monomials in n variables outside the ideal generated by ``gens``.

    Recursive splitting on the last variable: between consecutive exponents of
    that variable appearing in ``gens`` the slice ideal is constant, so each
    slab contributes (width) x (count of a smaller problem).  Returns INFINITE
    when some variable has no pure power.
    """
    memo: dict[tuple, int | float] = {}

    def rec(gs: tuple[Monomial, ...], k: int) -> int | float:
        if any(not any(g) for g in gs):
            return 0
        if k == 0:
            return 1
        key = (gs, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        pure = [g[k - 1] for g in gs if not any(g[: k - 1])]
        if not pure:
            memo[key] = INFINITE
            return INFINITE
        top = min(pure)
        levels = sorted({0} | {g[k - 1] for g in gs if g[k - 1] < top})
        total: int | float = 0
        for idx, lo in enumerate(levels):
            hi = levels[idx + 1] if idx + 1 < len(levels) else top
            sub = tuple(sorted(minimalize([g[: k - 1] for g in gs if g[k - 1] <= lo and any(g[: k - 1])])))
            c = rec(sub, k - 1)
            total += (hi - lo) * c
            if total == INFINITE:
                break
        memo[key] = total
        return total

    gens = tuple(sorted(minimalize([tuple(g) for g in gens])))
    return rec(gens, n)


def colength(G: GroebnerBasis) -> int | float:
    """dim_{F_p} of F_p[x]/ideal(G), or INFINITE."""
    if G.is_unit():
        return 0
    return count_standard_monomials(G.leading_terms, G.ring.n)


def standard_monomials(G: GroebnerBasis, limit: int = 10**6) -> list[Monomial]:
    """Explicit list of standard monomials (for small zero-dimensional quotients)."""
    c = colength(G)
    if c == INFINITE or c > limit:
        raise DomainError("quotient too large to enumerate")
    lts = G.leading_terms
    n = G.ring.n
    bounds = [0] * n
    for lt in lts:
        nz = [i for i, a in enumerate(lt) if a]
        if len(nz) == 1:
            i = nz[0]
            bounds[i] = lt[i] if bounds[i] == 0 else min(bounds[i], lt[i])
    out = []

    def walk(prefix: list[int], i: int):
        if i == n:
            out.append(tuple(prefix))
            return
        for a in range(bounds[i]):
            cand = prefix + [a]
            if any(all(x <= y for x, y in zip(lt[: i + 1], cand)) and not any(lt[i + 1 :]) for lt in lts):
                break
            walk(cand, i + 1)

    walk([], 0)
    return [m for m in out if not any(all(a <= b for a, b in zip(lt, m)) for lt in lts)]


# ---------------------------------------------------------------- dimension


def krull_dimension(G: GroebnerBasis) -> int:
    """Dimension of F_p[x]/ideal(G) via maximal independent sets of the staircase."""
    if G.is_unit():
        raise DomainError("unit ideal has no dimension")
    n = G.ring.n
    supports = [frozenset(i for i, a in enumerate(lt) if a) for lt in G.leading_terms]
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


# ---------------------------------------------------------------- colon ideals


def _extended_ring(ring: PolyRing) -> PolyRing:
    """ring with a new first variable t and an order eliminating it."""
    perm = ring.order.perm(ring.n)
    order = MonomialOrder(ring.order.kind, (0,) + tuple(i + 1 for i in perm), elim=1)
    name = "_t"
    while name in ring.names:
        name += "_"
    return PolyRing(ring.p, (name,) + ring.names, order)


def _lift(f: Poly, ext: PolyRing) -> Poly:
    return ext.from_dict({(0,) + e: c.value for e, c in f.terms()})


def _drop(f: Poly, ring: PolyRing) -> Poly:
    return ring.from_dict({e[1:]: c.value for e, c in f.terms()})


def intersect(A: Sequence[Poly], B: Sequence[Poly], ring: PolyRing, deadline: float | None = None) -> GroebnerBasis:
    """Groebner basis of ideal(A) intersect ideal(B) by eliminating t from tA + (1-t)B."""
    ext = _extended_ring(ring)
    t = ext.gen(0)
    gens = [t * _lift(a, ext) for a in A] + [(ext.one - t) * _lift(b, ext) for b in B]
    G = buchberger(gens, ring=ext, deadline=deadline)
    kept = [_drop(g, ring) for g in G.generators if g.leading_monomial[0] == 0]
    return buchberger(kept, ring=ring, deadline=deadline)


def exact_divide(h: Poly, f: Poly) -> Poly:
    """h / f, assuming f divides h exactly."""
    ring = h.ring
    codec, p = ring.codec, ring.p
    flm, flc = f.items()[0]
    inv = pow(flc, -1, p)
    quot: dict[int, int] = {}
    rem = h
    while rem:
        m, c = rem.items()[0]
        if not codec.divides(flm, m):
            raise DomainError("division is not exact")
        qm = codec.div(m, flm)
        qc = c * inv % p
        quot[qm] = qc
        rem = rem - f.mul_monomial(qm, qc)
    return Poly(ring, quot)


def ideal_quotient(I: GroebnerBasis, f: Poly, deadline: float | None = None) -> GroebnerBasis:
    """Groebner basis of (I : f) = {g : g f in I}."""
    ring = I.ring
    f = ring.convert(f)
    if f.is_zero():
        raise DomainError("colon by the zero polynomial")
    if I.contains(f):
        return GroebnerBasis(ring, (ring.one,))
    if I.is_zero():
        return I
    cap = intersect(I.generators, [f], ring, deadline)
    return buchberger([exact_divide(g, f) for g in cap.generators], ring=ring, deadline=deadline)


def ideal_colon_ideal(I: GroebnerBasis, J: Sequence[Poly], deadline: float | None = None) -> GroebnerBasis:
    """Groebner basis of (I : J) = intersection of the (I : J_i)."""
    if not J:
        raise ValueError("colon by an empty generating set")
    ring = I.ring
    result: GroebnerBasis | None = None
    for g in J:
        if g.is_zero():
            continue
        Q = ideal_quotient(I, g, deadline)
        if Q.is_unit():
            continue
        if result is None:
            result = Q
        else:
            result = intersect(result.generators, Q.generators, ring, deadline)
    return result if result is not None else GroebnerBasis(ring, (ring.one,))


def is_gorenstein_artinian(J_plus_defining: GroebnerBasis, m: Sequence[Poly] | None = None) -> bool:
    """True iff the artinian quotient has a one-dimensional socle."""
    G = J_plus_defining
    if m is None:
        m = G.ring.gens
    c = colength(G)
    if c == INFINITE:
        raise DomainError("quotient is not artinian (infinite colength)")
    if c == 0:
        return False
    return c - colength(ideal_colon_ideal(G, m)) == 1
