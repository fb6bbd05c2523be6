"""Frobenius bracket powers and sampling of Hilbert–Kunz and splitting data.

The Hilbert–Kunz function of an origin-primary ideal I in R = F_p[x]/(f) is
``e -> dim F_p[x]/(I^[p^e] + (f))``.  Each sample is an independent Groebner
basis computation followed by a staircase count.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .cache import sample_key
from .groebner import (
    INFINITE,
    ResourceExceeded,
    buchberger,
    colength,
    ideal_colon_ideal,
    is_gorenstein_artinian,
)
from .polyfield import DomainError, frobenius_power_poly, prime_power_exponent
from .presentation import (
    IdealSpec,
    ParsedProblem,
    ValidationError,
    format_problem,
    parse,
    problem_key,
    validate_origin_primary,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_COLENGTH = 10**7
DEFAULT_TIMEOUT = 600.0


class PreconditionError(ValueError):
    """A system of parameters or Gorenstein check failed."""


@dataclass(frozen=True)
class HKSample:
    e: int
    q: int
    colength: int
    seconds: float = field(default=0.0, compare=False)
    cached: bool = field(default=False, compare=False)


@dataclass(frozen=True, eq=False)
class HKSeries:
    problem: ParsedProblem
    samples: tuple[HKSample, ...]
    d: int

    @property
    def colengths(self) -> list[int]:
        return [s.colength for s in self.samples]


@dataclass(frozen=True)
class SplittingSample:
    e: int
    q: int
    a_q: int
    colength_J: int = 0
    colength_colon: int = 0


@dataclass
class SeriesConfig:
    """Resource limits and execution knobs for sampling."""

    max_colength: int = DEFAULT_MAX_COLENGTH
    timeout: float = DEFAULT_TIMEOUT  # seconds per sample
    workers: int = 1


def default_emax(d: int) -> int:
    return {0: 9, 1: 9, 2: 5, 3: 3}.get(d, 2)


def bracket_power(I: IdealSpec, q: int) -> IdealSpec:
    prime_power_exponent(q, I.ambient.p)
    return IdealSpec(tuple(frobenius_power_poly(g, q) for g in I.generators), I.ambient)


def bracket_colength(
    I: IdealSpec,
    q: int,
    *,
    max_colength: int = DEFAULT_MAX_COLENGTH,
    timeout: float | None = DEFAULT_TIMEOUT,
    d: int | None = None,
) -> int:
    """Exact λ(R/(I^[q] + defining)), subject to resource caps.

    ``d`` enables a cheap pre-check: for I inside m the answer is at least q^d.
    """
    if d is not None and q**d > max_colength:
        raise ResourceExceeded(f"colength at q={q} is at least {q**d} > cap {max_colength}")
    deadline = None if timeout is None else time.monotonic() + timeout
    Iq = bracket_power(I, q)
    G = buchberger(Iq.with_defining(), ring=I.ambient.ring, deadline=deadline)
    c = colength(G)
    if c == INFINITE:
        raise ValidationError(f"infinite colength at q={q}")
    if c > max_colength:
        raise ResourceExceeded(f"colength {c} at q={q} exceeds cap {max_colength}")
    return int(c)


def _sample_worker(args: tuple) -> tuple[int, int, float]:
    text, e, max_colength, timeout = args
    prob = parse(text)
    q = prob.p**e
    t0 = time.perf_counter()
    c = bracket_colength(prob.ideal, q, max_colength=max_colength, timeout=timeout, d=prob.ring.dimension)
    return e, c, time.perf_counter() - t0


def hk_series(
    prob: ParsedProblem,
    e_max: int | None = None,
    config: SeriesConfig | None = None,
    cache=None,
    e_min: int = 0,
) -> HKSeries:
    """Sample λ(R/I^[p^e]) for e = e_min..e_max.

    ``cache`` is any object with ``get(key)`` and ``put(key, colength)``.
    """
    config = config or SeriesConfig()
    validate_origin_primary(prob.ideal)
    d = prob.ring.dimension
    if e_max is None and prob.emax is not None:
        e_max = prob.emax
    if e_max is None:
        # the default is clipped so that the q^d lower bound stays under the cap
        e_max = default_emax(d)
        while e_max > e_min and (prob.p**e_max) ** d > config.max_colength:
            e_max -= 1
    if e_max < e_min:
        raise ValueError("e_max must be at least e_min")
    pk = problem_key(prob)
    # refuse up front rather than after hours of work
    for e in range(e_min, e_max + 1):
        if (prob.p**e) ** d > config.max_colength:
            raise ResourceExceeded(
                f"e={e}: colength at least {(prob.p ** e) ** d} exceeds cap {config.max_colength}"
            )
    results: dict[int, HKSample] = {}
    todo = []
    for e in range(e_min, e_max + 1):
        hit = cache.get(sample_key(pk, e)) if cache is not None else None
        if hit is not None:
            results[e] = HKSample(e, prob.p**e, hit, 0.0, True)
        else:
            todo.append(e)
    if config.workers > 1 and len(todo) > 1:
        text = format_problem(prob)
        jobs = [(text, e, config.max_colength, config.timeout) for e in todo]
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(_sample_worker, j) for j in jobs]
            try:
                for fut in futures:
                    e, c, secs = fut.result()
                    results[e] = HKSample(e, prob.p**e, c, secs)
            except BaseException:
                for fut in futures:
                    fut.cancel()
                raise
    else:
        for e in todo:
            q = prob.p**e
            t0 = time.perf_counter()
            c = bracket_colength(
                prob.ideal, q, max_colength=config.max_colength, timeout=config.timeout, d=d
            )
            results[e] = HKSample(e, q, c, time.perf_counter() - t0)
            log.info("e=%d q=%d colength=%d (%.2fs)", e, q, c, results[e].seconds)
    if cache is not None:
        for e in todo:
            cache.put(sample_key(pk, e), results[e].colength)
    return HKSeries(prob, tuple(results[e] for e in sorted(results)), d)


def ideal_power_bases(prob: ParsedProblem, n_max: int, deadline: float | None = None):
    """Yield (n, Groebner basis of I^n + defining) for n = 1..n_max."""
    ring = prob.ring.ring
    defining = list(prob.ring.defining)
    gens = list(prob.ideal.generators)
    G = buchberger(gens + defining, ring=ring, deadline=deadline)
    yield 1, G
    D = prob.ring.defining_basis
    cur = [g for g in gens]
    for n in range(2, n_max + 1):
        # products of the current generators with I, reduced modulo the defining ideal
        prods = {D.reduce(a * b) for a in cur for b in gens}
        cur = [f for f in prods if not f.is_zero()]
        G = buchberger(cur + defining, ring=ring, deadline=deadline)
        cur = [g for g in G.generators if not D.contains(g)] or cur
        yield n, G


def ordinary_power_series(prob: ParsedProblem, n_max: int, timeout: float | None = None) -> list[tuple[int, int]]:
    """Exact colengths λ(R/I^n) for n = 1..n_max."""
    validate_origin_primary(prob.ideal)
    deadline = None if timeout is None else time.monotonic() + timeout
    out = []
    for n, G in ideal_power_bases(prob, n_max, deadline):
        c = colength(G)
        if c == INFINITE:
            raise ValidationError(f"infinite colength for I^{n}")
        out.append((n, int(c)))
    return out


def monomial_power_generators(gens, n: int):
    """All degree-n products of ``gens`` (the naive generating set of I^n)."""
    out = []
    for combo in combinations_with_replacement(range(len(gens)), n):
        f = gens[combo[0]]
        for i in combo[1:]:
            f = f * gens[i]
        out.append(f)
    return out


@dataclass(frozen=True, eq=False)
class GorensteinData:
    """Verified system of parameters J with its socle-extended colon (J : m)."""

    J: IdealSpec
    colon: IdealSpec | None  # None when (J : m) is the unit ideal, i.e. J = m


def check_sop(prob: ParsedProblem, J: IdealSpec, timeout: float | None = None) -> GorensteinData:
    """Verify J is a system of parameters with Gorenstein artinian reduction."""
    d = prob.ring.dimension
    if len(J.generators) != d:
        raise PreconditionError(
            f"not a system of parameters: {len(J.generators)} generators but dim R = {d}"
        )
    try:
        validate_origin_primary(J)
    except ValidationError as exc:
        raise PreconditionError(f"not a system of parameters: {exc}") from exc
    deadline = None if timeout is None else time.monotonic() + timeout
    ring = prob.ring.ring
    G = buchberger(J.with_defining(), ring=ring, deadline=deadline)
    if not is_gorenstein_artinian(G):
        raise PreconditionError("artinian reduction R/J is not Gorenstein (socle dimension != 1)")
    K = ideal_colon_ideal(G, ring.gens, deadline)
    return GorensteinData(J, None if K.is_unit() else IdealSpec(tuple(K.generators), prob.ring))


def splitting_number_gorenstein(
    prob: ParsedProblem,
    J: IdealSpec,
    e: int,
    *,
    data: GorensteinData | None = None,
    config: SeriesConfig | None = None,
) -> SplittingSample:
    """a_q = λ(R/J^[q]) - λ(R/(J:m)^[q]) for a Gorenstein ring R."""
    config = config or SeriesConfig()
    data = data or check_sop(prob, J, config.timeout)
    q = prob.p**e
    d = prob.ring.dimension
    cJ = bracket_colength(J, q, max_colength=config.max_colength, timeout=config.timeout, d=d)
    cK = 0
    if data.colon is not None:
        cK = bracket_colength(data.colon, q, max_colength=config.max_colength, timeout=config.timeout)
    a = cJ - cK
    if not 0 <= a <= q**d:
        raise DomainError(f"a_q={a} outside [0, q^d]; is R Gorenstein?")
    return SplittingSample(e, q, a, cJ, cK)


def splitting_series(
    prob: ParsedProblem, J: IdealSpec, e_max: int, config: SeriesConfig | None = None, e_min: int = 0
) -> list[SplittingSample]:
    config = config or SeriesConfig()
    data = check_sop(prob, J, config.timeout)
    return [
        splitting_number_gorenstein(prob, J, e, data=data, config=config) for e in range(e_min, e_max + 1)
    ]
