"""Groebner engine against independent oracles (sympy, naive division, enumeration)."""
import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcalc.groebner import (
    INFINITE,
    GroebnerBasis,
    ResourceExceeded,
    buchberger,
    colength,
    count_standard_monomials,
    ideal_colon_ideal,
    ideal_quotient,
    intersect,
    is_gorenstein_artinian,
    krull_dimension,
    s_polynomial,
    standard_monomials,
)
from hkcalc.polyfield import DEGLEX, DEGREVLEX, LEX, DomainError, PolyRing, compare, random_poly
from hkcalc.presentation import parse_polys

SYMPY_ORDER = {"degrevlex": "grevlex", "deglex": "grlex", "lex": "lex"}


# ---------------------------------------------------------------- oracles


def to_dict(f):
    return {e: c.value for e, c in f.terms()}


def naive_nf(f: dict, basis: list[dict], p: int, order) -> dict:
    """Textbook multivariate division on exponent dictionaries."""

    def lead(g):
        return max(g, key=order.key)

    f = dict(f)
    rem = {}
    while f:
        m = lead(f)
        c = f[m]
        for g in basis:
            lg = lead(g)
            if all(a <= b for a, b in zip(lg, m)):
                shift = tuple(b - a for a, b in zip(lg, m))
                k = c * pow(g[lg], -1, p) % p
                for e, gc in g.items():
                    t = tuple(a + s for a, s in zip(e, shift))
                    v = (f.get(t, 0) - k * gc) % p
                    if v:
                        f[t] = v
                    else:
                        f.pop(t, None)
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def sympy_basis(polys, ring):
    gens = sympy.symbols(ring.names)
    exprs = [sympy.Poly.from_dict({e: c.value for e, c in f.terms()}, *gens).as_expr() for f in polys]
    G = sympy.groebner(exprs, *gens, order=SYMPY_ORDER[ring.order.kind], modulus=ring.p)
    out = set()
    for g in G.exprs:
        d = sympy.Poly(g, *gens, modulus=ring.p).as_dict()
        d = {e: int(c) % ring.p for e, c in d.items() if int(c) % ring.p}
        lead = max(d, key=ring.order.key)
        inv = pow(d[lead], -1, ring.p)
        out.add(frozenset((e, c * inv % ring.p) for e, c in d.items()))
    return out


def ours_as_set(G):
    return {frozenset(to_dict(g).items()) for g in G.generators}


def enumerate_colength(lts, n, limit=10**5):
    """Count standard monomials by scanning a box; only for zero-dimensional ideals."""
    bounds = [None] * n
    for lt in lts:
        nz = [i for i, a in enumerate(lt) if a]
        if len(nz) == 1:
            i = nz[0]
            bounds[i] = lt[i] if bounds[i] is None else min(bounds[i], lt[i])
    assert None not in bounds
    count = 0
    for m in itertools.product(*[range(b) for b in bounds]):
        if not any(all(a <= b for a, b in zip(lt, m)) for lt in lts):
            count += 1
    return count


# ---------------------------------------------------------------- fixtures

R3 = PolyRing(5, ["x", "y", "z"])


def P(text, ring=R3):
    return parse_polys(text, ring)


SYSTEMS = [
    (5, "x*y + z^2, x^5, y^5, z^5"),
    (5, "x*y + z^2, x + y, z"),
    (7, "x^2 + y^3 + z^4, x^7, y^7, z^7"),
    (3, "x^2*y - z, y^2 - x*z, z^2 - x"),
    (2, "x^3 + y^3 + z^3, x^2*y, y*z^2 + x"),
    (11, "x*y - z^2, y*z - x^2, x*z - y^2"),
    (5, "x^4 + y^4 + z^4, x*y*z, x^2 - y^2"),
]


@pytest.mark.parametrize("order", [DEGREVLEX, DEGLEX, LEX], ids=lambda o: o.kind)
@pytest.mark.parametrize("p,text", SYSTEMS)
def test_matches_sympy(p, text, order):
    ring = PolyRing(p, ["x", "y", "z"], order)
    F = P(text, ring)
    G = buchberger(F, ring=ring)
    assert ours_as_set(G) == sympy_basis(F, ring)


@pytest.mark.parametrize("p,text", SYSTEMS)
def test_spair_criterion(p, text):
    """Every S-polynomial of the basis reduces to zero under naive division."""
    ring = PolyRing(p, ["x", "y", "z"])
    G = buchberger(P(text, ring), ring=ring)
    basis = [to_dict(g) for g in G.generators]
    for f, g in itertools.combinations(G.generators, 2):
        s = s_polynomial(f, g)
        assert naive_nf(to_dict(s), basis, p, ring.order) == {}


@pytest.mark.parametrize("p,text", SYSTEMS)
def test_reduced_and_generators_belong(p, text):
    ring = PolyRing(p, ["x", "y", "z"])
    F = P(text, ring)
    G = buchberger(F, ring=ring)
    lts = G.leading_terms
    for i, g in enumerate(G.generators):
        assert g.leading_coefficient == 1
        # no term of g is divisible by another leading term
        for e, _ in g.terms():
            for j, lt in enumerate(lts):
                if j != i:
                    assert not all(a <= b for a, b in zip(lt, e))
    for f in F:
        assert G.contains(f)
        assert G.reduce(f).is_zero()


@settings(max_examples=40)
@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5, 7]))
def test_random_ideals_spair_and_sympy(seed, p):
    ring = PolyRing(p, ["x", "y", "z"])
    rng = random.Random(seed)
    F = [f for f in (random_poly(ring, rng, 3, 3) for _ in range(3)) if not f.is_zero()]
    if not F:
        return
    G = buchberger(F, ring=ring)
    basis = [to_dict(g) for g in G.generators]
    for f, g in itertools.combinations(G.generators, 2):
        assert naive_nf(to_dict(s_polynomial(f, g)), basis, p, ring.order) == {}
    assert ours_as_set(G) == sympy_basis(F, ring)


def test_unit_ideal():
    G = buchberger(P("x + 1, x"), ring=R3)
    assert G.is_unit()
    assert colength(G) == 0
    with pytest.raises(DomainError):
        krull_dimension(G)


def test_deadline():
    import time

    gens = P("x^7 + y^5*z + z^3, y^9 + x*z^4, z^11 + x^2*y")
    with pytest.raises(ResourceExceeded):
        buchberger(gens, ring=R3, deadline=time.monotonic() - 1)


# ---------------------------------------------------------------- colength


@pytest.mark.parametrize("p,text", [s for s in SYSTEMS if colength(buchberger(P(s[1], PolyRing(s[0], ["x", "y", "z"])))) != INFINITE])
def test_colength_vs_enumeration(p, text):
    ring = PolyRing(p, ["x", "y", "z"])
    G = buchberger(P(text, ring), ring=ring)
    c = colength(G)
    assert c <= 5000
    assert c == enumerate_colength(G.leading_terms, 3)
    assert c == len(standard_monomials(G))


@pytest.mark.parametrize("p,text", SYSTEMS)
def test_colength_order_invariant(p, text):
    vals = set()
    for order in (DEGREVLEX, DEGLEX, LEX):
        ring = PolyRing(p, ["x", "y", "z"], order)
        vals.add(colength(buchberger(P(text, ring), ring=ring)))
    assert len(vals) == 1


@settings(max_examples=200)
@given(st.lists(st.tuples(*[st.integers(0, 6)] * 3), min_size=1, max_size=6), st.integers(1, 9))
def test_count_standard_monomials_vs_enumeration(gens, k):
    # adding pure powers makes the ideal zero-dimensional
    gens = list(gens) + [(k, 0, 0), (0, k + 1, 0), (0, 0, k + 2)]
    assert count_standard_monomials(gens, 3) == enumerate_colength(gens, 3)


def test_infinite_colength():
    G = buchberger(P("x*y, z"), ring=R3)
    assert colength(G) == INFINITE


@settings(max_examples=30)
@given(st.integers(0, 2**32))
def test_colength_monotone(seed):
    """Adding generators never increases the colength."""
    rng = random.Random(seed)
    base = P("x^4, y^4, z^4")
    extra = [random_poly(R3, rng, 3, 3) for _ in range(2)]
    extra = [f - f.constant_term() for f in extra]
    c1 = colength(buchberger(base, ring=R3))
    c2 = colength(buchberger(base + extra[:1], ring=R3))
    c3 = colength(buchberger(base + extra, ring=R3))
    assert c1 >= c2 >= c3


def test_colength_example():
    # F_5[x,y,z]/(xy+z^2, x^5, y^5, z^5): oracle is the enumeration over sympy's basis
    ring = R3
    F = P("x*y + z^2, x^5, y^5, z^5")
    lts = [max(dict(f), key=ring.order.key) for f in sympy_basis(F, ring)]
    assert colength(buchberger(F, ring=ring)) == enumerate_colength(lts, 3)


# ---------------------------------------------------------------- dimension


@pytest.mark.parametrize(
    "text,dim",
    [("x", 2), ("x*y + z^2", 2), ("x, y", 1), ("x, y, z", 0), ("x*y, x*z", 2), ("x^2 - y*z, y^3", 1)],
)
def test_krull_dimension(text, dim):
    assert krull_dimension(buchberger(P(text), ring=R3)) == dim


def test_krull_dimension_of_zero_ideal():
    assert krull_dimension(GroebnerBasis(R3, ())) == 3


# ---------------------------------------------------------------- colon ideals


def test_intersection_of_monomial_ideals():
    G = intersect(P("x^2, y"), P("x, y^2"), R3)
    assert ours_as_set(G) == ours_as_set(buchberger(P("x^2, x*y, y^2"), ring=R3))


def test_quotient_by_element():
    I = buchberger(P("x^2*y, x*y^2"), ring=R3)
    Q = ideal_quotient(I, R3.gen(0))
    assert ours_as_set(Q) == ours_as_set(buchberger(P("x*y, y^2"), ring=R3))


def test_quotient_membership_oracle():
    """g in (I : f) iff g f in I, checked on all monomials of small degree."""
    I = buchberger(P("x*y + z^2, x^3, y^3"), ring=R3)
    f = R3.gen(2)
    Q = ideal_quotient(I, f)
    for e in itertools.product(range(4), repeat=3):
        m = R3.monomial(e)
        assert Q.contains(m) == I.contains(m * f)


def test_quotient_zero_divisor_rejected():
    with pytest.raises(DomainError):
        ideal_quotient(buchberger(P("x"), ring=R3), R3.zero)


def test_colon_of_member_is_unit():
    I = buchberger(P("x, y^2"), ring=R3)
    assert ideal_quotient(I, R3.gen(0)).is_unit()


def test_a1_socle():
    # F_5[x,y,z]/(xy+z^2) with J = (x+y, z): lambda(R/(J:m)) = lambda(R/J) - 1 = 1
    G = buchberger(P("x + y, z, x*y + z^2"), ring=R3)
    assert colength(G) == 2
    K = ideal_colon_ideal(G, R3.gens)
    assert colength(K) == 1
    assert is_gorenstein_artinian(G)


def test_not_gorenstein():
    R2 = PolyRing(5, ["x", "y"])
    G = buchberger(P("x^2, x*y, y^2", R2), ring=R2)
    assert colength(G) == 3
    assert colength(ideal_colon_ideal(G, R2.gens)) == 1
    assert not is_gorenstein_artinian(G)


@pytest.mark.parametrize("a,b", [(2, 2), (3, 5), (1, 4)])
def test_complete_intersections_are_gorenstein(a, b):
    R2 = PolyRing(7, ["x", "y"])
    G = buchberger(P(f"x^{a}, y^{b}", R2), ring=R2)
    assert is_gorenstein_artinian(G)


def test_gorenstein_requires_artinian():
    with pytest.raises(DomainError):
        is_gorenstein_artinian(buchberger(P("x"), ring=R3))


def test_order_compare_consistent_with_sorting():
    G = buchberger(P("x*y + z^2, x^5, y^5, z^5"), ring=R3)
    lts = list(G.leading_terms)
    for a, b in zip(lts, lts[1:]):
        assert compare(a, b, R3.order) == -1
