import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hkcalc.bounds import (
    RingTraits,
    aberbach_enescu_bound,
    beta_hypersurface,
    blickle_enescu_bound,
    closed_form_bounds,
    compare_bounds,
    hanes_bound,
    hanes_factor,
    hypersurface_bound,
    lookup,
    non_f_rational_bound,
    reference_values,
    sectan_coefficient,
    uniform_bound,
    veronese_ehk,
    volume_vs,
    volume_vs_complement,
    wy_dim2_bound,
    wy_volume_bound,
    wy_volume_expr,
    zigzag_numbers,
)

# ---------------------------------------------------------------- volumes


def test_monte_carlo_v_three_halves():
    rng = np.random.default_rng(12345)
    n = 10**7
    hits = 0
    for _ in range(10):
        pts = rng.random((n // 10, 2))
        hits += int(np.count_nonzero(pts.sum(axis=1) <= 1.5))
    assert abs(hits / n - 7 / 8) < 3e-4
    assert volume_vs(2, Fraction(3, 2)) == Fraction(7, 8)


def _sympy_volume(d: int, s: Fraction):
    """v_s by iterated integration: v_d(s) = ∫_0^1 v_{d-1}(s - t) dt."""
    x, t = sympy.symbols("x t", real=True)
    f = sympy.Piecewise((0, x < 0), (1, True))
    for _ in range(d):
        g = sympy.integrate(f.subs(x, x - t), (t, 0, 1))
        f = sympy.piecewise_fold(g)
    return sympy.nsimplify(f.subs(x, sympy.Rational(s.numerator, s.denominator)))


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("s", [Fraction(1, 3), Fraction(1), Fraction(3, 2), Fraction(5, 2)])
def test_volume_vs_sympy_integration(d, s):
    assert sympy.Rational(str(volume_vs(d, s))) == _sympy_volume(d, s)


@given(st.integers(1, 8), st.fractions(0, 8, max_denominator=12))
def test_volume_symmetry(d, s):
    assert volume_vs(d, s) + volume_vs(d, d - s) == 1 or s in (0, d)
    assert volume_vs_complement(d, s) == 1 - volume_vs(d, s)


@given(st.integers(1, 8), st.fractions(0, 8, max_denominator=12), st.fractions(0, 1, max_denominator=12))
def test_volume_monotone(d, s, ds):
    assert volume_vs(d, s) <= volume_vs(d, s + ds)
    assert 0 <= volume_vs(d, s) <= 1


@given(st.integers(1, 6), st.floats(0, 6))
def test_volume_float_matches_exact(d, s):
    assert volume_vs(d, s) == pytest.approx(float(volume_vs(d, Fraction(s))), abs=1e-9)


def test_volume_edge_cases():
    assert volume_vs(0, 0) == 1
    assert volume_vs(0, Fraction(-1, 2)) == 0
    assert volume_vs(3, 0) == 0
    assert volume_vs(3, 5) == 1
    assert volume_vs(1, Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(ValueError):
        volume_vs(-1, 1)


@pytest.mark.parametrize(
    "d,beta",
    [(0, 1), (1, 1), (2, Fraction(3, 4)), (3, Fraction(2, 3)), (4, Fraction(115, 192)), (5, Fraction(11, 20))],
)
def test_beta_table(d, beta):
    assert beta_hypersurface(d) == beta


# ---------------------------------------------------------------- sec + tan


def test_zigzag_numbers():
    assert zigzag_numbers(10) == [1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936, 50521]


def test_sectan_matches_sympy_series():
    x = sympy.symbols("x")
    series = sympy.series(sympy.sec(x) + sympy.tan(x), x, 0, 11).removeO()
    for d in range(11):
        c = series.coeff(x, d)
        assert sympy.Rational(str(sectan_coefficient(d))) == c


# ---------------------------------------------------------------- individual bounds


def test_simple_bounds():
    assert blickle_enescu_bound(2, 5) == 1 + Fraction(1, 50)
    assert wy_dim2_bound(2) == Fraction(3, 2)
    assert wy_dim2_bound(2.0) == 1.5
    assert aberbach_enescu_bound(2) == 1 + Fraction(1, 2 * 3**2)
    assert uniform_bound(2) == 1 + Fraction(1, 8)
    assert uniform_bound(3) == 1 + Fraction(1, 6 * 27)
    assert non_f_rational_bound(3) == Fraction(3, 2)
    assert hypersurface_bound(2, 3) == Fraction(4, 3)
    assert veronese_ehk(2, 2) == Fraction(3, 2)
    assert veronese_ehk(1, 3) == 1
    assert all(veronese_ehk(2, r) == Fraction(r + 1, 2) for r in range(1, 8))
    assert all(veronese_ehk(d, 1) == 1 for d in range(1, 6))


@pytest.mark.parametrize("p,emax", [(3, 4), (5, 3)])
def test_veronese_against_engine(p, emax):
    """Cone over the twisted cubic: the degree-3 Veronese of k[x, y]."""
    from hkcalc.estimate import estimate_ehk
    from hkcalc.frobenius import hk_series
    from hkcalc.presentation import parse

    prob = parse(f"p={p}; vars=a,b,c,d; quotient=[a*c - b^2, b*d - c^2, a*d - b*c]; ideal=[a, b, c, d];")
    r = estimate_ehk(hk_series(prob, emax))
    assert r.alpha_rational == veronese_ehk(2, 3) == 2


@pytest.mark.parametrize("d", [3, 4, 5])
def test_hanes_factor_decreasing(d):
    vals = [hanes_factor(d, t) for t in range(d, d + 20)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_hanes_dim2_exact():
    assert hanes_bound(2, 2, 3) == Fraction(3, 2)
    assert hanes_bound(2, 2, 2) == 2
    assert hanes_bound(2.0, 2, 3) == pytest.approx(1.5)


def test_wy_volume_at_s_equal_one():
    # at s = 1 the correction vanishes and the bound is e / d!
    for d in range(1, 5):
        assert wy_volume_expr(3, d, 4, 1) == Fraction(3, math.factorial(d))


def test_wy_volume_best_dominates():
    vb = wy_volume_bound(2, 2, 3)
    assert vb.best_value >= vb.value
    assert 1 <= vb.best_s <= 2
    # A1: e = 2, r = 3; the maximum of 2 (v_s - 3 (s-1)^2 / 2) is at s = 5/4
    assert vb.best_s == Fraction(5, 4)
    assert vb.best_value == Fraction(5, 4)


@given(st.integers(1, 5), st.integers(1, 6), st.integers(1, 8))
def test_wy_volume_bounded_by_sandwich(d, e, r):
    """The volume bound never exceeds the multiplicity itself."""
    vb = wy_volume_bound(e, d, r, grid=16)
    assert vb.best_value <= e


def test_wy_volume_rejects_bad_s():
    with pytest.raises(ValueError):
        wy_volume_expr(2, 2, 3, Fraction(1, 2))


# ---------------------------------------------------------------- bound reports


def names(entries, applicable=True):
    return {b.name for b in entries if b.applicable == applicable}


def test_closed_form_a1():
    tr = RingTraits(hypersurface=True, cohen_macaulay=True, mu_m=3)
    entries = closed_form_bounds(2, 5, 2, 3, tr)
    got = {b.name: b for b in entries}
    assert got["wy-dim2"].value == Fraction(3, 2) and got["wy-dim2"].applicable
    assert got["hanes"].value == Fraction(3, 2)
    assert got["blickle-enescu"].applicable
    assert got["sectan-conjecture"].informational
    assert got["multiplicity-sandwich-lower"].value == 1
    assert got["hypersurface-volume"].value == Fraction(3, 2)
    assert not got["hanes-hypersurface"].applicable
    for b in entries:
        b.check(1.5, 1e-2)
    assert all(b.satisfied is not False for b in entries if b.applicable)


def test_regular_ring_bounds_inapplicable():
    entries = closed_form_bounds(2, 5, 1, 2, RingTraits(regular=True, cohen_macaulay=True, mu_m=2))
    assert "blickle-enescu" in names(entries, False)
    assert "aberbach-enescu" in names(entries, False)
    assert "uniform" in names(entries, False)


def test_regular_inversion():
    """e_HK = 1 violates the Blickle-Enescu bound, so only regular rings can attain it."""
    for d in (1, 2, 3):
        for p in (2, 3, 5):
            assert blickle_enescu_bound(d, p) > 1
            rep = compare_bounds("regular", d, p, 1, d, 1.0, 0.0, RingTraits(regular=True, cohen_macaulay=True))
            assert rep.failures() == []


def test_compare_bounds_flags_violation():
    rep = compare_bounds("fake", 2, 5, 2, 3, 1.2, 1e-2, RingTraits(hypersurface=True, cohen_macaulay=True, mu_m=3))
    assert "wy-dim2" in {b.name for b in rep.failures()}
    assert all(not b.informational for b in rep.failures())


def test_to_dict_shape():
    b = closed_form_bounds(2, 5, 2, 3, RingTraits(cohen_macaulay=True))[0]
    d = b.to_dict()
    assert set(d) == {"name", "value", "exact", "satisfied", "applicable", "note"}
    assert d["exact"] == "51/50"


# ---------------------------------------------------------------- reference table


@pytest.mark.parametrize(
    "rid,value",
    [
        ("A1", Fraction(3, 2)),
        ("A3", Fraction(7, 4)),
        ("D4", Fraction(15, 8)),
        ("D6", Fraction(31, 16)),
        ("E6", Fraction(47, 24)),
        ("E7", Fraction(95, 48)),
        ("E8", Fraction(239, 120)),
        ("quadric_rank3", Fraction(4, 3)),
        ("cubic_smooth", Fraction(9, 4)),
        ("cubic_nodal", Fraction(7, 3)),
        ("fermat_quartic_3fold", Fraction(168, 61)),
        ("veronese_2_2", Fraction(3, 2)),
    ],
)
def test_lookup(rid, value):
    assert lookup(rid).e_HK == value


def test_lookup_unknown():
    with pytest.raises(KeyError):
        lookup("nonsense")


def test_ade_fsignature_relation():
    """e_HK = 2 - s for the rational double points."""
    for rid, rv in reference_values().items():
        if rid[0] in "ADE" and rid[1:].isdigit():
            assert rv.e_HK == 2 - rv.s


def _dim_and_generators(rid: str) -> tuple[int, int]:
    """(d, mu(m)) for the reference rings."""
    if rid.startswith("veronese"):
        d, r = map(int, rid.split("_")[1:])
        return d, math.comb(d + r - 1, r)
    if rid == "curve_x5_y5":
        return 1, 2
    if rid.startswith(("quadric", "fermat")):
        return 3, 4
    return 2, 3


def test_reference_values_respect_applicable_bounds():
    for rid, rv in reference_values().items():
        d, mu = _dim_and_generators(rid)
        tr = RingTraits(cohen_macaulay=True, regular=rv.e_HK == 1, mu_m=mu)
        rep = compare_bounds(rid, d, rv.min_char, rv.multiplicity, mu, float(rv.e_HK), 0.0, tr)
        assert rep.failures() == [], rid
