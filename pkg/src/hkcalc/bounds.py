"""Closed-form lower bounds for e_HK and a table of known exact values.

Every bound is a function of (d, p, e, t) and a few structural flags, and is
returned as an exact ``Fraction`` whenever the formula is rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

Number = Fraction | float


def _frac(s) -> Fraction | None:
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return None


def volume_vs(d: int, s) -> Number:
    """vol{x in [0,1]^d : x_1 + ... + x_d <= s}, the Irwin–Hall CDF.

    Exact for rational ``s`` (int or Fraction), float otherwise.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    exact = _frac(s)
    if d == 0:
        return Fraction(1 if s >= 0 else 0) if exact is not None else float(s >= 0)
    if s <= 0:
        return Fraction(0) if exact is not None else 0.0
    if s >= d:
        return Fraction(1) if exact is not None else 1.0
    x = exact if exact is not None else float(s)
    total = sum((-1) ** k * math.comb(d, k) * (x - k) ** d for k in range(math.floor(x) + 1))
    v = total / math.factorial(d)
    return min(max(v, 0), 1)


def volume_vs_complement(d: int, s) -> Number:
    return 1 - volume_vs(d, s)


def beta_hypersurface(d: int) -> Fraction:
    """beta_{d+1} = v_{(d+1)/2} - v_{(d-1)/2} in dimension d."""
    if d < 0:
        raise ValueError("d must be non-negative")
    return volume_vs(d, Fraction(d + 1, 2)) - volume_vs(d, Fraction(d - 1, 2))


@dataclass(frozen=True)
class VolumeBound:
    value: Number  # at the requested s
    s: Fraction
    best_value: Number
    best_s: Fraction


def wy_volume_expr(e, d: int, r: int, s) -> Number:
    """e * (v_s - r (s-1)^d / d!)."""
    if s < 1 or r < 1:
        raise ValueError("need s >= 1 and r >= 1")
    sf = _frac(s)
    x = sf if sf is not None else float(s)
    return e * (volume_vs(d, x) - r * (x - 1) ** d / math.factorial(d))


def wy_volume_bound(e, d: int, r: int, s=1, grid: int = 64) -> VolumeBound:
    """Volume bound at ``s`` plus its maximum over s in {1, 1+1/grid, ..., 2}."""
    value = wy_volume_expr(e, d, r, s)
    cands = [Fraction(grid + k, grid) for k in range(grid + 1)]
    vals = [wy_volume_expr(e, d, r, c) for c in cands]
    i = max(range(len(vals)), key=lambda k: vals[k])
    return VolumeBound(value, Fraction(s) if _frac(s) is not None else s, vals[i], cands[i])


def blickle_enescu_bound(d: int, p: int) -> Fraction:
    return 1 + Fraction(1, p**d * math.factorial(d))


def wy_dim2_bound(e) -> Number:
    return (e + 1) / 2 if not isinstance(e, int) else Fraction(e + 1, 2)


def aberbach_enescu_bound(d: int) -> Fraction:
    return 1 + Fraction(1, d * (math.factorial(d) * (d - 1) + 1) ** d)


def uniform_bound(d: int) -> Fraction:
    """1 + 1/(d! d^d), valid for formally unmixed rings of multiplicity > 1."""
    return 1 + Fraction(1, math.factorial(d) * d**d)


def hanes_factor(d: int, t: int) -> float:
    """t / (t^(1/(d-1)) - 1)^(d-1); decreasing in t."""
    if d == 2:
        return float(Fraction(t, t - 1))
    return t / (t ** (1 / (d - 1)) - 1) ** (d - 1)


def hanes_bound(e, d: int, t: int) -> Number:
    f = hanes_factor(d, t)
    if d == 2 and isinstance(e, (int, Fraction)):
        return Fraction(e) / 2 * Fraction(t, t - 1)
    return float(e) / math.factorial(d) * f


def hypersurface_bound(e, d: int) -> Number:
    return Fraction(e) * 2 ** (d - 1) / math.factorial(d) if isinstance(e, (int, Fraction)) else e * 2 ** (d - 1) / math.factorial(d)


def non_f_rational_bound(e) -> Number:
    return 1 + Fraction(1, e - 1) if isinstance(e, int) else 1 + 1 / (e - 1)


def zigzag_numbers(n: int) -> list[int]:
    """Euler up/down numbers Z_0..Z_n via the boustrophedon (Seidel) triangle."""
    out = [1]
    row = [1]
    for _ in range(n):
        new = [0]
        for x in reversed(row):
            new.append(new[-1] + x)
        row = new
        out.append(row[-1])
    return out


def sectan_coefficient(d: int) -> Fraction:
    """d-th Taylor coefficient of sec x + tan x."""
    if d < 0:
        raise ValueError("d must be non-negative")
    return Fraction(zigzag_numbers(d)[d], math.factorial(d))


# ---------------------------------------------------------------- reports


@dataclass
class BoundEntry:
    name: str
    value: Number | None
    applicable: bool
    note: str = ""
    strict: bool = False
    informational: bool = False
    satisfied: bool | None = None

    def check(self, alpha: float, slack: float) -> bool | None:
        if self.value is None:
            self.satisfied = None
        else:
            self.satisfied = alpha >= float(self.value) - slack
        return self.satisfied

    def to_dict(self) -> dict:
        v = self.value
        return {
            "name": self.name,
            "value": None if v is None else float(v),
            "exact": str(v) if isinstance(v, Fraction) else None,
            "satisfied": self.satisfied,
            "applicable": self.applicable,
            "note": self.note,
        }


@dataclass
class RingTraits:
    """What is known about the ring beyond (d, p, e, t)."""

    regular: bool = False
    hypersurface: bool = False
    cohen_macaulay: bool = False
    gorenstein_non_f_rational: bool = False
    mu_m: int | None = None  # embedding dimension; upper bound for r in the volume bound


def closed_form_bounds(d: int, p: int, e, t: int, traits: RingTraits | None = None) -> list[BoundEntry]:
    """All bounds from the literature, with applicability recorded as data."""
    tr = traits or RingTraits()
    out: list[BoundEntry] = []
    nonreg = "requires a non-regular ring"
    singular = not tr.regular and e != 1
    unmixed = tr.cohen_macaulay or tr.hypersurface
    out.append(
        BoundEntry("blickle-enescu", blickle_enescu_bound(d, p), singular, "" if singular else nonreg, strict=True)
    )
    if d == 2:
        out.append(BoundEntry("wy-dim2", wy_dim2_bound(e), unmixed, "" if unmixed else "requires Cohen-Macaulay"))
    else:
        out.append(BoundEntry("wy-dim2", None, False, "requires d = 2"))
    if d >= 1 and tr.mu_m:
        vb = wy_volume_bound(e, d, tr.mu_m)
        out.append(
            BoundEntry(
                "wy-volume",
                vb.best_value,
                unmixed,
                f"r = mu(m) = {tr.mu_m} as upper bound, s = {vb.best_s}" + ("" if unmixed else "; requires unmixed"),
            )
        )
    else:
        out.append(BoundEntry("wy-volume", None, False, "embedding dimension unknown"))
    if d >= 2:
        ok = unmixed and singular
        out.append(
            BoundEntry("aberbach-enescu", aberbach_enescu_bound(d), ok, "" if ok else "requires unmixed, non-regular")
        )
    else:
        out.append(BoundEntry("aberbach-enescu", None, False, "requires d >= 2"))
    ok = unmixed and e > 1
    out.append(BoundEntry("uniform", uniform_bound(d) if d >= 1 else None, ok, "" if ok else "requires unmixed, e > 1"))
    if d >= 2 and t >= d:
        out.append(BoundEntry("hanes", hanes_bound(e, d, t), True, f"t = {t} generators (>= mu(I))"))
    else:
        out.append(BoundEntry("hanes", None, False, "requires d >= 2 and t >= d"))
    if tr.hypersurface and d >= 3:
        out.append(BoundEntry("hanes-hypersurface", hypersurface_bound(e, d), True))
    else:
        out.append(BoundEntry("hanes-hypersurface", None, False, "requires hypersurface with d >= 3"))
    if tr.hypersurface:
        out.append(BoundEntry("hypersurface-volume", beta_hypersurface(d) * e, True, "beta_{d+1} * e"))
    if tr.gorenstein_non_f_rational and isinstance(e, (int, Fraction)) and e > 1:
        out.append(BoundEntry("gorenstein-non-f-rational", non_f_rational_bound(int(e)), True))
    else:
        out.append(
            BoundEntry("gorenstein-non-f-rational", None, False, "requires Gorenstein, not F-rational, e > 1")
        )
    out.append(
        BoundEntry("sectan-conjecture", 1 + sectan_coefficient(d), singular, "conjectural; informational", informational=True)
    )
    out.append(
        BoundEntry(
            "multiplicity-sandwich-lower", Fraction(e) / math.factorial(d) if isinstance(e, int) else e / math.factorial(d), True
        )
    )
    return out


@dataclass
class BoundReport:
    ring_id: str
    d: int
    p: int
    e: Number
    entries: list[BoundEntry] = field(default_factory=list)
    alpha: float | None = None

    def failures(self) -> list[BoundEntry]:
        return [b for b in self.entries if b.applicable and not b.informational and b.satisfied is False]


def compare_bounds(
    ring_id: str, d: int, p: int, e, t: int, alpha: float, slack: float, traits: RingTraits | None = None
) -> BoundReport:
    entries = closed_form_bounds(d, p, e, t, traits)
    for b in entries:
        b.check(alpha, slack)
    return BoundReport(ring_id, d, p, e, entries, alpha)


# ---------------------------------------------------------------- known values


@dataclass(frozen=True)
class ReferenceValue:
    ring_id: str
    equation: str
    e_HK: Fraction
    s: Fraction | None = None
    min_char: int = 2
    multiplicity: int | None = None
    only_char: int | None = None  # value known only in this characteristic


def veronese_ehk(d: int, r: int) -> Fraction:
    """e_HK of the r-th Veronese subring of a d-dimensional polynomial ring.

    Monomials of degree < r in d variables, divided by r; (r + 1)/2 when d = 2.
    """
    return Fraction(math.comb(d + r - 1, d), r)


def _ade() -> Iterable[ReferenceValue]:
    for n in range(1, 9):
        yield ReferenceValue(f"A{n}", f"x*y + z^{n + 1}", 2 - Fraction(1, n + 1), Fraction(1, n + 1), 2, 2)
    for n in range(4, 9):
        g = 4 * (n - 2)
        yield ReferenceValue(f"D{n}", f"x^2 + y*z^2 + y^{n - 1}", 2 - Fraction(1, g), Fraction(1, g), 3, 2)
    yield ReferenceValue("E6", "x^2 + y^3 + z^4", 2 - Fraction(1, 24), Fraction(1, 24), 5, 2)
    yield ReferenceValue("E7", "x^2 + y^3 + y*z^3", 2 - Fraction(1, 48), Fraction(1, 48), 5, 2)
    yield ReferenceValue("E8", "x^2 + y^3 + z^5", 2 - Fraction(1, 120), Fraction(1, 120), 7, 2)


def reference_values() -> dict[str, ReferenceValue]:
    table = {r.ring_id: r for r in _ade()}
    for rv in (
        ReferenceValue("quadric_rank1", "X^2", Fraction(2), None, 3, 2),
        ReferenceValue("quadric_rank2", "X^2 - Y*Z", Fraction(3, 2), None, 3, 2),
        ReferenceValue("quadric_rank3", "X*Y - Z*W", Fraction(4, 3), None, 3, 2),
        ReferenceValue("cubic_smooth", "x^3 + y^3 + z^3", Fraction(9, 4), None, 5, 3),
        ReferenceValue("cubic_nodal", "y^2*z - x^3 - x^2*z", Fraction(7, 3), Fraction(0), 5, 3),
        ReferenceValue("fermat_quartic_3fold", "x1^4 + x2^4 + x3^4 + x4^4", Fraction(168, 61), None, 5, 4, only_char=5),
        ReferenceValue("curve_x5_y5", "x^5 - y^5", Fraction(5), None, 2, 5),
    ):
        table[rv.ring_id] = rv
    for d in range(1, 5):
        for r in range(1, 5):
            table[f"veronese_{d}_{r}"] = ReferenceValue(
                f"veronese_{d}_{r}", f"degree-{r} Veronese of k[x_1..x_{d}]", veronese_ehk(d, r), None, 2, r ** (d - 1)
            )
    return table


def lookup(ring_id: str) -> ReferenceValue:
    table = reference_values()
    if ring_id not in table:
        raise KeyError(f"no reference value for {ring_id!r}")
    return table[ring_id]
