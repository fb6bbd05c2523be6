"""Extrapolation of limits from exact length sequences.

All inputs are exact integers; the estimators work in ``Fraction`` and only
convert to float at the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .frobenius import HKSeries, SplittingSample

METHODS = ("auto", "two-point", "ratio", "aitken")
DEFAULT_MAX_DEN = 10**4
MIN_TOL = 1e-6


class EstimateError(ValueError):
    pass


@dataclass
class EstimateResult:
    alpha: float
    beta: float | None
    alpha_rational: Fraction | None
    method: str
    residual: float
    e_I: float | None = None
    s_R: float | None = None
    alpha_exact: Fraction | None = field(default=None, repr=False)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        r = self.alpha_rational
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "alpha_rational": None if r is None else [r.numerator, r.denominator],
            "method": self.method,
            "residual": self.residual,
            "e_I": self.e_I,
            "s_R": self.s_R,
            "notes": list(self.notes),
        }


def rational_reconstruct(x: float, max_den: int = DEFAULT_MAX_DEN, tol: float = MIN_TOL) -> Fraction | None:
    """Smallest-denominator continued-fraction convergent within ``tol`` of x."""
    if max_den < 1:
        raise ValueError("max_den must be at least 1")
    if not math.isfinite(x):
        return None
    target = Fraction(x)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    rest = target
    while True:
        a = math.floor(rest)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return None
        conv = Fraction(h1, k1)
        if abs(float(target - conv)) <= tol:
            return conv
        frac = rest - a
        if frac == 0:
            return None
        rest = 1 / frac


def _usable(series: HKSeries) -> list[tuple[int, int]]:
    return [(s.q, s.colength) for s in series.samples if s.e >= 1]


def reconstruction_tolerance(alpha: Fraction, residual: float, q_last: int, d: int, c_last: Fraction) -> float:
    """Tolerance for matching alpha to a fraction.

    Besides the model residual, the size of the final extrapolation step
    |alpha - c_last| is used as an error scale; with a residual of zero (two
    points, two unknowns) it is the only honest one.
    """
    return max(10 * residual / q_last**d, 2 * abs(float(alpha - c_last)), MIN_TOL)


def _two_point(pts: list[tuple[int, int]], d: int, p: int) -> tuple[Fraction, Fraction, float]:
    (q0, l0), (q1, l1) = pts[-2], pts[-1]
    c0, c1 = Fraction(l0, q0**d), Fraction(l1, q1**d)
    # λ = α q^d + β q^(d-1), i.e. c = α + β/q, with q1 = p q0
    alpha = (p * c1 - c0) / (p - 1)
    beta = (c0 - c1) * q1 / (p - 1)
    residual = max(abs(float(l - (alpha * q**d + beta * Fraction(q) ** (d - 1)))) for q, l in pts)
    return alpha, beta, residual


def _aitken(samples: Sequence[tuple[int, int]], d: int) -> tuple[Fraction, float]:
    """Aitken delta-squared on the normalized sequence c_e = λ_e / q_e^d."""
    c = [Fraction(l, q**d) for q, l in samples]
    d1, d2 = c[-1] - c[-2], c[-2] - c[-3]
    if d1 == d2:
        return c[-1], 0.0
    alpha = c[-1] - d1 * d1 / (d1 - d2)
    # geometric model c_e = α + B r^e through the last three points
    r = d1 / d2 if d2 else Fraction(0)
    B = c[-1] - alpha
    residual = 0.0
    n = len(c)
    for i, (q, l) in enumerate(samples):
        if r == 0:
            continue
        model = alpha + B * r ** (i - (n - 1))
        residual = max(residual, abs(float(l - model * q**d)))
    return alpha, residual


def estimate_ehk(
    series: HKSeries,
    method: str | None = None,
    max_den: int = DEFAULT_MAX_DEN,
) -> EstimateResult:
    """Estimate e_HK from an exact Hilbert–Kunz series.

    ``two-point`` fits λ = α q^d + β q^(d-1) to the last two samples, which is
    accurate to O(q^-2) when the second coefficient exists.  ``ratio`` is the
    plain λ/q^d of the last sample.  ``aitken`` accelerates c_e = λ_e/q_e^d
    with the delta-squared process; it is exact when the correction is a
    single geometric term.
    """
    method = method or series.problem.estimator or "auto"
    if method not in METHODS:
        raise EstimateError(f"unknown estimator {method!r}")
    p, d = series.problem.p, series.d
    pts = _usable(series)
    notes: list[str] = []
    if not pts:
        raise EstimateError("need at least one sample with e >= 1")
    q_last, l_last = pts[-1]
    c_last = Fraction(l_last, q_last**d)
    beta: Fraction | None = None
    if method == "aitken":
        all_pts = [(s.q, s.colength) for s in series.samples]
        if len(all_pts) < 3:
            raise EstimateError("aitken needs three consecutive samples")
        alpha, residual = _aitken(all_pts, d)
    elif method == "ratio" or len(pts) < 2:
        method = "ratio"
        alpha, residual = c_last, 0.0
    else:
        method = "two-point"
        alpha, beta, residual = _two_point(pts, d, p)
        if series.problem.ring.defining and d >= 2:
            notes.append("heuristic: normality not verified")
    tol = reconstruction_tolerance(alpha, residual, q_last, d, c_last)
    rat = rational_reconstruct(float(alpha), max_den, tol)
    if alpha < 1 - tol:
        notes.append("alpha below 1: input may not be origin-primary")
    return EstimateResult(
        alpha=float(alpha),
        beta=None if beta is None else float(beta),
        alpha_rational=rat,
        method=method,
        residual=residual,
        alpha_exact=alpha,
        notes=notes,
    )


def _polyfit_exact(xs: Sequence[int], ys: Sequence[int], deg: int) -> list[Fraction]:
    """Least-squares polynomial coefficients (constant first) in exact arithmetic."""
    m = deg + 1
    A = [[Fraction(sum(x ** (i + j) for x in xs)) for j in range(m)] for i in range(m)]
    b = [Fraction(sum(y * x**i for x, y in zip(xs, ys))) for i in range(m)]
    for col in range(m):
        piv = next(r for r in range(col, m) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(m):
            if r != col and A[r][col]:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * c for a, c in zip(A[r], A[col])]
                b[r] -= f * b[col]
    return [b[i] / A[i][i] for i in range(m)]


def hs_fit(powers: Sequence[tuple[int, int]], d: int) -> tuple[Fraction, float]:
    """(e(I), residual) from a degree-d fit to the last d+2 values of λ(R/I^n)."""
    if len(powers) < d + 2:
        raise EstimateError(f"need at least {d + 2} ordinary-power samples, got {len(powers)}")
    tail = list(powers)[-(d + 2):]
    xs = [n for n, _ in tail]
    ys = [l for _, l in tail]
    coef = _polyfit_exact(xs, ys, d)
    resid = max(abs(float(y - sum(c * x**i for i, c in enumerate(coef)))) for x, y in zip(xs, ys))
    return coef[d] * math.factorial(d), resid


def estimate_hs_multiplicity(powers: Sequence[tuple[int, int]], d: int) -> float:
    return float(hs_fit(powers, d)[0])


def estimate_fsignature(samples: Sequence[SplittingSample], d: int) -> float:
    """s(R) from splitting numbers: two-point fit in q when possible."""
    if not samples:
        raise EstimateError("need at least one splitting sample")
    pts = [s for s in samples if s.e >= 1] or list(samples)
    last = pts[-1]
    if len(pts) < 2:
        return float(Fraction(last.a_q, last.q**d))
    prev = pts[-2]
    c0 = Fraction(prev.a_q, prev.q**d)
    c1 = Fraction(last.a_q, last.q**d)
    ratio = Fraction(last.q, prev.q)
    s = (ratio * c1 - c0) / (ratio - 1)
    # s(R) lies in [0, 1]; extrapolation can overshoot slightly near the ends
    return float(min(max(s, Fraction(0)), Fraction(1)))
