"""End-to-end analysis of a problem and its JSON/CSV/table rendering."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import ENGINE_VERSION
from .bounds import BoundEntry, RingTraits, closed_form_bounds, reference_values
from .estimate import EstimateResult, estimate_ehk, estimate_fsignature, hs_fit
from .frobenius import (
    HKSeries,
    SeriesConfig,
    SplittingSample,
    hk_series,
    ordinary_power_series,
    splitting_series,
)
from .presentation import IdealSpec, ParsedProblem, format_problem, parse_polys
from .polyfield import format_poly

DEFAULT_SLACK = 1e-2


def power_nmax(prob: ParsedProblem) -> int:
    """Enough ordinary powers for the Hilbert–Samuel polynomial to settle."""
    deg = max([f.total_degree() for f in prob.ring.defining] + [1])
    gdeg = max(g.total_degree() for g in prob.ideal.generators)
    return prob.ring.dimension + 2 + deg + gdeg + 1


def multiplicity(prob: ParsedProblem, timeout: float | None = None) -> tuple[Fraction, float]:
    """Hilbert–Samuel multiplicity e(I) with its fit residual."""
    powers = ordinary_power_series(prob, power_nmax(prob), timeout)
    return hs_fit(powers, prob.ring.dimension)


def ring_traits(prob: ParsedProblem, series: HKSeries | None = None) -> RingTraits:
    r = prob.ring
    regular = False
    if prob.ideal_is_maximal and series is not None:
        # Kunz: regular iff λ(R/m^[q]) = q^d for some q > 1
        regular = any(s.colength == s.q**series.d for s in series.samples if s.e >= 1)
    hyp = r.is_hypersurface
    return RingTraits(
        regular=regular,
        hypersurface=hyp,
        cohen_macaulay=hyp or not r.defining,
        mu_m=r.embedding_dimension,
    )


def recognize(prob: ParsedProblem) -> str | None:
    """Reference id whose equation matches the defining ideal, if any."""
    r = prob.ring
    if len(r.defining) != 1:
        return None
    f = r.defining[0].monic()
    for rid, ref in reference_values().items():
        try:
            (g,) = parse_polys(ref.equation, r.ring)
        except ValueError:
            continue
        if g and g.monic() == f:
            return rid
    return None


@dataclass
class Report:
    problem: ParsedProblem
    series: HKSeries
    estimate: EstimateResult
    bounds: list[BoundEntry]
    timing: dict
    cache_hits: int = 0
    reference: str | None = None
    splitting: list[SplittingSample] = field(default_factory=list)

    def to_dict(self) -> dict:
        prob = self.problem
        ref = None
        if self.reference:
            rv = reference_values()[self.reference]
            ref = {
                "id": rv.ring_id,
                "e_HK": str(rv.e_HK),
                "s": None if rv.s is None else str(rv.s),
            }
        out = {
            "problem": {
                "text": format_problem(prob),
                "p": prob.p,
                "vars": list(prob.ring.vars),
                "defining": [format_poly(f) for f in prob.ring.defining],
                "ideal": [format_poly(g) for g in prob.ideal.generators],
                "order": prob.ring.order.kind,
                "d": self.series.d if self.series else prob.ring.dimension,
                "reference": ref,
            },
            "series": [{"e": s.e, "q": s.q, "colength": s.colength} for s in self.series.samples]
            if self.series
            else [],
            "estimate": self.estimate.to_dict() if self.estimate else None,
            "bounds": [b.to_dict() for b in self.bounds],
            "timing": self.timing,
            "provenance": {"engine": ENGINE_VERSION, "cache_hits": self.cache_hits},
        }
        if self.splitting:
            out["splitting"] = [{"e": s.e, "q": s.q, "a_q": s.a_q} for s in self.splitting]
        return out


def analyze(
    prob: ParsedProblem,
    e_max: int | None = None,
    config: SeriesConfig | None = None,
    cache=None,
    with_multiplicity: bool = True,
    slack: float = DEFAULT_SLACK,
) -> Report:
    """parse result -> series -> estimate -> multiplicity -> bounds."""
    config = config or SeriesConfig()
    t0 = time.perf_counter()
    hits0 = getattr(cache, "hits", 0)
    series = hk_series(prob, e_max, config, cache)
    est = estimate_ehk(series)
    t_series = time.perf_counter() - t0
    d = series.d
    bounds: list[BoundEntry] = []
    traits = ring_traits(prob, series)
    if traits.regular:
        est.notes.append("regular: Kunz equality")
    if with_multiplicity and d >= 1:
        eI, resid = multiplicity(prob, config.timeout)
        est.e_I = float(eI)
        e_int = round(eI)
        e_val: int | float = e_int if abs(eI - e_int) <= 0.05 else float(eI)
        if prob.ideal_is_maximal:
            bounds = closed_form_bounds(d, prob.p, e_val, prob.ideal.t, traits)
        else:
            bounds = [
                b
                for b in closed_form_bounds(d, prob.p, e_val, prob.ideal.t, RingTraits())
                if b.name in ("hanes", "multiplicity-sandwich-lower")
            ]
        for b in bounds:
            b.check(est.alpha, slack)
    timing = {
        "total": round(time.perf_counter() - t0, 6),
        "series": round(t_series, 6),
        "per_sample": [round(s.seconds, 6) for s in series.samples],
    }
    return Report(
        prob,
        series,
        est,
        bounds,
        timing,
        cache_hits=getattr(cache, "hits", 0) - hits0,
        reference=recognize(prob),
    )


def analyze_fsig(
    prob: ParsedProblem, sop_text: str, e_max: int | None = None, config: SeriesConfig | None = None
) -> tuple[list[SplittingSample], float, str | None]:
    J = IdealSpec(tuple(parse_polys(sop_text, prob.ring.ring)), prob.ring)
    if e_max is None:
        e_max = prob.emax if prob.emax is not None else 2
    samples = splitting_series(prob, J, e_max, config)
    return samples, estimate_fsignature(samples, prob.ring.dimension), recognize(prob)


# ---------------------------------------------------------------- rendering


def to_json(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=False)


def series_csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["e", "q", "colength", "ratio"])
    d = report.series.d
    for s in report.series.samples:
        w.writerow([s.e, s.q, s.colength, f"{s.colength / s.q**d:.10g}"])
    return buf.getvalue()


def to_table(report: Report) -> str:
    lines = [format_problem(report.problem), f"dimension d = {report.series.d}", ""]
    d = report.series.d
    lines.append(f"{'e':>3} {'q':>8} {'colength':>14} {'colength/q^d':>14}")
    for s in report.series.samples:
        lines.append(f"{s.e:>3} {s.q:>8} {s.colength:>14} {s.colength / s.q**d:>14.8f}")
    est = report.estimate
    lines.append("")
    rat = f" ~ {est.alpha_rational}" if est.alpha_rational is not None else ""
    lines.append(f"e_HK ({est.method}): {est.alpha:.8f}{rat}  residual {est.residual:.4g}")
    if est.beta is not None:
        lines.append(f"second coefficient: {est.beta:.6f}")
    if est.e_I is not None:
        lines.append(f"Hilbert-Samuel e(I): {est.e_I:.6f}")
    for n in est.notes:
        lines.append(f"note: {n}")
    if report.bounds:
        lines.append("")
        lines.append(f"{'bound':<28} {'value':>12}  status")
        for b in report.bounds:
            if b.value is None:
                lines.append(f"{b.name:<28} {'-':>12}  n/a ({b.note})")
                continue
            status = "ok" if b.satisfied else "VIOLATED"
            if not b.applicable:
                status += " (not applicable)"
            if b.informational:
                status += " (informational)"
            lines.append(f"{b.name:<28} {float(b.value):>12.6f}  {status}")
    if report.reference:
        rv = reference_values()[report.reference]
        lines.append(f"reference {rv.ring_id}: e_HK = {rv.e_HK}")
    return "\n".join(lines) + "\n"

