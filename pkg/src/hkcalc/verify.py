"""Fixture-driven verification: each ``<name>.hk`` has a ``<name>.json`` of expectations.

Expectation keys (all optional)::

    colengths     {"e": exact colength}
    kunz          true  -> colength = q^d at every sampled e (regular ring)
    ehk           {"value": "3/2", "tol": 0.02, "reconstruct": true}
    multiplicity  integer e(I)
    fsig          {"sop": "x+y, z", "emax": 2, "value": "1/2", "tol": 0.05}
                  or {"sop": ..., "max": 0.1, "decreasing": true}
    bounds        true  -> every applicable bound holds within the slack
    wy_attained   {"tol": 0.02}  -> e_HK equals (e+1)/2
    reference     id in the reference table; its e_HK must match "ehk"
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator

from .bounds import reference_values
from .frobenius import SeriesConfig
from .presentation import parse
from .report import DEFAULT_SLACK, analyze, analyze_fsig

CHECK_TAGS = ("colength", "kunz", "ehk", "rational", "multiplicity", "fsig", "bounds", "wy", "reference")


@dataclass
class CheckResult:
    fixture: str
    check: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.fixture}:{self.check}  {self.detail}"


def load_corpus(directory: str | Path) -> list[tuple[str, str, dict]]:
    out = []
    for hk in sorted(Path(directory).glob("*.hk")):
        exp_path = hk.with_suffix(".json")
        expected = json.loads(exp_path.read_text()) if exp_path.exists() else {}
        out.append((hk.stem, hk.read_text(), expected))
    return out


def _selected(name: str, tag: str, flt: str | None) -> bool:
    if not flt:
        return True
    return flt == tag or flt in name


def check_fixture(name: str, text: str, exp: dict, flt: str | None = None, config: SeriesConfig | None = None) -> Iterator[CheckResult]:
    want = {t for t in CHECK_TAGS if _selected(name, t, flt)}
    needs_series = want & {"colength", "kunz", "ehk", "rational", "multiplicity", "bounds", "wy", "reference"}
    needs_series = {t for t in needs_series if _has(exp, t)}
    prob = parse(text)
    if needs_series:
        needs_mult = bool({"multiplicity", "bounds", "wy"} & needs_series)
        rep = analyze(prob, config=config, with_multiplicity=needs_mult)
        series = rep.series
        est = rep.estimate
        if "colength" in needs_series:
            got = {s.e: s.colength for s in series.samples}
            for e_s, val in sorted(exp["colengths"].items(), key=lambda kv: int(kv[0])):
                e = int(e_s)
                ok = got.get(e) == val
                yield CheckResult(name, f"colength[e={e}]", ok, f"got {got.get(e)} expected {val}")
        if "kunz" in needs_series:
            d = series.d
            bad = [(s.e, s.colength, s.q**d) for s in series.samples if s.colength != s.q**d]
            yield CheckResult(name, "kunz", not bad, "colength = q^d at every e" if not bad else f"mismatch {bad}")
        if "ehk" in needs_series:
            expect = exp["ehk"]
            target = Fraction(expect["value"])
            tol = float(expect.get("tol", 1e-2))
            ok = abs(est.alpha - float(target)) <= tol
            yield CheckResult(name, "ehk", ok, f"alpha={est.alpha:.6f} ({est.method}) expected {target} +- {tol}")
        if "rational" in needs_series:
            target = Fraction(exp["ehk"]["value"])
            ok = est.alpha_rational == target
            yield CheckResult(name, "rational", ok, f"reconstructed {est.alpha_rational} expected {target}")
        if "reference" in needs_series:
            rv = reference_values().get(exp["reference"])
            ok = rv is not None and "ehk" in exp and rv.e_HK == Fraction(exp["ehk"]["value"])
            yield CheckResult(name, "reference", ok, f"table entry {exp['reference']}: {rv.e_HK if rv else None}")
        if "multiplicity" in needs_series:
            ok = est.e_I is not None and abs(est.e_I - exp["multiplicity"]) <= 0.05
            yield CheckResult(name, "multiplicity", ok, f"e(I)={est.e_I} expected {exp['multiplicity']}")
        if "bounds" in needs_series:
            bad = [b for b in rep.bounds if b.applicable and not b.informational and b.satisfied is False]
            names = ", ".join(f"{b.name}={float(b.value):.4f}" for b in bad)
            yield CheckResult(
                name, "bounds", not bad, f"alpha={est.alpha:.6f} >= all applicable bounds" if not bad else f"violated: {names}"
            )
        if "wy" in needs_series:
            tol = float(exp["wy_attained"].get("tol", 2e-2))
            wy = next((b for b in rep.bounds if b.name == "wy-dim2"), None)
            ok = wy is not None and wy.value is not None and abs(est.alpha - float(wy.value)) <= tol
            yield CheckResult(name, "wy", ok, f"alpha={est.alpha:.6f} vs (e+1)/2={wy.value if wy else None}")
    if "fsig" in want and "fsig" in exp:
        expect = exp["fsig"]
        samples, s, _ = analyze_fsig(prob, expect["sop"], expect.get("emax"), config)
        if "value" in expect:
            target = Fraction(expect["value"])
            tol = float(expect.get("tol", 5e-2))
            ok = abs(s - float(target)) <= tol
            detail = f"s={s:.6f} expected {target} +- {tol}"
        else:
            ratios = [x.a_q / x.q**prob.ring.dimension for x in samples if x.e >= 1]
            ok = s <= expect["max"] and ratios[-1] <= expect["max"]
            if expect.get("decreasing"):
                ok = ok and all(a > b for a, b in zip(ratios, ratios[1:]))
            detail = f"s={s:.6f}, a_q/q^d={['%.4f' % r for r in ratios]} (max {expect['max']})"
        yield CheckResult(name, "fsig", ok, detail)


def _has(exp: dict, tag: str) -> bool:
    key = {"colength": "colengths", "rational": "ehk", "wy": "wy_attained"}.get(tag, tag)
    if tag == "rational":
        return "ehk" in exp and bool(exp["ehk"].get("reconstruct"))
    return key in exp


def run_verify(
    directory: str | Path,
    flt: str | None = None,
    budget: float | None = None,
    emit: Callable[[str], None] = print,
    config: SeriesConfig | None = None,
) -> list[CheckResult]:
    start = time.monotonic()
    results: list[CheckResult] = []
    for name, text, exp in load_corpus(directory):
        if budget is not None and time.monotonic() - start > budget:
            r = CheckResult(name, "budget", False, f"skipped: budget of {budget}s exhausted")
            results.append(r)
            emit(r.line())
            continue
        try:
            for r in check_fixture(name, text, exp, flt, config):
                results.append(r)
                emit(r.line())
        except Exception as exc:  # a broken fixture is a failed check, not a crash
            r = CheckResult(name, "error", False, f"{type(exc).__name__}: {exc}")
            results.append(r)
            emit(r.line())
    return results


__all__ = ["CheckResult", "load_corpus", "check_fixture", "run_verify", "DEFAULT_SLACK"]
