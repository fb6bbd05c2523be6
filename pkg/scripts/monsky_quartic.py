"""Hilbert-Kunz series of uv + x^3 + y^3 + xyz over F_2.

The limit is conjectured to be 4/3 + 5/(14 sqrt 7), an irrational number; the
script only reports the exact colengths and the extrapolated value next to it.

    python3 scripts/monsky_quartic.py [emax]
"""
from __future__ import annotations

import math
import sys

from hkcalc.estimate import estimate_ehk
from hkcalc.frobenius import hk_series
from hkcalc.presentation import parse

TEXT = "p=2; vars=u,v,x,y,z; quotient=[u*v + x^3 + y^3 + x*y*z]; ideal=[u, v, x, y, z];"
CONJECTURED = 4 / 3 + 5 / (14 * math.sqrt(7))


def main() -> None:
    emax = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    series = hk_series(parse(TEXT), emax)
    for s in series.samples:
        print(f"e={s.e} q={s.q:>4} colength={s.colength:>9} ratio={s.colength / s.q**series.d:.8f} ({s.seconds:.1f}s)")
    for method in ("ratio", "two-point"):
        est = estimate_ehk(series, method)
        print(f"{method:>9}: {est.alpha:.8f}  (conjectured {CONJECTURED:.8f}, diff {est.alpha - CONJECTURED:+.2e})")


if __name__ == "__main__":
    main()
