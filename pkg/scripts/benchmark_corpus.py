"""Time the full analysis of every corpus fixture and print a summary table.

    python3 scripts/benchmark_corpus.py [corpus_dir]
"""
from __future__ import annotations

import sys
import time
from pathlib import Path

from hkcalc.presentation import parse
from hkcalc.report import analyze
from hkcalc.verify import load_corpus


def main() -> None:
    directory = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "corpus"
    print(f"{'fixture':<22} {'d':>2} {'emax':>4} {'last colength':>14} {'alpha':>12} {'rational':>10} {'seconds':>8}")
    total = 0.0
    for name, text, _ in load_corpus(directory):
        t0 = time.perf_counter()
        rep = analyze(parse(text))
        dt = time.perf_counter() - t0
        total += dt
        last = rep.series.samples[-1]
        rat = str(rep.estimate.alpha_rational or "-")
        print(f"{name:<22} {rep.series.d:>2} {last.e:>4} {last.colength:>14} {rep.estimate.alpha:>12.6f} {rat:>10} {dt:>8.2f}")
    print(f"total {total:.1f}s")


if __name__ == "__main__":
    main()
