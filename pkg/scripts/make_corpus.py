"""Regenerate corpus/*.hk and corpus/*.json.

Expected values come from closed formulas and published tables only, never
from the engine, so ``hk verify corpus`` is an independent check.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "corpus"
VARS = ["x", "y", "z", "w"]


def write(name: str, text: str, expected: dict) -> None:
    (OUT / f"{name}.hk").write_text(text.strip() + "\n")
    (OUT / f"{name}.json").write_text(json.dumps(expected, indent=2) + "\n")


def regular(d: int, p: int) -> None:
    v = VARS[:d]
    emax = 3 if d <= 2 else 2
    text = f"# polynomial ring in {d} variables: Kunz equality\np={p}; vars={','.join(v)}; quotient=[]; ideal=[{', '.join(v)}];\nemax={emax};"
    exp = {
        "kunz": True,
        "colengths": {str(e): (p**e) ** d for e in range(emax + 1)},
        "ehk": {"value": "1", "tol": 0.0, "reconstruct": True},
        "multiplicity": 1,
    }
    if d == 2:
        exp["fsig"] = {"sop": ", ".join(v), "emax": 2, "value": "1", "tol": 0.0}
    write(f"regular_d{d}_p{p}", text, exp)


def curve_x5_y5(p: int, emax: int) -> None:
    # λ(R/m^[q]) = 5q + d_e with d_e = -4 (e even), -6 (e odd) for p = 2, 3 mod 5
    cols = {"0": 1}
    for e in range(1, emax + 1):
        q = p**e
        cols[str(e)] = 5 * q - (4 if e % 2 == 0 else 6)
    write(
        f"curve_x5_y5_p{p}",
        f"# plane curve with a 5-fold point\np={p}; vars=x,y; quotient=[x^5 - y^5]; ideal=[x, y];\nemax={emax};",
        {
            "colengths": cols,
            "ehk": {"value": "5", "tol": 0.01, "reconstruct": True},
            "multiplicity": 5,
            "bounds": True,
            "reference": "curve_x5_y5",
        },
    )


def fermat_quartic() -> None:
    # λ = 168/61 * 125^e - 107/61 * 3^e
    cols = {str(e): int(Fraction(168, 61) * 125**e - Fraction(107, 61) * 3**e) for e in range(3)}
    write(
        "fermat_quartic_p5",
        "# quartic threefold; the correction term decays like (3/125)^e, so use Aitken\n"
        "p=5; vars=a,b,c,d; quotient=[a^4 + b^4 + c^4 + d^4]; ideal=[a, b, c, d];\nemax=2; estimator=aitken;",
        {
            "colengths": cols,
            "ehk": {"value": "168/61", "tol": 0.005, "reconstruct": True},
            "multiplicity": 4,
            "bounds": True,
            "reference": "fermat_quartic_3fold",
        },
    )


def quadrics() -> None:
    for rank, eq, val in ((1, "x^2", "2"), (2, "x^2 - y*z", "3/2"), (3, "x*y - z*w", "4/3")):
        write(
            f"quadric_rank{rank}_p7",
            f"p=7; vars=x,y,z,w; quotient=[{eq}]; ideal=[x, y, z, w];\nemax=2;",
            {
                "ehk": {"value": val, "tol": 0.02, "reconstruct": True},
                "multiplicity": 2,
                "bounds": True,
                "reference": f"quadric_rank{rank}",
            },
        )


def ade() -> None:
    for n in (1, 2, 3):
        exp = {
            "ehk": {"value": str(2 - Fraction(1, n + 1)), "tol": 0.02, "reconstruct": True},
            "multiplicity": 2,
            "bounds": True,
            "reference": f"A{n}",
        }
        if n == 1:
            exp["wy_attained"] = {"tol": 0.02}
            exp["fsig"] = {"sop": "x + y, z", "emax": 2, "value": "1/2", "tol": 0.05}
        write(f"A{n}_p5", f"p=5; vars=x,y,z; quotient=[x*y + z^{n + 1}]; ideal=[x, y, z];\nemax=4;", exp)
    write(
        "D4_p7",
        "p=7; vars=x,y,z; quotient=[x^2 + y*z^2 + y^3]; ideal=[x, y, z];\nemax=3;",
        {
            "ehk": {"value": "15/8", "tol": 0.02, "reconstruct": True},
            "multiplicity": 2,
            "bounds": True,
            "reference": "D4",
            "fsig": {"sop": "y, z", "emax": 3, "value": "1/8", "tol": 0.01},
        },
    )
    write(
        "E6_p7",
        "p=7; vars=x,y,z; quotient=[x^2 + y^3 + z^4]; ideal=[x, y, z];\nemax=3;",
        {
            "ehk": {"value": "47/24", "tol": 0.02, "reconstruct": True},
            "multiplicity": 2,
            "bounds": True,
            "reference": "E6",
            "fsig": {"sop": "y, z", "emax": 3, "value": "1/24", "tol": 0.01},
        },
    )


def cubics() -> None:
    write(
        "cubic_smooth_p7",
        "# cone over a smooth plane cubic\np=7; vars=x,y,z; quotient=[x^3 + y^3 + z^3]; ideal=[x, y, z];\nemax=3;",
        {
            "ehk": {"value": "9/4", "tol": 0.03, "reconstruct": True},
            "multiplicity": 3,
            "bounds": True,
            "reference": "cubic_smooth",
        },
    )
    write(
        "cubic_nodal_p7",
        "# cone over the nodal cubic y^2 z = x^3 + x^2 z (node at [0:0:1])\n"
        "p=7; vars=x,y,z; quotient=[y^2*z - x^3 - x^2*z]; ideal=[x, y, z];\nemax=3;",
        {
            "ehk": {"value": "7/3", "tol": 0.03, "reconstruct": True},
            "multiplicity": 3,
            "bounds": True,
            "reference": "cubic_nodal",
            "fsig": {"sop": "x, y - z", "emax": 3, "max": 0.1, "decreasing": True},
        },
    )


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for d in (1, 2, 3, 4):
        for p in (2, 5):
            regular(d, p)
    curve_x5_y5(2, 9)
    curve_x5_y5(7, 6)
    fermat_quartic()
    quadrics()
    ade()
    cubics()
    print(f"wrote {len(list(OUT.glob('*.hk')))} fixtures to {OUT}")


if __name__ == "__main__":
    main()
