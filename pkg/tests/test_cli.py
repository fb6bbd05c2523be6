import json
import os
import shutil
import subprocess
import sys

import pytest

from hkcalc import ENGINE_VERSION
from hkcalc.cache import CACHE_FILE, ColengthCache, sample_key
from hkcalc.cli import main

from conftest import CORPUS_DIR

A1 = "p=5; vars=x,y,z; quotient=[x*y + z^2]; ideal=[x, y, z];"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_timing(d: dict) -> dict:
    d = dict(d)
    d.pop("timing", None)
    d["provenance"] = {k: v for k, v in d["provenance"].items() if k != "cache_hits"}
    return d


# ---------------------------------------------------------------- compute


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", A1, "--emax", "2")
    assert code == 0
    rep = json.loads(out)
    assert [s["colength"] for s in rep["series"]] == [1, 37, 937]
    assert rep["estimate"]["alpha_rational"] == [3, 2]
    assert rep["estimate"]["e_I"] == pytest.approx(2)
    assert rep["problem"]["reference"]["id"] == "A1"
    assert rep["provenance"]["engine"] == ENGINE_VERSION
    assert {b["name"] for b in rep["bounds"]} >= {"wy-dim2", "blickle-enescu", "hanes"}
    assert all(b["satisfied"] is not False for b in rep["bounds"] if b["applicable"])


def test_compute_json_deterministic(capsys):
    a = json.loads(run(capsys, "compute", A1, "--emax", "2")[1])
    b = json.loads(run(capsys, "compute", A1, "--emax", "2")[1])
    assert strip_timing(a) == strip_timing(b)


def test_compute_table_and_csv(capsys):
    code, out, _ = run(capsys, "compute", A1, "--emax", "2", "--table")
    assert code == 0 and "e_HK (two-point)" in out and "3/2" in out
    code, out, _ = run(capsys, "compute", A1, "--emax", "2", "--csv")
    assert code == 0
    assert out.splitlines()[0] == "e,q,colength,ratio"
    assert out.splitlines()[2].startswith("1,5,37,")


def test_compute_from_file_and_stdin(capsys, monkeypatch, tmp_path):
    f = tmp_path / "a1.hk"
    f.write_text(A1)
    code, out, _ = run(capsys, "compute", str(f), "--emax", "1", "--no-multiplicity")
    assert code == 0 and json.loads(out)["bounds"] == []
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(A1))
    code, out, _ = run(capsys, "compute", "-", "--emax", "1", "--no-multiplicity")
    assert code == 0 and [s["colength"] for s in json.loads(out)["series"]] == [1, 37]


@pytest.mark.parametrize("order", ["deglex", "lex"])
def test_compute_order_does_not_change_colengths(capsys, order):
    code, out, _ = run(capsys, "compute", A1, "--emax", "2", "--order", order, "--no-multiplicity")
    assert code == 0
    rep = json.loads(out)
    assert rep["problem"]["order"] == order
    assert [s["colength"] for s in rep["series"]] == [1, 37, 937]


# ---------------------------------------------------------------- exit codes


@pytest.mark.parametrize(
    "argv,code,msg",
    [
        (["compute", "p=5; vars=x; quotient=[]; ideal=[x +];"], 1, "line 1, column"),
        (["compute", "/nonexistent/file.hk"], 1, "error"),
        (["compute", "p=5; vars=x,y; quotient=[]; ideal=[x^2 - x, y];"], 2, "support off origin"),
        (["compute", "p=5; vars=x,y,z; quotient=[]; ideal=[x, y];"], 2, "infinite colength"),
        (["fsig", A1, "--sop", "x, x"], 2, "not a system of parameters"),
        (["compute", A1, "--emax", "9"], 3, "resource cap exceeded"),
        (["compute", A1, "--emax", "3", "--max-colength", "100"], 3, "exceeds cap"),
    ],
)
def test_exit_codes(capsys, argv, code, msg):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert msg in err


# ---------------------------------------------------------------- fsig and bounds


def test_fsig(capsys):
    code, out, _ = run(capsys, "fsig", A1, "--sop", "x + y, z", "--emax", "2")
    assert code == 0
    rep = json.loads(out)
    assert [x["a_q"] for x in rep["splitting"]] == [1, 13, 313]
    assert rep["estimate"]["s"] == pytest.approx(0.5, abs=5e-2)
    assert rep["reference"] == {"id": "A1", "s": "1/2"}


def test_fsig_regular_exact(capsys):
    code, out, _ = run(capsys, "fsig", "p=5; vars=x,y; quotient=[]; ideal=[x, y];", "--sop", "x, y", "--emax", "2")
    assert code == 0
    assert json.loads(out)["estimate"]["s"] == 1.0


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "2", "--p", "5", "--e", "2", "--t", "3", "--mu", "3",
                       "--hypersurface", "--alpha", "1.5")
    assert code == 0
    rep = json.loads(out)
    got = {b["name"]: b for b in rep["bounds"]}
    assert got["wy-dim2"]["exact"] == "3/2"
    assert got["wy-dim2"]["satisfied"] is True
    assert got["blickle-enescu"]["exact"] == "51/50"


def test_bounds_command_flags_violation(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "2", "--p", "5", "--e", "2", "--t", "3", "--cm", "--alpha", "1.1")
    assert code == 0
    got = {b["name"]: b for b in json.loads(out)["bounds"]}
    assert got["wy-dim2"]["satisfied"] is False


# ---------------------------------------------------------------- cache


def test_cache_cold_and_warm_identical(capsys, tmp_path):
    args = ["compute", A1, "--emax", "2", "--cache", str(tmp_path)]
    cold = json.loads(run(capsys, *args)[1])
    warm = json.loads(run(capsys, *args)[1])
    assert cold["provenance"]["cache_hits"] == 0
    assert warm["provenance"]["cache_hits"] == 3
    assert strip_timing(cold) == strip_timing(warm)


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("HK_CACHE_DIR", str(tmp_path))
    run(capsys, "compute", A1, "--emax", "1", "--no-multiplicity")
    assert (tmp_path / CACHE_FILE).exists()


def test_cache_torn_line_and_garbage(tmp_path):
    c = ColengthCache(tmp_path)
    c.put("k1", 37)
    with open(tmp_path / CACHE_FILE, "a") as fh:
        fh.write("not json\n")
        fh.write('{"key": "k2", "colength": 9')  # torn trailing write
    fresh = ColengthCache(tmp_path)
    assert fresh.get("k1") == 37
    assert fresh.get("k2") is None
    assert fresh.hits == 1


def test_cache_version_bump_invalidates(tmp_path):
    ColengthCache(tmp_path, version="v1").put("k", 5)
    assert ColengthCache(tmp_path, version="v1").get("k") == 5
    assert ColengthCache(tmp_path, version="v2").get("k") is None


def test_cache_unwritable_is_not_fatal(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    c = ColengthCache(blocker / "sub")  # parent is a regular file
    c.put("k", 1)
    assert not c.writable
    assert c.get("k") == 1


def test_sample_key_stable():
    k = sample_key((5, ("x",), (), ("x",), "degrevlex"), 2)
    assert k == sample_key((5, ("x",), (), ("x",), "degrevlex"), 2)
    assert k != sample_key((5, ("x",), (), ("x",), "degrevlex"), 3)
    assert len(k) == 64


# ---------------------------------------------------------------- verify


def test_verify_filter_kunz(capsys):
    code, out, _ = run(capsys, "verify", str(CORPUS_DIR), "--filter", "kunz")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert lines and all(":kunz" in l for l in lines)
    assert all(l.startswith("PASS") for l in lines)


def test_verify_corrupted_fixture(capsys, tmp_path):
    for name in ("regular_d2_p5.hk", "regular_d2_p5.json"):
        shutil.copy(CORPUS_DIR / name, tmp_path / name)
    exp = json.loads((tmp_path / "regular_d2_p5.json").read_text())
    exp["colengths"]["1"] += 1
    (tmp_path / "regular_d2_p5.json").write_text(json.dumps(exp))
    code, out, err = run(capsys, "verify", str(tmp_path))
    assert code == 4
    assert "FAIL  regular_d2_p5:colength" in out
    assert "regular_d2_p5" in err


def test_verify_budget(capsys):
    code, out, _ = run(capsys, "verify", str(CORPUS_DIR), "--budget", "0")
    assert code == 4
    assert "budget" in out


def test_console_script_entry_point():
    """The installed module runs as a program."""
    env = dict(os.environ)
    r = subprocess.run(
        [sys.executable, "-m", "hkcalc.cli", "bounds", "--d", "2", "--p", "5"],
        capture_output=True, text=True, env=env, timeout=60,
    )
    assert r.returncode == 0
    assert json.loads(r.stdout)["d"] == 2


def test_fsig_notes_non_hypersurface(capsys):
    text = "p=5; vars=x,y,z,w; quotient=[x*y + z^2, w]; ideal=[x, y, z, w];"
    code, out, _ = run(capsys, "fsig", text, "--sop", "x + y, z", "--emax", "1")
    assert code == 0
    assert any("Cohen-Macaulay" in n for n in json.loads(out)["notes"])
    code, out, _ = run(capsys, "fsig", A1, "--sop", "x + y, z", "--emax", "1")
    assert json.loads(out)["notes"] == []
