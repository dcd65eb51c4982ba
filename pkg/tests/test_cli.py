import csv
import io
import json
import math
import subprocess
import sys

import pytest

from radialbc.cli import main, parse_mode, parse_potential, run
from radialbc import Coulomb, Harmonic, InverseSquare, L2Only, SumOf, U0Strict


def ok(argv):
    code, out, err = run(argv)
    assert code == 0, err
    assert err == ""
    return json.loads(out)


def test_parse_potential():
    assert parse_potential("coulomb:Z=2") == Coulomb(2.0)
    assert parse_potential("harmonic:omega=3", mass=2.0) == Harmonic(3.0, 2.0)
    assert parse_potential("invsq:c=0.5", mass=2.0) == InverseSquare(0.125)
    assert parse_potential("invsq:alpha=0.5") == InverseSquare(0.5)
    s = parse_potential("coulomb:Z=1+invsq:c=1e+0")
    assert isinstance(s, SumOf) and s.terms == (Coulomb(1.0), InverseSquare(0.5))


def test_parse_mode():
    assert parse_mode("u0") == U0Strict()
    assert parse_mode("l2:theta=2,r0=0.5") == L2Only(2.0, 0.5)
    assert parse_mode("l2") == L2Only(0.0, 1.0)


def test_solve_hydrogen():
    doc = ok(["solve", "--potential", "coulomb:Z=1", "--l", "0", "--n", "0"])
    assert list(doc) == ["schema", "problem", "result"]
    assert doc["schema"] == 1
    res = doc["result"]
    assert res["E"] == pytest.approx(-0.5, rel=1e-8)
    assert res["nodes"] == 0 and res["compatible"] is True
    assert abs(res["defect"]) < 1e-6
    assert res["origin_slope"] == pytest.approx(1.0, abs=1e-3)
    assert doc["problem"]["grid"] == {"scheme": "log", "n": 20000,
                                      "r_min": 1e-6, "r_max": 80}


def test_solve_repulsive_strict_exits_2():
    code, out, err = run(["solve", "--potential", "invsq:c=0.5", "--mode", "u0", "--n", "0"])
    assert code == 2 and out == ""
    assert "no bound state" in err and "\n" not in err


def test_solve_repulsive_l2only():
    res = ok(["solve", "--potential", "invsq:c=0.5", "--mode", "l2:theta=1", "--n", "0"])["result"]
    assert res["E"] < 0 and res["compatible"] is False
    assert res["defect"] is None and res["origin"] == "divergent"


def test_indicial():
    ind = ok(["indicial", "--potential", "invsq:c=-0.1875", "--l", "0"])["indicial"]
    assert ind["s_plus"] == 0.75 and ind["s_minus"] == 0.25
    assert ind["classification"] == "limit_circle_window" and ind["ambiguity"] is True


def test_delta_check_trial():
    doc = ok(["delta-check", "--trial", "exp"])
    assert doc["reference"] == pytest.approx(-4 * math.pi)
    for row in doc["rows"]:
        assert abs(row["defect"] + 4 * math.pi) <= 1e-6


def test_delta_check_solution():
    res = ok(["delta-check", "--potential", "coulomb:Z=1", "--n", "1"])["result"]
    assert res["compatible"] is True


def test_oracle_harmonic():
    doc = ok(["oracle", "--potential", "harmonic:omega=1", "--k", "2"])
    h = doc["h"]
    assert doc["eigenvalues"] == pytest.approx([1.5, 3.5], abs=10 * h * h)
    assert doc["problem"]["grid"]["scheme"] == "uniform"


def test_spectrum_json():
    states = ok(["spectrum", "--potential", "coulomb:Z=1", "--n-max", "2"])["states"]
    assert [s["n"] for s in states] == [0, 1, 2]


def test_compare_table_csv():
    code, out, err = run(["compare", "--potential", "invsq:c=0.5",
                          "--thetas", "0.5,1,2", "--format", "csv"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["mode", "theta", "n", "E", "u0_defect", "compatible"]
    assert [r["theta"] for r in rows] == ["0.5", "1", "2"]
    assert all(r["compatible"] == "false" and float(r["E"]) < 0 for r in rows)
    assert out.endswith("\r\n")


def test_compare_includes_strict_rows():
    rows = ok(["compare", "--potential", "coulomb:Z=1+invsq:c=0.5",
               "--thetas", "1", "--n-max", "0"])["rows"]
    assert [(r["mode"], r["theta"]) for r in rows] == [("u0", None), ("l2", 1)]
    assert rows[0]["compatible"] is True and rows[1]["compatible"] is False


def test_json_is_deterministic():
    argv = ["spectrum", "--potential", "harmonic:omega=1", "--r-max", "10", "--n-max", "1"]
    first, second = run(argv), run(argv)
    assert first == second
    assert "1.4999999" in first[1] or "1.5000000" in first[1]


def test_tabulated_file(tmp_path):
    path = tmp_path / "v.csv"
    import numpy as np
    r = np.geomspace(1e-3, 40, 2000)
    path.write_text("# r,V\n" + "".join(f"{a:.17g},{-1 / a:.17g}\n" for a in r))
    res = ok(["solve", "--potential", f"file:{path}", "--r-max", "40"])["result"]
    assert res["E"] == pytest.approx(-0.5, rel=1e-4)


@pytest.mark.parametrize("argv", [
    ["solve", "--potential", "bogus:x=1"],
    ["solve", "--potential", "coulomb:Q=1"],
    ["solve", "--n", "0"],
    ["solve", "--potential", "coulomb:Z=1", "--mode", "weird"],
    ["solve", "--potential", "coulomb:Z=1", "--l", "-1"],
    ["solve", "--potential", "file:/nonexistent/file.csv"],
    ["nosuchcommand"],
    ["oracle", "--potential", "coulomb:Z=1", "--k", "0"],
    ["solve", "--potential", "invsq:c=-1"],
])
def test_errors_single_line_exit_1(argv):
    code, out, err = run(argv)
    assert code == 1 and out == ""
    assert err.startswith("radialbc: error:") and "\n" not in err


def test_main_and_module_entry(capsys):
    assert main(["indicial", "--potential", "coulomb:Z=1"]) == 0
    assert json.loads(capsys.readouterr().out)["indicial"]["s_plus"] == 1.0
    proc = subprocess.run([sys.executable, "-m", "radialbc", "solve", "--potential",
                           "invsq:c=0.5", "--n", "0"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""
    assert len(proc.stderr.strip().splitlines()) == 1
