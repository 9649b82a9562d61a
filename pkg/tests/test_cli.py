import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from projtheta import __version__
from projtheta.cli import CSV_FIELDS, main, round3, truncate

DOCS = Path(__file__).resolve().parents[1] / "docs"
EX23 = "c example graph\np edge 3 2\ne 1 3\ne 2 3\n"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ex23(tmp_path):
    path = tmp_path / "ex23.col"
    path.write_text(EX23)
    return str(path)


def test_truncate_and_round():
    assert truncate(29 / 9) == "3.222" and round3(29 / 9) == "3.222"
    assert truncate(33 / 9) == "3.666" and round3(33 / 9) == "3.667"
    assert truncate(3.99999998) == "4.000"
    assert truncate(1.0) == "1.000" and truncate(2.0004) == "2.000"


def test_bounds_table1_row(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "clique_union:4,3,2", "--complement",
                       "--bounds", "that,that'", "--json")
    assert code == 0
    rep = json.loads(out)
    vals = {e["name"]: e for e in rep["bounds"]}
    assert vals["that"]["display"] == "3.222"
    assert vals["that'"]["display_rounded"] == "3.968"
    assert rep["graph"]["complement"] is True


def test_bounds_complete_text(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "complete:5", "--bounds", "that")
    assert code == 0 and "1.000" in out


def test_bounds_file_theta_vs_plus(capsys, ex23):
    code, out, _ = run(capsys, "bounds", ex23, "--bounds", "theta,theta+", "--json")
    assert code == 0
    vals = {e["name"]: e["value"] for e in json.loads(out)["bounds"]}
    assert vals["theta"] <= vals["theta+"] + 1e-5


def test_bounds_json_schema(capsys, ex23):
    jsonschema = pytest.importorskip("jsonschema")
    code, out, _ = run(capsys, "bounds", ex23, "--exact", "--json")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, json.loads((DOCS / "bounds_report.schema.json").read_text()))
    assert rep["version"] == __version__ and rep["exact"]["chi"] == 2
    for e in rep["bounds"]:
        assert e["status"] == "optimal" and e["residuals"]["primal"] <= 1e-7


def test_bounds_csv_columns(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "cycle:5", "--exact", "--csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == CSV_FIELDS
    assert [r[0] for r in rows[1:]] == ["theta", "theta-", "theta+", "that", "that'",
                                        "chi", "omega", "alpha"]
    assert rows[1][2] == "2.236"
    # stable across runs apart from floating residual noise
    code, again, _ = run(capsys, "bounds", "--family", "cycle:5", "--exact", "--csv")
    assert [r[:4] for r in csv.reader(io.StringIO(again))] == [r[:4] for r in rows]


def test_exit_codes(capsys, tmp_path, ex23):
    assert run(capsys, "exact", ex23)[0] == 0
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 3 1\ne 1 1\n")
    code, _, err = run(capsys, "bounds", str(bad))
    assert code == 1 and "error" in err
    assert run(capsys, "bounds", str(tmp_path / "missing.col"))[0] == 1
    assert run(capsys, "exact", "--family", "complete:13")[0] == 1
    assert run(capsys, "bounds", "--family", "nosuch:3")[0] == 1
    assert run(capsys, "bounds", "--family", "cycle:5", "--bounds", "lovasz")[0] == 1
    assert run(capsys, "bounds", "--family", "cycle:5", "--tol", "0")[0] == 1
    assert run(capsys, "bounds", "--family", "cycle:7", "--exact", "--json")[0] == 0


def test_solver_failure_exit_code(capsys, monkeypatch):
    import projtheta.cli as cli
    from projtheta.conic import SolverConfig
    monkeypatch.setattr(cli, "solver_config", lambda tol: SolverConfig(max_iter=2))
    code, _, err = run(capsys, "bounds", "--family", "cycle:7", "--bounds", "that")
    assert code == 2 and "max_iterations" in err


def test_tolerance_env(capsys, monkeypatch):
    monkeypatch.setenv("PROJTHETA_TOL", "1e-6")
    code, out, _ = run(capsys, "bounds", "--family", "cycle:5", "--bounds", "that", "--json")
    assert code == 0 and json.loads(out)["solver"]["gap_tol"] == 1e-6
    monkeypatch.setenv("PROJTHETA_TOL", "abc")
    assert run(capsys, "bounds", "--family", "cycle:5", "--bounds", "that")[0] == 1


def test_exact_examples(capsys, ex23):
    code, out, _ = run(capsys, "exact", ex23, "--json")
    rep = json.loads(out)
    assert (rep["chi"], rep["omega"], rep["alpha"], rep["chi_via_projection"]) == (2, 2, 2, 2)
    rep = json.loads(run(capsys, "exact", "--family", "cycle:5", "--json")[1])
    assert (rep["chi"], rep["omega"], rep["alpha"]) == (3, 2, 2)
    rep = json.loads(run(capsys, "exact", "--family", "complete:1", "--json")[1])
    assert (rep["chi"], rep["omega"], rep["alpha"]) == (1, 1, 1)
    code, out, _ = run(capsys, "exact", "--family", "cycle:5")
    assert code == 0 and "agrees" in out


def test_reproduce_tables(capsys, tmp_path):
    code, out, _ = run(capsys, "reproduce-tables", str(tmp_path), "--jobs", "2")
    assert code == 0
    t1 = list(csv.DictReader((tmp_path / "table1.csv").open()))
    t2 = list(csv.DictReader((tmp_path / "table2.csv").open()))
    assert len(t1) == len(t2) == 7
    assert list(t1[0])[:4] == ["n1", "n2", "n3", "that"]
    row = {(r["n1"], r["n2"], r["n3"]): r for r in t1}
    assert (row["3", "3", "3"]["that_3dp"], row["3", "3", "3"]["that_prime_3dp"],
            row["3", "3", "3"]["theta_3dp"]) == ("3.000", "3.000", "3.000")
    assert row["7", "1", "1"]["that_3dp"] == "5.666"
    # printed 6.985: truncation fits this row, rounding fits 3.968 in row (4,3,2)
    assert row["7", "1", "1"]["that_prime_3dp"] == "6.985"
    assert abs(float(row["7", "1", "1"]["that_prime"]) - 6.985) <= 2e-3
    row2 = {(r["n1"], r["m"]): r for r in t2}
    assert row2["4", "5"]["that_3dp"] == "2.333"
    assert row2["4", "5"]["that_prime_round3"] == "3.851"
    assert row2["4", "5"]["theta_3dp"] == "4.000"
    assert all(r["status"] == "ok" for r in t1 + t2)


def test_search_examples(capsys):
    code, out, _ = run(capsys, "search-nonmonotone", "--family", "clique_plus_isolated:2,7",
                       "--complement", "--json")
    assert code == 0
    (w,) = json.loads(out)
    assert len(w["subset"]) == 3
    assert w["that_subgraph"] == pytest.approx(5 / 3, abs=1e-5)
    assert w["that_graph"] == pytest.approx(11 / 9, abs=1e-5)
    code, out, _ = run(capsys, "search-nonmonotone", "--max-vertices", "2")
    assert code == 0 and "none found" in out
    code, out, _ = run(capsys, "search-nonmonotone", *sum([["--family", f"complete:{m}"]
                                                           for m in range(2, 8)], []))
    assert code == 0 and "none found" in out
    assert run(capsys, "search-nonmonotone", "--max-vertices", "10")[0] == 1


def test_entry_point_runs():
    out = subprocess.run([sys.executable, "-m", "projtheta", "--version"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == f"projtheta {__version__}"
    help_text = subprocess.run([sys.executable, "-m", "projtheta", "bounds", "--help"],
                               capture_output=True, text=True, check=True).stdout
    assert "clique_union:4,3,2" in help_text
