import csv
import json

import pytest

from integrable_pcf.cli import main


def run(args, capsys):
    assert main(args) == 0
    return capsys.readouterr().out


def test_spectrum(tmp_path, capsys):
    out = tmp_path / "s.csv"
    run(["spectrum", "--phi", "1,0,0", "--alpha", "1", "--n", "2", "--window", "1", "--out", str(out)], capsys)
    rows = list(csv.DictReader(out.open()))
    assert [r["ell"] for r in rows] == ["-1", "0", "1"]
    assert float(rows[1]["abs2"]) == 4.0


def test_pcf(capsys):
    text = run(["pcf", "--phi", "1,0,0", "--n", "3", "5"], capsys)
    rows = list(csv.DictReader(text.splitlines()))
    assert [float(r["rho2"]) for r in rows] == pytest.approx([3.0, 5.0], rel=1e-12)
    text = run(["pcf", "--phi", "1,0,0", "--cumulative-N", "5"], capsys)
    assert float(list(csv.DictReader(text.splitlines()))[-1]["rho2"]) == pytest.approx(3.0)


def test_pcf_golden(capsys):
    text = run(["pcf", "--phi", "1,0,0", "--alpha", "golden", "--n", "64"], capsys)
    assert float(list(csv.DictReader(text.splitlines()))[0]["rho2"]) > 1


def test_cf(capsys):
    data = json.loads(run(["cf", "--value", "355/113", "--report", "identities", "--n", "4", "--k", "3"], capsys))
    assert data["quotients"] == ["3", "7", "16"]
    assert data["gcd_profile"][1] == [1, "2"]
    data = json.loads(run(["cf", "--random-samples", "5", "--report", "levy", "--terms", "40"], capsys))
    assert len(data["samples"]) == 5 and data["mean"] > 1


def test_weyl(capsys):
    data = json.loads(run(["weyl", "--phi", "1,0,0", "--alpha", "golden", "--n-grid", "32", "64"], capsys))
    assert len(data["results"]) == 2
    assert all(r["holds"] for res in data["results"] for r in res["reports"] if r["explicit"])


def test_sweep_gaps_exponents(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"phi": "1,0,0", "samples": 2, "N_grid": [4, 8], "n_grid": [8, 16, 32],
                                "m_range": [2, 5], "alpha_selection": "golden"}))
    for cmd in ("sweep", "gaps", "exponents"):
        run([cmd, "--config", str(conf), "--seed", "3", "--out-dir", str(tmp_path)], capsys)
    assert (tmp_path / "sweep.csv").exists() and (tmp_path / "gaps.json").exists()
    assert json.loads((tmp_path / "exponents.json").read_text())["selection"] == "golden"


def test_precision_error_exit(capsys):
    code = main(["pcf", "--phi", "1,0,0", "--alpha", "0." + "1" * 60, "--precision", "50",
                 "--n", str(10**40)])
    assert code == 2
