import json
import math

import numpy as np
import pytest

from integrable_pcf.harness import (
    SweepConfig,
    exponent_study,
    fmt,
    gap_study,
    run_sweep,
    subsequence,
    write_outputs,
)
from integrable_pcf.pcf import TestFunction, rho2_at
from integrable_pcf.polynomial import PolynomialPhase
from integrable_pcf.spectrum import SpectrumParams


def cfg(**kw):
    base = {"phi": [1, 0, 0], "samples": 4, "N_grid": [5, 10, 20], "seed": 123}
    base.update(kw)
    return SweepConfig.from_dict(base)


def test_smallest_sweep():
    records, summary = run_sweep(cfg(samples=1, N_grid=[1], alpha=0, beta=0))
    assert len(records) == 1 and records[0].rhobar == (1.0,)
    assert summary["per_N"][0]["variance"] == pytest.approx(1.0)


def test_config_validation():
    with pytest.raises(ValueError):
        cfg(N_grid=[10, 5])
    with pytest.raises(ValueError):
        cfg(samples=0)
    with pytest.raises(ValueError):
        SweepConfig.from_dict({"phi": [1, 0, 0], "bogus": 1})
    c = SweepConfig.from_dict({"phi": "1,0,0", "domain": {"kind": "positive", "T": 2.0}})
    assert c.domain == "positive" and c.T == 2.0


def test_draws_respect_domain():
    records, _ = run_sweep(cfg(samples=30, N_grid=[1], domain="positive", T=0.5))
    assert all(0 <= r.alpha <= 0.5 and 0 <= r.beta <= 0.5 for r in records)


def test_record_recomputable():
    c = cfg()
    records, _ = run_sweep(c)
    r = records[2]
    f = TestFunction.fejer()
    vals = [rho2_at(f, PolynomialPhase((1, 0, 0)), SpectrumParams(n, r.alpha, r.beta)).value for n in range(1, 21)]
    assert r.rhobar[-1] == pytest.approx(math.fsum(vals) / 20, rel=1e-12)
    # streaming equals batch at every grid point
    for N, rb in zip(r.N, r.rhobar):
        assert rb == pytest.approx(math.fsum(vals[:N]) / N, rel=1e-12)


def test_worker_count_independent():
    c = cfg()
    a, sa = run_sweep(c, workers=1)
    b, sb = run_sweep(c, workers=2)
    assert [r.rhobar for r in a] == [r.rhobar for r in b]
    assert sa == sb


def test_failure_isolation():
    records, summary = run_sweep(cfg(poison=[1]))
    assert summary["samples_failed"] == 1 and summary["samples_ok"] == 3
    assert not records[1].ok and "PrecisionError" in records[1].error


def test_byte_identical_outputs(tmp_path):
    c = cfg()
    for d in ("a", "b"):
        records, summary = run_sweep(c)
        write_outputs(tmp_path / d, "sweep", summary, records)
    for name in ("sweep.json", "sweep.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    data = json.loads((tmp_path / "a" / "sweep.json").read_text())
    assert data["samples_ok"] == 4


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(2**70) == str(2**70)
    assert float(fmt(math.pi)) == math.pi


def test_subsequence_table():
    # floor(m (log m)^4) for m = 2..10, evaluated by hand with log m to 6 places
    assert [subsequence(m) for m in range(2, 11)] == [0, 4, 14, 33, 61, 100, 149, 209, 281]


def test_gap_study_small():
    rep = gap_study(cfg(samples=2), range(2, 6))
    for s in rep["samples"]:
        assert s["ok"]
        for row in s["rows"]:
            assert row["identity_ok"]
            assert row["bound_ratio"] <= 1 + 1e-12  # triangle-inequality bound


def test_gap_study_trend():
    rep = gap_study(cfg(samples=3, seed=9), range(4, 16))
    for s in rep["samples"]:
        rel = [r["relative_oscillation"] for r in s["rows"]]
        assert np.mean(rel[-4:]) < np.mean(rel[:4])


def test_exponent_trivial_regime():
    rep = exponent_study(cfg(alpha=0, beta=0), "random", [16, 32, 64, 128], count=1)
    assert rep["rows"][0]["exponent"] == pytest.approx(1.0, abs=1e-9)


def test_exponent_file(tmp_path):
    p = tmp_path / "alphas.txt"
    p.write_text("# alpha, digits\n0.41421356237309504880168872420969807856967187537694807317667973799,60\n1/3\n")
    rep = exponent_study(cfg(), "file", [16, 32, 64], path=p)
    assert len(rep["rows"]) == 2


def test_exponent_cubic_below_trivial():
    rep = exponent_study(SweepConfig.from_dict({"phi": [1, 5, 0, 0]}), "golden", [64, 128, 256, 512])
    row = rep["rows"][0]
    assert row["exponent"] < 1.0 and row["exponent"] <= rep["target"] + 0.2
