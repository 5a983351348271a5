"""End-to-end command-line behavior: scans, caching, suites, exit codes."""

import json
import math
import os

import pytest

from annealed_ising import build_table, critical_beta, finite_pressure
from annealed_ising.cli import main
from annealed_ising.matching import cache_path

BC3 = critical_beta(3)


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


# ---------------------------------------------------------------------------
# gtable


def test_gtable_writes_and_caches(tmp_path):
    out = tmp_path / "table.csv"
    args = [
        "gtable",
        "--d", "3",
        "--n", "100",
        "--beta", repr(BC3),
        "--cache-dir", str(tmp_path / "cache"),
        "--out", str(out),
    ]
    assert main(args) == 0
    header, rows = read_csv(out)
    assert header == ["j", "log_g"]
    assert len(rows) == 101
    assert float(rows[0]["log_g"]) == 0.0
    assert float(rows[100]["log_g"]) == 0.0
    cached = cache_path(tmp_path / "cache", 3, 100, BC3)
    stamp = cached.stat().st_mtime_ns
    assert main(args) == 0  # second run hits the cache
    assert cached.stat().st_mtime_ns == stamp


def test_gtable_usage_errors(tmp_path):
    assert main(["gtable", "--d", "3", "--n", "33", "--beta", "0.5"]) == 2  # d*n odd
    assert main(["gtable", "--d", "3", "--n-list", "10,20", "--beta", "0.5"]) == 2
    assert main(["gtable", "--d", "3", "--n", "10"]) == 2  # no beta at all


# ---------------------------------------------------------------------------
# thermo


def test_thermo_limit_scan_straddles_transition(tmp_path):
    out = tmp_path / "scan.csv"
    rc = main(
        ["thermo", "--d", "3", "--beta-range", "0.0:0.8:9", "--B", "0", "--out", str(out)]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert header == ["beta", "B", "psi", "M", "chi", "C", "t_hat"]
    assert len(rows) == 9
    betas = [float(r["beta"]) for r in rows]
    assert betas == sorted(betas) and betas[0] == 0.0
    assert float(rows[0]["psi"]) == pytest.approx(math.log(2.0), rel=1e-14)
    assert float(rows[0]["M"]) == 0.0
    assert float(rows[0]["chi"]) == 1.0
    # spontaneous order above the transition (beta_c ~ 0.549), none below
    for b, r in zip(betas, rows):
        if b < BC3:
            assert float(r["M"]) == 0.0
        else:
            assert float(r["M"]) > 0.1
    # susceptibility peaks at the grid point nearest the transition (0.5)
    chis = [float(r["chi"]) for r in rows]
    assert chis.index(max(chis)) == 5
    # the heat jumps across it: the first ordered row sits far above the last
    # disordered one
    cs = [float(r["C"]) for r in rows]
    assert cs[6] - cs[5] > 3.0


def test_thermo_magnetization_monotone_in_field(tmp_path):
    out = tmp_path / "mb.csv"
    assert main(["thermo", "--d", "3", "--beta", "0.4", "--B-range", "0.0:0.5:6", "--out", str(out)]) == 0
    _, rows = read_csv(out)
    ms = [float(r["M"]) for r in rows]
    assert ms == sorted(ms)
    assert ms[0] == 0.0 and ms[-1] > 0.5


def test_thermo_finite_mode_matches_library(tmp_path, cache_dir):
    out = tmp_path / "fin.csv"
    rc = main(
        [
            "thermo",
            "--d", "3",
            "--beta", "0.4",
            "--B", "0.1",
            "--n-list", "100,200",
            "--cache-dir", cache_dir,
            "--out", str(out),
        ]
    )
    assert rc == 0
    header, rows = read_csv(out)
    assert header == ["n", "beta", "B", "psi_n", "M_n", "chi_n"]
    assert [r["n"] for r in rows] == ["100", "200"]
    t = build_table(3, 100, 0.4, cache_dir=cache_dir)
    assert float(rows[0]["psi_n"]) == finite_pressure(t, 0.1)  # 17-digit round trip


def test_thermo_json_output(tmp_path):
    out = tmp_path / "scan.json"
    assert main(["thermo", "--d", "3", "--beta", "0.4", "--B", "0.0", "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["beta", "B", "psi", "M", "chi", "C", "t_hat"]
    assert len(doc["rows"]) == 1
    row = dict(zip(doc["columns"], doc["rows"][0]))
    assert row["M"] == 0.0 and row["t_hat"] == 0.5
    assert row["beta"] == 0.4


def test_thermo_reports_unreachable_roots_and_continues(tmp_path, capsys):
    out = tmp_path / "bad.csv"
    rc = main(["thermo", "--d", "3", "--beta", "0.3", "--B", "50", "--out", str(out)])
    assert rc == 0
    _, rows = read_csv(out)
    assert rows[0]["psi"] == "nan" and rows[0]["M"] == "nan"
    assert "warning" in capsys.readouterr().err


def test_flag_conflicts_are_usage_errors():
    assert main(["thermo", "--d", "3", "--beta", "0.3", "--beta-range", "0.1:0.2:2"]) == 2
    assert main(["thermo", "--d", "3", "--beta", "0.3", "--B", "0.1", "--B-range", "0:1:2"]) == 2
    assert main(["thermo", "--d", "3", "--beta-range", "0.2:0.1"]) == 2  # malformed range
    assert main(["thermo", "--d", "0", "--beta", "0.3"]) == 2


# ---------------------------------------------------------------------------
# verify


def test_verify_exit_codes():
    assert main(["verify", "--suite", "taylor", "--d", "4"]) == 0
    assert main(["verify", "--suite", "jump", "--d", "3"]) == 1  # honest red


def test_verify_unknown_suite_is_usage_error():
    # argparse rejects the choice; main converts the SystemExit to code 2
    assert main(["verify", "--suite", "nonsense", "--d", "3"]) == 2
    assert main(["verify", "--d", "3"]) == 2  # --suite is required


def test_verify_matching_report(tmp_path):
    out = tmp_path / "rep.json"
    assert main(["verify", "--suite", "matching", "--d", "3", "--seed", "11", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["suite"] == "matching" and rep["pass"] is True
    names = [c["check"] for c in rep["checks"]]
    assert names == ["pairing_law_exact", "sampler_matches_law", "table_identities"]
    assert all(c["pass"] for c in rep["checks"])


def test_verify_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "--suite", "matching", "--d", "3", "--seed", "123", "--out"]
    assert main(argv + [str(a)]) == 0
    assert main(argv + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_scaling_writes_sibling_scan(tmp_path, cache_dir):
    out = tmp_path / "scaling.json"
    rc = main(
        [
            "verify",
            "--suite", "scaling",
            "--d", "3",
            "--n-list", "250,500",
            "--cache-dir", cache_dir,
            "--out", str(out),
        ]
    )
    assert rc == 1  # transform tolerances unreachable at these sizes
    rep = json.loads(out.read_text())
    assert rep["checks"][0]["check"] == "scaling_limit"
    scan = tmp_path / "scan.csv"
    header, rows = read_csv(scan)
    assert header == ["n", "moment2", "moment4", "ks_distance"]
    assert [r["n"] for r in rows] == ["250", "500"]
    assert float(rows[1]["ks_distance"]) < float(rows[0]["ks_distance"])


def test_verify_finiten_writes_sibling_spinlaw(tmp_path, cache_dir):
    out = tmp_path / "finiten.json"
    rc = main(
        [
            "verify",
            "--suite", "finiten",
            "--d", "3",
            "--n-list", "250,500",
            "--cache-dir", cache_dir,
            "--out", str(out),
        ]
    )
    assert rc == 1  # the critical-window tail is far above n^-4 at these n
    rep = json.loads(out.read_text())
    names = [c["check"] for c in rep["checks"]]
    assert names[:3] == ["free_spin_closed_forms", "pressure_gap_shrinks", "derivative_consistency"]
    assert all(c["pass"] for c in rep["checks"][:3])
    assert (tmp_path / "spinlaw.csv").exists()
    assert "np.float64" not in (tmp_path / "spinlaw.csv").read_text()


def test_outputs_land_exactly_where_asked(tmp_path):
    nested = tmp_path / "deep" / "dir"
    os.makedirs(nested)
    out = nested / "t.csv"
    assert main(["thermo", "--d", "3", "--beta", "0.0", "--B", "0", "--out", str(out)]) == 0
    assert out.exists()
