import io
import json

import numpy as np
import pytest

from dressedgraphs.errors import ConfigError
from dressedgraphs.graph import make_spec
from dressedgraphs.ensemble import (METRICS, McConfig, RunRecord, ScanConfig, extremal, extremal_summary,
                                    load_config, record_fields, run_mc, run_scan, scatter_export,
                                    write_outputs)
from dressedgraphs.pipeline import analyze

RANGES3 = {"x1": (0.0, 1.0), "x2": (0.0, 1.0), "x3": (0.0, 1.0),
           "g1": (-12.0, 0.0), "g2": (-12.0, 0.0), "g3": (-12.0, 0.0)}


@pytest.fixture(scope="module")
def small_scan():
    return run_scan(ScanConfig("Wire1Delta", {"g": [-4.0, 0.0, 3.0], "omega": {"linspace": [-1, 1, 5]}}))


def test_scan_row_major_order(small_scan):
    assert [r.index for r in small_scan] == list(range(15))
    assert [(r.params["g"], r.params["omega"]) for r in small_scan[:6]] == [
        (-4.0, -1.0), (-4.0, -0.5), (-4.0, 0.0), (-4.0, 0.5), (-4.0, 1.0), (0.0, -1.0)]


def test_scan_keeps_failures(small_scan):
    failed = [r for r in small_scan if r.failed]
    assert len(small_scan) == 15
    assert {r.params["omega"] for r in failed} == {-1.0, 1.0}
    assert all(r.reason for r in failed)
    assert all("sum_rule" in r.values for r in small_scan if not r.failed)


def test_single_point_equals_direct_solve():
    (rec,) = run_scan(ScanConfig("Wire1Delta", {"g": [-3.73], "omega": [-0.456]}))
    rep = analyze(make_spec("Wire1Delta", dict(g=-3.73, omega=-0.456)), 25)
    assert rec.beta_xxx == rep.beta.xxx
    assert rec.gamma_xxxx == rep.gamma.xxxx
    assert rec.n_bound == rep.n_bound


def test_range_axis_is_inclusive():
    cfg = ScanConfig("Wire1Delta", {"g": {"range": [-12.0, 12.5, 0.5]}, "omega": {"linspace": [-1, 1, 100]}})
    assert len(cfg.grid["g"]) == 50
    assert cfg.grid["g"][-1] == 12.5
    assert cfg.size == 5000


def test_mc_is_deterministic():
    cfg = McConfig("Wire3Delta", RANGES3, 12, seed=5)
    a, b = run_mc(cfg), run_mc(cfg)
    assert [r.params for r in a.records] == [r.params for r in b.records]
    assert [r.values for r in a.records] == [r.values for r in b.records]
    other = run_mc(McConfig("Wire3Delta", RANGES3, 12, seed=6))
    assert [r.params for r in other.records] != [r.params for r in a.records]


def test_mc_draws_are_indexed():
    cfg = McConfig("Wire3Delta", RANGES3, 20, seed=5)
    short = McConfig("Wire3Delta", RANGES3, 3, seed=5)
    assert [cfg.draw(i) for i in range(3)] == [short.draw(i) for i in range(3)]
    for i in range(20):
        p = cfg.draw(i)
        assert all(lo <= p[k] < hi for k, (lo, hi) in RANGES3.items())


def test_mc_choices_and_fixed():
    cfg = McConfig("StarDelta", {"a": (0.1, 1.0)}, 30, seed=1, choices={"g": [0.0, -2.0]},
                   fixed={"b": 0.3, "c": 0.41})
    draws = [cfg.draw(i) for i in range(30)]
    assert {d["g"] for d in draws} == {0.0, -2.0}
    assert all(d["b"] == 0.3 for d in draws)


def test_extremal_consistency():
    res = run_mc(McConfig("Wire2Delta", {"x1": (0, 1), "x2": (0, 1), "g1": (-12, 0), "g2": (-12, 0)}, 25, 3))
    ok = [r for r in res.records if not r.failed]
    assert all(abs(res.best_beta.beta_lab) >= abs(r.beta_lab) for r in ok)
    assert all(res.best_gamma.gamma_lab >= r.gamma_lab for r in ok)


def test_extremal_ties_go_to_lower_index():
    recs = [RunRecord(i, {}, values={"beta_lab": v}) for i, v in enumerate([0.2, -0.5, 0.5])]
    assert extremal(recs, "beta_lab", absolute=True).index == 1
    assert extremal([RunRecord(0, {}, True, "x")], "beta_lab") is None


def test_scatter_export(small_scan):
    buf = io.StringIO()
    scatter_export(small_scan, ["g", "omega", "beta3", "beta4", "beta_xxx"], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "g,omega,beta3,beta4,beta_xxx"
    assert len(lines) == 16
    assert lines[1].split(",")[2] == "nan"  # failed record at omega = -1


@pytest.mark.parametrize("fields_", [[], ["beta_xxx", "nope"]])
def test_scatter_export_errors(small_scan, fields_):
    with pytest.raises(ConfigError):
        scatter_export(small_scan, fields_, io.StringIO())


def test_scatter_export_needs_records():
    with pytest.raises(ConfigError):
        scatter_export([], ["g"], io.StringIO())


def test_record_fields(small_scan):
    f = record_fields(small_scan)
    assert f[:3] == ["index", "g", "omega"]
    assert f[3:3 + len(METRICS)] == list(METRICS)


@pytest.mark.parametrize("data", [
    {"kind": "scan", "topology": "Wire1Delta", "grid": {}},
    {"kind": "mc", "topology": "Wire1Delta", "ranges": {"g": [1, 0]}, "samples": 3},
    {"kind": "mc", "topology": "Wire1Delta", "ranges": {"g": [0, 1]}, "samples": 0},
    {"kind": "mc", "topology": "Wire1Delta", "ranges": {}, "samples": 3, "bogus": 1},
    {"kind": "sweep", "topology": "Wire1Delta"},
    {"kind": "scan", "topology": "Wire1Delta", "grid": {"g": {"logspace": [0, 1, 3]}}},
])
def test_bad_configs(data):
    with pytest.raises(ConfigError):
        load_config(data)


def test_load_config_from_file(tmp_path):
    p = tmp_path / "mc.json"
    p.write_text(json.dumps({"kind": "mc", "topology": "Wire2Delta", "samples": 4, "seed": 9,
                             "ranges": {"x1": [0, 1], "x2": [0, 1], "g1": [-12, 0], "g2": [-12, 0]}}))
    cfg = load_config(str(p))
    assert isinstance(cfg, McConfig) and cfg.seed == 9 and cfg.ranges["g1"] == (-12, 0)


def test_write_outputs_deterministic(tmp_path, small_scan):
    cfg = ScanConfig("Wire1Delta", {"g": [-4.0, 0.0, 3.0], "omega": {"linspace": [-1, 1, 5]}})
    write_outputs(small_scan, cfg, tmp_path / "a", elapsed=1.0)
    write_outputs(run_scan(cfg), cfg, tmp_path / "b", elapsed=2.0)
    for name in ("records.csv", "extremal.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    meta = json.loads((tmp_path / "a" / "metadata.json").read_text())
    assert meta["sampling_law"] == "uniform"
    assert meta["grid"]["omega"] == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert "numpy" in meta["versions"]


def test_extremal_summary_counts(small_scan):
    s = extremal_summary(small_scan)
    assert s["count"] == 15 and s["failures"] == 6
    assert s["min_gamma"]["values"]["gamma_lab"] <= s["best_gamma"]["values"]["gamma_lab"]


def test_parallel_matches_serial():
    cfg = McConfig("Wire2Delta", {"x1": (0, 1), "x2": (0, 1), "g1": (-12, 0), "g2": (-12, 0)}, 6, 2)
    a, b = run_mc(cfg), run_mc(cfg, workers=2)
    assert [r.values for r in a.records] == [r.values for r in b.records]
    assert np.isfinite(a.best_beta.beta_lab)
