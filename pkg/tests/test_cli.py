import json
import subprocess
import sys

import pytest

from dressedgraphs.cli import main

WIRE = {"topology": "Wire1Delta", "edges": [{"length": 1.0, "angle": 0.0}],
        "deltas": [{"g": -3.73, "position": 0.272}]}
BOX = {"topology": "Wire1Delta", "edges": [{"length": 1.0}], "deltas": [{"g": 0.0, "position": 0.3}]}
DEGENERATE_STAR = {"topology": "StarDelta",
                   "edges": [{"length": 0.2, "angle": 0.0}, {"length": 0.3, "angle": 2.0},
                             {"length": 0.5, "angle": -2.0}],
                   "deltas": [{"g": -1.0}]}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def error_of(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


def test_solve_box(tmp_path):
    assert main(["solve", write(tmp_path, "box.json", BOX), "--out", str(tmp_path / "o")]) == 0
    rep = json.loads((tmp_path / "o" / "report.json").read_text())
    assert max(abs(v) for v in rep["beta"]["components"].values()) < 1e-10
    assert rep["n_bound"] == 0


def test_solve_best_wire_to_stdout(tmp_path, capsys):
    assert main(["solve", write(tmp_path, "w.json", WIRE)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["beta"]["components"]["xxx"] == pytest.approx(0.680, abs=0.005)


def test_solve_dumps(tmp_path):
    out = tmp_path / "o"
    assert main(["solve", write(tmp_path, "w.json", WIRE), "--out", str(out), "--states", "10",
                 "--dump-states", "--dump-moments"]) == 0
    assert (out / "states.csv").read_text().startswith("state,energy,edge,s,x,y,psi")
    assert len((out / "moments.csv").read_text().splitlines()) == 1 + 100


def test_malformed_json_exits_2(tmp_path, capsys):
    assert main(["solve", write(tmp_path, "bad.json", "{not json")]) == 2
    err = error_of(capsys)
    assert err["exit_code"] == 2 and err["error"] == "InputError"


def test_missing_file_exits_2(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.json")]) == 2


def test_invalid_spec_exits_3(tmp_path, capsys):
    assert main(["solve", write(tmp_path, "x.json", {"topology": "Wire1Delta"})]) == 3
    assert error_of(capsys)["error"] == "ValidationError"


def test_solver_failure_exits_4(tmp_path, capsys):
    assert main(["solve", write(tmp_path, "s.json", DEGENERATE_STAR)]) == 4
    assert error_of(capsys)["error"] == "DegeneracyError"


def test_unknown_figure_exits_3(tmp_path, capsys):
    assert main(["plotdata", "no-such-figure", "--out", str(tmp_path)]) == 3
    assert error_of(capsys)["exit_code"] == 3


def test_unknown_suite_exits_3(tmp_path, capsys):
    assert main(["validate", "no-such-suite", "--out", str(tmp_path)]) == 3


def test_validate_scale_invariance(tmp_path):
    assert main(["validate", "scale-invariance", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "validate-scale-invariance.csv").read_text().splitlines()
    assert lines[0] == "quantity,graph_value,reference_value,abs_diff,tolerance,pass"
    assert all(line.endswith(",1") for line in lines[1:])


def test_validate_failing_row_exits_5(tmp_path, monkeypatch):
    from dressedgraphs import validation
    monkeypatch.setitem(validation.SUITES, "sum-rules",
                        lambda **kw: [validation.Row("forced", 1.0, 0.0, 1.0, 0.5, False)])
    assert main(["validate", "sum-rules", "--out", str(tmp_path)]) == 5


def test_scan_and_mc_are_byte_identical(tmp_path):
    scan = write(tmp_path, "scan.json", {"topology": "Wire1Delta",
                                         "grid": {"g": [-4, 2], "omega": {"linspace": [-0.5, 0.5, 3]}}})
    mc = write(tmp_path, "mc.json", {"topology": "Wire2Delta", "samples": 5, "seed": 4,
                                     "ranges": {"x1": [0, 1], "x2": [0, 1], "g1": [-12, 0], "g2": [-12, 0]}})
    for run in ("a", "b"):
        assert main(["scan", scan, "--out", str(tmp_path / run / "scan")]) == 0
        assert main(["mc", mc, "--out", str(tmp_path / run / "mc")]) == 0
    for sub in ("scan", "mc"):
        for name in ("records.csv", "extremal.json"):
            assert (tmp_path / "a" / sub / name).read_bytes() == (tmp_path / "b" / sub / name).read_bytes()
        meta_a = json.loads((tmp_path / "a" / sub / "metadata.json").read_text())
        meta_b = json.loads((tmp_path / "b" / sub / "metadata.json").read_text())
        meta_a.pop("timing"), meta_b.pop("timing")
        assert meta_a == meta_b


def test_mc_seed_override(tmp_path):
    mc = write(tmp_path, "mc.json", {"topology": "Wire2Delta", "samples": 3, "seed": 4,
                                     "ranges": {"x1": [0, 1], "x2": [0, 1], "g1": [-12, 0], "g2": [-12, 0]}})
    assert main(["mc", mc, "--seed", "8", "--out", str(tmp_path / "o")]) == 0
    assert json.loads((tmp_path / "o" / "metadata.json").read_text())["seed"] == 8


def test_plotdata_sumrule(tmp_path, capsys):
    assert main(["plotdata", "sumrule-vs-M", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "sumrule-vs-M__residuals.csv").read_text().splitlines()
    assert lines[0] == "M,residual" and len(lines) == 26


def test_plotdata_states_at_optimum(tmp_path):
    assert main(["plotdata", "states-at-optimum", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "states-at-optimum__best-beta.csv").read_text().splitlines()
    assert len(rows) == 1 + 7 * 201


def test_plotdata_spectrum_vs_g_config(tmp_path):
    cfg = write(tmp_path, "c.json", {"g_range": [-3.0, -1.9, 0.5], "n_states": 8})
    assert main(["plotdata", "spectrum-vs-g", "--config", cfg, "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "spectrum-vs-g__levels.csv").read_text().splitlines()
    assert lines[0] == "g,n,energy,x,bound"
    assert len(lines) == 1 + 3 * 8


def test_console_script(tmp_path):
    p = write(tmp_path, "box.json", BOX)
    out = subprocess.run([sys.executable, "-m", "dressedgraphs.cli", "solve", p],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["n_bound"] == 0
