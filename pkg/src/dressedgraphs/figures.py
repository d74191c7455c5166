"""Tabular data behind each reproducible figure.

Every generator takes a config mapping (defaults below) and returns
``{panel name: (header, rows)}``; the CLI writes one CSV per panel.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from .eigensolve import track_vs_g
from .ensemble import McConfig, ScanConfig, run_mc, run_scan
from .errors import ConfigError
from .graph import GraphSpec, make_spec
from .pipeline import analyze
from .wavefunctions import dump_states_csv

REFERENCE_GRID = {"g": {"range": [-12.0, 12.5, 0.5]}, "omega": {"linspace": [-1.0, 1.0, 100]}}
BEST_BETA_1 = {"topology": "Wire1Delta", "params": {"g": -3.73, "omega": -0.456}}
BEST_GAMMA_1 = {"topology": "Wire1Delta", "params": {"g": -9.90, "omega": 0.0}}


def _spec(entry) -> GraphSpec:
    if "params" in entry:
        return make_spec(entry["topology"], entry["params"])
    return GraphSpec.from_dict(entry)


def spectrum_vs_g(cfg):
    omega = cfg.get("omega", -0.44)
    gs = np.round(np.arange(*cfg.get("g_range", [-12.0, 12.5, 0.1])), 10)
    n = int(cfg.get("n_states", 10))
    spec = make_spec("Wire1Delta", {"g": float(gs[0]), "omega": omega})
    rows = []
    for g, sp in zip(gs, track_vs_g(spec, gs, 0, max(n, 8))):
        for i in range(n):
            rows.append([g, i, sp.energies[i], sp.x[i], int(sp.bound[i])])
    return {"levels": (["g", "n", "energy", "x", "bound"], rows)}


def _vs_position(cfg, key):
    gs = cfg.get("g_values", [-12.0, -8.0, -4.0, -3.73, -2.0, 0.0, 2.0, 4.0, 8.0, 12.0])
    omegas = np.linspace(*cfg.get("omega_linspace", [-0.98, 0.98, 99]))
    recs = run_scan(ScanConfig("Wire1Delta", {"g": gs, "omega": list(omegas)},
                               n_states=int(cfg.get("n_states", 25))))
    return {key: (["g", "omega", key], [[r.params["g"], r.params["omega"], r.get(key)] for r in recs])}


def beta_vs_position(cfg):
    return _vs_position(cfg, "beta_xxx")


def gamma_vs_position(cfg):
    return _vs_position(cfg, "gamma_xxxx")


def _reference_scan(cfg):
    return run_scan(ScanConfig("Wire1Delta", cfg.get("grid", REFERENCE_GRID),
                               n_states=int(cfg.get("n_states", 25))))


def _scatter(cfg, cols):
    recs = [r for r in _reference_scan(cfg) if not r.failed]
    head = ["g", "omega", *cols]
    return {"scatter": (head, [[r.get(c) for c in head] for r in recs])}


def tla_scatter_beta(cfg):
    return _scatter(cfg, ["beta3", "beta4", "beta_xxx"])


def tla_scatter_gamma(cfg):
    return _scatter(cfg, ["gamma3", "gamma4", "gamma_xxxx"])


def x_vs_beta(cfg):
    return _scatter(cfg, ["beta_xxx", "X"])


def e_vs_beta(cfg):
    return _scatter(cfg, ["beta_xxx", "E"])


def sumrule_vs_m(cfg):
    rep = analyze(_spec(cfg.get("spec", BEST_BETA_1)), int(cfg.get("n_states", 25)))
    return {"residuals": (["M", "residual"], [[m + 1, r] for m, r in enumerate(rep.sum_rule)])}


def tensor_norms(cfg):
    n = int(cfg.get("deltas", 3))
    ranges = {f"x{i + 1}": (0.0, 1.0) for i in range(n)}
    ranges.update({f"g{i + 1}": tuple(cfg.get("g_range", (-12.0, 0.0))) for i in range(n)})
    res = run_mc(McConfig(f"Wire{n}Delta", ranges, int(cfg.get("samples", 2000)), int(cfg.get("seed", 0)),
                          n_states=int(cfg.get("n_states", 25))))
    cols = ["beta_xxx", "beta_norm", "beta_J1", "beta_J3",
            "gamma_xxxx", "gamma_norm", "gamma_J0", "gamma_J2", "gamma_J4"]
    return {"norms": (cols, [[r.get(c) for c in cols] for r in res.records if not r.failed])}


def states_at_optimum(cfg):
    panels = cfg.get("panels", {"best-beta": BEST_BETA_1, "best-gamma": BEST_GAMMA_1})
    n = int(cfg.get("count", 7))
    out = {}
    for name, entry in panels.items():
        rep = analyze(_spec(entry), int(cfg.get("n_states", 25)), keep_states=True)
        buf = io.StringIO()
        dump_states_csv(rep.states[:n], buf, int(cfg.get("samples_per_edge", 201)))
        rows = list(csv.reader(io.StringIO(buf.getvalue())))
        out[name] = (rows[0], rows[1:])
    return out


FIGURES = {
    "spectrum-vs-g": spectrum_vs_g,
    "beta-vs-position": beta_vs_position,
    "gamma-vs-position": gamma_vs_position,
    "tla-scatter-beta": tla_scatter_beta,
    "tla-scatter-gamma": tla_scatter_gamma,
    "X-vs-beta": x_vs_beta,
    "E-vs-beta": e_vs_beta,
    "sumrule-vs-M": sumrule_vs_m,
    "tensor-norms": tensor_norms,
    "states-at-optimum": states_at_optimum,
}


def figure_data(figure_id: str, cfg: dict | None = None):
    if figure_id not in FIGURES:
        raise ConfigError(f"unknown figure id {figure_id!r}; choose from {', '.join(FIGURES)}")
    return FIGURES[figure_id](cfg or {})


def write_panels(figure_id: str, panels: dict, out_dir) -> list:
    from pathlib import Path
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, (head, rows) in panels.items():
        p = out / f"{figure_id}__{name}.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(head)
            for row in rows:
                w.writerow([format(float(v), ".17g") if isinstance(v, (float, np.floating)) else v
                            for v in row])
        paths.append(p)
    return paths
