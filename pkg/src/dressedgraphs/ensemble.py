"""Grid scans and seeded Monte Carlo searches over graph configurations."""

from __future__ import annotations

import csv
import itertools
import json
import math
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy

from .eigensolve import DEFAULT_STATES
from .errors import ConfigError, GraphError
from .graph import Topology, make_spec
from .pipeline import analyze, to_json
from .quadrature import PANEL_NODES
from .response import beta_norm, gamma_norm, spherical_beta, spherical_gamma

SAMPLING_LAW = "uniform"


@dataclass(frozen=True)
class ScanConfig:
    """Row-major product of the ``grid`` axes, in the order given."""
    topology: Topology
    grid: dict
    fixed: dict = field(default_factory=dict)
    n_states: int = DEFAULT_STATES
    quad_order: int = PANEL_NODES

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        if not self.grid:
            raise ConfigError("scan needs at least one grid axis")
        grid = {}
        for k, v in self.grid.items():
            vals = tuple(float(x) for x in _expand(v))
            if not vals:
                raise ConfigError(f"grid axis {k!r} is empty")
            grid[k] = vals
        object.__setattr__(self, "grid", grid)

    @property
    def size(self) -> int:
        return math.prod(len(v) for v in self.grid.values())

    def points(self) -> list[dict]:
        keys = list(self.grid)
        return [{**self.fixed, **dict(zip(keys, combo))}
                for combo in itertools.product(*self.grid.values())]


@dataclass(frozen=True)
class McConfig:
    """Uniform draws over ``ranges`` and uniform picks from ``choices``."""
    topology: Topology
    ranges: dict
    samples: int
    seed: int = 0
    choices: dict = field(default_factory=dict)
    fixed: dict = field(default_factory=dict)
    n_states: int = DEFAULT_STATES
    quad_order: int = PANEL_NODES

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        if self.samples < 1:
            raise ConfigError("sample count must be at least 1")
        for k, (lo, hi) in self.ranges.items():
            if not lo < hi:
                raise ConfigError(f"range for {k!r} must satisfy lo < hi")
        for k, v in self.choices.items():
            if not v:
                raise ConfigError(f"choice list for {k!r} is empty")

    def draw(self, i: int) -> dict:
        rng = np.random.default_rng([self.seed, i])
        p = dict(self.fixed)
        for k, (lo, hi) in self.ranges.items():
            p[k] = float(rng.uniform(lo, hi))
        for k, v in self.choices.items():
            p[k] = float(v[int(rng.integers(len(v)))])
        return p


def _expand(v):
    """Grid axis: explicit list, {"linspace": [a, b, n]} or inclusive {"range": [a, b, step]}."""
    if isinstance(v, dict):
        if "linspace" in v:
            a, b, n = v["linspace"]
            return np.linspace(a, b, int(n))
        if "range" in v:
            a, b, step = v["range"]
            n = int(round((b - a) / step)) + 1
            return a + step * np.arange(n)
        raise ConfigError(f"unknown grid form {sorted(v)}")
    if isinstance(v, (int, float)):
        return [v]
    return list(v)


METRICS = ("beta_xxx", "beta_lab", "beta_theta", "gamma_xxxx", "gamma_lab", "gamma_theta",
           "beta_norm", "gamma_norm", "beta_J1", "beta_J3", "gamma_J0", "gamma_J2", "gamma_J4",
           "X", "E", "fG", "beta3", "beta4", "gamma3", "gamma4", "sum_rule", "n_bound")


@dataclass
class RunRecord:
    index: int
    params: dict
    failed: bool = False
    reason: str = ""
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        values = self.__dict__.get("values", {})
        if name in values:
            return values[name]
        raise AttributeError(name)

    def get(self, name):
        if name in ("index", "failed", "reason"):
            return getattr(self, name)
        if name in self.params:
            return self.params[name]
        return self.values.get(name, math.nan)

    def to_dict(self):
        return {"index": self.index, "params": self.params, "failed": self.failed,
                "reason": self.reason, "values": self.values}


def evaluate_point(topology, params: dict, n_states: int, quad_order: int, index: int = 0) -> RunRecord:
    try:
        rep = analyze(make_spec(topology, params), n_states, quad_order)
    except (GraphError, ValueError, KeyError, FloatingPointError, np.linalg.LinAlgError) as exc:
        return RunRecord(index, params, True, f"{type(exc).__name__}: {exc}")
    sb, sg = spherical_beta(rep.beta)["norms"], spherical_gamma(rep.gamma)["norms"]
    t = rep.tla
    vals = {
        "beta_xxx": rep.beta.xxx, "beta_lab": rep.beta_lab, "beta_theta": rep.beta_theta,
        "gamma_xxxx": rep.gamma.xxxx, "gamma_lab": rep.gamma_lab, "gamma_theta": rep.gamma_theta,
        "beta_norm": beta_norm(rep.beta), "gamma_norm": gamma_norm(rep.gamma),
        "beta_J1": sb[1], "beta_J3": sb[3], "gamma_J0": sg[0], "gamma_J2": sg[2], "gamma_J4": sg[4],
        "X": t.X, "E": t.E, "fG": t.fG, "beta3": t.beta3, "beta4": t.beta4,
        "gamma3": t.gamma3, "gamma4": t.gamma4, "sum_rule": float(rep.sum_rule[-1]),
        "n_bound": rep.n_bound,
    }
    return RunRecord(index, params, False, "", vals)


def _eval_star(args):
    return evaluate_point(*args)


def _run(jobs: list, workers: int) -> list[RunRecord]:
    if workers <= 1:
        return [evaluate_point(*j) for j in jobs]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(_eval_star, jobs, chunksize=16))


def run_scan(cfg: ScanConfig, workers: int = 1) -> list[RunRecord]:
    jobs = [(cfg.topology, p, cfg.n_states, cfg.quad_order, i) for i, p in enumerate(cfg.points())]
    return _run(jobs, workers)


class McResult(NamedTuple):
    records: list
    best_beta: RunRecord | None
    best_gamma: RunRecord | None


def extremal(records: Iterable[RunRecord], key: str, largest: bool = True, absolute: bool = False):
    """Best successful record under ``key``; ties go to the lower index."""
    ok = [r for r in records if not r.failed]
    if not ok:
        return None
    f = (lambda r: abs(r.values[key])) if absolute else (lambda r: r.values[key])
    sign = -1.0 if largest else 1.0
    return min(ok, key=lambda r: (sign * f(r), r.index))


def run_mc(cfg: McConfig, workers: int = 1) -> McResult:
    jobs = [(cfg.topology, cfg.draw(i), cfg.n_states, cfg.quad_order, i) for i in range(cfg.samples)]
    recs = _run(jobs, workers)
    return McResult(recs, extremal(recs, "beta_lab", absolute=True), extremal(recs, "gamma_lab"))


# ---------------------------------------------------------------------------
# I/O

def _cell(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def record_fields(records: Sequence[RunRecord]) -> list[str]:
    params = []
    for r in records:
        for k in r.params:
            if k not in params:
                params.append(k)
    return ["index", *params, *METRICS, "failed", "reason"]


def scatter_export(records: Sequence[RunRecord], fields_: Sequence[str], fh) -> None:
    """CSV with one row per record and the requested columns in order."""
    if not fields_:
        raise ConfigError("scatter export needs at least one field")
    if not records:
        raise ConfigError("scatter export needs at least one record")
    known = set(record_fields(records))
    bad = [f for f in fields_ if f not in known]
    if bad:
        raise ConfigError(f"unknown field(s): {', '.join(bad)}")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(fields_)
    for r in records:
        w.writerow([_cell(r.get(f)) for f in fields_])


def run_metadata(cfg, elapsed: float | None = None) -> dict:
    from . import __version__
    meta = {
        "kind": "scan" if isinstance(cfg, ScanConfig) else "mc",
        "topology": cfg.topology.value,
        "n_states": cfg.n_states,
        "quad_order": cfg.quad_order,
        "sampling_law": SAMPLING_LAW,
        "versions": {"dressedgraphs": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "python": platform.python_version()},
    }
    if isinstance(cfg, ScanConfig):
        meta["grid"] = {k: list(v) for k, v in cfg.grid.items()}
        meta["fixed"] = cfg.fixed
    else:
        meta.update(seed=cfg.seed, samples=cfg.samples, ranges=cfg.ranges,
                    choices=cfg.choices, fixed=cfg.fixed)
    if elapsed is not None:
        meta["timing"] = {"elapsed_s": elapsed, "finished": time.strftime("%Y-%m-%dT%H:%M:%S")}
    return meta


def extremal_summary(records: Sequence[RunRecord]) -> dict:
    out = {}
    for name, key, largest, absolute in (("best_beta", "beta_lab", True, True),
                                         ("best_gamma", "gamma_lab", True, False),
                                         ("min_gamma", "gamma_lab", False, False)):
        r = extremal(records, key, largest, absolute)
        out[name] = None if r is None else r.to_dict()
    out["failures"] = sum(r.failed for r in records)
    out["count"] = len(records)
    return out


def load_config(source) -> ScanConfig | McConfig:
    """Read a scan or Monte Carlo config from a JSON path or mapping."""
    if isinstance(source, dict):
        data = source
    else:
        with open(source) as fh:
            data = json.load(fh)
    data = dict(data)
    kind = data.pop("kind", "mc" if "ranges" in data else "scan")
    try:
        if kind == "scan":
            return ScanConfig(**data)
        if kind == "mc":
            data["ranges"] = {k: tuple(v) for k, v in data.get("ranges", {}).items()}
            return McConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown config kind {kind!r}")


def write_outputs(records, cfg, out_dir, elapsed=None, stem="records"):
    """records CSV, extremal JSON and metadata JSON into ``out_dir``."""
    from pathlib import Path
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"{stem}.csv", "w", newline="") as fh:
        scatter_export(records, record_fields(records), fh)
    (out / "extremal.json").write_text(to_json(extremal_summary(records)) + "\n")
    (out / "metadata.json").write_text(to_json(run_metadata(cfg, elapsed)) + "\n")
