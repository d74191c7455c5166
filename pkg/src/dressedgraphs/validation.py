"""Named property suites used by ``dressedgraphs validate``.

Each suite returns rows of (quantity, graph value, reference value, |diff|,
tolerance, pass) and the CLI exits nonzero if any row fails.
"""

from __future__ import annotations

import csv
import math
from typing import NamedTuple

import numpy as np

from .graph import make_spec
from .moments import sum_rule_residual
from .oracle import DEFAULT_N, fd_response
from .pipeline import analyze
from .response import (beta_norm, gamma_norm, rotate_beta, rotate_gamma, rotated_beta_tensor,
                       rotated_gamma_tensor)


class Row(NamedTuple):
    quantity: str
    graph: float
    reference: float
    diff: float
    tol: float
    ok: bool


def _row(name, a, b, tol, relative=False):
    d = abs(a - b)
    if relative:
        d = d / max(abs(b), 1e-300)
    return Row(name, float(a), float(b), float(d), tol, bool(d <= tol))


def random_wire_params(seed: int, count: int, g_range=(-10.0, 10.0), omega_range=(-0.9, 0.9)):
    rng = np.random.default_rng(seed)
    return [dict(g=float(rng.uniform(*g_range)), omega=float(rng.uniform(*omega_range)))
            for _ in range(count)]


def oracle_wires(seed: int = 7, count: int = 20, n_grid: int = DEFAULT_N, n_states: int = 25) -> list[Row]:
    rows = []
    for i, p in enumerate(random_wire_params(seed, count)):
        spec = make_spec("Wire1Delta", p)
        rep = analyze(spec, n_states)
        fd = fd_response(spec, n_grid, n_states)
        rel = np.abs(fd.energies[:8] - rep.energies[:8]) / np.abs(rep.energies[:8])
        j = int(np.argmax(rel))
        rows.append(Row(f"wire{i}.E{j}.rel", rep.energies[j], fd.energies[j], float(rel[j]), 5e-3,
                        bool(rel[j] <= 5e-3)))
        rows.append(_row(f"wire{i}.beta_xxx", rep.beta.xxx, fd.beta.xxx, 0.02))
        rows.append(_row(f"wire{i}.gamma_xxxx", rep.gamma.xxxx, fd.gamma.xxxx, 0.02))
    return rows


def sum_rules(omega_step: int = 11, g_step: int = 4, n_states: int = 25, tol: float = 1e-2) -> list[Row]:
    """Ground-row residual at full truncation on a subsample of the (omega, g <= 0) grid."""
    omegas = np.linspace(-1, 1, 100)[1:-1][::omega_step]
    gs = (-12.0 + 0.5 * np.arange(25))[::g_step]
    rows = []
    for g in gs:
        for w in omegas:
            rep = analyze(make_spec("Wire1Delta", dict(g=float(g), omega=float(w))), n_states)
            r = sum_rule_residual(rep.table)
            rows.append(Row(f"g={g:g},omega={w:.4f}.residual", r, 0.0, r, tol, bool(r < tol)))
    return rows


def random_bent_params(seed: int, count: int):
    rng = np.random.default_rng(seed)
    return [dict(g=float(rng.uniform(-10, 10)), omega=float(rng.uniform(-0.9, 0.9)),
                 bend=float(rng.uniform(-math.pi, math.pi))) for _ in range(count)]


def rotation_invariance(seed: int = 11, count: int = 50, n_states: int = 25) -> list[Row]:
    rng = np.random.default_rng(seed + 1)
    rows = []
    for i, p in enumerate(random_bent_params(seed, count)):
        spec = make_spec("Wire1Delta", p)
        phi = float(rng.uniform(0, 2 * math.pi))
        rep = analyze(spec, n_states)
        rot = analyze(spec.rotated(phi), n_states)
        b_t, g_t = rotated_beta_tensor(rep.beta, phi), rotated_gamma_tensor(rep.gamma, phi)
        rows.append(_row(f"bent{i}.beta_norm.tensor", beta_norm(b_t), beta_norm(rep.beta), 1e-10))
        rows.append(_row(f"bent{i}.gamma_norm.tensor", gamma_norm(g_t), gamma_norm(rep.gamma), 1e-10))
        rows.append(_row(f"bent{i}.beta_xxx.pipeline", rot.beta.xxx, rotate_beta(rep.beta, -phi), 1e-6))
        rows.append(_row(f"bent{i}.gamma_xxxx.pipeline", rot.gamma.xxxx, rotate_gamma(rep.gamma, -phi), 1e-6))
        rows.append(_row(f"bent{i}.beta_norm.pipeline", beta_norm(rot.beta), beta_norm(rep.beta), 1e-6))
    return rows


SCALE_CASES = (
    ("Wire1Delta", dict(g=-3.73, omega=-0.456)),
    ("Wire1Delta", dict(g=2.5, omega=0.3, bend=1.1)),
    ("Wire2Delta", dict(x1=0.21, x2=0.64, g1=-5.0, g2=-2.0)),
    ("Wire3Delta", dict(x1=0.15, x2=0.52, x3=0.81, g1=-7.0, g2=3.0, g3=-1.5)),
    ("StarDelta", dict(a=0.23, b=0.31, c=0.46, g=-2.0)),
    ("LollipopDelta", dict(a=0.37, g=1.5)),
)


def scale_invariance(factors=(0.37, 2.9), n_states: int = 25) -> list[Row]:
    rows = []
    for topo, p in SCALE_CASES:
        spec = make_spec(topo, p)
        base = analyze(spec, n_states)
        for f in factors:
            rep = analyze(spec.scaled(f), n_states)
            tag = f"{topo}{sorted(p.items())}x{f}"
            rows.append(_row(f"{tag}.beta_norm", beta_norm(rep.beta), beta_norm(base.beta), 1e-10))
            rows.append(_row(f"{tag}.gamma_norm", gamma_norm(rep.gamma), gamma_norm(base.gamma), 1e-10))
            for k, v in rep.beta.as_dict().items():
                rows.append(_row(f"{tag}.beta_{k}", v, getattr(base.beta, k), 1e-10))
            for k, v in rep.gamma.as_dict().items():
                rows.append(_row(f"{tag}.gamma_{k}", v, getattr(base.gamma, k), 1e-10))
            rows.append(_row(f"{tag}.xi_max", float(np.max(np.abs(rep.table.xi_x - base.table.xi_x))), 0.0, 1e-10))
            rows.append(_row(f"{tag}.e_max", float(np.max(np.abs(rep.table.e - base.table.e))), 0.0, 1e-10))
    return rows


SUITES = {
    "oracle-wires": oracle_wires,
    "sum-rules": sum_rules,
    "rotation-invariance": rotation_invariance,
    "scale-invariance": scale_invariance,
}


def write_rows(rows, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["quantity", "graph_value", "reference_value", "abs_diff", "tolerance", "pass"])
    for r in rows:
        w.writerow([r.quantity, format(r.graph, ".17g"), format(r.reference, ".17g"),
                    format(r.diff, ".17g"), format(r.tol, ".17g"), int(r.ok)])
