"""Spec in, ResponseReport out, plus a JSON writer that keeps 17 significant digits."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .eigensolve import DEFAULT_STATES, solve_spectrum
from .graph import GraphSpec
from .moments import TransitionTable, build_table, sum_rule_curve
from .quadrature import PANEL_NODES
from .response import (BetaTensor, GammaTensor, TlaDiagnostics, beta_intrinsic, beta_norm,
                       gamma_intrinsic, gamma_norm, rotate_beta, rotate_gamma, spherical_beta,
                       spherical_gamma, theta_star_beta, theta_star_gamma, tla_params)
from .wavefunctions import assemble_states


@dataclass
class ResponseReport:
    spec: GraphSpec
    energies: np.ndarray
    n_bound: int
    beta: BetaTensor
    gamma: GammaTensor
    beta_theta: float
    gamma_theta: float
    beta_lab: float           # beta_xxx along beta_theta
    gamma_lab: float          # gamma_xxxx along gamma_theta
    tla: TlaDiagnostics
    sum_rule: np.ndarray      # ground-row residual for M = 1 .. n_states
    table: TransitionTable = field(repr=False, default=None)
    states: list = field(repr=False, default=None)

    def to_dict(self) -> dict:
        sb, sg = spherical_beta(self.beta), spherical_gamma(self.gamma)
        return {
            "spec": self.spec.to_dict(),
            "energies": list(map(float, self.energies)),
            "n_bound": self.n_bound,
            "beta": {"components": self.beta.as_dict(), "norm": beta_norm(self.beta),
                     "theta_star": self.beta_theta, "lab": self.beta_lab,
                     "spherical": _spherical_dict(sb)},
            "gamma": {"components": self.gamma.as_dict(), "norm": gamma_norm(self.gamma),
                      "theta_star": self.gamma_theta, "lab": self.gamma_lab,
                      "spherical": _spherical_dict(sg)},
            "tla": {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self.tla).items()},
            "sum_rule_residuals": list(map(float, self.sum_rule)),
        }


def _spherical_dict(sph):
    return {"components": {f"{J},{m}": [v.real, v.imag] for (J, m), v in sorted(sph["components"].items())},
            "norms": {str(J): v for J, v in sph["norms"].items()}}


def report_from_table(spec: GraphSpec, table: TransitionTable, n_bound: int = 0) -> ResponseReport:
    b, g = beta_intrinsic(table), gamma_intrinsic(table)
    tb, tg = theta_star_beta(b), theta_star_gamma(g)
    return ResponseReport(spec, table.energies, n_bound, b, g, tb, tg, rotate_beta(b, tb),
                          rotate_gamma(g, tg), tla_params(table, tb, tg), sum_rule_curve(table), table)


def analyze(spec: GraphSpec, n_states: int = DEFAULT_STATES, quad_order: int = PANEL_NODES,
            keep_states: bool = False) -> ResponseReport:
    """Solve, assemble, tabulate and evaluate one graph."""
    spectrum = solve_spectrum(spec, n_states)
    states = assemble_states(spec, spectrum)
    table = build_table(states, quad_order)
    rep = report_from_table(spec, table, spectrum.n_bound)
    if keep_states:
        rep.states = states
    return rep


# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with floats written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_str(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + to_json(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(float(obj))
    return _str(str(obj))


def _str(s: str) -> str:
    return json.dumps(s)
