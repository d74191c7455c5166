"""Transition moments, normalised tables and TRK sum-rule residuals."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientBasisError, QuadratureError
from .quadrature import PANEL_NODES, build_rule
from .wavefunctions import EigenState

MIN_STATES = 8
SNAP = 1e-14
MOMENT_TOL = 1e-10
MAX_REFINE = 3


@dataclass(frozen=True)
class TransitionTable:
    energies: np.ndarray       # E_n
    e: np.ndarray              # (E_n - E_0) / E_10
    x: np.ndarray              # x_nm in graph units
    y: np.ndarray
    xi_x: np.ndarray           # x_nm / x01_max
    xi_y: np.ndarray
    x01_max: float

    @property
    def n_states(self) -> int:
        return len(self.energies)

    @classmethod
    def from_moments(cls, energies, x, y=None) -> "TransitionTable":
        energies = np.asarray(energies, dtype=float)
        x = np.asarray(x, dtype=float)
        y = np.zeros_like(x) if y is None else np.asarray(y, dtype=float)
        if len(energies) < 2:
            raise InsufficientBasisError("a table needs at least two states")
        e10 = energies[1] - energies[0]
        if not e10 > 0:
            raise InsufficientBasisError("E_1 - E_0 must be positive")
        x01_max = 1.0 / math.sqrt(2.0 * e10)
        e = (energies - energies[0]) / e10
        e[0], e[1] = 0.0, 1.0
        return cls(energies, e, x, y, x / x01_max, y / x01_max, x01_max)

    def truncated(self, m: int) -> "TransitionTable":
        return TransitionTable.from_moments(self.energies[:m], self.x[:m, :m], self.y[:m, :m])

    def xi(self, component: str) -> np.ndarray:
        return {"x": self.xi_x, "y": self.xi_y}[component]


def _moment_matrices(states: Sequence[EigenState], refine: int, with_y: bool, order: int = PANEL_NODES):
    skel = states[0].skeleton
    kmax = max(max(st.k for st in states), 1.0)
    rule = build_rule(skel, kmax, refine, order)
    V = np.array([st.on_rule(rule) for st in states])
    Vw = V * rule.w
    S = Vw @ V.T
    X = (Vw * rule.x) @ V.T
    Y = (Vw * rule.y) @ V.T if with_y else np.zeros_like(X)
    return S, X, Y


def _converged(states, with_y, order=PANEL_NODES):
    tol = MOMENT_TOL * max(1.0, states[0].skeleton.total_length)
    prev = _moment_matrices(states, 0, with_y, order)
    for refine in range(1, MAX_REFINE + 1):
        cur = _moment_matrices(states, refine, with_y, order)
        diff = max(np.max(np.abs(a - b)) for a, b in zip(cur, prev))
        if diff <= tol:
            return cur
        prev = cur
    raise QuadratureError(f"moment quadrature not converged after {MAX_REFINE} refinements")


def transition_moment(state_n: EigenState, state_m: EigenState, component: str = "x") -> float:
    """Sum over edges of the integral of psi_n psi_m times the lab coordinate."""
    if component not in ("x", "y"):
        raise ValueError("component must be 'x' or 'y'")
    _, X, Y = _converged([state_n, state_m], component == "y")
    return float((X if component == "x" else Y)[0, 1])


def overlap_matrix(states: Sequence[EigenState]) -> np.ndarray:
    return _converged(list(states), False)[0]


def _snap(a):
    a = 0.5 * (a + a.T)
    a[np.abs(a) < SNAP] = 0.0
    return a


def build_table(states: Sequence[EigenState], order: int = PANEL_NODES) -> TransitionTable:
    states = list(states)
    if len(states) < MIN_STATES:
        raise InsufficientBasisError(f"need at least {MIN_STATES} states, got {len(states)}")
    with_y = not states[0].skeleton.collinear_x
    _, X, Y = _converged(states, with_y, order)
    energies = np.array([st.energy for st in states])
    return TransitionTable.from_moments(energies, _snap(X), _snap(Y))


def sum_rule_residual(table: TransitionTable, p: int = 0, m: int | None = None) -> float:
    """``|1 - sum_{n<m} (e_n - e_p) xi_pn^2|`` over the lowest ``m`` states."""
    m = table.n_states if m is None else m
    if m > table.n_states:
        raise ValueError("truncation exceeds state count")
    xi = table.xi_x[p, :m]
    return abs(1.0 - float(np.sum((table.e[:m] - table.e[p]) * xi * xi)))


def sum_rule_curve(table: TransitionTable, p: int = 0) -> np.ndarray:
    """Residuals for every truncation m = 1 .. n_states."""
    return np.array([sum_rule_residual(table, p, m) for m in range(1, table.n_states + 1)])


def dump_table_csv(table: TransitionTable, fh) -> None:
    w = csv.writer(fh)
    w.writerow(["row", "col", "x_nm", "xi_nm", "y_nm", "xi_y_nm"])
    n = table.n_states
    for i in range(n):
        for j in range(n):
            w.writerow([i, j, f"{table.x[i, j]:.17g}", f"{table.xi_x[i, j]:.17g}",
                        f"{table.y[i, j]:.17g}", f"{table.xi_y[i, j]:.17g}"])
