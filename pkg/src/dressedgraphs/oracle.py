"""Finite-difference reference solver for straight wires.

Independent of the graph pipeline: the spectrum comes from a three-point
stencil on a uniform grid, moments from grid sums. Only the final SOS
term assembly (via TransitionTable) is shared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import UnsupportedTopologyError, ValidationError
from .graph import GraphSpec
from .moments import TransitionTable
from .pipeline import ResponseReport, report_from_table

DEFAULT_N = 4000


@dataclass(frozen=True)
class GridProblem:
    n: int
    h: float
    potential: np.ndarray
    s: np.ndarray         # interior node positions

    @classmethod
    def from_spec(cls, spec: GraphSpec, n: int = DEFAULT_N) -> "GridProblem":
        if not spec.topology.is_wire or len(spec.edges) != 1:
            raise UnsupportedTopologyError("the finite-difference oracle covers straight wires only")
        if n < 10:
            raise ValidationError("grid needs at least 10 points")
        L = spec.total_length
        h = L / (n + 1)
        s = h * np.arange(1, n + 1)
        V = np.zeros(n)
        for d in spec.deltas:
            j = int(np.clip(round(d.position / h) - 1, 0, n - 1))
            V[j] += (d.g / L) / h
        return cls(n, h, V, s)


def fd_solve(spec: GraphSpec, n: int = DEFAULT_N, n_states: int = 25):
    """Lowest ``n_states`` eigenpairs; eigenvectors normalised so h * sum(psi^2) = 1."""
    prob = GridProblem.from_spec(spec, n)
    diag = 1.0 / prob.h**2 + prob.potential
    off = np.full(prob.n - 1, -0.5 / prob.h**2)
    E, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_states - 1))
    vecs = vecs / np.sqrt(prob.h)
    # same phase rule as the graph pipeline: first sizeable value positive
    for i in range(vecs.shape[1]):
        v = vecs[:, i]
        first = np.argmax(np.abs(v) > 1e-3 * np.max(np.abs(v)))
        if v[first] < 0:
            vecs[:, i] = -v
    return E, vecs, prob


def fd_table(spec: GraphSpec, n: int = DEFAULT_N, n_states: int = 25) -> TransitionTable:
    E, vecs, prob = fd_solve(spec, n, n_states)
    X = prob.h * (vecs.T * prob.s) @ vecs
    return TransitionTable.from_moments(E, X)


def fd_response(spec: GraphSpec, n: int = DEFAULT_N, n_states: int = 25) -> ResponseReport:
    table = fd_table(spec, n, n_states)
    return report_from_table(spec, table, int(np.count_nonzero(table.energies < 0)))
