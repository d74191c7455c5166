"""Composite Gauss-Legendre rules laid over the pieces of a skeleton."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .graph import Skeleton

PANEL_NODES = 16
NODES_PER_WAVELENGTH = 10


@lru_cache(maxsize=8)
def _leggauss(n):
    return np.polynomial.legendre.leggauss(n)


@dataclass(frozen=True)
class Rule:
    """Nodes grouped by piece. ``s``, ``w``, ``x``, ``y`` are flat arrays and
    ``piece_slices[p]`` selects the nodes lying on piece ``p``."""
    s: np.ndarray
    w: np.ndarray
    x: np.ndarray
    y: np.ndarray
    piece_slices: tuple[slice, ...]


def build_rule(skel: Skeleton, kmax: float, refine: int = 0, order: int = PANEL_NODES) -> Rule:
    """Panels of ``order`` nodes, at least ``NODES_PER_WAVELENGTH`` per
    wavelength of ``kmax`` and never straddling a bend; ``refine`` doubles
    the panel count that many times."""
    t, wt = _leggauss(order)
    s_all, w_all, x_all, y_all, slices = [], [], [], [], []
    start = 0
    per_length = max(kmax, 1e-12) / (2.0 * math.pi) * NODES_PER_WAVELENGTH / order
    for piece in skel.pieces:
        s_p, w_p = [], []
        for seg in piece.segments:
            ln = seg.s1 - seg.s0
            n = max(1, math.ceil(ln * per_length)) * (2 ** refine)
            edges = np.linspace(seg.s0, seg.s1, n + 1)
            half = 0.5 * np.diff(edges)
            mid = 0.5 * (edges[:-1] + edges[1:])
            s_p.append((mid[:, None] + half[:, None] * t[None, :]).ravel())
            w_p.append((half[:, None] * wt[None, :]).ravel())
        s_p = np.concatenate(s_p)
        x_p, y_p = piece.coords(s_p)
        s_all.append(s_p)
        w_all.append(np.concatenate(w_p))
        x_all.append(x_p)
        y_all.append(y_p)
        slices.append(slice(start, start + len(s_p)))
        start += len(s_p)
    return Rule(np.concatenate(s_all), np.concatenate(w_all), np.concatenate(x_all),
                np.concatenate(y_all), tuple(slices))
