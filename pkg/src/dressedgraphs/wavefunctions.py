"""Matched, normalised eigenstates built piece by piece.

Positive-energy pieces are ``alpha*sin(k s) + beta*cos(k s)``. Bound-state
pieces are stored by their end values, ``(psi_u, psi_v)``, and evaluated as
``[psi_u sinh(kappa (l - s)) + psi_v sinh(kappa s)] / sinh(kappa l)`` in an
exponentially scaled form, which stays accurate in deep wells where the
sinh/cosh coefficients would cancel.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .eigensolve import Level, Spectrum
from .errors import DegeneracyError, DomainError, InconsistentStateError, QuadratureError
from .graph import GraphSpec, Skeleton, build_skeleton
from .quadrature import Rule, build_rule

SMALL_SIN = 1e-6
RESIDUAL_TOL = 1e-7
NULLSPACE_TOL = 1e-9


@dataclass(frozen=True)
class EdgeWave:
    piece: int
    basis: str            # "trig" or "hyperbolic"
    k: float              # k or kappa
    length: float
    coeffs: tuple[float, float]

    def value(self, s):
        s = np.asarray(s, dtype=float)
        a, b = self.coeffs
        if self.basis == "trig":
            return a * np.sin(self.k * s) + b * np.cos(self.k * s)
        u, v = self._hyp_basis(s)
        return a * u + b * v

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        a, b = self.coeffs
        k = self.k
        if self.basis == "trig":
            return k * (a * np.cos(k * s) - b * np.sin(k * s))
        l = self.length
        den = -np.expm1(-2 * k * l)
        du = -k * np.exp(-k * s) * (1 + np.exp(-2 * k * (l - s))) / den
        dv = k * np.exp(-k * (l - s)) * (1 + np.exp(-2 * k * s)) / den
        return a * du + b * dv

    def _hyp_basis(self, s):
        k, l = self.k, self.length
        den = -np.expm1(-2 * k * l)
        u = np.exp(-k * s) * -np.expm1(-2 * k * (l - s)) / den
        v = np.exp(-k * (l - s)) * -np.expm1(-2 * k * s) / den
        return u, v

    def scaled(self, c: float) -> "EdgeWave":
        return replace(self, coeffs=(self.coeffs[0] * c, self.coeffs[1] * c))


@dataclass(frozen=True)
class EigenState:
    level: Level
    waves: tuple[EdgeWave, ...]
    norm: float
    spec: GraphSpec
    skeleton: Skeleton

    @property
    def k(self) -> float:
        return self.level.x / self.skeleton.total_length

    @property
    def energy(self) -> float:
        return self.level.energy

    def on_rule(self, rule: Rule) -> np.ndarray:
        out = np.empty_like(rule.s)
        for p, sl in enumerate(rule.piece_slices):
            out[sl] = self.waves[p].value(rule.s[sl])
        return out

    def piece_value(self, piece: int, s):
        return self.waves[piece].value(s)


def evaluate(state: EigenState, edge: int, s: float) -> float:
    """psi at arc position ``s`` measured from the origin of spec edge ``edge``."""
    length = state.spec.edges[edge].length
    if not (-1e-12 <= s <= length * (1 + 1e-12)):
        raise DomainError(f"s={s} outside edge {edge} of length {length}")
    piece, sl = state.skeleton.locate(edge, s)
    return float(state.waves[piece].value(sl))


# ---------------------------------------------------------------------------

def _ends(skel: Skeleton):
    """For each vertex the incident piece ends as (piece, end) with end 0 at s=0."""
    ends = [[] for _ in skel.terminal]
    for p, pc in enumerate(skel.pieces):
        ends[pc.u].append((p, 0))
        ends[pc.v].append((p, 1))
    return ends


def _vertex_solution(skel: Skeleton, k: float, hyperbolic: bool):
    internal = skel.internal
    idx = {v: i for i, v in enumerate(internal)}
    n = len(internal)
    M = np.zeros((n, n))
    for pc in skel.pieces:
        kl = k * pc.length
        if hyperbolic:
            cot, csc = 1.0 / math.tanh(kl), 1.0 / math.sinh(kl)
        else:
            cot, csc = math.cos(kl) / math.sin(kl), 1.0 / math.sin(kl)
        for w in (pc.u, pc.v):
            if w in idx:
                M[idx[w], idx[w]] -= cot
        if pc.u in idx and pc.v in idx:
            M[idx[pc.u], idx[pc.v]] += csc
            M[idx[pc.v], idx[pc.u]] += csc
    for v in internal:
        M[idx[v], idx[v]] -= 2.0 * skel.vertex_g[v] / (skel.total_length * k)
    if n == 1:
        null = np.array([1.0])
    else:
        _, sv, vt = np.linalg.svd(M)
        if sv[-2] <= NULLSPACE_TOL * sv[0]:
            raise DegeneracyError("vertex system has a multi-dimensional nullspace")
        null = vt[-1]
    psi = np.zeros(len(skel.terminal))
    for v, i in idx.items():
        psi[v] = null[i]
    waves = []
    for p, pc in enumerate(skel.pieces):
        pu, pv = psi[pc.u], psi[pc.v]
        if hyperbolic:
            waves.append(EdgeWave(p, "hyperbolic", k, pc.length, (pu, pv)))
        else:
            kl = k * pc.length
            waves.append(EdgeWave(p, "trig", k, pc.length,
                                  ((pv - pu * math.cos(kl)) / math.sin(kl), pu)))
    return waves


def _full_solution(skel: Skeleton, k: float):
    """Smallest singular direction of the 2E x 2E boundary system (trig basis)."""
    P = len(skel.pieces)
    rows = []

    def val_row(p, end):
        r = np.zeros(2 * P)
        if end == 0:
            r[2 * p + 1] = 1.0
        else:
            kl = k * skel.pieces[p].length
            r[2 * p], r[2 * p + 1] = math.sin(kl), math.cos(kl)
        return r

    def flux_row(p, end):  # outgoing derivative / k
        r = np.zeros(2 * P)
        if end == 0:
            r[2 * p] = 1.0
        else:
            kl = k * skel.pieces[p].length
            r[2 * p], r[2 * p + 1] = -math.cos(kl), math.sin(kl)
        return r

    for v, ends in enumerate(_ends(skel)):
        if skel.terminal[v]:
            rows.extend(val_row(p, e) for p, e in ends)
            continue
        first = val_row(*ends[0])
        rows.extend(val_row(p, e) - first for p, e in ends[1:])
        flux = sum(flux_row(p, e) for p, e in ends)
        rows.append(flux - 2.0 * skel.vertex_g[v] / (skel.total_length * k) * first)
    A = np.array(rows)
    _, sv, vt = np.linalg.svd(A)
    if sv[-1] > RESIDUAL_TOL * sv[0]:
        raise InconsistentStateError(f"boundary system residual {sv[-1] / sv[0]:.2e}")
    if sv[-2] <= NULLSPACE_TOL * sv[0]:
        raise DegeneracyError("boundary system has a multi-dimensional nullspace")
    c = vt[-1]
    return [EdgeWave(p, "trig", k, skel.pieces[p].length, (c[2 * p], c[2 * p + 1])) for p in range(P)]


def _loop_only(skel: Skeleton, k: float):
    waves = []
    for p, pc in enumerate(skel.pieces):
        coeffs = (1.0, 0.0) if pc.u == pc.v else (0.0, 0.0)
        waves.append(EdgeWave(p, "trig", k, pc.length, coeffs))
    return waves


def boundary_residuals(waves: Sequence[EdgeWave], skel: Skeleton) -> dict:
    """Relative continuity, flux and terminal residuals of a set of pieces."""
    scale = max(max(abs(c) for c in w.coeffs) for w in waves) or 1.0
    k = waves[0].k
    cont = flux = term = 0.0
    for v, ends in enumerate(_ends(skel)):
        vals = [float(waves[p].value(0.0 if e == 0 else waves[p].length)) for p, e in ends]
        if skel.terminal[v]:
            term = max(term, max(abs(x) for x in vals) / scale)
            continue
        cont = max(cont, max(abs(x - vals[0]) for x in vals) / scale)
        ders = [float(waves[p].derivative(0.0)) if e == 0 else -float(waves[p].derivative(waves[p].length))
                for p, e in ends]
        rhs = 2.0 * skel.vertex_g[v] / skel.total_length * vals[0]
        ref = sum(abs(d) for d in ders) + abs(rhs) + k * scale * 1e-3
        flux = max(flux, abs(sum(ders) - rhs) / ref)
    return {"continuity": cont, "flux": flux, "terminal": term}


def _raw_waves(skel: Skeleton, level: Level):
    k = level.x / skel.total_length
    if level.family == "loop":
        waves = _loop_only(skel, k)
    elif level.bound:
        waves = _vertex_solution(skel, k, hyperbolic=True)
    elif min(abs(math.sin(k * pc.length)) for pc in skel.pieces) < SMALL_SIN:
        waves = _full_solution(skel, k)
    else:
        waves = _vertex_solution(skel, k, hyperbolic=False)
    res = boundary_residuals(waves, skel)
    if max(res.values()) > RESIDUAL_TOL:
        raise InconsistentStateError(f"eigenstate boundary residuals {res}")
    return waves


def _values(waves, rule):
    vals = np.empty_like(rule.s)
    for p, sl in enumerate(rule.piece_slices):
        vals[sl] = waves[p].value(rule.s[sl])
    return vals


def _normalise(spec, skel, levels, raw) -> list[EigenState]:
    """Normalise all states on one shared rule, doubling panels until stable."""
    kmax = max(max(lvl.x for lvl in levels) / skel.total_length, 1.0)
    prev = None
    for refine in range(4):
        rule = build_rule(skel, kmax, refine)
        vals = np.array([_values(w, rule) for w in raw])
        n2 = (vals * vals) @ rule.w
        if prev is not None and np.all(np.abs(n2 - prev) <= 1e-13 * n2):
            break
        prev = n2
    else:
        raise QuadratureError("normalisation integral did not converge")
    out = []
    for lvl, waves, v, nn in zip(levels, raw, vals, n2):
        c = 1.0 / math.sqrt(nn)
        big = np.abs(v) > 1e-3 * np.max(np.abs(v))
        if v[np.argmax(big)] < 0:
            c = -c
        out.append(EigenState(lvl, tuple(w.scaled(c) for w in waves), abs(c), spec, skel))
    return out


def assemble_state(spec: GraphSpec, level: Level, skel: Skeleton | None = None) -> EigenState:
    skel = skel or build_skeleton(spec)
    return _normalise(spec, skel, [level], [_raw_waves(skel, level)])[0]


def assemble_states(spec: GraphSpec, spectrum: Spectrum) -> list[EigenState]:
    skel = build_skeleton(spec)
    levels = list(spectrum)
    return _normalise(spec, skel, levels, [_raw_waves(skel, lvl) for lvl in levels])


def dump_states_csv(states: Sequence[EigenState], fh, samples_per_edge: int = 201) -> None:
    """Write ``state, energy, edge, s, x, y, psi`` samples for plotting."""
    writer = csv.writer(fh)
    writer.writerow(["state", "energy", "edge", "s", "x", "y", "psi"])
    if not states:
        return
    spec, skel = states[0].spec, states[0].skeleton
    for e, edge in enumerate(spec.edges):
        s = np.linspace(0.0, edge.length, samples_per_edge)
        pts = [skel.locate(e, float(si)) for si in s]
        xy = [skel.pieces[p].coords(np.array([sl])) for p, sl in pts]
        for n, st in enumerate(states):
            for si, (p, sl), (xa, ya) in zip(s, pts, xy):
                writer.writerow([n, f"{st.energy:.17g}", e, f"{si:.17g}", f"{xa[0]:.17g}",
                                 f"{ya[0]:.17g}", f"{float(st.waves[p].value(sl)):.17g}"])
