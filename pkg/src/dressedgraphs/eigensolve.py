"""Ordered spectra of dressed graphs by scanning and bisecting the secular function."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DegeneracyError, SolverFailure, ValidationError
from .graph import GraphSpec, Topology
from .secular import SecularFn, secular_for

DEFAULT_STATES = 25
DEFAULT_DENSITY = 32
MAX_DENSITY = 4096
DEGENERACY_DX = 1e-8
DOUBLE_ROOT_TOL = 1e-10


class Bracket(NamedTuple):
    lo: float
    hi: float
    double: bool = False


class Level(NamedTuple):
    x: float          # k*L, or kappa*L for a bound state
    bound: bool
    family: str       # "secular" or "loop" (analytic lollipop loop-only state)
    energy: float


@dataclass(frozen=True)
class Spectrum:
    x: np.ndarray
    bound: np.ndarray
    family: tuple[str, ...]
    energies: np.ndarray
    topology: Topology
    total_length: float

    @property
    def n_states(self) -> int:
        return len(self.x)

    @property
    def n_bound(self) -> int:
        return int(np.count_nonzero(self.bound))

    @property
    def wavenumbers(self) -> np.ndarray:
        """k (or kappa for flagged bound states) in inverse graph units."""
        return self.x / self.total_length

    def __getitem__(self, i) -> Level:
        return Level(float(self.x[i]), bool(self.bound[i]), self.family[i], float(self.energies[i]))

    def __iter__(self):
        return (self[i] for i in range(self.n_states))

    def __len__(self):
        return self.n_states


def _grid(x_lo, x_hi, density):
    step = min(math.pi / (8.0 * density), (x_hi - x_lo) / 1e4)
    n = int(math.ceil((x_hi - x_lo) / step)) + 1
    return np.linspace(x_lo, x_hi, n)


def root_scan(fn: Callable, x_lo: float, x_hi: float, density: int = DEFAULT_DENSITY) -> list[Bracket]:
    """Bracket every root of ``fn`` on ``[x_lo, x_hi]``.

    Sign changes between grid points give brackets directly. Interior local
    minima of ``|fn|`` without an adjacent sign change are refined: a hidden
    pair of close roots becomes two brackets, a genuine touching root with
    ``|fn| < 1e-10`` is returned as a zero-width ``double`` bracket.
    """
    if not x_lo < x_hi:
        raise ValidationError("root_scan needs x_lo < x_hi")
    xs = _grid(x_lo, x_hi, density)
    fs = np.asarray(fn(xs), dtype=float)
    pos = fs >= 0
    change = pos[:-1] != pos[1:]
    out = [Bracket(float(xs[i]), float(xs[i + 1])) for i in np.flatnonzero(change)]

    a = np.abs(fs)
    cand = np.flatnonzero((a[1:-1] <= a[:-2]) & (a[1:-1] <= a[2:])
                          & ~change[:-1] & ~change[1:]) + 1
    last = -2
    for i in cand:
        if i - last <= 1:
            continue  # already covered by the neighbouring refinement
        s = 1.0 if fs[i] >= 0 else -1.0
        lo, hi = float(xs[i - 1]), float(xs[i + 1])
        res = minimize_scalar(lambda t: s * float(fn(np.array([t]))[0]), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-14 * max(1.0, hi)})
        xm, fm = float(res.x), s * float(res.fun)
        if s * fm < 0:
            out.append(Bracket(lo, xm))
            out.append(Bracket(xm, hi))
            last = i
        elif abs(fm) < DOUBLE_ROOT_TOL:
            out.append(Bracket(xm, xm, True))
            last = i
    out.sort(key=lambda b: b.lo)
    return out


def bisect_brackets(fn: Callable, brackets: Sequence[Bracket]) -> np.ndarray:
    """Refine all brackets together to full double precision.

    Illinois-modified regula falsi with a forced bisection every fourth step,
    so the bracket always shrinks; converges in a handful of evaluations.
    """
    simple = [b for b in brackets if not b.double]
    if not simple:
        return np.empty(0)
    lo = np.array([b.lo for b in simple])
    hi = np.array([b.hi for b in simple])
    flo = np.asarray(fn(lo), dtype=float)
    fhi = np.asarray(fn(hi), dtype=float)
    side = np.zeros(len(lo), dtype=int)     # last end replaced: -1 lo, +1 hi
    exact = (flo == 0) | (fhi == 0)
    root = np.where(flo == 0, lo, hi)
    for it in range(300):
        width = hi - lo
        done = exact | (width <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(hi)))
        if np.all(done):
            break
        mid = 0.5 * (lo + hi)
        with np.errstate(divide="ignore", invalid="ignore"):
            x = (lo * fhi - hi * flo) / (fhi - flo)
        bad = ~np.isfinite(x) | (x <= lo) | (x >= hi) | (it % 4 == 3)
        x = np.where(bad, mid, x)
        x = np.where(done, root, x)
        fx = np.asarray(fn(x), dtype=float)
        hit = (fx == 0) & ~done
        exact |= hit
        root = np.where(hit, x, root)
        left = (np.sign(fx) == np.sign(flo)) & ~done & ~hit
        right = ~left & ~done & ~hit
        fhi = np.where(left & (side == -1), 0.5 * fhi, fhi)
        flo = np.where(right & (side == 1), 0.5 * flo, flo)
        lo, flo = np.where(left, x, lo), np.where(left, fx, flo)
        hi, fhi = np.where(right, x, hi), np.where(right, fx, fhi)
        side = np.where(left, -1, np.where(right, 1, side))
    return np.where(exact, root, 0.5 * (lo + hi))


def _stable_scan(fn, x_lo, x_hi, density, trace, label):
    prev = None
    d = density
    while d <= MAX_DENSITY:
        br = root_scan(fn, x_lo, x_hi, d)
        trace.append((label, d, len(br)))
        if prev is not None and len(br) == len(prev):
            return br
        prev = br
        d *= 2
    raise SolverFailure(f"{label} root count did not stabilise up to density {MAX_DENSITY}", trace)


def _loop_family(spec: GraphSpec, x_hi: float) -> np.ndarray:
    L = spec.total_length
    loop = spec.edges[1].length
    step = 2.0 * math.pi * L / loop
    n = int(x_hi // step)
    return step * np.arange(1, n + 1)


def solve_spectrum(spec: GraphSpec, n_states: int = DEFAULT_STATES,
                   density: int = DEFAULT_DENSITY) -> Spectrum:
    """Lowest ``n_states`` eigenvalues: bound states first, then positive ones."""
    if n_states < 8:
        raise ValidationError("n_states must be at least 8")
    sec = secular_for(spec)
    L = spec.total_length
    trace: list = []

    neg_br = _stable_scan(sec.neg_reduced, 0.0, sec.neg_upper, density, trace, "negative")
    if any(b.double for b in neg_br):
        raise DegeneracyError("degenerate bound states")
    x_neg = np.sort(bisect_brackets(sec.neg_reduced, neg_br))[::-1]  # deepest first
    n_wells = sum(1 for g in spec.strengths if g < 0)
    if len(x_neg) > n_wells:
        raise SolverFailure(f"{len(x_neg)} bound states exceed {n_wells} attractive deltas", trace)

    need = n_states - len(x_neg)
    x_hi = (max(need, 0) + 3) * math.pi
    while True:
        pos_br = _stable_scan(sec.pos_reduced, 0.0, x_hi, density, trace, "positive")
        if any(b.double for b in pos_br):
            raise DegeneracyError("degenerate positive-energy root")
        x_pos = bisect_brackets(sec.pos_reduced, pos_br)
        fam = ["secular"] * len(x_pos)
        if spec.topology is Topology.LOLLIPOP:
            loops = _loop_family(spec, x_hi)
            x_pos = np.concatenate([x_pos, loops])
            fam += ["loop"] * len(loops)
        if len(x_pos) >= need:
            break
        if x_hi > 4 * (n_states + 3) * math.pi:
            raise SolverFailure("positive-energy root count shortfall", trace)
        x_hi *= 1.5

    order = np.argsort(x_pos, kind="stable")
    x_pos = x_pos[order][:need]
    fam = [fam[i] for i in order[:need]]
    for xs in (x_neg, x_pos):
        if len(xs) > 1 and np.min(np.abs(np.diff(xs))) < DEGENERACY_DX:
            raise DegeneracyError("near-degenerate eigenvalue pair")

    x = np.concatenate([x_neg, x_pos])
    bound = np.concatenate([np.ones(len(x_neg), bool), np.zeros(len(x_pos), bool)])
    energies = np.where(bound, -1.0, 1.0) * x**2 / (2.0 * L * L)
    return Spectrum(x, bound, tuple(["secular"] * len(x_neg) + fam), energies, spec.topology, L)


def track_vs_g(spec: GraphSpec, g_values: Sequence[float], delta_index: int = 0,
               n_states: int = DEFAULT_STATES) -> list[Spectrum]:
    """Spectra along a monotone sweep of one delta strength."""
    g_values = np.asarray(g_values, dtype=float)
    d = np.diff(g_values)
    if len(d) and not (np.all(d > 0) or np.all(d < 0)):
        raise ValidationError("g grid must be strictly monotone")
    out = []
    for g in g_values:
        strengths = list(spec.strengths)
        strengths[delta_index] = float(g)
        out.append(solve_spectrum(spec.with_strengths(strengths), n_states))
    return out
