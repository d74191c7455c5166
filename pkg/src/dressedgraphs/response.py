"""Intrinsic first and second hyperpolarizabilities from a TransitionTable.

All quantities are normalised to the fundamental limits, so a value of 1
is the largest response any one-electron system can reach.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InsufficientBasisError, ValidationError
from .moments import TransitionTable

BETA_PREFACTOR = 0.75 ** 0.75
THETA_GRID = 720
IMPORTANCE_FLOOR = 1e-12

BETA_KEYS = ("xxx", "xxy", "xyy", "yyy")
GAMMA_KEYS = ("xxxx", "xxxy", "xxyy", "xyyy", "yyyy")


@dataclass(frozen=True)
class BetaTensor:
    xxx: float = 0.0
    xxy: float = 0.0
    xyy: float = 0.0
    yyy: float = 0.0

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class GammaTensor:
    xxxx: float = 0.0
    xxxy: float = 0.0
    xxyy: float = 0.0
    xyyy: float = 0.0
    yyyy: float = 0.0

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TlaDiagnostics:
    X: float
    E: float
    f: float
    G: float
    fG: float
    beta_3L: float
    beta3: float
    beta4: float
    gamma3: float
    gamma4: float
    beta_ranking: tuple
    gamma_ranking: tuple


def _check(table: TransitionTable):
    if table.n_states < 3:
        raise InsufficientBasisError("response sums need at least three states")


def _parts(table: TransitionTable, xi_x=None, xi_y=None):
    """Per component: v = xi_0n / e_n and barred block A = xi_nm - delta_nm xi_00."""
    e = table.e[1:]
    out = {}
    for c, xi in (("x", table.xi_x if xi_x is None else xi_x), ("y", table.xi_y if xi_y is None else xi_y)):
        A = xi[1:, 1:] - xi[0, 0] * np.eye(len(e))
        out[c] = (xi[0, 1:] / e, A, xi[0, 1:])
    return out, e


def _beta_raw(parts, i, j, k):
    return BETA_PREFACTOR * float(parts[i][0] @ parts[j][1] @ parts[k][0])


def _gamma_raw(parts, e, i, j, k, l):
    vi, Aj = parts[i][0], parts[j][1]
    Ak, vl = parts[k][1], parts[l][0]
    first = float(vi @ Aj @ ((Ak @ vl) / e))
    second = float(np.sum(parts[i][2] * parts[j][2] / e) * np.sum(parts[k][2] * parts[l][2] / e**2))
    return 0.25 * (first - second)


def _sym(raw, key):
    perms = set(itertools.permutations(key))
    return sum(raw(*p) for p in perms) / len(perms)


def beta_intrinsic(table: TransitionTable) -> BetaTensor:
    _check(table)
    parts, _ = _parts(table)
    return BetaTensor(**{k: _sym(lambda *ix: _beta_raw(parts, *ix), k) for k in BETA_KEYS})


def gamma_intrinsic(table: TransitionTable) -> GammaTensor:
    _check(table)
    parts, e = _parts(table)
    return GammaTensor(**{k: _sym(lambda *ix: _gamma_raw(parts, e, *ix), k) for k in GAMMA_KEYS})


# ---------------------------------------------------------------------------
# rotations, norms, spherical parts

def rotate_beta(t: BetaTensor, theta):
    """beta_xxx seen along the direction at angle ``theta`` in the graph frame."""
    c, s = np.cos(theta), np.sin(theta)
    return t.xxx * c**3 + 3 * t.xxy * c * c * s + 3 * t.xyy * c * s * s + t.yyy * s**3


def rotate_gamma(t: GammaTensor, theta):
    c, s = np.cos(theta), np.sin(theta)
    return (t.xxxx * c**4 + 4 * t.xxxy * c**3 * s + 6 * t.xxyy * c * c * s * s
            + 4 * t.xyyy * c * s**3 + t.yyyy * s**4)


def rotated_beta_tensor(t: BetaTensor, phi: float) -> BetaTensor:
    """Components after rotating the graph itself by ``phi``."""
    c, s = math.cos(phi), math.sin(phi)
    R = np.array([[c, -s], [s, c]])
    T = _full(t, 3)
    T = np.einsum("ai,bj,ck,ijk->abc", R, R, R, T)
    return BetaTensor(T[0, 0, 0], T[0, 0, 1], T[0, 1, 1], T[1, 1, 1])


def rotated_gamma_tensor(t: GammaTensor, phi: float) -> GammaTensor:
    c, s = math.cos(phi), math.sin(phi)
    R = np.array([[c, -s], [s, c]])
    T = np.einsum("ai,bj,ck,dl,ijkl->abcd", R, R, R, R, _full(t, 4))
    return GammaTensor(T[0, 0, 0, 0], T[0, 0, 0, 1], T[0, 0, 1, 1], T[0, 1, 1, 1], T[1, 1, 1, 1])


def _full(t, rank):
    T = np.zeros((2,) * rank)
    for idx in itertools.product((0, 1), repeat=rank):
        T[idx] = getattr(t, "x" * (rank - sum(idx)) + "y" * sum(idx))
    return T


def _theta_star(fn, key):
    grid = np.linspace(0.0, 2 * math.pi, THETA_GRID, endpoint=False)
    vals = key(fn(grid))
    h = grid[1] - grid[0]
    best_t, best_v = float(grid[np.argmax(vals)]), float(np.max(vals))
    # refine every local maximum of the coarse grid
    for i in np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1))):
        res = minimize_scalar(lambda t: -float(key(fn(t))), bounds=(grid[i] - h, grid[i] + h),
                              method="bounded", options={"xatol": 1e-10})
        if -res.fun > best_v:
            best_t, best_v = float(res.x), float(-res.fun)
    return best_t % (2 * math.pi)


def theta_star_beta(t: BetaTensor) -> float:
    """Angle at which rotate_beta is largest."""
    return _theta_star(lambda th: rotate_beta(t, th), lambda v: v)


def theta_star_gamma(t: GammaTensor) -> float:
    """Angle at which |rotate_gamma| is largest."""
    return _theta_star(lambda th: rotate_gamma(t, th), np.abs)


def beta_norm(t: BetaTensor) -> float:
    return math.sqrt(t.xxx**2 + 3 * t.xxy**2 + 3 * t.xyy**2 + t.yyy**2)


def gamma_norm(t: GammaTensor) -> float:
    return math.sqrt(t.xxxx**2 + 4 * t.xxxy**2 + 6 * t.xxyy**2 + 4 * t.xyyy**2 + t.yyyy**2)


def spherical_beta(t: BetaTensor) -> dict:
    """In-plane spherical components as printed, plus per-J norms."""
    a = t.xxx + t.xyy
    b = t.yyy + t.xxy
    comps = {}
    for sgn, m in ((1, 1), (-1, -1)):
        comps[(1, m)] = math.sqrt(3 / 10) * complex(sgn * a, b)
        comps[(3, m)] = math.sqrt(3 / 40) * complex(sgn * a, b)
        comps[(3, 3 * m)] = math.sqrt(1 / 8) * complex(sgn * (-t.xxx + 3 * t.xyy), t.yyy - 3 * t.xxy)
    norms = {J: sum(abs(v) ** 2 for (j, _), v in comps.items() if j == J) for J in (1, 3)}
    return {"components": comps, "norms": norms}


def spherical_gamma(t: GammaTensor) -> dict:
    s = t.xxxx + 2 * t.xxyy + t.yyyy
    d = -t.xxxx + t.yyyy
    o = t.xxxy + t.xyyy
    comps = {(0, 0): complex(math.sqrt(1 / 5) * s), (2, 0): complex(math.sqrt(1 / 7) * s),
             (4, 0): complex(math.sqrt(9 / 280) * s)}
    for sgn, m in ((1, 1), (-1, -1)):
        comps[(2, 2 * m)] = math.sqrt(3 / 14) * complex(d, -2 * sgn * o)
        comps[(4, 2 * m)] = math.sqrt(1 / 28) * complex(d, -2 * sgn * o)
        comps[(4, 4 * m)] = math.sqrt(1 / 4) * complex(t.xxxx - 6 * t.xxyy + t.yyyy,
                                                       4 * sgn * (t.xxxy - t.xyyy))
    norms = {J: sum(abs(v) ** 2 for (j, _), v in comps.items() if j == J) for J in (0, 2, 4)}
    return {"components": comps, "norms": norms}


# ---------------------------------------------------------------------------
# importance ranking and truncated sums, evaluated along one lab direction

def _axis_table(table: TransitionTable, theta: float) -> TransitionTable:
    c, s = math.cos(theta), math.sin(theta)
    xi = c * table.xi_x + s * table.xi_y
    return TransitionTable(table.energies, table.e, xi * table.x01_max, np.zeros_like(xi),
                           xi, np.zeros_like(xi), table.x01_max)


def _axis_beta(table):
    parts, _ = _parts(table)
    return _beta_raw(parts, "x", "x", "x")


def _axis_gamma(table):
    parts, e = _parts(table)
    return _gamma_raw(parts, e, "x", "x", "x", "x")


def importance_ranking(table: TransitionTable, which: str = "beta", theta: float = 0.0) -> tuple:
    """Excited states ordered by the summed |term| of every SOS term they enter."""
    _check(table)
    t = _axis_table(table, theta)
    xi, e = t.xi_x, t.e[1:]
    n = len(e)
    v = xi[0, 1:]
    A = xi[1:, 1:] - xi[0, 0] * np.eye(n)
    imp = np.zeros(n)
    if which == "beta":
        T = np.abs(BETA_PREFACTOR * (v / e)[:, None] * A * (v / e)[None, :])
        imp += T.sum(axis=1) + T.sum(axis=0) - np.diag(T)
    elif which == "gamma":
        w = v / e
        T1 = np.abs(0.25 * w[:, None, None] * A[:, :, None] * (A / e[:, None])[None, :, :] * w[None, None, :])
        for s in range(n):
            mask = np.zeros((n, n, n), bool)
            mask[s], mask[:, s], mask[:, :, s] = True, True, True
            imp[s] += T1[mask].sum()
        T2 = np.abs(0.25 * (v * v / e)[:, None] * (v * v / e**2)[None, :])
        imp += T2.sum(axis=1) + T2.sum(axis=0) - np.diag(T2)
    else:
        raise ValidationError("which must be 'beta' or 'gamma'")
    imp[imp < IMPORTANCE_FLOOR] = 0.0
    order = sorted(range(n), key=lambda i: (-imp[i], i))
    return tuple(i + 1 for i in order)


def _restrict(table: TransitionTable, keep) -> TransitionTable:
    keep = np.asarray(sorted(keep))
    sub = np.ix_(keep, keep)
    return TransitionTable(table.energies[keep], table.e[keep], table.x[sub], table.y[sub],
                           table.xi_x[sub], table.xi_y[sub], table.x01_max)


def truncated_response(table: TransitionTable, which: str = "beta", top_k: int = 3,
                       theta: float = 0.0, ranking: tuple | None = None) -> float:
    """Sum restricted to ``top_k`` states: the ground state plus the ``top_k - 1``
    most important excited states, along direction ``theta``."""
    if top_k < 2:
        raise ValidationError("top_k must be at least 2")
    rank = ranking if ranking is not None else importance_ranking(table, which, theta)
    keep = [0, *rank[: top_k - 1]]
    t = _restrict(_axis_table(table, theta), keep)
    return _axis_beta(t) if which == "beta" else _axis_gamma(t)


def f_of_E(E: float) -> float:
    return (1 - E) ** 1.5 * (E * E + 1.5 * E + 1)


def G_of_X(X: float) -> float:
    return 3 ** 0.25 * X * math.sqrt(1.5 * max(0.0, 1 - X**4))


def tla_params(table: TransitionTable, theta_beta: float = 0.0, theta_gamma: float = 0.0) -> TlaDiagnostics:
    _check(table)
    X = abs(float(table.xi_x[0, 1]))
    E = 1.0 / float(table.e[2])
    f, G = f_of_E(E), G_of_X(X)
    b3l = _axis_beta(_restrict(_axis_table(table, 0.0), [0, 1, 2]))
    rb = importance_ranking(table, "beta", theta_beta)
    rg = importance_ranking(table, "gamma", theta_gamma)
    return TlaDiagnostics(
        X=X, E=E, f=f, G=G, fG=f * G, beta_3L=b3l,
        beta3=truncated_response(table, "beta", 3, theta_beta, rb),
        beta4=truncated_response(table, "beta", 4, theta_beta, rb),
        gamma3=truncated_response(table, "gamma", 3, theta_gamma, rg),
        gamma4=truncated_response(table, "gamma", 4, theta_gamma, rg),
        beta_ranking=rb, gamma_ranking=rg,
    )
