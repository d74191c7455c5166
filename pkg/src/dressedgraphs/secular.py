"""Secular (characteristic) functions of the dressed graphs.

Every function takes the dimensionless argument ``x = k*L`` (or ``kappa*L``
on the negative-energy branch) where ``L`` is the total graph length, and
edge lengths in any common unit. Differences of cosines are evaluated through
the product identity ``cos A - cos B = -2 sin((A+B)/2) sin((A-B)/2)`` so the
functions stay accurate at small ``x``; the values are the printed
expressions, only the evaluation order differs.

All wire functions are in expanded (sum) form so they have no poles where an
intermediate ``sin(k*edge)`` vanishes. The product forms are kept for
cross-checks only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .graph import GraphSpec, Topology

SERIES_BELOW = 1e-4


def _arg(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("secular functions need a positive argument")
    return x


def _out(x, val):
    return float(val) if np.ndim(x) == 0 else val


def _geometry(*lengths):
    if any(not (l > 0) for l in lengths):
        raise DomainError("edge lengths must be positive")
    return float(sum(lengths))


# ---------------------------------------------------------------------------
# one delta on a wire
# ---------------------------------------------------------------------------

def f_delta(g, omega, x):
    """``-(1/x) [g (cos x - cos(omega x)) - x sin x]``."""
    x = _arg(x)
    diff = -2.0 * np.sin(0.5 * x * (1.0 + omega)) * np.sin(0.5 * x * (1.0 - omega))
    return _out(x, -(g * diff - x * np.sin(x)) / x)


def f_delta_neg(g, omega, x):
    """Real factor of the ``k -> i kappa`` continuation:
    ``(1/x) [g (cosh x - cosh(omega x)) + x sinh x]``."""
    x = _arg(x)
    diff = 2.0 * np.sinh(0.5 * x * (1.0 + omega)) * np.sinh(0.5 * x * (1.0 - omega))
    return _out(x, (g * diff + x * np.sinh(x)) / x)


def critical_strength_wire(omega):
    """Strength below which a single wire delta binds: ``2 / (omega**2 - 1)``."""
    if not abs(omega) < 1:
        raise DomainError("|omega| must be < 1 for an interior delta")
    return 2.0 / (omega * omega - 1.0)


# ---------------------------------------------------------------------------
# two deltas: segments a | c | b (c in the middle)
# ---------------------------------------------------------------------------

def f_2delta(g1, g2, a, b, c, x):
    x = _arg(x)
    L = _geometry(a, b, c)
    k = x / L
    sa, sb, sc = np.sin(k * a), np.sin(k * b), np.sin(k * c)
    return _out(x, 4.0 * g1 * g2 * sa * sb * sc / x**2
                + 2.0 / x * (g1 * sa * np.sin(k * (b + c)) + g2 * sb * np.sin(k * (a + c)))
                + np.sin(x))


def f_2delta_neg(g1, g2, a, b, c, x):
    """``-i F(i kappa)`` for two deltas: the positive form with sin -> sinh."""
    x = _arg(x)
    L = _geometry(a, b, c)
    k = x / L
    sa, sb, sc = np.sinh(k * a), np.sinh(k * b), np.sinh(k * c)
    return _out(x, 4.0 * g1 * g2 * sa * sb * sc / x**2
                + 2.0 / x * (g1 * sa * np.sinh(k * (b + c)) + g2 * sb * np.sinh(k * (a + c)))
                + np.sinh(x))


def f_2delta_product(g1, g2, a, b, c, x):
    """Motif product form ``F(g1; a, c) F(g2; b, c) - sin(ka) sin(kb)``.

    Equals ``sin(kc) * f_2delta`` identically.
    """
    x = _arg(x)
    L = _geometry(a, b, c)
    k = x / L
    L1, L2 = a + c, b + c
    w1, w2 = 2 * a / L1 - 1, 2 * b / L2 - 1
    F1 = -(g1 * (np.cos(k * L1) - np.cos(w1 * k * L1)) - x * np.sin(k * L1)) / x
    F2 = -(g2 * (np.cos(k * L2) - np.cos(w2 * k * L2)) - x * np.sin(k * L2)) / x
    return _out(x, F1 * F2 - np.sin(k * a) * np.sin(k * b))


def coeffs_2delta_neg(g1, g2, a, b, c):
    """Coefficients of ``C1 x + C3 x^3/3! + C5 x^5/5!`` for ``f_2delta_neg``."""
    L = _geometry(a, b, c)
    L1, L2 = a + c, b + c
    r = 120.0 / 36.0
    C1 = 4 * g1 * g2 * a * b * c / L**3 + 2 * g1 * a * L2 / L**2 + 2 * g2 * b * L1 / L**2 + 1.0
    C3 = (4 * g1 * g2 * a * b * c * (a * a + b * b + c * c) / L**5
          + 2 * g1 * (a * L2**3 + a**3 * L2) / L**4
          + 2 * g2 * (b * L1**3 + b**3 * L1) / L**4 + 1.0)
    C5 = (4 * g1 * g2 * a * b * c * (a**4 + b**4 + c**4 + r * (a * a * b * b + a * a * c * c + b * b * c * c)) / L**7
          + 2 * g1 * (a * L2**5 + a**5 * L2 + r * a**3 * L2**3) / L**6
          + 2 * g2 * (b * L1**5 + b**5 * L1 + r * b**3 * L1**3) / L**6 + 1.0)
    return C1, C3, C5


def threshold_2delta_g1(g2, a, b, c):
    """Value of g1 below which ``C1 < 0`` (one bound state when g2 > 0)."""
    L = _geometry(a, b, c)
    L1, L2 = a + c, b + c
    return -0.5 * (L**3 + 2 * g2 * b * L * L1) / (a * L * L2 + 2 * g2 * a * b * c)


# ---------------------------------------------------------------------------
# three deltas: segments a | b | c | d
# ---------------------------------------------------------------------------

def _f3(g1, g2, g3, a, b, c, d, x, s):
    L = _geometry(a, b, c, d)
    k = x / L
    sa, sb, sc, sd = s(k * a), s(k * b), s(k * c), s(k * d)
    sL1, sL2, sL3 = s(k * (a + b)), s(k * (b + c)), s(k * (c + d))
    return (8 * g1 * g2 * g3 * sa * sb * sc * sd / x**3
            + 4 / x**2 * (g1 * g2 * sa * sb * sL3 + g2 * g3 * sc * sd * sL1 + g1 * g3 * sa * sd * sL2)
            + 2 / x * (g1 * sa * s(k * (b + c + d)) + g3 * sd * s(k * (a + b + c)) + g2 * sL1 * sL3)
            + s(x))


def f_3delta(g1, g2, g3, a, b, c, d, x):
    """Eight-term expanded form divided by ``x**3`` (so g = 0 gives sin x)."""
    x = _arg(x)
    return _out(x, _f3(g1, g2, g3, a, b, c, d, x, np.sin))


def f_3delta_neg(g1, g2, g3, a, b, c, d, x):
    x = _arg(x)
    return _out(x, _f3(g1, g2, g3, a, b, c, d, x, np.sinh))


def f_3delta_product(g1, g2, g3, a, b, c, d, x):
    """Motif product form ``F1 F2 F3 - F1 sin(kb) sin(kd) - F3 sin(ka) sin(kc)``.

    Each motif factor is ``sin k(l + r) + (2 g / x) sin(k l) sin(k r)``.
    """
    x = _arg(x)
    L = _geometry(a, b, c, d)
    k = x / L

    def motif(g, left, right):
        return np.sin(k * (left + right)) + 2 * g / x * np.sin(k * left) * np.sin(k * right)

    F1, F2, F3 = motif(g1, a, b), motif(g2, b, c), motif(g3, c, d)
    return _out(x, F1 * F2 * F3 - F1 * np.sin(k * b) * np.sin(k * d) - F3 * np.sin(k * a) * np.sin(k * c))


# ---------------------------------------------------------------------------
# 3-star with a central delta
# ---------------------------------------------------------------------------

def _star_bare(a, b, c, k, cosdiff):
    L = a + b + c
    return 0.25 * (cosdiff(k * abs(a + b - c), k * L) + cosdiff(k * abs(a - b + c), k * L)
                   + cosdiff(k * abs(a - b - c), k * L))


def f_star(g, a, b, c, x):
    """``F_star + (2g/x) sin(ka) sin(kb) sin(kc)``, ``F_star`` the bare 3-star function."""
    x = _arg(x)
    L = _geometry(a, b, c)
    k = x / L

    def cosdiff(p, q):  # cos p - cos q
        return -2.0 * np.sin(0.5 * (p + q)) * np.sin(0.5 * (p - q))

    bare = _star_bare(a, b, c, k, cosdiff)
    return _out(x, bare + 2 * g / x * np.sin(k * a) * np.sin(k * b) * np.sin(k * c))


def f_star_bare_printed(a, b, c, x):
    """Bare star function evaluated literally as printed (cross-check only)."""
    x = _arg(x)
    L = _geometry(a, b, c)
    k = x / L
    return _out(x, 0.25 * (np.cos(k * abs(a + b - c)) + np.cos(k * abs(a - b + c))
                           + np.cos(k * abs(a - b - c)) - 3 * np.cos(k * L)))


def f_star_neg(g, a, b, c, x):
    """``(1/4)[cosh kL1 + cosh kL2 + cosh kL3 - 3 cosh kL] - (2g/x) sinh ka sinh kb sinh kc``."""
    x = _arg(x)
    L = _geometry(a, b, c)
    k = x / L

    def coshdiff(p, q):  # cosh p - cosh q
        return 2.0 * np.sinh(0.5 * (p + q)) * np.sinh(0.5 * (p - q))

    bare = _star_bare(a, b, c, k, coshdiff)
    return _out(x, bare - 2 * g / x * np.sinh(k * a) * np.sinh(k * b) * np.sinh(k * c))


def critical_strength_star(a, b, c):
    return -(a + b + c) * (a * b + a * c + b * c) / (2.0 * a * b * c)


# ---------------------------------------------------------------------------
# lollipop with a delta at the junction; x = k (a + Lloop)
# ---------------------------------------------------------------------------

def f_pop(g, a, Lloop, x):
    x = _arg(x)
    L = _geometry(a, Lloop)
    k = x / L
    bare = 0.5 * (3 * np.cos(k * (a + Lloop / 2)) - np.cos(k * (a - Lloop / 2)))
    return _out(x, bare + 2 * g / x * np.sin(k * a) * np.cos(k * Lloop / 2))


def f_pop_neg(g, a, Lloop, x):
    x = _arg(x)
    L = _geometry(a, Lloop)
    k = x / L
    bare = 0.5 * (3 * np.cosh(k * (a + Lloop / 2)) - np.cosh(k * (a - Lloop / 2)))
    return _out(x, bare + 2 * g / x * np.sinh(k * a) * np.cosh(k * Lloop / 2))


def critical_strength_pop(a, Lloop):
    """Strength below which the dressed lollipop binds (sign of the x -> 0 limit)."""
    return -(a + Lloop) / (2.0 * a)


# ---------------------------------------------------------------------------
# bound secular function used by the eigensolver
# ---------------------------------------------------------------------------

def wire_leading_coefficient(strengths, fractions):
    """x -> 0 limit of ``f/x`` on either branch for a wire (``C1``)."""
    t = [0.0] + list(fractions) + [1.0]
    g = list(strengths)
    n = len(g)
    total = 1.0
    # sum over nonempty ordered subsets of deltas
    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        term = 1.0
        prev = 0.0
        for i in idx:
            term *= 2.0 * g[i] * (t[i + 1] - prev)
            prev = t[i + 1]
        total += term * (1.0 - prev)
    return total


@dataclass(frozen=True)
class SecularFn:
    """Secular function bound to a particular graph.

    ``pos``/``neg`` evaluate the positive- and negative-energy branches.
    ``pos_reduced``/``neg_reduced`` divide out the trivial ``x**power`` zero
    at the origin and switch to the leading series value below ``1e-4``; they
    are what the root scan brackets.
    """

    topology: Topology
    lengths: tuple[float, ...]
    strengths: tuple[float, ...]
    power: int
    leading_pos: float
    leading_neg: float

    @property
    def neg_upper(self) -> float:
        return float(sum(abs(g) for g in self.strengths) + 10.0)

    def pos(self, x):
        t, l, g = self.topology, self.lengths, self.strengths
        if t is Topology.WIRE1:
            return f_delta(g[0], 2 * l[0] / (l[0] + l[1]) - 1, x)
        if t is Topology.WIRE2:
            a, c, b = l
            return f_2delta(g[0], g[1], a, b, c, x)
        if t is Topology.WIRE3:
            return f_3delta(*g, *l, x)
        if t is Topology.STAR:
            return f_star(g[0], *l, x)
        return f_pop(g[0], *l, x)

    def neg(self, x):
        t, l, g = self.topology, self.lengths, self.strengths
        if t is Topology.WIRE1:
            return f_delta_neg(g[0], 2 * l[0] / (l[0] + l[1]) - 1, x)
        if t is Topology.WIRE2:
            a, c, b = l
            return f_2delta_neg(g[0], g[1], a, b, c, x)
        if t is Topology.WIRE3:
            return f_3delta_neg(*g, *l, x)
        if t is Topology.STAR:
            return f_star_neg(g[0], *l, x)
        return f_pop_neg(g[0], *l, x)

    def _reduced(self, fn, lead, x):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, lead, dtype=float)
        big = x >= SERIES_BELOW
        if np.any(big):
            xb = x[big]
            out[big] = fn(xb) / xb**self.power
        return float(out) if out.ndim == 0 else out

    def pos_reduced(self, x):
        return self._reduced(self.pos, self.leading_pos, x)

    def neg_reduced(self, x):
        return self._reduced(self.neg, self.leading_neg, x)


def secular_for(spec: GraphSpec) -> SecularFn:
    topo = spec.topology
    L = spec.total_length
    g = spec.strengths
    if topo.is_wire:
        cuts = (0.0,) + spec.positions + (L,)
        lengths = tuple(cuts[i + 1] - cuts[i] for i in range(len(cuts) - 1))
        c1 = wire_leading_coefficient(g, [p / L for p in spec.positions])
        return SecularFn(topo, lengths, g, 1, c1, c1)
    if topo is Topology.STAR:
        a, b, c = (e.length for e in spec.edges)
        lead = (a * b + b * c + c * a) / L**2 + 2 * g[0] * a * b * c / L**3
        return SecularFn(topo, (a, b, c), g, 2, lead, -lead)
    a, loop = spec.edges[0].length, spec.edges[1].length
    lead = 1.0 + 2 * g[0] * a / L
    return SecularFn(topo, (a, loop), g, 0, lead, lead)
