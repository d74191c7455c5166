"""Graph problem statements: topology, geometry and delta-potential dressing.

Lengths are in arbitrary graph units. A delta of dimensionless strength ``g``
acts as the potential ``(g / L) * delta(s - position)`` where ``L`` is the
total length of the graph, so every intrinsic quantity is scale free.

Edge angles are measured from the lab x-axis. For wires the edges are laid end
to end starting at the origin; for the star every edge leaves the central
vertex; for the lollipop the prong leaves the junction along its angle and the
loop is a triangle that leaves the junction along the loop angle and closes
counter-clockwise.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import UnsupportedTopologyError, ValidationError

PLACEMENT_TOL = 1e-9


class Topology(str, enum.Enum):
    WIRE1 = "Wire1Delta"
    WIRE2 = "Wire2Delta"
    WIRE3 = "Wire3Delta"
    STAR = "StarDelta"
    LOLLIPOP = "LollipopDelta"

    @property
    def is_wire(self) -> bool:
        return self in (Topology.WIRE1, Topology.WIRE2, Topology.WIRE3)

    @property
    def n_deltas(self) -> int:
        return {"Wire1Delta": 1, "Wire2Delta": 2, "Wire3Delta": 3}.get(self.value, 1)


def wrap_angle(theta: float) -> float:
    """Map an angle onto [-pi, pi)."""
    return float((theta + math.pi) % (2.0 * math.pi) - math.pi)


@dataclass(frozen=True)
class EdgeSpec:
    length: float
    angle: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise ValidationError(f"edge length must be positive, got {self.length!r}")
        if not math.isfinite(self.angle):
            raise ValidationError("edge angle must be finite")
        object.__setattr__(self, "angle", wrap_angle(self.angle))


CENTER = "center"


@dataclass(frozen=True)
class DeltaSpec:
    g: float
    position: float | str = CENTER

    def __post_init__(self):
        if not math.isfinite(self.g):
            raise ValidationError("delta strength must be finite")
        if isinstance(self.position, str):
            if self.position != CENTER:
                raise ValidationError(f"unknown delta position tag {self.position!r}")
        elif not math.isfinite(self.position):
            raise ValidationError("delta position must be finite")


@dataclass(frozen=True)
class GraphSpec:
    """Immutable problem statement.

    ``loop_sides`` only applies to the lollipop: the fractions of the loop
    length taken by the three sides of the loop triangle (default equilateral).
    """

    topology: Topology
    edges: tuple[EdgeSpec, ...]
    deltas: tuple[DeltaSpec, ...]
    loop_sides: tuple[float, float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology(self.topology))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "deltas", tuple(self.deltas))
        if not self.edges:
            raise ValidationError("a graph needs at least one edge")
        topo = self.topology
        if len(self.deltas) != topo.n_deltas:
            raise ValidationError(
                f"{topo.value} needs {topo.n_deltas} delta(s), got {len(self.deltas)}")
        if topo.is_wire:
            self._check_wire()
        else:
            if any(d.position != CENTER for d in self.deltas):
                raise ValidationError(f"{topo.value} deltas must sit at the central vertex")
            if topo is Topology.STAR and len(self.edges) != 3:
                raise ValidationError("StarDelta needs exactly 3 edges")
            if topo is Topology.LOLLIPOP:
                if len(self.edges) != 2:
                    raise ValidationError("LollipopDelta needs a prong edge and a loop edge")
                self._check_loop()
        if topo is not Topology.LOLLIPOP and self.loop_sides is not None:
            raise ValidationError("loop_sides only applies to LollipopDelta")

    def _check_wire(self):
        L = self.total_length
        tol = PLACEMENT_TOL * L
        prev = 0.0
        for d in self.deltas:
            if isinstance(d.position, str):
                raise ValidationError("wire deltas need a numeric arc-length position")
            if d.position <= prev + tol:
                raise ValidationError(
                    "wire delta positions must be interior, strictly increasing and distinct")
            prev = d.position
        if prev >= L - tol:
            raise ValidationError("wire delta positions must be interior")

    def _check_loop(self):
        sides = self.loop_sides
        if sides is None:
            return
        sides = tuple(float(s) for s in sides)
        if len(sides) != 3 or any(not (s > 0) for s in sides):
            raise ValidationError("loop_sides needs three positive fractions")
        total = sum(sides)
        sides = tuple(s / total for s in sides)
        if any(2.0 * s >= 1.0 - 1e-12 for s in sides):
            raise ValidationError("loop_sides violate the triangle inequality")
        object.__setattr__(self, "loop_sides", sides)

    @property
    def total_length(self) -> float:
        return float(sum(e.length for e in self.edges))

    @property
    def strengths(self) -> tuple[float, ...]:
        return tuple(d.g for d in self.deltas)

    @property
    def positions(self) -> tuple[float, ...]:
        """Wire delta positions (arc length from the left end)."""
        if not self.topology.is_wire:
            raise UnsupportedTopologyError(f"{self.topology.value} has no arc-length positions")
        return tuple(float(d.position) for d in self.deltas)

    def with_strengths(self, strengths: Sequence[float]) -> "GraphSpec":
        deltas = tuple(replace(d, g=float(g)) for d, g in zip(self.deltas, strengths, strict=True))
        return replace(self, deltas=deltas)

    def rotated(self, theta: float) -> "GraphSpec":
        """The same graph rigidly rotated by ``theta`` in the lab frame."""
        return replace(self, edges=tuple(EdgeSpec(e.length, e.angle + theta) for e in self.edges))

    def scaled(self, factor: float) -> "GraphSpec":
        if not factor > 0:
            raise ValidationError("scale factor must be positive")
        edges = tuple(EdgeSpec(e.length * factor, e.angle) for e in self.edges)
        deltas = tuple(d if isinstance(d.position, str) else replace(d, position=d.position * factor)
                       for d in self.deltas)
        return replace(self, edges=edges, deltas=deltas)

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "topology": self.topology.value,
            "edges": [{"length": e.length, "angle": e.angle} for e in self.edges],
            "deltas": [{"g": d.g, "position": d.position} for d in self.deltas],
        }
        if self.loop_sides is not None:
            out["loop_sides"] = list(self.loop_sides)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "GraphSpec":
        try:
            edges = tuple(EdgeSpec(float(e["length"]), float(e.get("angle", 0.0)))
                          for e in data["edges"])
            deltas = []
            for d in data["deltas"]:
                pos = d.get("position", CENTER)
                deltas.append(DeltaSpec(float(d["g"]), pos if isinstance(pos, str) else float(pos)))
            sides = data.get("loop_sides")
            return cls(Topology(data["topology"]), edges, tuple(deltas),
                       None if sides is None else tuple(sides))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed graph description: {exc}") from exc
        except ValueError as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "GraphSpec":
        return cls.from_dict(json.loads(text))


def normalize_scale(spec: GraphSpec) -> GraphSpec:
    """Rescale uniformly so the total length is 1; strengths are unchanged."""
    L = spec.total_length
    if L == 1.0:
        return spec
    return spec.scaled(1.0 / L)


def asymmetry(spec: GraphSpec, delta_index: int = 0) -> float:
    """Location parameter omega of a wire delta.

    One delta: ``2a/L - 1``. Two deltas: ``omega_1 = 2a/L1 - 1`` and
    ``omega_2 = 2b/L2 - 1`` with ``L1 = a + c`` and ``L2 = b + c`` the two
    sub-wires of each motif. Three deltas: each delta measured within the wire
    spanned by its neighbours.
    """
    if not spec.topology.is_wire:
        raise UnsupportedTopologyError(f"asymmetry is defined for wires, not {spec.topology.value}")
    L = spec.total_length
    pts = (0.0,) + spec.positions + (L,)
    if not 0 <= delta_index < len(spec.deltas):
        raise IndexError(delta_index)
    if len(spec.deltas) == 1:
        return 2.0 * pts[1] / L - 1.0
    left, here, right = pts[delta_index], pts[delta_index + 1], pts[delta_index + 2]
    if delta_index == len(spec.deltas) - 1:
        # the right-most motif is measured from its far end (omega_2 = 2b/L2 - 1)
        return 2.0 * (right - here) / (right - left) - 1.0
    return 2.0 * (here - left) / (right - left) - 1.0


def straight_wire(positions: Sequence[float], strengths: Sequence[float],
                  length: float = 1.0) -> GraphSpec:
    n = len(positions)
    topo = {1: Topology.WIRE1, 2: Topology.WIRE2, 3: Topology.WIRE3}.get(n)
    if topo is None:
        raise ValidationError(f"wires carry 1 to 3 deltas, got {n}")
    return GraphSpec(topo, (EdgeSpec(length, 0.0),),
                     tuple(DeltaSpec(float(g), float(p)) for p, g in zip(positions, strengths, strict=True)))


def make_spec(topology: Topology | str, params: Mapping[str, float]) -> GraphSpec:
    """Build a spec from a flat parameter mapping (used by scans and Monte Carlo).

    Recognised names per topology:

    * Wire1Delta: ``g`` and ``omega`` or ``position``; optional ``bend`` (the
      second edge turns by this angle at the delta) and ``length``.
    * Wire2Delta / Wire3Delta: ``x1..xn`` positions as fractions of the wire
      (sorted before use), ``g1..gn``; optional ``length``.
    * StarDelta: ``a, b, c`` edge lengths, ``theta1..theta3`` edge angles, ``g``.
    * LollipopDelta: ``a`` prong length, ``loop`` loop length (default
      ``1 - a``), ``l1, l2, l3`` side fractions, ``prong_angle``,
      ``loop_angle``, ``g``.
    """
    topo = Topology(topology)
    p = dict(params)
    if topo is Topology.WIRE1:
        L = float(p.get("length", 1.0))
        if "position" in p:
            a = float(p["position"]) * L
        else:
            a = 0.5 * (float(p["omega"]) + 1.0) * L
        g = float(p["g"])
        if "bend" in p:
            if not 0 < a < L:
                raise ValidationError("delta must be interior")
            edges = (EdgeSpec(a, 0.0), EdgeSpec(L - a, float(p["bend"])))
        else:
            edges = (EdgeSpec(L, 0.0),)
        return GraphSpec(topo, edges, (DeltaSpec(g, a),))
    if topo in (Topology.WIRE2, Topology.WIRE3):
        n = topo.n_deltas
        L = float(p.get("length", 1.0))
        xs = sorted(float(p[f"x{i + 1}"]) for i in range(n))
        gs = [float(p[f"g{i + 1}"]) for i in range(n)]
        return GraphSpec(topo, (EdgeSpec(L, 0.0),),
                         tuple(DeltaSpec(g, x * L) for x, g in zip(xs, gs)))
    if topo is Topology.STAR:
        lengths = [float(p[k]) for k in ("a", "b", "c")]
        default = (0.0, 2.0 * math.pi / 3.0, -2.0 * math.pi / 3.0)
        angles = [float(p.get(f"theta{i + 1}", default[i])) for i in range(3)]
        return GraphSpec(topo, tuple(EdgeSpec(l, t) for l, t in zip(lengths, angles)),
                         (DeltaSpec(float(p["g"]), CENTER),))
    a = float(p["a"])
    loop = float(p.get("loop", 1.0 - a))
    sides = None
    if any(k in p for k in ("l1", "l2", "l3")):
        sides = tuple(float(p[k]) for k in ("l1", "l2", "l3"))
    edges = (EdgeSpec(a, float(p.get("prong_angle", math.pi))),
             EdgeSpec(loop, float(p.get("loop_angle", -math.pi / 6.0))))
    return GraphSpec(topo, edges, (DeltaSpec(float(p["g"]), CENTER),), sides)


# ---------------------------------------------------------------------------
# Solver skeleton: vertices joined by potential-free pieces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Straight stretch of a piece: local arc ``s0..s1`` starting at (x0, y0)."""
    s0: float
    s1: float
    x0: float
    y0: float
    angle: float

    def coords(self, s):
        ds = np.asarray(s, dtype=float) - self.s0
        return self.x0 + ds * math.cos(self.angle), self.y0 + ds * math.sin(self.angle)


@dataclass(frozen=True)
class Piece:
    """Potential-free stretch of the graph from vertex ``u`` (s=0) to ``v``."""
    u: int
    v: int
    length: float
    segments: tuple[Segment, ...]

    def coords(self, s):
        s = np.asarray(s, dtype=float)
        x = np.empty_like(s)
        y = np.empty_like(s)
        for i, seg in enumerate(self.segments):
            last = i == len(self.segments) - 1
            m = (s >= seg.s0) & ((s <= seg.s1) if last else (s < seg.s1))
            x[m], y[m] = seg.coords(s[m])
        return x, y


@dataclass(frozen=True)
class Skeleton:
    """Quantum-graph view of a spec: vertices carry the deltas, pieces are free.

    ``vertex_g`` holds dimensionless strengths (0 for plain joints) and
    ``terminal`` flags Dirichlet ends. ``edge_map[i]`` lists, for spec edge
    ``i``, tuples ``(edge_s0, edge_s1, piece, piece_s0, direction)`` so that
    edge coordinate ``s`` maps to piece coordinate ``piece_s0 + direction*(s - edge_s0)``.
    """
    total_length: float
    vertex_g: tuple[float, ...]
    terminal: tuple[bool, ...]
    pieces: tuple[Piece, ...]
    edge_map: tuple[tuple[tuple[float, float, int, float, int], ...], ...]
    collinear_x: bool

    @property
    def internal(self) -> list[int]:
        return [i for i, t in enumerate(self.terminal) if not t]

    def locate(self, edge: int, s: float) -> tuple[int, float]:
        if not 0 <= edge < len(self.edge_map):
            raise IndexError(f"edge index {edge} out of range")
        spans = self.edge_map[edge]
        for e0, e1, piece, p0, direction in spans:
            if s <= e1 + 1e-15 or (e0, e1) == spans[-1][:2]:
                return piece, min(max(p0 + direction * (s - e0), 0.0), self.pieces[piece].length)
        raise AssertionError("unreachable")


def _polyline_segments(starts, angles, lengths, s_from, s_to, origin_s=0.0):
    """Cut the polyline (cumulative arc ``starts``) to arc range [s_from, s_to]."""
    segs = []
    pts = [(0.0, 0.0)]
    for ang, ln in zip(angles, lengths):
        x, y = pts[-1]
        pts.append((x + ln * math.cos(ang), y + ln * math.sin(ang)))
    for i, (c0, ang, ln) in enumerate(zip(starts, angles, lengths)):
        c1 = c0 + ln
        lo, hi = max(c0, s_from), min(c1, s_to)
        if hi - lo <= 0:
            continue
        x0 = pts[i][0] + (lo - c0) * math.cos(ang)
        y0 = pts[i][1] + (lo - c0) * math.sin(ang)
        segs.append(Segment(lo - s_from + origin_s, hi - s_from + origin_s, x0, y0, ang))
    return tuple(segs)


def build_skeleton(spec: GraphSpec) -> Skeleton:
    topo = spec.topology
    L = spec.total_length
    if topo.is_wire:
        lengths = [e.length for e in spec.edges]
        angles = [e.angle for e in spec.edges]
        starts = list(np.cumsum([0.0] + lengths[:-1]))
        cuts = [0.0] + list(spec.positions) + [L]
        n = len(cuts)
        vertex_g = (0.0,) + spec.strengths + (0.0,)
        terminal = (True,) + (False,) * (n - 2) + (True,)
        pieces = tuple(
            Piece(j, j + 1, cuts[j + 1] - cuts[j],
                  _polyline_segments(starts, angles, lengths, cuts[j], cuts[j + 1]))
            for j in range(n - 1))
        edge_map = []
        for c0, ln in zip(starts, lengths):
            spans = []
            for j in range(n - 1):
                lo, hi = max(c0, cuts[j]), min(c0 + ln, cuts[j + 1])
                if hi > lo:
                    spans.append((lo - c0, hi - c0, j, lo - cuts[j], 1))
            edge_map.append(tuple(spans))
        collinear = all(math.sin(a) == 0.0 and math.cos(a) > 0 for a in angles)
        return Skeleton(L, vertex_g, terminal, pieces, tuple(edge_map), collinear)
    if topo is Topology.STAR:
        pieces = tuple(Piece(0, i + 1, e.length, (Segment(0.0, e.length, 0.0, 0.0, e.angle),))
                       for i, e in enumerate(spec.edges))
        edge_map = tuple(((0.0, e.length, i, 0.0, 1),) for i, e in enumerate(spec.edges))
        return Skeleton(L, (spec.deltas[0].g, 0.0, 0.0, 0.0), (False, True, True, True),
                        pieces, edge_map, False)
    prong, loop = spec.edges
    fr = spec.loop_sides or (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    l1, l2, l3 = (f * loop.length for f in fr)
    alpha = loop.angle
    corner = math.acos(max(-1.0, min(1.0, (l1 * l1 + l3 * l3 - l2 * l2) / (2.0 * l1 * l3))))
    p1 = (l1 * math.cos(alpha), l1 * math.sin(alpha))
    p2 = (l3 * math.cos(alpha + corner), l3 * math.sin(alpha + corner))
    ang2 = math.atan2(p2[1] - p1[1], p2[0] - p1[0])
    ang3 = math.atan2(-p2[1], -p2[0])
    loop_piece = Piece(1, 1, loop.length, (
        Segment(0.0, l1, 0.0, 0.0, alpha),
        Segment(l1, l1 + l2, p1[0], p1[1], ang2),
        Segment(l1 + l2, loop.length, p2[0], p2[1], ang3),
    ))
    prong_piece = Piece(1, 0, prong.length, (Segment(0.0, prong.length, 0.0, 0.0, prong.angle),))
    edge_map = (((0.0, prong.length, 0, 0.0, 1),), ((0.0, loop.length, 1, 0.0, 1),))
    return Skeleton(L, (0.0, spec.deltas[0].g), (True, False), (prong_piece, loop_piece),
                    edge_map, False)


def spec_from_json_file(path) -> GraphSpec:
    with open(path) as fh:
        return GraphSpec.from_json(fh.read())
