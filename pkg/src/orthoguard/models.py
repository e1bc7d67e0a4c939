"""Guard-graph constructions for the five orthogonal guarding models.

Each model reduces to (bounded-)reachability-cover on a directed graph
derived from a pixelation: staircase directions orient the pixelation
edges, bend budgets are encoded by per-vertex K4 gadgets whose turn edges
cost 1, path-length budgets weight edges by their length, and sliding
cameras enter the gadget graph at one endpoint with budget 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence

from .errors import (
    InvalidGuardSpec,
    ModelRequiresExplicitSets,
    OrthoguardError,
    OutsidePolygon,
    PointNotOnPixelationVertex,
)
from .geom import Coord, OrthoPolygon, Point, Segment
from .pixelate import Pixelation, locate, one_refinement
from .twd import Graph, TreeDecomposition, decompose

ModelKind = Literal["NE", "NW", "SE", "SW", "S", "PERISCOPE", "L1", "SLIDING"]
DIRECTIONAL = ("NE", "NW", "SE", "SW")

#: arm order of the bend gadget; opposite pairs are (N,S) and (E,W)
ARM_DIRS = ("N", "S", "E", "W")
_OPPOSITE = {"N": "S", "S": "N", "E": "W", "W": "E"}


@dataclass(frozen=True)
class Model:
    kind: ModelKind
    k: Optional[int] = None  # PERISCOPE bend budget
    D: Optional[int] = None  # L1 length bound in scaled grid units

    def __post_init__(self):
        if self.kind == "PERISCOPE":
            if self.k is None or self.k < 0:
                raise OrthoguardError("PERISCOPE requires a bend budget k >= 0")
        elif self.kind == "L1":
            if self.D is None or self.D < 0:
                raise OrthoguardError("L1 requires a length bound D >= 0")
        elif self.kind not in ("NE", "NW", "SE", "SW", "S", "SLIDING"):
            raise OrthoguardError(f"unknown model kind {self.kind!r}")


@dataclass(frozen=True)
class GuardSpec:
    """Which guards are available / which points must be watched."""

    mode: Literal["explicit", "all", "segments"]
    points: tuple = ()

    @classmethod
    def all_points(cls) -> "GuardSpec":
        return cls("all")

    @classmethod
    def explicit(cls, points: Iterable[tuple[Coord, Coord]]) -> "GuardSpec":
        return cls("explicit", tuple(tuple(p) for p in points))

    @classmethod
    def maximal_segments(cls) -> "GuardSpec":
        return cls("segments")


@dataclass
class GuardGraph:
    """Directed, nonnegatively weighted graph with guard sources and watch
    sinks.  Immutable once built."""

    labels: tuple
    out_edges: tuple  # per vertex: tuple of (target, weight)
    guard_sources: dict
    watch_sinks: dict
    bound_w: Optional[int]
    copies: tuple  # pixelation vertex id -> tuple of graph vertex ids
    wrapper_anchor: dict  # wrapper vid -> pixelation vertex id

    @property
    def n(self) -> int:
        return len(self.labels)

    def undirected(self) -> Graph:
        edges = set()
        for u, outs in enumerate(self.out_edges):
            for v, _w in outs:
                edges.add((min(u, v), max(u, v)))
        return Graph.from_edges(self.n, edges)

    def validate(self) -> None:
        indeg = [0] * self.n
        outdeg = [0] * self.n
        for u, outs in enumerate(self.out_edges):
            outdeg[u] = len(outs)
            for v, w in outs:
                if w < 0:
                    raise OrthoguardError("negative edge weight")
                indeg[v] += 1
        for vid in self.guard_sources.values():
            if indeg[vid] != 0:
                raise OrthoguardError("guard source has incoming edges")
        for vid in self.watch_sinks.values():
            if outdeg[vid] != 0:
                raise OrthoguardError("watch sink has outgoing edges")


class _Builder:
    def __init__(self):
        self.labels: list = []
        self.out: list[list[tuple[int, int]]] = []

    def vertex(self, label) -> int:
        self.labels.append(label)
        self.out.append([])
        return len(self.labels) - 1

    def edge(self, u: int, v: int, w: int = 0) -> None:
        self.out[u].append((v, w))

    def both(self, u: int, v: int, w: int = 0) -> None:
        self.edge(u, v, w)
        self.edge(v, u, w)

    def finish(self, guard_sources, watch_sinks, bound_w, copies, wrapper_anchor) -> GuardGraph:
        g = GuardGraph(
            labels=tuple(self.labels),
            out_edges=tuple(tuple(o) for o in self.out),
            guard_sources=guard_sources,
            watch_sinks=watch_sinks,
            bound_w=bound_w,
            copies=copies,
            wrapper_anchor=wrapper_anchor,
        )
        g.validate()
        return g


# ---------------------------------------------------------------------------
# shifting reduction


def shift_point(psix: Pixelation, a: tuple[Coord, Coord]) -> Point:
    """Shift a point inside the polygon to its representative vertex of the
    1-refinement: itself on a vertex, the midpoint of its edge, or the
    center of its pixel."""
    if psix.level != "standard":
        raise OrthoguardError("shift_point expects the standard pixelation")
    loc = locate(psix, a)
    if loc.kind == "vertex":
        return psix.vertices[loc.index]
    if loc.kind == "edge":
        p, q = psix.edge_points(loc.index)
        return Point((p.x + q.x) // 2, (p.y + q.y) // 2)
    if loc.kind == "pixel":
        x1, y1, x2, y2 = psix.pixels[loc.index]
        return Point((x1 + x2) // 2, (y1 + y2) // 2)
    raise OutsidePolygon(f"point {a} lies outside the polygon")


@dataclass(frozen=True)
class ReducedInstance:
    guards: tuple[Point, ...]
    watches: tuple[Point, ...]
    psix_work: Pixelation
    cameras: tuple[Segment, ...] = ()


def _explicit_points(spec: GuardSpec) -> list[tuple[Coord, Coord]]:
    pts = []
    for p in spec.points:
        x, y = p
        pts.append((x, y))
    return pts


def _require_vertices(psix: Pixelation, pts: Sequence[tuple[Coord, Coord]]) -> tuple[Point, ...] | None:
    out = []
    for p in pts:
        x, y = p
        if isinstance(x, Fraction) and x.denominator != 1:
            return None
        if isinstance(y, Fraction) and y.denominator != 1:
            return None
        vid = psix.vertex_id((int(x), int(y)))
        if vid is None:
            return None
        out.append(psix.vertices[vid])
    return tuple(sorted(set(out)))


def reduce_instance(
    P: OrthoPolygon,
    psix: Pixelation,
    model: Model,
    gamma: GuardSpec,
    watch: GuardSpec,
) -> ReducedInstance:
    """Reduce possibly-infinite guard/watch sets to finite vertex sets of a
    working pixelation, preserving the optimal cardinality.

    Point-shifting applies to the staircase and periscope models (and to
    watch points of sliding cameras); the four directional models and the
    L1 model require explicit sets that already are pixelation vertices.
    """
    if psix.level != "standard":
        raise OrthoguardError("reduce_instance expects the standard pixelation")
    kind = model.kind

    if kind in DIRECTIONAL or kind == "L1":
        if gamma.mode != "explicit" or watch.mode != "explicit":
            raise ModelRequiresExplicitSets(
                f"{kind} admits no all-points reduction; give explicit vertex sets"
            )
        g_std = _require_vertices(psix, _explicit_points(gamma))
        w_std = _require_vertices(psix, _explicit_points(watch))
        if g_std is not None and w_std is not None:
            return ReducedInstance(g_std, w_std, psix)
        ref = one_refinement(psix)
        g_ref = _require_vertices(ref, _explicit_points(gamma))
        w_ref = _require_vertices(ref, _explicit_points(watch))
        if g_ref is None or w_ref is None:
            raise PointNotOnPixelationVertex(
                f"{kind} guards/watch points must be pixelation vertices"
            )
        return ReducedInstance(g_ref, w_ref, ref)

    if kind in ("S", "PERISCOPE"):
        if gamma.mode == "segments" or watch.mode == "segments":
            raise InvalidGuardSpec(f"segment guards are not point guards for {kind}")

        def reduced_side(spec: GuardSpec):
            if spec.mode == "all":
                return None  # all refinement vertices, filled in below
            return tuple(sorted({shift_point(psix, p) for p in _explicit_points(spec)}))

        g_pts = reduced_side(gamma)
        w_pts = reduced_side(watch)
        need_ref = (
            kind == "PERISCOPE"
            or g_pts is None
            or w_pts is None
            or _require_vertices(psix, g_pts) is None
            or _require_vertices(psix, w_pts) is None
        )
        if not need_ref:
            return ReducedInstance(g_pts, w_pts, psix)
        ref = one_refinement(psix)
        all_ref = tuple(ref.vertices)
        return ReducedInstance(
            all_ref if g_pts is None else g_pts,
            all_ref if w_pts is None else w_pts,
            ref,
        )

    if kind == "SLIDING":
        if gamma.mode != "segments":
            raise InvalidGuardSpec("sliding cameras use maximal-segment guards")
        if watch.mode == "segments":
            raise InvalidGuardSpec("watch points must be points")
        cameras = tuple(enumerate_maximal_segments(psix))
        ref = one_refinement(psix)
        if watch.mode == "all":
            w_pts = tuple(ref.vertices)
        else:
            w_pts = tuple(sorted({shift_point(psix, p) for p in _explicit_points(watch)}))
        return ReducedInstance((), w_pts, ref, cameras)

    raise OrthoguardError(f"unhandled model kind {kind!r}")


# ---------------------------------------------------------------------------
# directional and staircase graphs


def _check_on_vertices(psix: Pixelation, pts: Sequence[Point], what: str) -> list[int]:
    vids = []
    for p in pts:
        vid = psix.vertex_id(tuple(p))
        if vid is None:
            raise PointNotOnPixelationVertex(f"{what} point {p} not a pixelation vertex")
        vids.append(vid)
    return vids


def _directed_edge_ids(psix: Pixelation, direction: str) -> list[tuple[int, int]]:
    """Pixelation edges oriented toward the two compass directions of a
    staircase direction (e.g. NE: west->east and south->north)."""
    east = "E" in direction
    north = "N" in direction
    out = []
    for a, b in psix.edges:
        pa, pb = psix.vertices[a], psix.vertices[b]
        if pa.y == pb.y:  # horizontal
            lo, hi = (a, b) if pa.x < pb.x else (b, a)
            out.append((lo, hi) if east else (hi, lo))
        else:
            lo, hi = (a, b) if pa.y < pb.y else (b, a)
            out.append((lo, hi) if north else (hi, lo))
    return out


def build_directional(
    psix_work: Pixelation,
    direction: str,
    guards: Sequence[Point],
    watches: Sequence[Point],
) -> GuardGraph:
    """Pixelation graph with every edge oriented toward the staircase
    direction; reachability equals directional guarding."""
    if direction not in DIRECTIONAL:
        raise OrthoguardError(f"bad direction {direction!r}")
    b = _Builder()
    core = [b.vertex(("v", p)) for p in psix_work.vertices]
    for u, v in _directed_edge_ids(psix_work, direction):
        b.edge(core[u], core[v], 0)
    sources, sinks, anchors = {}, {}, {}
    for p, vid in zip(guards, _check_on_vertices(psix_work, guards, "guard")):
        s = b.vertex(("src", tuple(p)))
        b.edge(s, core[vid], 0)
        sources[Point(*p)] = s
        anchors[s] = vid
    for p, vid in zip(watches, _check_on_vertices(psix_work, watches, "watch")):
        t = b.vertex(("snk", tuple(p)))
        b.edge(core[vid], t, 0)
        sinks[Point(*p)] = t
        anchors[t] = vid
    copies = tuple((c,) for c in core)
    return b.finish(sources, sinks, None, copies, anchors)


def build_s_graph(
    psix_work: Pixelation,
    guards: Sequence[Point],
    watches: Sequence[Point],
) -> GuardGraph:
    """Union of the four vertex-disjoint directional copies; each guard
    source fans out into all four, each watch sink collects from all four."""
    b = _Builder()
    copy_ids: dict[str, list[int]] = {}
    for d in DIRECTIONAL:
        copy_ids[d] = [b.vertex(("copy", d, p)) for p in psix_work.vertices]
        for u, v in _directed_edge_ids(psix_work, d):
            b.edge(copy_ids[d][u], copy_ids[d][v], 0)
    sources, sinks, anchors = {}, {}, {}
    for p, vid in zip(guards, _check_on_vertices(psix_work, guards, "guard")):
        s = b.vertex(("src", tuple(p)))
        for d in DIRECTIONAL:
            b.edge(s, copy_ids[d][vid], 0)
        sources[Point(*p)] = s
        anchors[s] = vid
    for p, vid in zip(watches, _check_on_vertices(psix_work, watches, "watch")):
        t = b.vertex(("snk", tuple(p)))
        for d in DIRECTIONAL:
            b.edge(copy_ids[d][vid], t, 0)
        sinks[Point(*p)] = t
        anchors[t] = vid
    copies = tuple(
        tuple(copy_ids[d][v] for d in DIRECTIONAL) for v in range(len(psix_work.vertices))
    )
    return b.finish(sources, sinks, None, copies, anchors)


# ---------------------------------------------------------------------------
# bend gadget (shared by periscope and sliding cameras)


def _gadget_core(b: _Builder, psix: Pixelation) -> list[dict[str, int]]:
    """Replace every pixelation vertex by up to four compass arms: opposite
    arms connect with weight 0 (going straight), perpendicular arms with
    weight 1 (a bend); facing arms of adjacent vertices connect with 0."""
    arms: list[dict[str, int]] = []
    for vid, p in enumerate(psix.vertices):
        present = psix.vertex_directions(vid)
        arm = {}
        for d in ARM_DIRS:
            if d in present:
                arm[d] = b.vertex(("arm", p, d))
        arms.append(arm)
    for arm in arms:
        dirs = sorted(arm)
        for i, d1 in enumerate(dirs):
            for d2 in dirs[i + 1 :]:
                w = 0 if _OPPOSITE[d1] == d2 else 1
                b.both(arm[d1], arm[d2], w)
    for a, bb_ in psix.edges:
        pa, pb = psix.vertices[a], psix.vertices[bb_]
        if pa.x == pb.x:  # vertical
            lo, hi = (a, bb_) if pa.y < pb.y else (bb_, a)
            b.both(arms[lo]["N"], arms[hi]["S"], 0)
        else:
            lo, hi = (a, bb_) if pa.x < pb.x else (bb_, a)
            b.both(arms[lo]["E"], arms[hi]["W"], 0)
    return arms


def build_periscope_graph(
    psix_work: Pixelation,
    guards: Sequence[Point],
    watches: Sequence[Point],
    k: int,
) -> GuardGraph:
    """Bend-counting gadget graph; a directed path of weight <= k is an
    orthogonal path with at most k bends."""
    if k < 0:
        raise OrthoguardError("bend budget must be >= 0")
    b = _Builder()
    arms = _gadget_core(b, psix_work)
    sources, sinks, anchors = {}, {}, {}
    for p, vid in zip(guards, _check_on_vertices(psix_work, guards, "guard")):
        s = b.vertex(("src", tuple(p)))
        for d in sorted(arms[vid]):
            b.edge(s, arms[vid][d], 0)
        sources[Point(*p)] = s
        anchors[s] = vid
    for p, vid in zip(watches, _check_on_vertices(psix_work, watches, "watch")):
        t = b.vertex(("snk", tuple(p)))
        for d in sorted(arms[vid]):
            b.edge(arms[vid][d], t, 0)
        sinks[Point(*p)] = t
        anchors[t] = vid
    bound = min(k, len(psix_work.vertices))  # larger budgets see everything
    copies = tuple(tuple(arm[d] for d in sorted(arm)) for arm in arms)
    return b.finish(sources, sinks, bound, copies, anchors)


def build_l1_graph(
    psix_work: Pixelation,
    guards: Sequence[Point],
    watches: Sequence[Point],
    D: int,
) -> GuardGraph:
    """Bidirectional pixelation edges weighted by their length; a path of
    weight <= D is an orthogonal path of length <= D (scaled units)."""
    if D < 0:
        raise OrthoguardError("length bound must be >= 0")
    b = _Builder()
    core = [b.vertex(("v", p)) for p in psix_work.vertices]
    for u, v in psix_work.edges:
        pu, pv = psix_work.vertices[u], psix_work.vertices[v]
        w = abs(pu.x - pv.x) + abs(pu.y - pv.y)
        b.both(core[u], core[v], w)
    sources, sinks, anchors = {}, {}, {}
    for p, vid in zip(guards, _check_on_vertices(psix_work, guards, "guard")):
        s = b.vertex(("src", tuple(p)))
        b.edge(s, core[vid], 0)
        sources[Point(*p)] = s
        anchors[s] = vid
    for p, vid in zip(watches, _check_on_vertices(psix_work, watches, "watch")):
        t = b.vertex(("snk", tuple(p)))
        b.edge(core[vid], t, 0)
        sinks[Point(*p)] = t
        anchors[t] = vid
    copies = tuple((c,) for c in core)
    return b.finish(sources, sinks, D, copies, anchors)


# ---------------------------------------------------------------------------
# sliding cameras


def enumerate_maximal_segments(psix: Pixelation) -> list[Segment]:
    """All maximal horizontal/vertical segments formed by contiguous
    collinear pixelation edges; candidate camera positions."""
    horiz: dict[int, list[tuple[int, int]]] = {}
    vert: dict[int, list[tuple[int, int]]] = {}
    for a, b in psix.edges:
        pa, pb = psix.vertices[a], psix.vertices[b]
        if pa.y == pb.y:
            horiz.setdefault(pa.y, []).append((min(pa.x, pb.x), max(pa.x, pb.x)))
        else:
            vert.setdefault(pa.x, []).append((min(pa.y, pb.y), max(pa.y, pb.y)))
    segs: list[Segment] = []

    def runs(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
        intervals.sort()
        merged = [list(intervals[0])]
        for lo, hi in intervals[1:]:
            if lo == merged[-1][1]:
                merged[-1][1] = hi
            elif lo > merged[-1][1]:
                merged.append([lo, hi])
            else:
                raise OrthoguardError("overlapping pixelation edges")
        return [(a, b) for a, b in merged]

    for y in sorted(horiz):
        for lo, hi in runs(horiz[y]):
            segs.append(Segment(Point(lo, y), Point(hi, y)))
    for x in sorted(vert):
        for lo, hi in runs(vert[x]):
            segs.append(Segment(Point(x, lo), Point(x, hi)))
    return segs


def build_sliding_graph(
    psix_work: Pixelation,
    watches: Sequence[Point],
    cameras: Sequence[Segment],
) -> GuardGraph:
    """Bend gadget over the 1-refinement with one source per camera.

    A horizontal camera enters at its left endpoint heading east, a
    vertical one at its top endpoint heading south; with budget 1 the
    single affordable bend is the perpendicular drop onto the watch point.
    """
    if psix_work.level != "refined":
        raise OrthoguardError("sliding cameras run on the 1-refinement")
    b = _Builder()
    arms = _gadget_core(b, psix_work)
    sources, sinks, anchors = {}, {}, {}
    for cam in cameras:
        a, c = sorted((cam.a, cam.b))
        if cam.orientation == "horizontal":
            entry_pt, entry_dir = a, "E"  # left endpoint, travelling east
        else:
            entry_pt, entry_dir = c, "S"  # top endpoint, travelling south
        vid = psix_work.vertex_id(tuple(entry_pt))
        if vid is None or entry_dir not in arms[vid]:
            raise OrthoguardError(f"camera {cam} does not lie on the refinement")
        s = b.vertex(("cam", tuple(a), tuple(c)))
        b.edge(s, arms[vid][entry_dir], 0)
        sources[Segment(a, c)] = s
        anchors[s] = vid
    for p, vid in zip(watches, _check_on_vertices(psix_work, watches, "watch")):
        t = b.vertex(("snk", tuple(p)))
        for d in sorted(arms[vid]):
            b.edge(arms[vid][d], t, 0)
        sinks[Point(*p)] = t
        anchors[t] = vid
    copies = tuple(tuple(arm[d] for d in sorted(arm)) for arm in arms)
    return b.finish(sources, sinks, 1, copies, anchors)


# ---------------------------------------------------------------------------
# decomposition support


def guard_graph_decomposition(G: GuardGraph, psix_work: Pixelation) -> TreeDecomposition:
    """Tree decomposition of a guard graph's core: decompose the pixelation
    graph and replace each vertex by its copies/arms.  Guard and watch
    wrappers are left out deliberately; the solver handles them as
    single-pass bag transitions anchored at their neighbours' bags."""
    from .pixelate import pixelation_graph

    core = pixelation_graph(psix_work)
    T = decompose(core)
    bags = [frozenset(g for v in bag for g in G.copies[v]) for bag in T.bags]
    return TreeDecomposition(bags, [list(nbrs) for nbrs in T.tree])
