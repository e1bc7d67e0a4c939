"""Orthogonal polygon model, validation, and elementary predicates.

All stored coordinates are integers that were doubled once at validation
time.  With that single upfront scaling, pixel centers and pixel-edge
midpoints (the vertices of a 1-refinement) are integral too, so the whole
pipeline runs on exact integer arithmetic.  Query points finer than the
grid may be given as ``fractions.Fraction``.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, NamedTuple, Sequence

from .errors import (
    DegenerateRing,
    HoleOutsideOrTouching,
    NonOrthogonalEdge,
    SelfIntersection,
)

#: factor applied to every input coordinate by validate_polygon
SCALE = 2

Coord = int | Fraction
Side = Literal["interior", "boundary", "exterior"]


class Point(NamedTuple):
    x: int
    y: int


class Segment(NamedTuple):
    """Axis-aligned segment; ``a`` and ``b`` differ in exactly one coordinate."""

    a: Point
    b: Point

    @property
    def orientation(self) -> Literal["horizontal", "vertical"]:
        return "horizontal" if self.a.y == self.b.y else "vertical"

    @property
    def length(self) -> int:
        return abs(self.a.x - self.b.x) + abs(self.a.y - self.b.y)

    def contains(self, x: Coord, y: Coord) -> bool:
        (ax, ay), (bx, by) = self.a, self.b
        if ay == by:
            return y == ay and min(ax, bx) <= x <= max(ax, bx)
        return x == ax and min(ay, by) <= y <= max(ay, by)


@dataclass(frozen=True)
class Ring:
    """Closed axis-aligned ring without repeated or collinear vertices."""

    vertices: tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[Segment]:
        pts = self.vertices
        return [Segment(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    def signed_area2(self) -> int:
        """Twice the signed area (positive for counterclockwise)."""
        pts = self.vertices
        total = 0
        for i in range(len(pts)):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            total += a.x * b.y - b.x * a.y
        return total


@dataclass(frozen=True)
class OrthoPolygon:
    """Validated orthogonal polygon: CCW outer ring, CW hole rings.

    Immutable after construction; instances are safe to share across
    workers.  Coordinates are in doubled input units (see module docs).
    """

    outer: Ring
    holes: tuple[Ring, ...]
    n: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "n", len(self.outer) + sum(len(h) for h in self.holes)
        )

    def rings(self) -> list[Ring]:
        return [self.outer, *self.holes]

    def boundary_segments(self) -> list[Segment]:
        segs: list[Segment] = []
        for ring in self.rings():
            segs.extend(ring.edges())
        return segs

    def area2(self) -> int:
        """Twice the enclosed area in scaled units (holes subtracted)."""
        return self.outer.signed_area2() + sum(h.signed_area2() for h in self.holes)

    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.outer.vertices]
        ys = [p.y for p in self.outer.vertices]
        return min(xs), min(ys), max(xs), max(ys)


def _as_int_pair(value) -> tuple[int, int]:
    if (
        not isinstance(value, (tuple, list))
        or len(value) != 2
        or any(isinstance(c, bool) or not isinstance(c, int) for c in value)
    ):
        raise NonOrthogonalEdge(f"vertex {value!r} is not a pair of integers")
    return int(value[0]), int(value[1])


def _normalize_ring(raw: Sequence, scaled: bool) -> Ring:
    pts = [_as_int_pair(v) for v in raw]
    if not scaled:
        pts = [(x * SCALE, y * SCALE) for x, y in pts]
    if len(pts) >= 2 and pts[0] == pts[-1]:  # accept explicitly closed input
        pts = pts[:-1]
    if len(pts) < 4:
        raise DegenerateRing(f"ring has {len(pts)} vertices after closing")
    for i, p in enumerate(pts):
        q = pts[(i + 1) % len(pts)]
        if p == q:
            raise DegenerateRing(f"duplicate consecutive vertex {p}")
        if p[0] != q[0] and p[1] != q[1]:
            raise NonOrthogonalEdge(f"edge {p}-{q} is not axis-aligned")

    # Merge runs of same-direction collinear edges.  Opposite-direction
    # collinear pairs (spikes) are left for the intersection check.
    changed = True
    while changed:
        changed = False
        out = []
        m = len(pts)
        for i in range(m):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % m]
            d1 = (cur[0] - prev[0], cur[1] - prev[1])
            d2 = (nxt[0] - cur[0], nxt[1] - cur[1])
            same_axis = (d1[0] == 0) == (d2[0] == 0)
            same_dir = same_axis and (
                (d1[0] == 0 and (d1[1] > 0) == (d2[1] > 0))
                or (d1[1] == 0 and (d1[0] > 0) == (d2[0] > 0))
            )
            if same_dir:
                changed = True
                continue
            out.append(cur)
        pts = out
        if len(pts) < 4:
            raise DegenerateRing("ring collapses under collinear merging")

    ring = Ring(tuple(Point(x, y) for x, y in pts))
    if ring.signed_area2() == 0:
        raise DegenerateRing("ring has zero area")
    return ring


def _rotate_to_min(ring: Ring) -> Ring:
    pts = ring.vertices
    k = min(range(len(pts)), key=lambda i: pts[i])
    return Ring(pts[k:] + pts[:k])


def _oriented(ring: Ring, ccw: bool) -> Ring:
    if (ring.signed_area2() > 0) != ccw:
        ring = Ring(tuple(reversed(ring.vertices)))
    return _rotate_to_min(ring)


def _check_no_contact(rings: list[Ring]) -> None:
    """Reject any two edges that share a point, except consecutive edges of
    the same ring meeting at their common vertex."""
    horiz: dict[int, list[tuple[int, int, int, int]]] = {}  # y -> (x1,x2,ring,idx)
    vert: dict[int, list[tuple[int, int, int, int]]] = {}  # x -> (y1,y2,ring,idx)
    for ri, ring in enumerate(rings):
        for ei, seg in enumerate(ring.edges()):
            (ax, ay), (bx, by) = seg.a, seg.b
            if ay == by:
                horiz.setdefault(ay, []).append((min(ax, bx), max(ax, bx), ri, ei))
            else:
                vert.setdefault(ax, []).append((min(ay, by), max(ay, by), ri, ei))

    def fail(r1: int, r2: int, what: str):
        if r1 == r2:
            raise SelfIntersection(what)
        raise HoleOutsideOrTouching(what)

    for y, items in horiz.items():
        items.sort()
        for (x1, x2, r1, e1), (x3, x4, r2, e2) in zip(items, items[1:]):
            if x3 <= x2:  # closed intervals on one line may not meet at all
                fail(r1, r2, f"collinear contact at y={y}")
    for x, items in vert.items():
        items.sort()
        for (y1, y2, r1, e1), (y3, y4, r2, e2) in zip(items, items[1:]):
            if y3 <= y2:
                fail(r1, r2, f"collinear contact at x={x}")

    ring_sizes = [len(r) for r in rings]
    hline_ys = sorted(horiz)
    for x, vitems in vert.items():
        for y1, y2, r1, e1 in vitems:
            lo = bisect.bisect_left(hline_ys, y1)
            hi = bisect.bisect_right(hline_ys, y2)
            for y in hline_ys[lo:hi]:
                for x1, x2, r2, e2 in horiz[y]:
                    if x < x1 or x > x2:
                        continue
                    # crossing or touch at (x, y); consecutive edges of one
                    # ring are allowed to meet at their shared vertex
                    if r1 == r2:
                        n = ring_sizes[r1]
                        if e1 == (e2 + 1) % n or e2 == (e1 + 1) % n:
                            continue
                    fail(r1, r2, f"edges meet at ({x},{y})")


def _point_in_ring(ring: Ring, x: Coord, y: Coord) -> bool:
    """Even-odd test, point assumed not on the ring boundary."""
    inside = False
    for seg in ring.edges():
        (ax, ay), (bx, by) = seg.a, seg.b
        if ax != bx:
            continue  # horizontal edges never cross a horizontal ray
        lo, hi = min(ay, by), max(ay, by)
        if ax > x and lo <= y < hi:
            inside = not inside
    return inside


def validate_polygon(rings: Iterable[Sequence], *, scaled: bool = False) -> OrthoPolygon:
    """Build a normalized OrthoPolygon from raw vertex lists.

    The first ring is the outer boundary, the rest are holes.  Input
    coordinates must be integers; they are doubled unless ``scaled`` is
    set (used internally for round-trips).
    """
    raw_rings = list(rings)
    if not raw_rings:
        raise DegenerateRing("no rings supplied")
    normalized = [_normalize_ring(r, scaled) for r in raw_rings]
    outer = _oriented(normalized[0], ccw=True)
    holes = tuple(_oriented(r, ccw=False) for r in normalized[1:])
    _check_no_contact([outer, *holes])
    for i, hole in enumerate(holes):
        hx, hy = hole.vertices[0]
        if not _point_in_ring(outer, hx, hy):
            raise HoleOutsideOrTouching(f"hole {i} lies outside the outer ring")
        for j, other in enumerate(holes):
            if i != j and _point_in_ring(other, hx, hy):
                raise HoleOutsideOrTouching(f"hole {i} lies inside hole {j}")
    return OrthoPolygon(outer, holes)


def reflex_vertices(P: OrthoPolygon) -> list[Point]:
    """Vertices with a 270-degree interior angle, in ring order."""
    out: list[Point] = []
    for ring in P.rings():
        pts = ring.vertices
        m = len(pts)
        for i in range(m):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % m]
            d1 = (cur.x - prev.x, cur.y - prev.y)
            d2 = (nxt.x - cur.x, nxt.y - cur.y)
            cross = d1[0] * d2[1] - d1[1] * d2[0]
            # outer is CCW and holes are CW, so a right turn is reflex in both
            if cross < 0:
                out.append(cur)
    return out


def contains_point(P: OrthoPolygon, q: tuple[Coord, Coord]) -> Side:
    """Classify a (possibly fractional) point against the closed polygon."""
    x, y = q
    for seg in P.boundary_segments():
        if seg.contains(x, y):
            return "boundary"
    if not _point_in_ring(P.outer, x, y):
        return "exterior"
    for hole in P.holes:
        if _point_in_ring(hole, x, y):
            return "exterior"
    return "interior"
