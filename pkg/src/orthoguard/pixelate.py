"""Standard pixelation of an orthogonal polygon and its 1-refinement.

The standard pixelation extends a horizontal and a vertical ray inward
from every reflex vertex until the first boundary hit; together with the
boundary edges this subdivides the polygon into axis-aligned pixels.  The
1-refinement splits every pixel into four equal quadrants.  Both live on
the doubled-integer grid of :mod:`orthoguard.geom`, so every coordinate
here is an exact int.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, NamedTuple

from .errors import OrthoguardError, RefineTwice
from .geom import Coord, OrthoPolygon, Point, Segment
from .twd import Graph

Rect = tuple[int, int, int, int]  # x1, y1, x2, y2


class Located(NamedTuple):
    kind: Literal["vertex", "edge", "pixel", "outside"]
    index: int  # vertex id / edge id / pixel id; -1 for outside


@dataclass(frozen=True)
class Pixelation:
    """Planar subdivision of a polygon into axis-aligned pixels.

    Immutable.  ``vertices`` are sorted by (x, y); ``edges`` are index
    pairs (a, b) with a < b; ``pixels`` are rectangles sorted by their
    lower-left corner.
    """

    polygon: OrthoPolygon
    level: Literal["standard", "refined"]
    vertices: tuple[Point, ...]
    edges: tuple[tuple[int, int], ...]
    pixels: tuple[Rect, ...]
    vertex_on_boundary: tuple[bool, ...]
    vertex_edges: tuple[tuple[int, ...], ...]
    edge_pixels: tuple[tuple[int, ...], ...]
    pixel_corners: tuple[tuple[int, int, int, int], ...]
    rays: tuple[Segment, ...]
    # grid + lookup tables used by locate(); internal layout
    _xs: tuple[int, ...] = field(repr=False)
    _ys: tuple[int, ...] = field(repr=False)
    _cell_pixel: dict = field(repr=False, hash=False, compare=False)
    _vertex_ids: dict = field(repr=False, hash=False, compare=False)
    _v_edges: dict = field(repr=False, hash=False, compare=False)
    _h_edges: dict = field(repr=False, hash=False, compare=False)

    def vertex_id(self, p: tuple[int, int]) -> int | None:
        return self._vertex_ids.get(tuple(p))

    def edge_points(self, eid: int) -> tuple[Point, Point]:
        a, b = self.edges[eid]
        return self.vertices[a], self.vertices[b]

    def edge_orientation(self, eid: int) -> str:
        a, b = self.edge_points(eid)
        return "horizontal" if a.y == b.y else "vertical"

    def vertex_directions(self, vid: int) -> frozenset[str]:
        """Compass directions in which pixelation edges leave this vertex."""
        p = self.vertices[vid]
        dirs = set()
        for eid in self.vertex_edges[vid]:
            a, b = self.edge_points(eid)
            q = b if a == p else a
            if q.x > p.x:
                dirs.add("E")
            elif q.x < p.x:
                dirs.add("W")
            elif q.y > p.y:
                dirs.add("N")
            else:
                dirs.add("S")
        return frozenset(dirs)

    def pixel_area2_total(self) -> int:
        return sum(2 * (x2 - x1) * (y2 - y1) for x1, y1, x2, y2 in self.pixels)


def _reflex_ray_segments(P: OrthoPolygon) -> list[Segment]:
    """Shoot the two free-direction rays from every reflex vertex to the
    first boundary hit."""
    from .geom import reflex_vertices

    verts_by_x: dict[int, list[tuple[int, int]]] = {}
    verts_by_y: dict[int, list[tuple[int, int]]] = {}
    for seg in P.boundary_segments():
        (ax, ay), (bx, by) = seg.a, seg.b
        if ax == bx:
            verts_by_x.setdefault(ax, []).append((min(ay, by), max(ay, by)))
        else:
            verts_by_y.setdefault(ay, []).append((min(ax, bx), max(ax, bx)))
    xs_sorted = sorted(verts_by_x)
    ys_sorted = sorted(verts_by_y)

    def shoot(v: Point, direction: str) -> Point:
        x, y = v
        if direction in ("E", "W"):
            east = direction == "E"
            cands = []
            lines = xs_sorted if east else xs_sorted[::-1]
            for c in lines:
                if (east and c <= x) or (not east and c >= x):
                    continue
                if any(lo <= y <= hi for lo, hi in verts_by_x[c]):
                    cands.append(c)
                    break
            # collinear boundary edge ahead: nearest of its endpoints
            for lo, hi in verts_by_y.get(y, []):
                if east and lo > x:
                    cands.append(lo)
                if not east and hi < x:
                    cands.append(hi)
            if not cands:
                raise OrthoguardError(f"ray from {v} {direction} never hits boundary")
            hit = min(cands) if east else max(cands)
            return Point(hit, y)
        north = direction == "N"
        cands = []
        lines = ys_sorted if north else ys_sorted[::-1]
        for c in lines:
            if (north and c <= y) or (not north and c >= y):
                continue
            if any(lo <= x <= hi for lo, hi in verts_by_y[c]):
                cands.append(c)
                break
        for lo, hi in verts_by_x.get(x, []):
            if north and lo > y:
                cands.append(lo)
            if not north and hi < y:
                cands.append(hi)
        if not cands:
            raise OrthoguardError(f"ray from {v} {direction} never hits boundary")
        hit = min(cands) if north else max(cands)
        return Point(x, hit)

    rays: set[tuple[Point, Point]] = set()
    for ring in P.rings():
        pts = ring.vertices
        m = len(pts)
        for i in range(m):
            prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % m]
            d1 = (cur.x - prev.x, cur.y - prev.y)
            d2 = (nxt.x - cur.x, nxt.y - cur.y)
            if d1[0] * d2[1] - d1[1] * d2[0] >= 0:
                continue  # not reflex
            occupied = set()
            for dx, dy in ((-d1[0], -d1[1]), (d2[0], d2[1])):
                if dx > 0:
                    occupied.add("E")
                elif dx < 0:
                    occupied.add("W")
                elif dy > 0:
                    occupied.add("N")
                else:
                    occupied.add("S")
            for direction in {"N", "S", "E", "W"} - occupied:
                hit = shoot(cur, direction)
                a, b = sorted((cur, hit))
                rays.add((a, b))
    return [Segment(a, b) for a, b in sorted(rays)]


def _build(
    P: OrthoPolygon,
    segments: list[Segment],
    level: str,
    rays: tuple[Segment, ...],
) -> Pixelation:
    """Assemble the subdivision induced by ``segments`` (which must cover
    the polygon boundary)."""
    xs = sorted({p.x for s in segments for p in (s.a, s.b)})
    ys = sorted({p.y for s in segments for p in (s.a, s.b)})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: j for j, y in enumerate(ys)}
    nx, ny = len(xs), len(ys)

    hcov: dict[int, bytearray] = {}
    vcov: dict[int, bytearray] = {}
    for s in segments:
        (ax, ay), (bx, by) = s.a, s.b
        if ay == by:
            row = hcov.setdefault(yi[ay], bytearray(nx - 1))
            i1, i2 = xi[min(ax, bx)], xi[max(ax, bx)]
            row[i1:i2] = b"\x01" * (i2 - i1)
        else:
            col = vcov.setdefault(xi[ax], bytearray(ny - 1))
            j1, j2 = yi[min(ay, by)], yi[max(ay, by)]
            col[j1:j2] = b"\x01" * (j2 - j1)

    # interior cells per row, by parity over vertical *boundary* edges
    row_flips: dict[int, list[int]] = {}
    for s in P.boundary_segments():
        (ax, ay), (bx, by) = s.a, s.b
        if ax != bx:
            continue
        for j in range(yi[min(ay, by)], yi[max(ay, by)]):
            row_flips.setdefault(j, []).append(xi[ax])
    inside: set[tuple[int, int]] = set()
    for j, flips in row_flips.items():
        flips.sort()
        if len(flips) % 2:
            raise OrthoguardError("odd crossing parity; invalid boundary")
        for t in range(0, len(flips), 2):
            for i in range(flips[t], flips[t + 1]):
                inside.add((i, j))

    # vertices: grid points incident to both a horizontal and a vertical
    # covered interval
    def h_at(i: int, j: int) -> bool:
        row = hcov.get(j)
        return bool(row) and ((i > 0 and row[i - 1]) or (i < nx - 1 and row[i]))

    def v_at(i: int, j: int) -> bool:
        col = vcov.get(i)
        return bool(col) and ((j > 0 and col[j - 1]) or (j < ny - 1 and col[j]))

    candidates: set[tuple[int, int]] = set()
    for i, col in vcov.items():
        for j in range(ny - 1):
            if col[j]:
                candidates.add((i, j))
                candidates.add((i, j + 1))
    for j, row in hcov.items():
        for i in range(nx - 1):
            if row[i]:
                candidates.add((i, j))
                candidates.add((i + 1, j))
    vertex_grid = sorted(g for g in candidates if h_at(*g) and v_at(*g))
    points = tuple(Point(xs[i], ys[j]) for i, j in vertex_grid)
    vid_of_grid = {g: k for k, g in enumerate(vertex_grid)}
    vertex_ids = {tuple(p): k for k, p in enumerate(points)}

    # edges: split covered runs at vertices
    edges: list[tuple[int, int]] = []
    vjs_by_line: dict[int, list[int]] = {}
    his_by_line: dict[int, list[int]] = {}
    for i, j in vertex_grid:
        vjs_by_line.setdefault(i, []).append(j)
        his_by_line.setdefault(j, []).append(i)
    for i, col in vcov.items():
        stops = vjs_by_line.get(i, [])
        for a, b in zip(stops, stops[1:]):
            if all(col[t] for t in range(a, b)):
                edges.append((vid_of_grid[(i, a)], vid_of_grid[(i, b)]))
            elif any(col[t] for t in range(a, b)):
                raise OrthoguardError("covered run not delimited by vertices")
    for j, row in hcov.items():
        stops = his_by_line.get(j, [])
        for a, b in zip(stops, stops[1:]):
            if all(row[t] for t in range(a, b)):
                edges.append((vid_of_grid[(a, j)], vid_of_grid[(b, j)]))
            elif any(row[t] for t in range(a, b)):
                raise OrthoguardError("covered run not delimited by vertices")
    edges_t = tuple(sorted(edges))
    covered_total = sum(sum(a) for a in hcov.values()) + sum(
        sum(a) for a in vcov.values()
    )
    edge_total = 0
    for a, b in edges_t:
        pa, pb = points[a], points[b]
        if pa.x == pb.x:
            edge_total += yi[max(pa.y, pb.y)] - yi[min(pa.y, pb.y)]
        else:
            edge_total += xi[max(pa.x, pb.x)] - xi[min(pa.x, pb.x)]
    if covered_total != edge_total:
        raise OrthoguardError("edge splitting lost covered intervals")

    # pixels: merge interior cells not separated by a covered interval
    parent: dict[tuple[int, int], tuple[int, int]] = {c: c for c in inside}

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    for i, j in inside:
        right = (i + 1, j)
        if right in parent:
            col = vcov.get(i + 1)
            if not (col and col[j]):
                parent[find(right)] = find((i, j))
        up = (i, j + 1)
        if up in parent:
            row = hcov.get(j + 1)
            if not (row and row[i]):
                parent[find(up)] = find((i, j))

    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for c in inside:
        groups.setdefault(find(c), []).append(c)
    rects: list[Rect] = []
    cell_pixel: dict[tuple[int, int], int] = {}
    for cells in groups.values():
        i1 = min(c[0] for c in cells)
        i2 = max(c[0] for c in cells) + 1
        j1 = min(c[1] for c in cells)
        j2 = max(c[1] for c in cells) + 1
        if len(cells) != (i2 - i1) * (j2 - j1):
            raise OrthoguardError("pixel face is not a rectangle")
        rects.append((xs[i1], ys[j1], xs[i2], ys[j2]))
    order = sorted(range(len(rects)), key=lambda k: rects[k])
    rank = {k: r for r, k in enumerate(order)}
    rects = [rects[k] for k in order]
    for idx, cells in enumerate(groups.values()):
        for c in cells:
            cell_pixel[c] = rank[idx]

    pixel_corners = []
    for x1, y1, x2, y2 in rects:
        ids = []
        for gx, gy in ((x1, y1), (x2, y1), (x2, y2), (x1, y2)):
            vid = vertex_ids.get((gx, gy))
            if vid is None:
                raise OrthoguardError("pixel corner is not a subdivision vertex")
            ids.append(vid)
        pixel_corners.append(tuple(ids))

    # incidences
    vertex_edges: list[list[int]] = [[] for _ in points]
    edge_pixels: list[tuple[int, ...]] = []
    for eid, (a, b) in enumerate(edges_t):
        vertex_edges[a].append(eid)
        vertex_edges[b].append(eid)
        pa, pb = points[a], points[b]
        ia, ja = xi[pa.x], yi[pa.y]
        touching = []
        if pa.x == pb.x:  # vertical edge: cells left and right of first step
            for ci in (ia - 1, ia):
                pid = cell_pixel.get((ci, ja))
                if pid is not None:
                    touching.append(pid)
        else:
            for cj in (ja - 1, ja):
                pid = cell_pixel.get((ia, cj))
                if pid is not None:
                    touching.append(pid)
        edge_pixels.append(tuple(sorted(set(touching))))

    # boundary flags from the polygon's own edges
    hb: dict[int, bytearray] = {}
    vb: dict[int, bytearray] = {}
    for s in P.boundary_segments():
        (ax, ay), (bx, by) = s.a, s.b
        if ay == by:
            row = hb.setdefault(yi[ay], bytearray(nx - 1))
            i1, i2 = xi[min(ax, bx)], xi[max(ax, bx)]
            row[i1:i2] = b"\x01" * (i2 - i1)
        else:
            col = vb.setdefault(xi[ax], bytearray(ny - 1))
            j1, j2 = yi[min(ay, by)], yi[max(ay, by)]
            col[j1:j2] = b"\x01" * (j2 - j1)

    def on_boundary(i: int, j: int) -> bool:
        row = hb.get(j)
        if row and ((i > 0 and row[i - 1]) or (i < nx - 1 and row[i])):
            return True
        col = vb.get(i)
        return bool(col) and ((j > 0 and col[j - 1]) or (j < ny - 1 and col[j]))

    flags = tuple(on_boundary(i, j) for i, j in vertex_grid)

    v_edge_index: dict[int, list[int]] = {}
    h_edge_index: dict[int, list[int]] = {}
    for eid, (a, b) in enumerate(edges_t):
        pa, pb = points[a], points[b]
        if pa.x == pb.x:
            v_edge_index.setdefault(xi[pa.x], []).append(eid)
        else:
            h_edge_index.setdefault(yi[pa.y], []).append(eid)

    psix = Pixelation(
        polygon=P,
        level=level,  # type: ignore[arg-type]
        vertices=points,
        edges=edges_t,
        pixels=tuple(rects),
        vertex_on_boundary=flags,
        vertex_edges=tuple(tuple(sorted(e)) for e in vertex_edges),
        edge_pixels=tuple(edge_pixels),
        pixel_corners=tuple(pixel_corners),
        rays=rays,
        _xs=tuple(xs),
        _ys=tuple(ys),
        _cell_pixel=cell_pixel,
        _vertex_ids=vertex_ids,
        _v_edges=v_edge_index,
        _h_edges=h_edge_index,
    )
    _check_invariants(psix)
    return psix


def _check_invariants(psix: Pixelation) -> None:
    # corner rule: interior vertices have degree 4 and four pixels around
    pix_count = [0] * len(psix.vertices)
    for corners in psix.pixel_corners:
        for v in corners:
            pix_count[v] += 1
    for vid, on_b in enumerate(psix.vertex_on_boundary):
        deg = len(psix.vertex_edges[vid])
        if deg > 4:
            raise OrthoguardError(f"vertex {vid} has degree {deg}")
        if not on_b and (deg != 4 or pix_count[vid] != 4):
            raise OrthoguardError(
                f"interior vertex {psix.vertices[vid]} violates the corner rule"
            )
    if psix.pixel_area2_total() != psix.polygon.area2():
        raise OrthoguardError("pixel areas do not sum to polygon area")
    # conforming mesh: pixel sides are single edges (no vertex strictly inside)
    vset = psix._vertex_ids
    xi = {x: i for i, x in enumerate(psix._xs)}
    yi = {y: j for j, y in enumerate(psix._ys)}
    for x1, y1, x2, y2 in psix.pixels:
        for yy in (y1, y2):
            for i in range(xi[x1] + 1, xi[x2]):
                if (psix._xs[i], yy) in vset:
                    raise OrthoguardError("vertex inside a pixel side")
        for xx in (x1, x2):
            for j in range(yi[y1] + 1, yi[y2]):
                if (xx, psix._ys[j]) in vset:
                    raise OrthoguardError("vertex inside a pixel side")


def standard_pixelation(P: OrthoPolygon) -> Pixelation:
    """Subdivision induced by the boundary plus both inward rays from every
    reflex vertex."""
    rays = _reflex_ray_segments(P)
    segments = P.boundary_segments() + list(rays)
    return _build(P, segments, "standard", tuple(rays))


def one_refinement(psix: Pixelation) -> Pixelation:
    """Split every pixel of a standard pixelation into four equal quadrants."""
    if psix.level != "standard":
        raise RefineTwice("pixelation is already refined")
    segments: list[Segment] = []
    for x1, y1, x2, y2 in psix.pixels:
        mx, my = (x1 + x2) // 2, (y1 + y2) // 2
        if (x1 + x2) % 2 or (y1 + y2) % 2:
            raise OrthoguardError("pixel midpoint is not integral; scale missing")
        segments.append(Segment(Point(x1, y1), Point(x2, y1)))
        segments.append(Segment(Point(x1, y2), Point(x2, y2)))
        segments.append(Segment(Point(x1, y1), Point(x1, y2)))
        segments.append(Segment(Point(x2, y1), Point(x2, y2)))
        segments.append(Segment(Point(mx, y1), Point(mx, y2)))
        segments.append(Segment(Point(x1, my), Point(x2, my)))
    refined = _build(psix.polygon, segments, "refined", ())
    if len(refined.pixels) != 4 * len(psix.pixels):
        raise OrthoguardError("refinement did not quadruple the pixel count")
    for p in psix.vertices:
        if refined.vertex_id(p) is None:
            raise OrthoguardError("refinement lost an input vertex")
    return refined


def pixelation_graph(psix: Pixelation) -> Graph:
    """Vertex/edge incidence of the pixelation as an undirected graph."""
    return Graph.from_edges(len(psix.vertices), psix.edges)


def locate(psix: Pixelation, q: tuple[Coord, Coord]) -> Located:
    """Exact classification of a point against the pixelation."""
    x, y = q
    xs, ys = psix._xs, psix._ys
    if not xs or x < xs[0] or x > xs[-1] or y < ys[0] or y > ys[-1]:
        return Located("outside", -1)
    i = bisect.bisect_left(xs, x)
    j = bisect.bisect_left(ys, y)
    on_vline = i < len(xs) and xs[i] == x
    on_hline = j < len(ys) and ys[j] == y

    if on_vline and on_hline:
        vid = psix._vertex_ids.get((int(x), int(y)))
        if vid is not None:
            return Located("vertex", vid)
        eid = _edge_covering_v(psix, i, y)
        if eid is None:
            eid = _edge_covering_h(psix, j, x)
        if eid is not None:
            return Located("edge", eid)
        return _cell_locate(psix, i, j)
    if on_vline:
        eid = _edge_covering_v(psix, i, y)
        if eid is not None:
            return Located("edge", eid)
        pid = psix._cell_pixel.get((i - 1, j - 1))
        pid2 = psix._cell_pixel.get((i, j - 1))
        if pid is not None and pid == pid2:
            return Located("pixel", pid)
        return Located("outside", -1)
    if on_hline:
        eid = _edge_covering_h(psix, j, x)
        if eid is not None:
            return Located("edge", eid)
        pid = psix._cell_pixel.get((i - 1, j - 1))
        pid2 = psix._cell_pixel.get((i - 1, j))
        if pid is not None and pid == pid2:
            return Located("pixel", pid)
        return Located("outside", -1)
    pid = psix._cell_pixel.get((i - 1, j - 1))
    if pid is None:
        return Located("outside", -1)
    return Located("pixel", pid)


def _cell_locate(psix: Pixelation, i: int, j: int) -> Located:
    # grid crossing that is neither vertex nor edge point: inside a pixel
    # only if all four surrounding cells agree
    pids = {
        psix._cell_pixel.get((i - 1, j - 1)),
        psix._cell_pixel.get((i, j - 1)),
        psix._cell_pixel.get((i - 1, j)),
        psix._cell_pixel.get((i, j)),
    }
    if len(pids) == 1 and None not in pids:
        return Located("pixel", pids.pop())
    return Located("outside", -1)


def _edge_covering_v(psix: Pixelation, i: int, y: Coord) -> int | None:
    for eid in psix._v_edges.get(i, ()):
        a, b = psix.edge_points(eid)
        if min(a.y, b.y) <= y <= max(a.y, b.y):
            return eid
    return None


def _edge_covering_h(psix: Pixelation, j: int, x: Coord) -> int | None:
    for eid in psix._h_edges.get(j, ()):
        a, b = psix.edge_points(eid)
        if min(a.x, b.x) <= x <= max(a.x, b.x):
            return eid
    return None
