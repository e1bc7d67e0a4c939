"""Independent geometric test oracle on a quarter-unit grid.

Everything here decides guarding questions by brute force over a uniform
grid at twice the stored resolution (one quarter of the original input
unit), walking only axis-aligned unit steps whose endpoints stay inside
the closed polygon.  It never consults the guard-graph constructions, so
it can serve as the ground truth for them.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .errors import OrthoguardError, OutsidePolygon
from .geom import Coord, OrthoPolygon, Point, Segment

_ORACLE_CACHE: dict[int, "GeoOracle"] = {}

EXTERIOR, INTERIOR, BOUNDARY = 0, 1, 2
_STEPS = {"E": (1, 0), "W": (-1, 0), "N": (0, 1), "S": (0, -1)}


class GeoOracle:
    """Grid membership plus breadth-first searches for each guarding kind."""

    def __init__(self, P: OrthoPolygon):
        self.polygon = P
        x1, y1, x2, y2 = P.bbox()
        # grid coordinates are doubled once more; all boundary features land
        # on even grid lines, so unit steps can only cross at endpoints
        self.gx1, self.gy1 = 2 * x1, 2 * y1
        self.gx2, self.gy2 = 2 * x2, 2 * y2
        self.w = self.gx2 - self.gx1 + 1
        self.h = self.gy2 - self.gy1 + 1
        self.status = self._classify()

    # -- membership -------------------------------------------------------

    def _classify(self) -> list[bytearray]:
        verticals: list[tuple[int, int, int]] = []
        horizontals: dict[int, list[tuple[int, int]]] = {}
        for seg in self.polygon.boundary_segments():
            (ax, ay), (bx, by) = seg.a, seg.b
            if ax == bx:
                verticals.append((2 * ax, 2 * min(ay, by), 2 * max(ay, by)))
            else:
                horizontals.setdefault(2 * ay, []).append(
                    (2 * min(ax, bx), 2 * max(ax, bx))
                )
        rows = [bytearray(self.w) for _ in range(self.h)]
        for gy in range(self.gy1, self.gy2 + 1):
            row = rows[gy - self.gy1]
            crossings = sorted(x for x, lo, hi in verticals if lo <= gy < hi)
            inside = False
            prev = self.gx1
            for cx in crossings:
                if inside:
                    for gx in range(prev, cx + 1):
                        if not row[gx - self.gx1]:
                            row[gx - self.gx1] = INTERIOR
                prev = cx
                inside = not inside
            for x, lo, hi in verticals:
                if lo <= gy <= hi:
                    row[x - self.gx1] = BOUNDARY
            for lo, hi in horizontals.get(gy, ()):
                for gx in range(lo, hi + 1):
                    row[gx - self.gx1] = BOUNDARY
        return rows

    def to_grid(self, p: tuple[Coord, Coord]) -> tuple[int, int]:
        x, y = p
        gx, gy = 2 * x, 2 * y
        if isinstance(gx, Fraction):
            if gx.denominator != 1:
                raise OrthoguardError(f"{p} is finer than quarter-unit resolution")
            gx = int(gx)
        if isinstance(gy, Fraction):
            if gy.denominator != 1:
                raise OrthoguardError(f"{p} is finer than quarter-unit resolution")
            gy = int(gy)
        return int(gx), int(gy)

    def inside(self, gx: int, gy: int) -> bool:
        if gx < self.gx1 or gx > self.gx2 or gy < self.gy1 or gy > self.gy2:
            return False
        return self.status[gy - self.gy1][gx - self.gx1] != EXTERIOR

    def _require_inside(self, p: tuple[Coord, Coord]) -> tuple[int, int]:
        g = self.to_grid(p)
        if not self.inside(*g):
            raise OutsidePolygon(f"point {p} lies outside the polygon")
        return g

    # -- searches ---------------------------------------------------------

    def monotone_reach(self, g: tuple[Coord, Coord], direction: str) -> set[tuple[int, int]]:
        """Grid points reachable by steps in the two compass directions of
        a staircase direction (quarter-unit grid coordinates)."""
        start = self._require_inside(g)
        steps = [_STEPS[c] for c in direction]
        seen = {start}
        stack = [start]
        while stack:
            x, y = stack.pop()
            for dx, dy in steps:
                nxt = (x + dx, y + dy)
                if nxt not in seen and self.inside(*nxt):
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    def min_bends(self, g: tuple[Coord, Coord]) -> dict[tuple[int, int], int]:
        """Minimum number of 90-degree turns of an orthogonal path from g to
        every reachable grid point (direction-state 0/1 BFS)."""
        start = self._require_inside(g)
        dist: dict[tuple[int, int, int], int] = {}
        dq: deque = deque()
        for axis in (0, 1):
            dist[(start[0], start[1], axis)] = 0
            dq.append((0, start[0], start[1], axis))
        while dq:
            d, x, y, axis = dq.popleft()
            if dist.get((x, y, axis), -1) != d:
                continue
            moves = ((1, 0, 0), (-1, 0, 0)) if axis == 0 else ((0, 1, 1), (0, -1, 1))
            turns = ((0, 1, 1), (0, -1, 1)) if axis == 0 else ((1, 0, 0), (-1, 0, 0))
            for dx, dy, nax in moves:
                nx, ny = x + dx, y + dy
                if self.inside(nx, ny) and d < dist.get((nx, ny, nax), d + 1):
                    dist[(nx, ny, nax)] = d
                    dq.appendleft((d, nx, ny, nax))
            for dx, dy, nax in turns:
                nx, ny = x + dx, y + dy
                if self.inside(nx, ny) and d + 1 < dist.get((nx, ny, nax), d + 2):
                    dist[(nx, ny, nax)] = d + 1
                    dq.append((d + 1, nx, ny, nax))
        best: dict[tuple[int, int], int] = {}
        for (x, y, _axis), d in dist.items():
            cur = best.get((x, y))
            if cur is None or d < cur:
                best[(x, y)] = d
        return best

    def min_steps(self, g: tuple[Coord, Coord]) -> dict[tuple[int, int], int]:
        """Shortest orthogonal path length in quarter-unit steps (4 steps =
        one original unit, 2 steps = one scaled unit)."""
        start = self._require_inside(g)
        dist = {start: 0}
        dq = deque([start])
        while dq:
            x, y = dq.popleft()
            d = dist[(x, y)]
            for dx, dy in _STEPS.values():
                nxt = (x + dx, y + dy)
                if nxt not in dist and self.inside(*nxt):
                    dist[nxt] = d + 1
                    dq.append(nxt)
        return dist

    def sliding_sees(self, camera: Segment, p: tuple[Coord, Coord]) -> bool:
        """Perpendicular-foot test: the perpendicular from p onto the camera
        segment must lie inside the polygon."""
        gp = self.to_grid(p)
        if not self.inside(*gp):
            raise OutsidePolygon(f"point {p} lies outside the polygon")
        (ax, ay), (bx, by) = camera.a, camera.b
        ga, gb = (2 * ax, 2 * ay), (2 * bx, 2 * by)
        px, py = gp
        if ay == by:  # horizontal camera
            if not (min(ga[0], gb[0]) <= px <= max(ga[0], gb[0])):
                return False
            lo, hi = min(ga[1], py), max(ga[1], py)
            return all(self.inside(px, y) for y in range(lo, hi + 1))
        if not (min(ga[1], gb[1]) <= py <= max(ga[1], gb[1])):
            return False
        lo, hi = min(ga[0], px), max(ga[0], px)
        return all(self.inside(x, py) for x in range(lo, hi + 1))

    # -- point-to-point decisions ------------------------------------------

    def reaches(self, g, p, model) -> bool:
        kind = model.kind
        gp = self._require_inside(p)
        if kind in ("NE", "NW", "SE", "SW"):
            return gp in self.monotone_reach(g, kind)
        if kind == "S":
            return any(gp in self.monotone_reach(g, d) for d in ("NE", "NW", "SE", "SW"))
        if kind == "PERISCOPE":
            bends = self.min_bends(g).get(gp)
            return bends is not None and bends <= model.k
        if kind == "L1":
            steps = self.min_steps(g).get(gp)
            # each grid step covers half a scaled unit
            return steps is not None and steps <= 2 * model.D
        if kind == "SLIDING":
            return self.sliding_sees(g, p)
        raise OrthoguardError(f"unhandled model kind {kind!r}")


def get_oracle(P: OrthoPolygon) -> GeoOracle:
    """Cached oracle per polygon (grids are expensive to classify)."""
    key = id(P)
    oracle = _ORACLE_CACHE.get(key)
    if oracle is None or oracle.polygon is not P:
        if len(_ORACLE_CACHE) > 16:
            _ORACLE_CACHE.clear()
        oracle = GeoOracle(P)
        _ORACLE_CACHE[key] = oracle
    return oracle


def oracle_geo_reachable(P: OrthoPolygon, g, p, model) -> bool:
    """Decide whether guard g (a point, or a Segment for sliding cameras)
    sees point p under the given model, by grid brute force."""
    return get_oracle(P).reaches(g, p, model)
