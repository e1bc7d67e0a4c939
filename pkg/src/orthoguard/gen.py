"""Deterministic instance generator: orthogonal polygons from grid cells.

Polygons are built as unions of unit cells (polyominoes) and the boundary
is extracted afterwards; holes are carved as interior rectangles kept one
cell away from the boundary.  Every family is deterministic for a fixed
seed and always validates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import OrthoguardError
from .geom import OrthoPolygon, validate_polygon

FAMILIES = ("polyomino", "staircase", "comb", "spiral", "grid-slits")


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    cells: int = 12
    corridor_width: int = 1
    holes: int = 0
    family: str = "polyomino"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise OrthoguardError(f"unknown family {self.family!r}")
        if self.cells < 1:
            raise OrthoguardError("cells must be >= 1")
        if self.corridor_width < 1:
            raise OrthoguardError("corridorWidth must be >= 1")
        if self.holes < 0:
            raise OrthoguardError("holes must be >= 0")


def _pinch_free(cells: set[tuple[int, int]], c: tuple[int, int]) -> bool:
    """Adding c must not create a corner where two cells meet only
    diagonally (the union's boundary would touch itself)."""
    x, y = c
    for dx, dy in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        diag = (x + dx, y + dy)
        side_a = (x + dx, y)
        side_b = (x, y + dy)
        if diag in cells and side_a not in cells and side_b not in cells:
            return False
    return True


def _grow_polyomino(rng: random.Random, n: int) -> set[tuple[int, int]]:
    cells = {(0, 0)}
    frontier = [(0, 0)]
    while len(cells) < n:
        candidates = set()
        for x, y in cells:
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                c = (x + dx, y + dy)
                if c not in cells and _pinch_free(cells, c):
                    candidates.add(c)
        if not candidates:
            raise OrthoguardError("polyomino growth stalled")
        cells.add(rng.choice(sorted(candidates)))
    return cells


def _staircase_cells(rng: random.Random, n: int, width: int) -> set[tuple[int, int]]:
    """Monotone staircase corridor: alternating east and north runs."""
    cells: set[tuple[int, int]] = set()
    x = y = 0
    going_east = True
    while len(cells) < n:
        run = rng.randint(max(2, width + 1), max(3, width + 2))
        for _ in range(run):
            if len(cells) >= n:
                break
            for w in range(width):
                cells.add((x, y + w) if going_east else (x + w, y))
            if going_east:
                x += 1
            else:
                y += 1
        if going_east:
            x -= 1  # turn on the last column of the run
        else:
            y -= 1
        going_east = not going_east
    return cells


def _comb_cells(n: int, width: int) -> set[tuple[int, int]]:
    """Horizontal spine with upward teeth every other column block."""
    cells: set[tuple[int, int]] = set()
    tooth_h = max(2, width + 1)
    x = 0
    while len(cells) < n:
        for w in range(width):
            cells.add((x, w))
        if (x // width) % 2 == 0:
            for t in range(tooth_h):
                if len(cells) < n:
                    cells.add((x, width + t))
        x += 1
    return cells


def _spiral_cells(n: int, width: int) -> set[tuple[int, int]]:
    """Rectangular inward spiral corridor."""
    cells: set[tuple[int, int]] = set()
    x = y = 0
    dx, dy = 1, 0
    leg = max(4, 2 * width + 2)
    step = 0
    legs_done = 0
    while len(cells) < n:
        for w in range(width):
            # thicken perpendicular to the direction of travel
            if dx:
                cells.add((x, y + w))
            else:
                cells.add((x + w, y))
        x += dx
        y += dy
        step += 1
        if step >= leg:
            step = 0
            legs_done += 1
            dx, dy = -dy, dx  # turn left
            if legs_done % 2 == 0:
                leg += max(2, 2 * width)
    return cells


def _grid_slits_cells(n: int, width: int) -> tuple[set[tuple[int, int]], list[tuple[int, int, int, int]]]:
    """Near-square block with a brick pattern of one-cell slit holes; the
    hole corners shoot rays that weave a grid, so the heuristic width
    grows with the block size."""
    m = max(3, int(round(n ** 0.5)))
    cells = {(x, y) for x in range(m) for y in range(m)}
    holes = []
    step = max(2, width + 1)
    for y in range(2, m - 2, 2):
        offset = (y // 2) % 2 * step
        for x in range(1 + offset, m - 1 - step, 2 * step):
            holes.append((x, y, min(x + step - 1, m - 3), y))
    return cells, holes


def _boundary_rings(cells: set[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Extract closed rings from the union of unit cells (outer + holes)."""
    # boundary edges as directed segments keeping interior on the left
    edges: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(a, b):
        edges.setdefault(a, []).append(b)

    for x, y in cells:
        if (x, y - 1) not in cells:
            add((x, y), (x + 1, y))  # south side, eastward
        if (x + 1, y) not in cells:
            add((x + 1, y), (x + 1, y + 1))  # east side, northward
        if (x, y + 1) not in cells:
            add((x + 1, y + 1), (x, y + 1))  # north side, westward
        if (x - 1, y) not in cells:
            add((x, y + 1), (x, y))  # west side, southward

    rings = []
    while edges:
        start = min(edges)
        ring = [start]
        cur = start
        prev_dir = None
        while True:
            outs = edges[cur]
            if len(outs) == 1:
                nxt = outs.pop()
                del edges[cur]
            else:
                # pinch-free growth should prevent this, but pick the
                # leftmost turn deterministically if it ever happens
                outs.sort()
                nxt = outs.pop(0)
                if not outs:
                    del edges[cur]
            ring.append(nxt)
            cur = nxt
            if cur == start:
                break
        rings.append(ring[:-1])
    return rings


def generate_polygon(cfg: GenConfig) -> OrthoPolygon:
    """Generate a valid polygon; deterministic in the config."""
    rng = random.Random(cfg.seed)
    hole_rects: list[tuple[int, int, int, int]] = []
    if cfg.family == "polyomino":
        cells = _grow_polyomino(rng, cfg.cells)
    elif cfg.family == "staircase":
        cells = _staircase_cells(rng, cfg.cells, cfg.corridor_width)
    elif cfg.family == "comb":
        cells = _comb_cells(cfg.cells, cfg.corridor_width)
    elif cfg.family == "spiral":
        cells = _spiral_cells(cfg.cells, cfg.corridor_width)
    else:  # grid-slits
        cells, hole_rects = _grid_slits_cells(cfg.cells, cfg.corridor_width)

    if cfg.holes:
        hole_rects = hole_rects + _carve_holes(rng, cells, cfg.holes)
    elif cfg.family == "grid-slits":
        pass
    for x1, y1, x2, y2 in hole_rects:
        for x in range(x1, x2 + 1):
            for y in range(y1, y2 + 1):
                cells.discard((x, y))

    rings = _boundary_rings(cells)
    # identify the outer ring: the one containing the global minimum corner
    rings.sort(key=lambda r: (min(r), -len(r)))
    return validate_polygon(rings)


def _carve_holes(rng: random.Random, cells: set[tuple[int, int]], k: int) -> list:
    """Pick k interior cells at least one cell from the boundary."""
    interior = sorted(
        (x, y)
        for x, y in cells
        if all(
            (x + dx, y + dy) in cells
            for dx in (-1, 0, 1)
            for dy in (-1, 0, 1)
        )
    )
    holes = []
    taken: set[tuple[int, int]] = set()
    for _ in range(k):
        candidates = [
            c
            for c in interior
            if all(
                (c[0] + dx, c[1] + dy) not in taken
                for dx in (-2, -1, 0, 1, 2)
                for dy in (-2, -1, 0, 1, 2)
            )
        ]
        if not candidates:
            raise OrthoguardError(
                f"cannot carve {k} holes into this polygon (ran out of interior)"
            )
        c = rng.choice(candidates)
        taken.add(c)
        holes.append((c[0], c[1], c[0], c[1]))
    return holes
