"""Solvers for (bounded-)reachability-cover on a guard graph.

``solve_dp``/``solve_dp_bounded`` run the treewidth dynamic program,
``solve_oracle`` computes per-guard reach sets and solves minimum set
cover exactly by branch and bound, ``greedy_cover`` is the classical
ln-n baseline, and ``verify_cover`` checks any proposed guard set.  DP
and oracle are independent routes and must agree exactly.
"""

from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from . import dp as _dp
from .errors import (
    InstanceTooLarge,
    InvalidDecomposition,
    OrthoguardError,
    UnknownGuardId,
)
from .models import (
    GuardGraph,
    GuardSpec,
    Model,
    ReducedInstance,
    build_directional,
    build_l1_graph,
    build_periscope_graph,
    build_s_graph,
    build_sliding_graph,
    guard_graph_decomposition,
    reduce_instance,
)
from .twd import TreeDecomposition

Status = str  # "optimal" | "approximate" | "infeasible"


@dataclass
class CoverSolution:
    status: Status
    guards: list
    cardinality: int
    solver: str
    witness: Optional[dict] = None
    stats: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# reachability primitives


def _reach_from(G: GuardGraph, start: int, bound: Optional[int]) -> dict[int, int]:
    """Distances from one vertex; plain BFS when unbounded (weights are then
    irrelevant), Dijkstra with early cut-off otherwise."""
    if bound is None:
        dist = {start: 0}
        dq = deque([start])
        while dq:
            u = dq.popleft()
            for v, _w in G.out_edges[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    dq.append(v)
        return dist
    dist = {start: 0}
    pq = [(0, start)]
    while pq:
        d, u = heapq.heappop(pq)
        if d > dist.get(u, -1):
            continue
        for v, w in G.out_edges[u]:
            nd = d + w
            if nd <= bound and nd < dist.get(v, bound + 1):
                dist[v] = nd
                heapq.heappush(pq, (nd, v))
    return dist


def guard_reach_sets(G: GuardGraph, bound: Optional[int]) -> dict:
    """Watch ids covered by each guard (within the bound, if any)."""
    sink_of_vid = {vid: wid for wid, vid in G.watch_sinks.items()}
    out = {}
    for gid in sorted(G.guard_sources):
        dist = _reach_from(G, G.guard_sources[gid], bound)
        out[gid] = frozenset(sink_of_vid[v] for v in dist if v in sink_of_vid)
    return out


def _witness_paths(G: GuardGraph, guards: list, bound: Optional[int]) -> dict:
    """One root-to-sink vertex path per covered watch id."""
    witness: dict = {}
    for gid in guards:
        start = G.guard_sources[gid]
        prev: dict[int, int] = {start: -1}
        if bound is None:
            dq = deque([start])
            dist = {start: 0}
            while dq:
                u = dq.popleft()
                for v, _w in G.out_edges[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        prev[v] = u
                        dq.append(v)
        else:
            dist = {start: 0}
            pq = [(0, start)]
            while pq:
                d, u = heapq.heappop(pq)
                if d > dist.get(u, -1):
                    continue
                for v, w in G.out_edges[u]:
                    nd = d + w
                    if nd <= bound and nd < dist.get(v, bound + 1):
                        dist[v] = nd
                        prev[v] = u
                        heapq.heappush(pq, (nd, v))
        for wid, t in G.watch_sinks.items():
            if wid in witness or t not in dist:
                continue
            path = []
            cur = t
            while cur != -1:
                path.append(G.labels[cur])
                cur = prev[cur]
            witness[wid] = list(reversed(path))
    return witness


def verify_cover(G: GuardGraph, guards: list, bound: Optional[int] = None) -> list:
    """Uncovered watch ids for a proposed guard set (empty list = ok)."""
    for gid in guards:
        if gid not in G.guard_sources:
            raise UnknownGuardId(f"unknown guard {gid!r}")
    covered = set()
    for gid in guards:
        dist = _reach_from(G, G.guard_sources[gid], bound)
        covered.update(v for v in dist)
    return sorted(wid for wid, t in G.watch_sinks.items() if t not in covered)


# ---------------------------------------------------------------------------
# exact set cover (oracle route)


DEFAULT_ORACLE_CAPS = (5000, 5000)


def _min_set_cover(universe: list, sets_by_guard: dict) -> Optional[list]:
    """Exact minimum set cover by branch and bound; None if infeasible.

    Greedy upper bound, lower bound ceil(remaining / best set size),
    forced picks for uniquely-covered elements, set- and element-dominance
    reductions, and memoized dominance pruning on the uncovered mask.
    """
    elems = {e: i for i, e in enumerate(universe)}
    full = (1 << len(universe)) - 1
    guards = sorted(sets_by_guard)
    masks = []
    for g in guards:
        m = 0
        for e in sets_by_guard[g]:
            m |= 1 << elems[e]
        masks.append(m)
    union = 0
    for m in masks:
        union |= m
    if union != full:
        return None

    # set dominance: drop subsets (keep the lower guard id among equals)
    keep = []
    for i, m in enumerate(masks):
        dominated = False
        for j, m2 in enumerate(masks):
            if i == j:
                continue
            if m | m2 == m2 and (m != m2 or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    guards = [guards[i] for i in keep]
    masks = [masks[i] for i in keep]

    # greedy upper bound
    def greedy() -> list[int]:
        chosen = []
        covered = 0
        while covered != full:
            best, best_gain = -1, 0
            for i, m in enumerate(masks):
                gain = bin(m & ~covered).count("1")
                if gain > best_gain:
                    best, best_gain = i, gain
            chosen.append(best)
            covered |= masks[best]
        return chosen

    best_sel = greedy()
    best_cost = len(best_sel)
    order = sorted(range(len(masks)), key=lambda i: (-bin(masks[i]).count("1"), i))
    max_size = max(bin(m).count("1") for m in masks)
    seen: dict[int, int] = {}

    cover_of_elem: list[list[int]] = [[] for _ in universe]
    for i, m in enumerate(masks):
        mm = m
        while mm:
            low = mm & -mm
            cover_of_elem[low.bit_length() - 1].append(i)
            mm ^= low

    def bb(uncovered: int, chosen: list[int]) -> None:
        nonlocal best_cost, best_sel
        if not uncovered:
            if len(chosen) < best_cost:
                best_cost = len(chosen)
                best_sel = list(chosen)
            return
        prev = seen.get(uncovered)
        if prev is not None and prev <= len(chosen):
            return
        seen[uncovered] = len(chosen)
        remaining = bin(uncovered).count("1")
        if len(chosen) + (remaining + max_size - 1) // max_size >= best_cost:
            return
        # branch on the uncovered element with the fewest covering sets
        pick, pick_covers = -1, None
        mm = uncovered
        while mm:
            low = mm & -mm
            e = low.bit_length() - 1
            covers = [i for i in cover_of_elem[e] if masks[i] & uncovered]
            if pick_covers is None or len(covers) < len(pick_covers):
                pick, pick_covers = e, covers
                if len(covers) <= 1:
                    break
            mm ^= low
        if not pick_covers:
            return
        pick_covers.sort(key=lambda i: (-bin(masks[i] & uncovered).count("1"), i))
        for i in pick_covers:
            chosen.append(i)
            bb(uncovered & ~masks[i], chosen)
            chosen.pop()

    bb(full, [])
    return sorted(guards[i] for i in best_sel)


def solve_oracle(
    G: GuardGraph,
    bound: Optional[int] = None,
    caps: tuple[int, int] = DEFAULT_ORACLE_CAPS,
) -> CoverSolution:
    """Independent exact baseline: reach sets + branch-and-bound set cover."""
    t0 = time.perf_counter()
    bound = G.bound_w if bound is None else bound
    if len(G.guard_sources) > caps[0] or len(G.watch_sinks) > caps[1]:
        raise InstanceTooLarge(
            f"{len(G.guard_sources)} guards x {len(G.watch_sinks)} watch points "
            f"exceeds oracle caps {caps}"
        )
    reach = guard_reach_sets(G, bound)
    universe = sorted(G.watch_sinks)
    sel = _min_set_cover(universe, reach)
    stats = {"time_s": round(time.perf_counter() - t0, 6)}
    if sel is None:
        return CoverSolution("infeasible", [], 0, "oracle", None, stats)
    witness = _witness_paths(G, sel, bound)
    return CoverSolution("optimal", sel, len(sel), "oracle", witness, stats)


def greedy_cover(G: GuardGraph, bound: Optional[int] = None) -> CoverSolution:
    """Pick the guard covering the most uncovered watch points until done;
    ties go to the lowest guard id."""
    t0 = time.perf_counter()
    bound = G.bound_w if bound is None else bound
    reach = guard_reach_sets(G, bound)
    uncovered = set(G.watch_sinks)
    chosen = []
    while uncovered:
        best, best_gain = None, 0
        for gid in sorted(reach):
            gain = len(reach[gid] & uncovered)
            if gain > best_gain:
                best, best_gain = gid, gain
        if best is None:
            return CoverSolution(
                "infeasible", [], 0, "greedy", None,
                {"time_s": round(time.perf_counter() - t0, 6)},
            )
        chosen.append(best)
        uncovered -= reach[best]
    stats = {"time_s": round(time.perf_counter() - t0, 6)}
    return CoverSolution("approximate", sorted(chosen), len(chosen), "greedy", None, stats)


# ---------------------------------------------------------------------------
# DP route


def _dp_solve(
    G: GuardGraph,
    T: TreeDecomposition,
    bounded: bool,
    state_cap: Optional[int],
    upper_bound: Optional[int],
) -> CoverSolution:
    # unreachable watch points make the instance infeasible outright
    covered = set()
    for vid in G.guard_sources.values():
        covered.update(_reach_from(G, vid, G.bound_w if bounded else None))
    missing = [wid for wid, t in G.watch_sinks.items() if t not in covered]
    if missing:
        return CoverSolution(
            "infeasible", [], 0, "dp", None, {"uncovered": len(missing)}
        )
    feasible, cost, guards, stats = _dp.run_dp(
        G, T, bounded, state_cap=state_cap, upper_bound=upper_bound
    )
    if not feasible:
        raise OrthoguardError(
            "internal: DP found no solution although all watch points are reachable"
        )
    witness = _witness_paths(G, guards, G.bound_w if bounded else None)
    return CoverSolution("optimal", guards, cost, "dp", witness, stats)


def solve_dp(
    G: GuardGraph,
    T: TreeDecomposition,
    state_cap: Optional[int] = None,
    upper_bound: Optional[int] = None,
) -> CoverSolution:
    """Minimum reachability-cover via the treewidth DP."""
    if G.bound_w is not None:
        raise OrthoguardError("graph carries a bound; use solve_dp_bounded")
    return _dp_solve(G, T, False, state_cap, upper_bound)


def solve_dp_bounded(
    G: GuardGraph,
    T: TreeDecomposition,
    state_cap: Optional[int] = None,
    upper_bound: Optional[int] = None,
) -> CoverSolution:
    """Minimum bounded-reachability-cover (path weight <= W) via the DP."""
    if G.bound_w is None:
        raise OrthoguardError("graph carries no bound; use solve_dp")
    return _dp_solve(G, T, True, state_cap, upper_bound)


# ---------------------------------------------------------------------------
# instance pipeline


def build_guard_graph(red: ReducedInstance, model: Model) -> GuardGraph:
    kind = model.kind
    if kind in ("NE", "NW", "SE", "SW"):
        return build_directional(red.psix_work, kind, red.guards, red.watches)
    if kind == "S":
        return build_s_graph(red.psix_work, red.guards, red.watches)
    if kind == "PERISCOPE":
        return build_periscope_graph(red.psix_work, red.guards, red.watches, model.k)
    if kind == "L1":
        return build_l1_graph(red.psix_work, red.guards, red.watches, model.D)
    if kind == "SLIDING":
        return build_sliding_graph(red.psix_work, red.watches, red.cameras)
    raise OrthoguardError(f"unhandled model kind {kind!r}")


def solve_instance(
    P,
    psix,
    model: Model,
    gamma: GuardSpec,
    watch: GuardSpec,
    solver: str = "dp",
    state_cap: Optional[int] = None,
) -> CoverSolution:
    """Reduce, build the guard graph, and solve with the chosen engine."""
    red = reduce_instance(P, psix, model, gamma, watch)
    G = build_guard_graph(red, model)
    if solver == "oracle":
        return solve_oracle(G)
    if solver == "greedy":
        return greedy_cover(G)
    if solver != "dp":
        raise OrthoguardError(f"unknown solver {solver!r}")
    T = guard_graph_decomposition(G, red.psix_work)
    # a cheap upper bound tightens DP pruning on desk-scale instances
    ub = None
    if len(G.guard_sources) * G.n <= 2_000_000:
        g = greedy_cover(G)
        ub = g.cardinality if g.status == "approximate" else None
    if G.bound_w is None:
        return solve_dp(G, T, state_cap=state_cap, upper_bound=ub)
    return solve_dp_bounded(G, T, state_cap=state_cap, upper_bound=ub)
