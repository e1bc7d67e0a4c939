"""Dynamic program over a tree decomposition for reachability-cover.

The engine condenses strongly connected components that are free to
traverse (all components in the unbounded case, zero-weight components in
the bounded case); reachability and bounded distances are invariant under
that quotient, and afterwards no support cycle can exist.  A solution is
certified by a covered-vertex labelling: every watch sink has a covered
in-neighbour, and every covered vertex is either seeded by a chosen guard
source or has a covered in-neighbour whose distance label is exactly one
edge-weight smaller.

Guard and watch wrappers never enter the DP state.  A watch wrapper
becomes a one-pass filter at a bag containing its anchors (some anchor
must be covered); a guard wrapper becomes a one-time branch there (pay 1,
seed support on its covered anchors).  The sweep itself keeps one integer
per state: a small code per bag vertex (uncovered, or covered with a
support flag and distance label).  Tables store costs only; chosen guards
are recovered afterwards by replaying transitions.  Liveness masks retire
states early when a covered vertex can no longer be supported or serve
any remaining purpose.
"""

from __future__ import annotations

import os
import time
from typing import Optional

from .errors import BudgetTooLarge, InvalidDecomposition, OrthoguardError
from .twd import (
    Graph,
    NiceDecomposition,
    TreeDecomposition,
    decompose,
    make_nice,
    simplify_decomposition,
)

_MAX_BAG = 64
_INF = 1 << 30
_SUP = 2  # supported flag; bit0 = covered
_D_SHIFT = 2

DEFAULT_STATE_CAP = 50_000_000


def state_cap_from_env() -> int:
    raw = os.environ.get("ORTHOGUARD_STATE_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_STATE_CAP


# ---------------------------------------------------------------------------
# quotient construction


def _scc(n: int, adj: list[list[int]]) -> list[int]:
    """Iterative Tarjan; returns component id per vertex."""
    comp = [-1] * n
    low = [0] * n
    num = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if comp[root] != -1 or num[root]:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                counter += 1
                num[v] = low[v] = counter
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for i in range(pi, len(adj[v])):
                w = adj[v][i]
                if num[w] == 0:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w] and num[w] < low[v]:
                    low[v] = num[w]
            if recurse:
                continue
            work.pop()
            if low[v] == num[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
    return comp


class CoreProblem:
    """Wrapper-free condensed cover problem.

    ``n`` core vertices with directed weighted edges; ``source_groups``
    maps a guard id to its anchor list [(vertex, weight), ...]; likewise
    ``sink_groups`` for watch ids.  Choosing a guard seeds support on its
    covered anchors; a watch id requires some anchor covered within reach.
    """

    def __init__(self, G, bounded: bool):
        n = G.n
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, outs in enumerate(G.out_edges):
            for v, w in outs:
                if not bounded or w == 0:
                    adj[u].append(v)
        comp = _scc(n, adj)
        wrapper_comps = set()
        for vid in G.guard_sources.values():
            wrapper_comps.add(comp[vid])
        for vid in G.watch_sinks.values():
            wrapper_comps.add(comp[vid])
        core_ids: dict[int, int] = {}
        for v in range(n):
            c = comp[v]
            if c not in wrapper_comps and c not in core_ids:
                core_ids[c] = 0
        for k, c in enumerate(sorted(core_ids)):
            core_ids[c] = k
        self.n = len(core_ids)
        self.comp_of = [
            core_ids.get(comp[v], -1) for v in range(n)
        ]  # -1 for wrapper vertices

        edges: dict[tuple[int, int], int] = {}
        src_out: dict[int, dict[int, int]] = {}
        snk_in: dict[int, dict[int, int]] = {}
        wrapper_vids = set(G.guard_sources.values()) | set(G.watch_sinks.values())
        sink_vids = set(G.watch_sinks.values())
        for u, outs in enumerate(G.out_edges):
            for v, w in outs:
                if u in wrapper_vids:
                    d = src_out.setdefault(u, {})
                    cv = self.comp_of[v]
                    if cv >= 0 and (cv not in d or w < d[cv]):
                        d[cv] = w
                    continue
                if v in sink_vids:
                    d = snk_in.setdefault(v, {})
                    cu = self.comp_of[u]
                    if cu >= 0 and (cu not in d or w < d[cu]):
                        d[cu] = w
                    continue
                cu, cv = self.comp_of[u], self.comp_of[v]
                if cu == cv or cu < 0 or cv < 0:
                    continue
                key = (cu, cv)
                if key not in edges or w < edges[key]:
                    edges[key] = w
        self.edge_w = edges
        self.source_groups = {
            gid: sorted(src_out.get(vid, {}).items())
            for gid, vid in G.guard_sources.items()
        }
        self.sink_groups = {
            wid: sorted(snk_in.get(vid, {}).items())
            for wid, vid in G.watch_sinks.items()
        }
        self.bound_w = G.bound_w

    def undirected(self, cliques: bool = False) -> Graph:
        pairs = {(min(u, v), max(u, v)) for (u, v) in self.edge_w}
        if cliques:
            # guard/watch anchor groups must share a bag
            for groups in (self.source_groups, self.sink_groups):
                for anchors in groups.values():
                    vs = [v for v, _w in anchors]
                    for i, a in enumerate(vs):
                        for b in vs[i + 1 :]:
                            pairs.add((min(a, b), max(a, b)))
        return Graph.from_edges(self.n, pairs)


def _core_decomposition(core: CoreProblem, T: TreeDecomposition) -> TreeDecomposition:
    """Map the caller's decomposition through the quotient (components are
    connected, so the image is valid); a direct heuristic decomposition of
    the clique-augmented core competes when small."""
    mapped_bags = []
    for bag in T.bags:
        mapped_bags.append(
            frozenset(c for c in (core.comp_of[v] for v in bag) if c >= 0)
        )
    best = simplify_decomposition(
        TreeDecomposition(mapped_bags, [list(nbrs) for nbrs in T.tree])
    )
    if core.n <= 2500:
        direct = decompose(core.undirected(cliques=True), "min-fill")
        if direct.width < best.width:
            best = direct
    return best


def _feasibility(core: CoreProblem, bounded: bool):
    """Per-vertex label windows: dmin from a multi-source Dijkstra seeded at
    guard anchors, rmin likewise on the reversed graph from watch anchors.
    Coverage with a label outside [dmin, W - rmin] can never be part of a
    certificate, so those introduce branches are skipped."""
    import heapq

    INF = _INF
    fwd: list[list[tuple[int, int]]] = [[] for _ in range(core.n)]
    rev: list[list[tuple[int, int]]] = [[] for _ in range(core.n)]
    for (u, v), w in core.edge_w.items():
        fwd[u].append((v, w))
        rev[v].append((u, w))

    def multi_dijkstra(adj, seeds) -> list[int]:
        dist = [INF] * core.n
        pq = []
        for v, w in seeds:
            if w < dist[v]:
                dist[v] = w
                pq.append((w, v))
        heapq.heapify(pq)
        while pq:
            d, u = heapq.heappop(pq)
            if d > dist[u]:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(pq, (nd, v))
        return dist

    src_seeds = [
        (v, w if bounded else 0)
        for anchors in core.source_groups.values()
        for v, w in anchors
    ]
    snk_seeds = [
        (v, w if bounded else 0)
        for anchors in core.sink_groups.values()
        for v, w in anchors
    ]
    return multi_dijkstra(fwd, src_seeds), multi_dijkstra(rev, snk_seeds)


# ---------------------------------------------------------------------------
# liveness masks


class _Liveness:
    """Per nice-node masks over bag positions: which vertices may still
    gain support (an in-edge or guard choice remains outside the node's
    dataflow) and which can still serve a purpose (an out-edge or watch
    check remains)."""

    def __init__(self, nice: NiceDecomposition, edge_w):
        gains: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
        total_h: dict[int, int] = {}
        total_t: dict[int, int] = {}
        for node in nice.nodes:
            heads: list[int] = []
            tails: list[int] = []
            if node.kind == "edge":
                u, v = node.payload
                if (u, v) in edge_w:
                    heads.append(v)
                    tails.append(u)
                if (v, u) in edge_w:
                    heads.append(u)
                    tails.append(v)
            elif node.kind == "custom":
                tag, _key, anchors = node.payload
                if tag == "src":
                    heads.extend(v for v, _w in anchors)
                else:
                    for group in anchors:
                        tails.extend(v for v, _w in group)
            gains.append((tuple(heads), tuple(tails)))
            for v in heads:
                total_h[v] = total_h.get(v, 0) + 1
            for v in tails:
                total_t[v] = total_t.get(v, 0) + 1

        below: list = [None] * len(nice.nodes)
        self.head_ok = [0] * len(nice.nodes)
        self.tail_ok = [0] * len(nice.nodes)
        for idx, node in enumerate(nice.nodes):
            kind = node.kind
            if kind == "leaf":
                m: dict[int, list[int]] = {}
            elif kind == "join":
                lm = below[node.children[0]]
                rm = below[node.children[1]]
                m = {u: [lm[u][0] + rm[u][0], lm[u][1] + rm[u][1]] for u in node.bag}
            else:
                m = dict(below[node.children[0]])
                if kind == "introduce":
                    m[node.payload[0]] = [0, 0]
                elif kind == "forget":
                    m.pop(node.payload[0], None)
                else:
                    heads, tails = gains[idx]
                    for v in heads:
                        m[v] = [m[v][0] + 1, m[v][1]]
                    for v in tails:
                        m[v] = [m[v][0], m[v][1] + 1]
            below[idx] = m
            hmask = tmask = 0
            for pos, u in enumerate(node.bag):
                h, t = m.get(u, (0, 0))
                if total_h.get(u, 0) - h > 0:
                    hmask |= 1 << pos
                if total_t.get(u, 0) - t > 0:
                    tmask |= 1 << pos
            self.head_ok[idx] = hmask
            self.tail_ok[idx] = tmask
            for c in node.children:
                below[c] = None


# ---------------------------------------------------------------------------
# the sweep


def run_dp(
    G,
    T: TreeDecomposition,
    bounded: bool,
    state_cap: Optional[int] = None,
    upper_bound: Optional[int] = None,
):
    """Solve reachability-cover; returns (feasible, cost, guard_ids, stats)."""
    cap = state_cap if state_cap is not None else state_cap_from_env()
    if bounded and G.bound_w is None:
        raise OrthoguardError("bounded solve on a graph without a bound")
    W = G.bound_w if bounded else 0

    core = CoreProblem(G, bounded)
    TC = _core_decomposition(core, T)

    # attach guard choices and watch checks to the lowest bag holding all
    # their anchors
    vertex_bags: dict[int, list[int]] = {}
    for i, bag in enumerate(TC.bags):
        for v in bag:
            vertex_bags.setdefault(v, []).append(i)
    attachments: dict[int, list[tuple]] = {}

    def home_bag(tag: str, key, anchors) -> Optional[int]:
        vs = [v for v, _w in anchors]
        if not vs:
            if tag == "snk":
                raise InvalidDecomposition(f"watch point {key!r} has no anchors")
            return None  # guard that can see nothing is never chosen
        cands = set(vertex_bags[vs[0]])
        for v in vs[1:]:
            cands &= set(vertex_bags[v])
        if not cands:
            raise InvalidDecomposition(f"no bag contains the anchors of {tag} {key!r}")
        return min(cands)

    sink_batches: dict[int, list] = {}
    for wid in sorted(core.sink_groups):
        b = home_bag("snk", wid, core.sink_groups[wid])
        sink_batches.setdefault(b, []).append(tuple(core.sink_groups[wid]))
    for b, batch in sink_batches.items():
        # one pass checks every watch point anchored at this bag
        attachments.setdefault(b, []).append(("snk", None, tuple(batch)))
    for gid in sorted(core.source_groups):
        b = home_bag("src", gid, core.source_groups[gid])
        if b is not None:
            attachments.setdefault(b, []).append(
                ("src", gid, tuple(core.source_groups[gid]))
            )

    nice = make_nice(TC, core.undirected(), attachments)

    for node in nice.nodes:
        if len(node.bag) > _MAX_BAG:
            raise BudgetTooLarge(f"bag of size {len(node.bag)} exceeds {_MAX_BAG}")
    if bounded:
        width = max(len(nd.bag) for nd in nice.nodes)
        if (W + 1) ** width > cap:
            raise BudgetTooLarge(
                f"(W+1)^(width+1) = {(W + 1) ** width} exceeds the state cap"
            )

    live = _Liveness(nice, core.edge_w)
    t0 = time.perf_counter()
    ub = upper_bound if upper_bound is not None else len(core.source_groups) + 1
    edge_w = core.edge_w
    dmin, rmin = _feasibility(core, bounded)

    bpp = 2 + (W.bit_length() if bounded else 0)  # bits per bag position
    slot = (1 << bpp) - 1

    tables: list[dict[int, int]] = [dict() for _ in nice.nodes]
    states_total = 0
    trace = int(os.environ.get("ORTHOGUARD_DP_TRACE", "0") or 0)

    for idx, node in enumerate(nice.nodes):
        kind = node.kind
        bag = node.bag
        child_tab = tables[node.children[0]] if node.children else None
        if kind == "leaf":
            table = {0: 0}
        elif kind == "introduce":
            (v,) = node.payload
            pos = bag.index(v)
            table = {}
            useful = (live.tail_ok[idx] >> pos) & 1
            can_wait = useful and (live.head_ok[idx] >> pos) & 1
            shift = bpp * pos
            lowmask = (1 << shift) - 1
            wait_codes = []
            if can_wait:
                if bounded:
                    # only labels inside the feasibility window are realizable
                    wait_codes = [
                        (1 | (d << _D_SHIFT)) << shift
                        for d in range(dmin[v], max(-1, W - rmin[v]) + 1)
                    ]
                elif dmin[v] < _INF and rmin[v] < _INF:
                    wait_codes = [1 << shift]
            for state, cost in child_tab.items():
                base = (state & lowmask) | ((state >> shift) << (shift + bpp))
                prev = table.get(base)
                if prev is None or cost < prev:
                    table[base] = cost
                for wc in wait_codes:
                    st = base | wc
                    prev = table.get(st)
                    if prev is None or cost < prev:
                        table[st] = cost
        elif kind == "forget":
            (v,) = node.payload
            pos = nice.nodes[node.children[0]].bag.index(v)
            table = {}
            shift = bpp * pos
            lowmask = (1 << shift) - 1
            covered_bit = 1 << shift
            sup_bit = _SUP << shift
            for state, cost in child_tab.items():
                if state & covered_bit and not state & sup_bit:
                    continue  # covered but never supported
                st = (state & lowmask) | ((state >> (shift + bpp)) << shift)
                prev = table.get(st)
                if prev is None or cost < prev:
                    table[st] = cost
        elif kind == "edge":
            u, v = node.payload
            pu, pv = bag.index(u), bag.index(v)
            dirs = []
            if (u, v) in edge_w:
                dirs.append((bpp * pu, bpp * pv, edge_w[(u, v)]))
            if (v, u) in edge_w:
                dirs.append((bpp * pv, bpp * pu, edge_w[(v, u)]))
            table = {}
            if bounded:
                for state, cost in child_tab.items():
                    for tsh, hsh, w in dirs:
                        ct = (state >> tsh) & slot
                        ch = (state >> hsh) & slot
                        if (
                            ct & 1
                            and ch & 1
                            and not ch & _SUP
                            and (ch >> _D_SHIFT) == (ct >> _D_SHIFT) + w
                        ):
                            state |= _SUP << hsh
                    prev = table.get(state)
                    if prev is None or cost < prev:
                        table[state] = cost
            else:
                for state, cost in child_tab.items():
                    for tsh, hsh, _w in dirs:
                        if (state >> tsh) & 1 and (state >> hsh) & 1:
                            state |= _SUP << hsh
                    prev = table.get(state)
                    if prev is None or cost < prev:
                        table[state] = cost
        elif kind == "custom":
            tag, key, anchors = node.payload
            table = {}
            if tag == "snk":
                groups = [
                    [(bpp * bag.index(v), w) for v, w in group] for group in anchors
                ]
                for state, cost in child_tab.items():
                    good = True
                    for group in groups:
                        for sh, w in group:
                            c = (state >> sh) & slot
                            if c & 1 and (not bounded or (c >> _D_SHIFT) + w <= W):
                                break
                        else:
                            good = False
                            break
                    if good:
                        prev = table.get(state)
                        if prev is None or cost < prev:
                            table[state] = cost
            else:  # src: optional guard choice seeding support on anchors
                positions = [(bag.index(v), w) for v, w in anchors]
                for state, cost in child_tab.items():
                    prev = table.get(state)
                    if prev is None or cost < prev:
                        table[state] = cost
                    if cost >= ub:
                        continue
                    new_state = state
                    for p, w in positions:
                        sh = bpp * p
                        c = (new_state >> sh) & slot
                        if c & 1 and not c & _SUP and (
                            not bounded or (c >> _D_SHIFT) == w
                        ):
                            new_state |= _SUP << sh
                    if new_state != state:  # useless guards are never chosen
                        prev = table.get(new_state)
                        if prev is None or cost + 1 < prev:
                            table[new_state] = cost + 1
        elif kind == "join":
            left_idx, right_idx = node.children
            left = tables[left_idx]
            right = tables[right_idx]
            if len(left) > len(right):
                left, right = right, left
            table = {}
            m = len(bag)
            supmask = 0
            for p in range(m):
                supmask |= _SUP << (bpp * p)
            keep = ~supmask
            buckets: dict[int, list] = {}
            for state, cost in right.items():
                buckets.setdefault(state & keep, []).append((state, cost))
            for lstate, lcost in left.items():
                matches = buckets.get(lstate & keep)
                if not matches:
                    continue
                for rstate, rcost in matches:
                    cost = lcost + rcost
                    if cost > ub:
                        continue
                    merged = lstate | rstate
                    prev = table.get(merged)
                    if prev is None or cost < prev:
                        table[merged] = cost
        else:
            raise InvalidDecomposition(f"unknown node kind {kind}")

        # retire states whose unsupported coverage ran out of parent edges
        if table and kind in ("edge", "join", "forget", "custom"):
            hmask = live.head_ok[idx]
            need = 0
            for p in range(len(bag)):
                if not (hmask >> p) & 1:
                    need |= 1 << (bpp * p)
            if need:
                dead = [s for s in table if s & need & ~(s >> 1)]
                for s in dead:
                    del table[s]

        tables[idx] = table
        states_total += len(table)
        if trace and len(table) > trace:
            print(
                f"[dp] node {idx} {kind} bag={len(bag)} table={len(table)} "
                f"payload={node.payload if kind != 'custom' else node.payload[:2]}"
            )
        if states_total > cap:
            raise BudgetTooLarge(
                f"explored {states_total} states, cap {cap} (set ORTHOGUARD_STATE_CAP)"
            )

    stats = {
        "bags": len(nice.nodes),
        "states": states_total,
        "width": nice.width,
        "core_n": core.n,
        "time_s": round(time.perf_counter() - t0, 6),
    }
    cost = tables[-1].get(0)
    if cost is None:
        return False, 0, [], stats
    guards = _reconstruct(core, nice, tables, bpp, bounded, W, edge_w)
    if len(guards) != cost:
        raise OrthoguardError("internal: guard count does not match DP cost")
    return True, cost, sorted(guards), stats


def _reconstruct(core, nice, tables, bpp, bounded, W, edge_w):
    """Walk the optimal solution top-down, replaying each node's transition
    to find a consistent child state; collect the chosen guards."""
    slot = (1 << bpp) - 1
    guards = []
    stack = [(len(nice.nodes) - 1, 0, tables[-1][0])]
    while stack:
        idx, state, cost = stack.pop()
        node = nice.nodes[idx]
        kind = node.kind
        if kind == "leaf":
            continue
        child_idx = node.children[0]
        child = tables[child_idx]
        if kind == "introduce":
            (v,) = node.payload
            pos = node.bag.index(v)
            shift = bpp * pos
            base = (state & ((1 << shift) - 1)) | ((state >> (shift + bpp)) << shift)
            stack.append((child_idx, base, cost))
        elif kind == "forget":
            (v,) = node.payload
            pos = nice.nodes[child_idx].bag.index(v)
            shift = bpp * pos
            lowmask = (1 << shift) - 1
            base_lo = state & lowmask
            base_hi = state >> shift
            found = None
            for code in [0] + [
                1 | _SUP | (d << _D_SHIFT) for d in (range(W + 1) if bounded else (0,))
            ]:
                cand = base_lo | (code << shift) | (base_hi << (shift + bpp))
                if child.get(cand) == cost:
                    found = cand
                    break
            if found is None:
                raise OrthoguardError("internal: forget replay failed")
            stack.append((child_idx, found, cost))
        elif kind == "edge":
            u, v = node.payload
            pu, pv = node.bag.index(u), node.bag.index(v)
            dirs = []
            if (u, v) in edge_w:
                dirs.append((bpp * pu, bpp * pv, edge_w[(u, v)]))
            if (v, u) in edge_w:
                dirs.append((bpp * pv, bpp * pu, edge_w[(v, u)]))
            head_bits = [
                _SUP << hsh for _tsh, hsh, _w in dirs if (state >> hsh) & _SUP
            ]
            found = None
            for mask_idx in range(1 << len(head_bits)):
                clear = 0
                for b in range(len(head_bits)):
                    if (mask_idx >> b) & 1:
                        clear |= head_bits[b]
                cand = state & ~clear
                if child.get(cand) != cost:
                    continue
                new_state = cand
                for tsh, hsh, w in dirs:
                    ct = (new_state >> tsh) & slot
                    ch = (new_state >> hsh) & slot
                    if ct & 1 and ch & 1 and not ch & _SUP and (
                        not bounded or (ch >> _D_SHIFT) == (ct >> _D_SHIFT) + w
                    ):
                        new_state |= _SUP << hsh
                if new_state == state:
                    found = cand
                    break
            if found is None:
                raise OrthoguardError("internal: edge replay failed")
            stack.append((child_idx, found, cost))
        elif kind == "custom":
            tag, key, anchors = node.payload
            if tag == "snk":
                stack.append((child_idx, state, cost))
                continue
            positions = [(node.bag.index(v), w) for v, w in anchors]
            if child.get(state) == cost:
                stack.append((child_idx, state, cost))
                continue
            sup_bits = [
                _SUP << (bpp * p)
                for p, _w in positions
                if (state >> (bpp * p)) & _SUP
            ]
            found = None
            for mask_idx in range(1, 1 << len(sup_bits)):
                clear = 0
                for b in range(len(sup_bits)):
                    if (mask_idx >> b) & 1:
                        clear |= sup_bits[b]
                cand = state & ~clear
                if child.get(cand) != cost - 1:
                    continue
                new_state = cand
                for p, w in positions:
                    sh = bpp * p
                    c = (new_state >> sh) & slot
                    if c & 1 and not c & _SUP and (
                        not bounded or (c >> _D_SHIFT) == w
                    ):
                        new_state |= _SUP << sh
                if new_state == state:
                    found = cand
                    break
            if found is None:
                raise OrthoguardError("internal: guard replay failed")
            guards.append(key)
            stack.append((child_idx, found, cost - 1))
        elif kind == "join":
            left_idx, right_idx = node.children
            left, right = tables[left_idx], tables[right_idx]
            m = len(node.bag)
            supmask = 0
            for p in range(m):
                supmask |= _SUP << (bpp * p)
            keep = ~supmask
            skeep = state & keep
            rbucket = [
                (rc, rcost)
                for rc, rcost in right.items()
                if rc & keep == skeep and not rc & ~state
            ]
            found = None
            for lstate, lcost in left.items():
                if lstate & keep != skeep or lstate & ~state:
                    continue
                for rcand, rcost in rbucket:
                    if lcost + rcost == cost and (lstate | rcand) == state:
                        found = (lstate, lcost, rcand, rcost)
                        break
                if found:
                    break
            if found is None:
                raise OrthoguardError("internal: join replay failed")
            stack.append((left_idx, found[0], found[1]))
            stack.append((right_idx, found[2], found[3]))
    return guards
