"""Tree decompositions: heuristic construction, validation, transfer to a
1-refinement, normalization to nice form, and PACE-style file IO.

Vertices of a decomposed graph are integers 0..n-1.  All outputs are
deterministic for a fixed input (ties broken by lowest vertex id).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Literal, NamedTuple, Optional

from .errors import InvalidDecomposition, OrthoguardError


@dataclass
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    adj: list[set[int]]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise OrthoguardError("self-loops are not supported")
            adj[a].add(b)
            adj[b].add(a)
        return cls(n, adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in self.adj[a] if a < b]

    def copy(self) -> "Graph":
        return Graph(self.n, [set(s) for s in self.adj])

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


@dataclass
class TreeDecomposition:
    """Bags indexed 0..b-1 plus tree adjacency between bag nodes."""

    bags: list[frozenset[int]]
    tree: list[list[int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def copy(self) -> "TreeDecomposition":
        return TreeDecomposition(list(self.bags), [list(a) for a in self.tree])


class Violation(NamedTuple):
    kind: Literal["vertex-missing", "edge-uncovered", "subtree-disconnected"]
    detail: str


# ---------------------------------------------------------------------------
# heuristic and exact construction


def _elimination_order(G: Graph, heuristic: str) -> list[int]:
    adj = {v: set(G.adj[v]) for v in range(G.n)}
    order = []
    remaining = set(range(G.n))
    while remaining:
        if heuristic == "min-degree":
            best = min(remaining, key=lambda v: (len(adj[v]), v))
        elif heuristic == "min-fill":
            def fill(v: int) -> int:
                nb = adj[v]
                missing = 0
                nbl = list(nb)
                for i, a in enumerate(nbl):
                    missing += sum(
                        1 for b in nbl[i + 1 :] if b not in adj[a]
                    )
                return missing

            best = min(remaining, key=lambda v: (fill(v), len(adj[v]), v))
        else:
            raise OrthoguardError(f"unknown heuristic {heuristic!r}")
        nb = list(adj[best])
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
        for a in nb:
            adj[a].discard(best)
        del adj[best]
        remaining.discard(best)
        order.append(best)
    return order


def decomposition_from_order(G: Graph, order: list[int]) -> TreeDecomposition:
    """Standard elimination-order construction; width = max bag - 1."""
    adj = {v: set(G.adj[v]) for v in range(G.n)}
    position = {v: i for i, v in enumerate(order)}
    bags: list[frozenset[int]] = []
    tree: list[list[int]] = []
    bag_of_vertex: dict[int, int] = {}
    for v in order:
        nb = sorted(adj[v])
        bags.append(frozenset([v, *nb]))
        tree.append([])
        bag_of_vertex[v] = len(bags) - 1
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
        for a in nb:
            adj[a].discard(v)
        del adj[v]
    # attach each bag to the bag of its earliest-eliminated neighbor
    for idx, v in enumerate(order):
        nb = [w for w in bags[idx] if w != v]
        if not nb:
            if idx + 1 < len(order):
                other = bag_of_vertex[order[idx + 1]]
                tree[idx].append(other)
                tree[other].append(idx)
            continue
        nxt = min(nb, key=lambda w: position[w])
        other = bag_of_vertex[nxt]
        tree[idx].append(other)
        tree[other].append(idx)
    return TreeDecomposition(bags, tree)


def simplify_decomposition(T: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose bag is a subset of the neighbour's bag;
    corridor-shaped graphs then yield clean path decompositions instead of
    caterpillars, which keeps join nodes (and their table rebuilds) rare."""
    from collections import deque

    bags = list(T.bags)
    adj = {i: set(nbrs) for i, nbrs in enumerate(T.tree)}
    queue = deque(sorted(adj))
    queued = set(adj)
    while queue:
        i = queue.popleft()
        queued.discard(i)
        if i not in adj:
            continue
        for j in sorted(adj[i]):
            if not (bags[i] <= bags[j] or bags[j] <= bags[i]):
                continue
            bags[j] |= bags[i]
            nbrs = adj.pop(i)
            nbrs.discard(j)
            adj[j].discard(i)
            adj[j] |= nbrs
            for k in nbrs:
                k_adj = adj[k]
                k_adj.discard(i)
                k_adj.add(j)
            for k in (j, *adj[j]):
                if k not in queued:
                    queued.add(k)
                    queue.append(k)
            break
    roots = sorted(adj)
    index = {r: k for k, r in enumerate(roots)}
    new_bags = [bags[r] for r in roots]
    new_tree: list[list[int]] = [[] for _ in roots]
    for r in roots:
        new_tree[index[r]] = sorted(index[nb] for nb in adj[r])
    return TreeDecomposition(new_bags, new_tree)


def decompose(G: Graph, heuristic: str = "min-fill") -> TreeDecomposition:
    """Heuristic tree decomposition; its width upper-bounds the treewidth."""
    if G.n == 0:
        return TreeDecomposition([frozenset()], [[]])
    order = _elimination_order(G, heuristic)
    T = simplify_decomposition(decomposition_from_order(G, order))
    bad = validate_decomposition(G, T)
    if bad is not None:
        raise OrthoguardError(f"internal: heuristic produced invalid decomposition: {bad}")
    return T


def _width_of_order(G: Graph, order: list[int]) -> int:
    adj = {v: set(G.adj[v]) for v in range(G.n)}
    width = 0
    for v in order:
        nb = list(adj[v])
        width = max(width, len(nb))
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
        for a in nb:
            adj[a].discard(v)
        del adj[v]
    return width


def exact_treewidth(G: Graph, max_vertices: int = 30) -> int:
    """Exact treewidth by branch and bound over elimination orders.

    Intended as a test oracle; refuses graphs above ``max_vertices``.
    """
    if G.n > max_vertices:
        raise OrthoguardError(f"exact treewidth capped at {max_vertices} vertices")
    if G.n == 0:
        return 0
    ub_order = _elimination_order(G, "min-fill")
    best = _width_of_order(G, ub_order)

    def mmd_lower(adj: dict[int, set[int]]) -> int:
        # minor-min-width lower bound
        work = {v: set(nb) for v, nb in adj.items()}
        lb = 0
        while len(work) > 1:
            v = min(work, key=lambda u: (len(work[u]), u))
            lb = max(lb, len(work[v]))
            if not work[v]:
                del work[v]
                continue
            u = min(work[v], key=lambda w: (len(work[w] & work[v]), w))
            # contract v into u
            work[u] |= work[v]
            work[u].discard(u)
            work[u].discard(v)
            for w in work[v]:
                if w != u:
                    work[w].discard(v)
                    work[w].add(u)
            del work[v]
        return lb

    def is_simplicial(adj: dict[int, set[int]], v: int) -> bool:
        nb = list(adj[v])
        return all(b in adj[a] for i, a in enumerate(nb) for b in nb[i + 1 :])

    def bb(adj: dict[int, set[int]], g: int) -> None:
        nonlocal best
        if g >= best:
            return
        if len(adj) <= 1:
            best = min(best, g)
            return
        if max(g, mmd_lower(adj)) >= best:
            return
        simp = [v for v in adj if is_simplicial(adj, v)]
        cand = [min(simp)] if simp else sorted(adj)
        for v in cand:
            deg = len(adj[v])
            g2 = max(g, deg)
            if g2 >= best:
                continue
            nxt = {u: set(nb) for u, nb in adj.items() if u != v}
            nb = list(adj[v])
            for i, a in enumerate(nb):
                for b in nb[i + 1 :]:
                    nxt[a].add(b)
                    nxt[b].add(a)
            for a in nb:
                nxt[a].discard(v)
            bb(nxt, g2)

    bb({v: set(G.adj[v]) for v in range(G.n)}, 0)
    return best


# ---------------------------------------------------------------------------
# validation


def validate_decomposition(G: Graph, T: TreeDecomposition) -> Optional[Violation]:
    """Check the three decomposition axioms; None means valid."""
    seen: dict[int, list[int]] = {}
    for i, bag in enumerate(T.bags):
        for v in bag:
            seen.setdefault(v, []).append(i)
    for v in range(G.n):
        if v not in seen:
            return Violation("vertex-missing", f"vertex {v} in no bag")
    for a in range(G.n):
        for b in G.adj[a]:
            if a < b and not any(b in T.bags[i] for i in seen[a]):
                return Violation("edge-uncovered", f"edge ({a},{b}) in no bag")
    for v, nodes in seen.items():
        nodeset = set(nodes)
        stack = [nodes[0]]
        reached = {nodes[0]}
        while stack:
            i = stack.pop()
            for j in T.tree[i]:
                if j in nodeset and j not in reached:
                    reached.add(j)
                    stack.append(j)
        if len(reached) != len(nodeset):
            return Violation(
                "subtree-disconnected", f"bags containing vertex {v} are disconnected"
            )
    return None


# ---------------------------------------------------------------------------
# transfer to the 1-refinement


def refine_decomposition(T: TreeDecomposition, psix, psix_ref) -> TreeDecomposition:
    """Turn a decomposition of a standard pixelation's graph into one of its
    1-refinement's graph.

    Every bag keeps its vertices and additionally absorbs, per vertex v,
    the up-to-8 refinement vertices sharing a refined pixel with v; the
    width therefore grows to at most 9*(width+1) - 1.
    """
    if psix.level != "standard" or psix_ref.level != "refined":
        raise OrthoguardError("refine_decomposition expects (standard, refined)")
    # fringe of a standard vertex: corners of refined pixels incident to it
    fringe: dict[int, set[int]] = {}
    corner_map: dict[tuple[int, int], list[int]] = {}
    for pid, corners in enumerate(psix_ref.pixel_corners):
        for c in corners:
            pt = psix_ref.vertices[c]
            corner_map.setdefault(tuple(pt), []).append(pid)
    for vid_std, pt in enumerate(psix.vertices):
        new_id = psix_ref.vertex_id(pt)
        group = {new_id}
        for pid in corner_map.get(tuple(pt), []):
            group.update(psix_ref.pixel_corners[pid])
        fringe[vid_std] = group

    bags = [
        frozenset(itertools.chain.from_iterable(fringe[v] for v in bag))
        if bag
        else frozenset()
        for bag in T.bags
    ]
    out = TreeDecomposition(bags, [list(a) for a in T.tree])
    bound = 9 * (T.width + 1) - 1
    if out.width > bound:
        raise OrthoguardError(
            f"refined width {out.width} exceeds 9*(w+1)-1 = {bound}"
        )
    return out


# ---------------------------------------------------------------------------
# nice form


@dataclass(frozen=True)
class NiceNode:
    kind: Literal["leaf", "introduce", "forget", "edge", "join", "custom"]
    bag: tuple[int, ...]  # sorted
    payload: tuple  # (v,) / (u, v) / () / opaque attachment payload
    children: tuple[int, ...]


@dataclass
class NiceDecomposition:
    """Rooted binary nice decomposition in post-order (children precede
    parents); the root is the last node and has an empty bag.

    Every graph edge is assigned to exactly one ``edge`` node whose bag
    contains both endpoints.
    """

    nodes: list[NiceNode]
    width: int

    @property
    def root(self) -> int:
        return len(self.nodes) - 1


def make_nice(
    T: TreeDecomposition,
    G: Graph,
    attachments: Optional[dict[int, list[tuple]]] = None,
) -> NiceDecomposition:
    """Normalize a decomposition for the cover DP (iterative, safe for
    path-shaped trees of any length).

    ``attachments`` maps a bag node to opaque payloads; each is emitted as
    a ``custom`` nice node once that bag is fully assembled, for solver
    transitions that need a specific bag in scope.
    """
    if validate_decomposition(G, T) is not None:
        raise InvalidDecomposition("decomposition invalid for graph")
    attachments = attachments or {}
    nbags = len(T.bags)
    # assign each graph edge to the lowest-id bag containing both endpoints
    edge_home: dict[int, list[tuple[int, int]]] = {i: [] for i in range(nbags)}
    bag_sets = T.bags
    vertex_bags: dict[int, list[int]] = {}
    for i, bag in enumerate(bag_sets):
        for v in bag:
            vertex_bags.setdefault(v, []).append(i)
    for a, b in G.edges():
        home = min(i for i in vertex_bags[a] if b in bag_sets[i])
        edge_home[home].append((a, b))

    nodes: list[NiceNode] = []

    def emit(kind, bag, payload, children) -> int:
        nodes.append(NiceNode(kind, tuple(bag), tuple(payload), tuple(children)))
        return len(nodes) - 1

    root_bag = 0
    post: list[int] = []
    parent_of = {root_bag: -1}
    stack = [root_bag]
    seen = {root_bag}
    while stack:
        b = stack.pop()
        post.append(b)
        for nb in T.tree[b]:
            if nb not in seen:
                seen.add(nb)
                parent_of[nb] = b
                stack.append(nb)
    if len(post) != nbags:
        raise InvalidDecomposition("decomposition tree is disconnected")
    children_of: dict[int, list[int]] = {i: [] for i in range(nbags)}
    for b, p in parent_of.items():
        if p >= 0:
            children_of[p].append(b)
    for b in children_of:
        children_of[b].sort()

    done: dict[int, int] = {}  # bag node -> nice node index realizing it
    for b in reversed(post):  # children first
        bag = bag_sets[b]
        kids = children_of[b]
        todo = sorted(edge_home[b])
        emitted: set[tuple[int, int]] = set()

        def flush_edges(idx: int, cur: set[int]) -> int:
            # introduce edges as soon as both endpoints coexist; early edge
            # nodes keep the DP's speculative states short-lived
            for e in todo:
                if e not in emitted and e[0] in cur and e[1] in cur:
                    emitted.add(e)
                    idx = emit("edge", sorted(cur), e, (idx,))
            return idx

        if not kids:
            idx = emit("leaf", (), (), ())
            cur: set[int] = set()
            for v in sorted(bag):
                cur.add(v)
                idx = emit("introduce", sorted(cur), (v,), (idx,))
                idx = flush_edges(idx, cur)
        else:
            lifted = []
            for k in kids:
                ci = done[k]
                cur = set(nodes[ci].bag)
                for v in sorted(cur - bag):
                    cur.remove(v)
                    ci = emit("forget", sorted(cur), (v,), (ci,))
                ci = flush_edges(ci, cur)
                for v in sorted(bag - cur):
                    cur.add(v)
                    ci = emit("introduce", sorted(cur), (v,), (ci,))
                    ci = flush_edges(ci, cur)
                lifted.append(ci)
            idx = lifted[0]
            for other in lifted[1:]:
                idx = emit("join", sorted(bag), (), (idx, other))
            idx = flush_edges(idx, set(bag))
        if len(emitted) != len(todo):
            raise OrthoguardError("internal: edge introduction missed")
        for payload in attachments.get(b, ()):
            idx = emit("custom", sorted(bag), payload, (idx,))
        done[b] = idx
    # drain the root bag so the final node has an empty bag
    top = done[root_bag]
    cur = set(nodes[top].bag)
    for v in sorted(cur):
        cur.remove(v)
        top = emit("forget", sorted(cur), (v,), (top,))
    width = max((len(n.bag) for n in nodes), default=1) - 1
    nd = NiceDecomposition(nodes, width)
    if nd.root != top:
        raise OrthoguardError("internal: nice construction out of order")
    return nd


# ---------------------------------------------------------------------------
# PACE-style IO


def write_gr(G: Graph) -> str:
    lines = [f"p tw {G.n} {len(G.edges())}"]
    for a, b in sorted(G.edges()):
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def read_gr(text: str) -> Graph:
    n = m = None
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "tw":
                raise OrthoguardError(f"bad .gr header: {line!r}")
            n, m = int(parts[2]), int(parts[3])
            continue
        a, b = line.split()
        edges.append((int(a) - 1, int(b) - 1))
    if n is None:
        raise OrthoguardError("missing .gr header")
    if m is not None and m != len(edges):
        raise OrthoguardError("edge count mismatch in .gr file")
    return Graph.from_edges(n, edges)


def write_td(T: TreeDecomposition, n_graph_vertices: int) -> str:
    lines = [f"s td {len(T.bags)} {T.width + 1} {n_graph_vertices}"]
    for i, bag in enumerate(T.bags):
        body = " ".join(str(v + 1) for v in sorted(bag))
        lines.append(f"b {i + 1} {body}".rstrip())
    for i, nbrs in enumerate(T.tree):
        for j in nbrs:
            if i < j:
                lines.append(f"{i + 1} {j + 1}")
    return "\n".join(lines) + "\n"


def read_td(text: str) -> tuple[TreeDecomposition, int]:
    nbags = None
    n_graph = 0
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s"):
            parts = line.split()
            if len(parts) != 5 or parts[1] != "td":
                raise OrthoguardError(f"bad .td header: {line!r}")
            nbags, n_graph = int(parts[2]), int(parts[4])
            continue
        if line.startswith("b"):
            parts = line.split()
            bags[int(parts[1]) - 1] = frozenset(int(v) - 1 for v in parts[2:])
            continue
        a, b = line.split()
        edges.append((int(a) - 1, int(b) - 1))
    if nbags is None or len(bags) != nbags:
        raise OrthoguardError("bag count mismatch in .td file")
    tree: list[list[int]] = [[] for _ in range(nbags)]
    for a, b in edges:
        tree[a].append(b)
        tree[b].append(a)
    return TreeDecomposition([bags[i] for i in range(nbags)], tree), n_graph
