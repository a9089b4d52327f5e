"""Even orientations of multigraphs.

An orientation is *even* when every vertex has even indegree.  A connected
multigraph admits one iff its edge count is even; for trees the even
orientation is unique and follows a subtree-parity rule.  These facts drive
the per-cell assembly of matchings: each dual-graph edge oriented into a
cell hands that cell one matching vertex, and even indegrees give every cell
an even point count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Optional

from .errors import GeomatchError, InvariantViolation, NotATree, OddComponentInPart, OddTree


class Multigraph:
    """Undirected multigraph: ``n`` vertices 0..n-1, edges indexed by position.

    Parallel edges are allowed, loops are not.
    """

    __slots__ = ("n", "edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        self.n = n
        es = []
        for u, v in edges:
            if u == v:
                raise GeomatchError(f"loop at vertex {u} not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise GeomatchError(f"edge ({u},{v}) outside vertex range")
            es.append((u, v))
        self.edges = tuple(es)

    def __repr__(self):
        return f"Multigraph({self.n} vertices, {len(self.edges)} edges)"

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per vertex: list of (edge id, other endpoint), sorted by edge id."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((eid, v))
            adj[v].append((eid, u))
        return adj

    def degree(self, v: int) -> int:
        return sum((u == v) + (w == v) for u, w in self.edges)


def components(g: Multigraph) -> list[tuple[list[int], list[int]]]:
    """Connected components as (sorted vertex ids, sorted edge ids)."""
    adj = g.adjacency()
    seen = [False] * g.n
    out = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        verts = [start]
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    verts.append(w)
                    stack.append(w)
        vset = set(verts)
        eids = [eid for eid, (u, v) in enumerate(g.edges) if u in vset]
        out.append((sorted(verts), eids))
    return out


def is_connected(g: Multigraph) -> bool:
    return len(components(g)) <= 1


@dataclass(frozen=True)
class EvenOrientation:
    """An orientation given by the head vertex of every edge."""

    graph: Multigraph
    heads: tuple[int, ...]

    def __post_init__(self):
        if len(self.heads) != len(self.graph.edges):
            raise GeomatchError("one head per edge required")
        for eid, h in enumerate(self.heads):
            if h not in self.graph.edges[eid]:
                raise GeomatchError(f"head {h} is not an endpoint of edge {eid}")

    def indegrees(self) -> list[int]:
        deg = [0] * self.graph.n
        for h in self.heads:
            deg[h] += 1
        return deg

    def is_even(self) -> bool:
        return all(d % 2 == 0 for d in self.indegrees())


def even_orientation(g: Multigraph) -> Optional[EvenOrientation]:
    """An orientation with all indegrees even, or None if impossible.

    Exists iff every connected component has an even number of edges.  The
    construction orients non-tree edges toward their stored second endpoint,
    then fixes spanning-tree edges from the leaves inward so each non-root
    vertex ends even; the root is forced even by the parity of the count.
    """
    heads: list[Optional[int]] = [None] * len(g.edges)
    adj = g.adjacency()
    for verts, eids in components(g):
        if len(eids) % 2 == 1:
            return None
        root = verts[0]
        parent_edge: dict[int, int] = {}
        order = [root]
        seen = {root}
        tree_edges = set()
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for eid, w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    parent_edge[w] = eid
                    tree_edges.add(eid)
                    order.append(w)
        parity = [0] * g.n
        for eid in eids:
            if eid not in tree_edges:
                u, v = g.edges[eid]
                heads[eid] = v
                parity[v] ^= 1
        for v in reversed(order[1:]):
            eid = parent_edge[v]
            u, w = g.edges[eid]
            other = w if v == u else u
            if parity[v]:
                heads[eid] = v
                parity[v] ^= 1
            else:
                heads[eid] = other
                parity[other] ^= 1
        if parity[root]:
            raise InvariantViolation("root parity odd in an even component")
    return EvenOrientation(g, tuple(heads))


def tree_even_orientation(tree: Multigraph) -> EvenOrientation:
    """The unique even orientation of a tree with an even number of edges.

    Deleting an edge vw splits the tree into T_v and T_w, exactly one of
    which has an even edge count; the edge is oriented away from the even
    side.  Raises NotATree / OddTree on bad input.
    """
    m = len(tree.edges)
    if m != tree.n - 1 or not is_connected(tree):
        raise NotATree(f"{tree!r} is not a tree")
    if m % 2 == 1:
        raise OddTree(f"tree has {m} edges")
    adj = tree.adjacency()
    root = 0
    parent: dict[int, tuple[int, int]] = {}  # vertex -> (parent vertex, edge id)
    order = [root]
    seen = {root}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for eid, w in adj[v]:
            if w not in seen:
                seen.add(w)
                parent[w] = (v, eid)
                order.append(w)
    subtree_vertices = [1] * tree.n
    for v in reversed(order[1:]):
        subtree_vertices[parent[v][0]] += subtree_vertices[v]
    heads: list[Optional[int]] = [None] * m
    for v in order[1:]:
        u, eid = parent[v]
        edges_below = subtree_vertices[v] - 1  # edge count of T_v
        # T_v even -> orient v -> u; otherwise T_u is the even side.
        heads[eid] = u if edges_below % 2 == 0 else v
    return EvenOrientation(tree, tuple(heads))


EdgePartition = dict[int, Hashable]


def orientation_from_partition(g: Multigraph, partition: EdgePartition) -> EvenOrientation:
    """Orient each part independently so that all indegrees are even.

    ``partition`` maps every edge id to a part label.  Each part, as a
    subgraph on the full vertex set, must have only even components; a part
    with an odd component raises OddComponentInPart.  Because parts are
    oriented separately, a vertex of indegree two in the result received
    both of its in-edges from the same part.
    """
    if set(partition) != set(range(len(g.edges))):
        raise GeomatchError("partition must label every edge id exactly once")
    heads: list[Optional[int]] = [None] * len(g.edges)
    labels = sorted(set(partition.values()), key=repr)
    for label in labels:
        eids = [eid for eid in range(len(g.edges)) if partition[eid] == label]
        sub = Multigraph(g.n, [g.edges[eid] for eid in eids])
        res = even_orientation(sub)
        if res is None:
            for verts, sub_eids in components(sub):
                if len(sub_eids) % 2 == 1:
                    involved = {v for eid in sub_eids for v in sub.edges[eid]}
                    raise OddComponentInPart(label, involved)
            raise InvariantViolation("even_orientation failed on even components")
        for sub_eid, head in zip(eids, res.heads):
            heads[sub_eid] = head
    return EvenOrientation(g, tuple(heads))


def count_odd_components(g: Multigraph) -> int:
    return sum(1 for _, eids in components(g) if len(eids) % 2 == 1)


def prune_odd_components(g: Multigraph):
    """Remove one edge from every odd component, making all components even.

    From each odd component, remove a leaf edge when the component has a
    vertex of degree one (the smallest such edge id); otherwise remove the
    smallest edge id on the first cycle found by traversal from the
    component's smallest vertex.  Returns ``(pruned, removed_ids)`` where
    ``pruned`` reuses the original vertex numbering and keeps the surviving
    edges in their original order.
    """
    removed: list[int] = []
    adj = g.adjacency()
    for verts, eids in components(g):
        if len(eids) % 2 == 0:
            continue
        deg: dict[int, int] = {v: 0 for v in verts}
        for eid in eids:
            u, v = g.edges[eid]
            deg[u] += 1
            deg[v] += 1
        leaf_edges = [
            eid for eid in eids if deg[g.edges[eid][0]] == 1 or deg[g.edges[eid][1]] == 1
        ]
        if leaf_edges:
            removed.append(min(leaf_edges))
            continue
        # every vertex has degree >= 2: find a cycle by DFS from min vertex
        start = verts[0]
        path: list[tuple[int, int]] = [(start, -1)]  # (vertex, incoming edge id)
        on_path = {start}
        finished: set[int] = set()
        iters = [iter(adj[start])]
        cycle_edges: Optional[list[int]] = None
        while iters and cycle_edges is None:
            v, in_eid = path[-1]
            for eid, w in iters[-1]:
                if eid == in_eid:
                    continue
                if w in on_path:
                    # back edge: close the cycle along the current path
                    cyc = [eid]
                    for pv, pe in reversed(path):
                        if pv == w:
                            break
                        cyc.append(pe)
                    cycle_edges = cyc
                    break
                if w in finished:
                    continue
                path.append((w, eid))
                on_path.add(w)
                iters.append(iter(adj[w]))
                break
            else:
                pv, _ = path.pop()
                on_path.discard(pv)
                finished.add(pv)
                iters.pop()
        if cycle_edges is None:
            raise InvariantViolation("component without leaves must contain a cycle")
        removed.append(min(cycle_edges))
    removed_set = set(removed)
    kept = [eid for eid in range(len(g.edges)) if eid not in removed_set]
    pruned = Multigraph(g.n, [g.edges[eid] for eid in kept])
    return pruned, sorted(removed)
