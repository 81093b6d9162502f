"""Oriented half-edge multigraphs: homology, spanning trees, deletion/contraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Oriented multigraph.

    Edge ``e`` has half-edges ``2e`` (at its tail) and ``2e + 1`` (at its
    head); the orientation ``(2e, 2e + 1)`` gives ``boundary(e) = head - tail``.
    Loops (tadpoles) keep both half-edges at one vertex.
    """

    vertices: tuple
    half_edges: tuple  # (half_edge_id, edge_id, vertex)
    edge_names: tuple[str, ...]

    @property
    def n_edges(self) -> int:
        return len(self.edge_names)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(range(self.n_edges))

    @property
    def orientation(self) -> dict[int, tuple[int, int]]:
        return {e: (2 * e, 2 * e + 1) for e in self.edges}

    def endpoints(self, e: int) -> tuple:
        """(tail, head) of edge ``e``."""
        if not 0 <= e < self.n_edges:
            raise GraphError(f"unknown edge id {e}")
        return self.half_edges[2 * e][2], self.half_edges[2 * e + 1][2]

    def edge_list(self) -> list[tuple]:
        return [self.endpoints(e) for e in self.edges]

    def is_tadpole(self, e: int) -> bool:
        t, h = self.endpoints(e)
        return t == h

    def vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def boundary_matrix(self) -> np.ndarray:
        """Integer |V| x |E| matrix, column e = head(e) - tail(e)."""
        idx = self.vertex_index()
        d = np.zeros((self.n_vertices, self.n_edges), dtype=np.int64)
        for e in self.edges:
            t, h = self.endpoints(e)
            d[idx[h], e] += 1
            d[idx[t], e] -= 1
        return d

    def components(self) -> list[list]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for t, h in self.edge_list():
            rt, rh = find(t), find(h)
            if rt != rh:
                parent[rh] = rt
        groups: dict = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    @property
    def loop_number(self) -> int:
        return self.n_edges - self.n_vertices + len(self.components())

    def is_bridge(self, e: int) -> bool:
        """True if ``e`` lies on no cycle."""
        if self.is_tadpole(e):
            return False
        return len(modify(self, e, "delete").components()) > len(self.components())

    def __repr__(self) -> str:
        return f"Graph(V={list(self.vertices)}, E={self.edge_list()})"


def build_graph(
    edge_list: Iterable[Sequence[Hashable]],
    vertices: Sequence[Hashable] | None = None,
    edge_names: Sequence[str] | None = None,
) -> Graph:
    """Build an oriented graph; each pair ``(u, v)`` is oriented u -> v.

    Vertices referenced by edges but absent from ``vertices`` are appended in
    order of first appearance.  Edge ids are dense in input order.
    """
    edge_list = [tuple(e) for e in edge_list]
    verts = list(vertices or [])
    if not edge_list and not verts:
        raise GraphError("a graph needs at least one vertex or edge")
    seen = set(verts)
    if len(seen) != len(verts):
        raise GraphError("duplicate vertex ids")
    half = []
    for e, pair in enumerate(edge_list):
        if len(pair) != 2:
            raise GraphError(f"edge {e} must have two endpoints, got {pair}")
        for k, v in enumerate(pair):
            if v not in seen:
                seen.add(v)
                verts.append(v)
            half.append((2 * e + k, e, v))
    names = tuple(edge_names) if edge_names is not None else tuple(
        f"A{i}" for i in range(1, len(edge_list) + 1)
    )
    if len(names) != len(edge_list):
        raise GraphError("edge_names length does not match edge count")
    return Graph(vertices=tuple(verts), half_edges=tuple(half), edge_names=names)


def _spanning_forest(g: Graph) -> list[int]:
    """Edges of a spanning forest chosen greedily in edge order."""
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    forest = []
    for e in g.edges:
        t, h = g.endpoints(e)
        rt, rh = find(t), find(h)
        if rt != rh:
            parent[rh] = rt
            forest.append(e)
    return forest


def tree_path(g: Graph, tree: Sequence[int], start, end) -> list[tuple[int, int]]:
    """Edges with signs along the unique tree path start -> end (+1 if traversed tail -> head)."""
    adj: dict = {v: [] for v in g.vertices}
    for e in tree:
        t, h = g.endpoints(e)
        adj[t].append((h, e, 1))
        adj[h].append((t, e, -1))
    prev = {start: None}
    stack = [start]
    while stack:
        v = stack.pop()
        if v == end:
            break
        for w, e, s in adj[v]:
            if w not in prev:
                prev[w] = (v, e, s)
                stack.append(w)
    if end not in prev:
        raise GraphError(f"no tree path from {start} to {end}")
    path = []
    v = end
    while prev[v] is not None:
        u, e, s = prev[v]
        path.append((e, s))
        v = u
    return path[::-1]


@dataclass(frozen=True)
class CycleBasis:
    rows: np.ndarray  # int64, g x |E|
    tree: tuple[int, ...]

    @property
    def genus(self) -> int:
        return int(self.rows.shape[0])


def cycle_basis(g: Graph) -> CycleBasis:
    """Fundamental-cycle basis of H_1(G, Z), one row per non-forest edge."""
    forest = _spanning_forest(g)
    in_forest = set(forest)
    rows = []
    for e in g.edges:
        if e in in_forest:
            continue
        row = np.zeros(g.n_edges, dtype=np.int64)
        row[e] = 1
        t, h = g.endpoints(e)
        # close the cycle by walking the forest from head back to tail
        for f, s in tree_path(g, forest, h, t):
            row[f] += s
        if row[np.flatnonzero(row)[0]] < 0:
            row = -row
        rows.append(row)
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), g.n_edges)
    return CycleBasis(rows=mat, tree=tuple(forest))


def spanning_trees(g: Graph) -> list[frozenset[int]]:
    """All spanning trees by recursive deletion/contraction over edges."""
    if not g.is_connected():
        raise GraphError("disconnected graph has no spanning tree")
    ends = [g.endpoints(e) for e in g.edges]
    need = g.n_vertices - 1
    out: list[frozenset[int]] = []

    def connected(label: dict, start: int) -> bool:
        # can the remaining edges still join every contracted class?
        classes = set(label.values())
        parent = {c: c for c in classes}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h in ends[start:]:
            a, b = find(label[t]), find(label[h])
            if a != b:
                parent[a] = b
        return len({find(c) for c in classes}) == 1

    def rec(i: int, label: dict, chosen: list[int]):
        if len(chosen) == need:
            out.append(frozenset(chosen))
            return
        if i == len(ends) or not connected(label, i):
            return
        t, h = ends[i]
        lt, lh = label[t], label[h]
        if lt != lh:
            merged = {v: (lt if c == lh else c) for v, c in label.items()}
            rec(i + 1, merged, chosen + [i])
        rec(i + 1, label, chosen)

    rec(0, {v: k for k, v in enumerate(g.vertices)}, [])
    return out


def is_spanning_tree(g: Graph, edges: Iterable[int]) -> bool:
    edges = list(edges)
    if len(edges) != g.n_vertices - 1 or len(set(edges)) != len(edges):
        return False
    sub = build_graph([g.endpoints(e) for e in edges], vertices=g.vertices)
    return sub.is_connected()


def modify(g: Graph, e: int, mode: str) -> Graph:
    """Delete (``"delete"``) or contract (``"contract"``) edge ``e``.

    Remaining edges keep their names, so polynomial variables stay aligned.
    Contraction merges the head into the tail; contracting a tadpole removes
    only the edge.
    """
    t, h = g.endpoints(e)
    keep = [f for f in g.edges if f != e]
    names = [g.edge_names[f] for f in keep]
    if mode == "delete":
        return build_graph([g.endpoints(f) for f in keep], vertices=g.vertices, edge_names=names)
    if mode == "contract":
        if t == h:
            return build_graph([g.endpoints(f) for f in keep], vertices=g.vertices, edge_names=names)

        def ren(v):
            return t if v == h else v

        verts = [v for v in g.vertices if v != h]
        new_edges = [tuple(ren(v) for v in g.endpoints(f)) for f in keep]
        return build_graph(new_edges, vertices=verts, edge_names=names)
    raise ValueError(f"mode must be 'delete' or 'contract', got {mode!r}")


def laplacian(g: Graph, weights: Sequence | None = None) -> list[list]:
    """Weighted Laplacian with loops ignored (object entries, exact if weights are)."""
    from fractions import Fraction

    idx = g.vertex_index()
    n = g.n_vertices
    lap = [[Fraction(0)] * n for _ in range(n)]
    for e in g.edges:
        t, h = g.endpoints(e)
        if t == h:
            continue
        w = Fraction(1) if weights is None else weights[e]
        i, j = idx[t], idx[h]
        lap[i][i] += w
        lap[j][j] += w
        lap[i][j] -= w
        lap[j][i] -= w
    return lap


def chain(n: int) -> Graph:
    """Path graph 1 - 2 - ... - n with edges oriented i -> i+1."""
    if n < 1:
        raise GraphError("chain needs at least one vertex")
    return build_graph([(i, i + 1) for i in range(1, n)], vertices=list(range(1, n + 1)))


def banana(n: int) -> Graph:
    """Two vertices joined by ``n`` parallel edges, all oriented 1 -> 2."""
    return build_graph([(1, 2)] * n)
