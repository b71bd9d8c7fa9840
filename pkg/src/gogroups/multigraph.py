"""Undirected multigraphs with oriented edges.

Edges are oriented: each edge ``e`` has a plus end ``e(+1)`` and a minus
end ``e(-1)``.  Loops (both ends equal) and parallel edges are allowed.
Vertex and edge ids are opaque strings; every iteration in this module is
ordered by id so that spanning trees and everything derived from them are
reproducible.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    plus: str
    minus: str

    def endpoint(self, sign: int) -> str:
        if sign == 1:
            return self.plus
        if sign == -1:
            return self.minus
        raise GraphError(f"edge endpoint sign must be +1 or -1, got {sign}")

    def is_loop(self) -> bool:
        return self.plus == self.minus


@dataclass(frozen=True)
class Multigraph:
    """A finite undirected multigraph with oriented edges."""

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _edge_index: dict[str, Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        index = {}
        for e in self.edges:
            if e.id in index:
                raise GraphError(f"duplicate edge id {e.id!r}")
            if e.plus not in vset or e.minus not in vset:
                raise GraphError(f"edge {e.id!r} references missing vertex")
            index[e.id] = e
        object.__setattr__(self, "_edge_index", index)

    @classmethod
    def build(cls, vertices, edges) -> "Multigraph":
        """Construct from iterables of vertex ids and (id, plus, minus) triples."""
        return cls(tuple(vertices), tuple(Edge(i, p, m) for i, p, m in edges))

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise GraphError(f"unknown edge {edge_id!r}") from None

    def num_vertices(self) -> int:
        return len(self.vertices)

    def num_edges(self) -> int:
        return len(self.edges)

    def incident(self, vertex: str) -> list[Edge]:
        return [e for e in self.edges if vertex in (e.plus, e.minus)]

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "from": e.minus, "to": e.plus} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Multigraph":
        """Parse the graph description schema.

        ``{"vertices": [...], "edges": [{"id", "from", "to"}]}`` where ``to``
        is the plus end e(+1) and ``from`` is the minus end e(-1).
        """
        try:
            vertices = data["vertices"]
            edges = [(e["id"], e["to"], e["from"]) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph description: {exc}") from exc
        return cls.build(vertices, edges)

    @classmethod
    def from_json(cls, text: str) -> "Multigraph":
        return cls.from_dict(json.loads(text))


def is_connected(g: Multigraph) -> bool:
    """True iff every vertex is reachable from any fixed vertex."""
    if not g.vertices:
        raise GraphError("empty graph")
    adjacency: dict[str, list[str]] = {v: [] for v in g.vertices}
    for e in g.edges:
        adjacency[e.plus].append(e.minus)
        adjacency[e.minus].append(e.plus)
    seen = {g.vertices[0]}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(g.vertices)


def is_forest(g: Multigraph) -> bool:
    """True iff g is acyclic.

    A loop is a cycle of length 1 and a pair of parallel edges a cycle of
    length 2, so either makes this false.
    """
    parent = {v: v for v in g.vertices}

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for e in g.edges:
        a, b = find(e.plus), find(e.minus)
        if a == b:
            return False
        parent[a] = b
    return True


@dataclass(frozen=True)
class SpanningTree:
    """A maximal tree in a connected multigraph, given by its edge id set."""

    graph: Multigraph
    tree_edges: frozenset[str]

    def __post_init__(self):
        g = self.graph
        for eid in self.tree_edges:
            g.edge(eid)
        sub = Multigraph(g.vertices, tuple(g.edge(eid) for eid in sorted(self.tree_edges)))
        if not is_forest(sub):
            raise GraphError("tree edges contain a cycle")
        if g.vertices and not is_connected(sub):
            raise GraphError("tree edges do not span the graph")
        if len(self.tree_edges) != g.num_vertices() - 1:
            raise GraphError("wrong number of tree edges")

    def contains(self, edge_id: str) -> bool:
        return edge_id in self.tree_edges

    def non_tree_edges(self) -> list[Edge]:
        return [e for e in self.graph.edges if e.id not in self.tree_edges]

    def path(self, start: str, end: str) -> "Chain":
        """The unique simple chain between two vertices along tree edges."""
        g = self.graph
        adjacency: dict[str, list[tuple[Edge, int]]] = {v: [] for v in g.vertices}
        for eid in sorted(self.tree_edges):
            e = g.edge(eid)
            # traversing toward e(+1) carries sign +1, toward e(-1) sign -1
            adjacency[e.minus].append((e, 1))
            adjacency[e.plus].append((e, -1))
        prev: dict[str, tuple[str, Edge, int]] = {}
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            if v == end:
                break
            for e, sign in adjacency[v]:
                w = e.endpoint(sign)
                if w not in seen:
                    seen.add(w)
                    prev[w] = (v, e, sign)
                    queue.append(w)
        if end not in seen:
            raise GraphError(f"no tree path from {start!r} to {end!r}")
        steps = []
        v = end
        while v != start:
            u, e, sign = prev[v]
            steps.append((e.id, sign))
            v = u
        steps.reverse()
        return Chain(g, start, tuple(steps))


def spanning_tree(g: Multigraph) -> SpanningTree:
    """Breadth-first spanning tree from the lexicographically smallest vertex.

    Deterministic: vertices and edges are scanned in id order, loops are
    never chosen.
    """
    if not g.vertices:
        raise GraphError("empty graph")
    if not is_connected(g):
        raise GraphError("graph is not connected")
    adjacency: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for e in g.edges:
        if e.is_loop():
            continue
        adjacency[e.plus].append((e.id, e.minus))
        adjacency[e.minus].append((e.id, e.plus))
    for v in adjacency:
        adjacency[v].sort()
    root = g.vertices[0]
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid, w in adjacency[v]:
            if w not in seen:
                seen.add(w)
                tree.add(eid)
                queue.append(w)
    return SpanningTree(g, frozenset(tree))


@dataclass(frozen=True)
class Chain:
    """An edge chain: a start vertex and steps (edge id, arrival sign).

    A step ``(e, s)`` walks the edge ``e`` arriving at the endpoint
    ``e(s)``, i.e. from ``e(-s)`` to ``e(s)``.  The sign is part of the
    data so that loops can be traversed unambiguously.
    """

    graph: Multigraph
    start: str
    steps: tuple[tuple[str, int], ...]

    def __post_init__(self):
        at = self.start
        if at not in self.graph._edge_index and at not in self.graph.vertices:
            raise GraphError(f"unknown vertex {at!r}")
        for eid, sign in self.steps:
            e = self.graph.edge(eid)
            if e.endpoint(-sign) != at:
                raise GraphError(f"chain breaks at edge {eid!r}")
            at = e.endpoint(sign)

    def vertices_visited(self) -> list[str]:
        out = [self.start]
        for eid, sign in self.steps:
            out.append(self.graph.edge(eid).endpoint(sign))
        return out

    def end(self) -> str:
        return self.vertices_visited()[-1]

    def is_simple(self) -> bool:
        visited = self.vertices_visited()
        return len(set(visited)) == len(visited)

    def __len__(self) -> int:
        return len(self.steps)
