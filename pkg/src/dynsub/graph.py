"""Static graphs and their distance parameters.

Includes the node-edge variants (distance from a node to an edge is one more
than the distance to the nearer endpoint) and three independent routes to
classifying complete multipartite graphs.
"""
from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

INF = math.inf

Edge = tuple[int, int]


def norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop on node {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Undirected simple graph over integer node ids."""

    __slots__ = ("_adj",)

    def __init__(self, nodes: Iterable[int] = (), edges: Iterable[Iterable[int]] = ()):
        adj: dict[int, set[int]] = {int(v): set() for v in nodes}
        for e in edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}

    @classmethod
    def from_adj(cls, adj: dict[int, Iterable[int]]) -> Graph:
        g = cls.__new__(cls)
        g._adj = {v: frozenset(ns) for v, ns in adj.items()}
        return g

    @property
    def nodes(self) -> list[int]:
        return sorted(self._adj)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def neighbors(self, v: int) -> frozenset[int]:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"unknown node {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[Edge]:
        return sorted((u, v) for u, ns in self._adj.items() for v in ns if u < v)

    def num_edges(self) -> int:
        return sum(len(ns) for ns in self._adj.values()) // 2

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def subgraph(self, keep: Iterable[int]) -> Graph:
        keep = set(keep)
        return Graph.from_adj({v: self._adj[v] & keep for v in keep})

    def edge_subgraph(self, edges: Iterable[Edge]) -> Graph:
        return Graph(edges=edges)

    # functional updates; dynamics live in the simulator
    def with_edge(self, u: int, v: int) -> Graph:
        adj = dict(self._adj)
        adj[u] = adj.get(u, frozenset()) | {v}
        adj[v] = adj.get(v, frozenset()) | {u}
        return Graph.from_adj(adj)

    def without_edge(self, u: int, v: int) -> Graph:
        adj = dict(self._adj)
        adj[u] = adj[u] - {v}
        adj[v] = adj[v] - {u}
        return Graph.from_adj(adj)

    def with_node(self, v: int, nbrs: Iterable[int] = ()) -> Graph:
        nbrs = frozenset(nbrs)
        adj = dict(self._adj)
        adj[v] = nbrs
        for w in nbrs:
            adj[w] = adj[w] | {v}
        return Graph.from_adj(adj)

    def without_node(self, v: int) -> Graph:
        adj = {w: ns - {v} for w, ns in self._adj.items() if w != v}
        return Graph.from_adj(adj)

    def relabel(self, mapping: dict[int, int]) -> Graph:
        return Graph(nodes=(mapping[v] for v in self._adj),
                     edges=((mapping[u], mapping[v]) for u, v in self.edges()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(frozenset(self._adj.items()))

    def __repr__(self) -> str:
        return f"Graph(nodes={self.nodes}, edges={self.edges()})"

    def to_json(self, n: int | None = None) -> dict:
        return {"n": n if n is not None else max(self._adj, default=0),
                "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, obj: dict) -> Graph:
        return cls(nodes=range(1, int(obj["n"]) + 1), edges=obj["edges"])


# ---------------------------------------------------------------- distances

def bfs(g: Graph, src: int) -> dict[int, int]:
    """Hop distances from src to every reachable node."""
    dist = {src: 0}
    q = deque([src])
    while q:
        x = q.popleft()
        dx = dist[x] + 1
        for y in g.neighbors(x):
            if y not in dist:
                dist[y] = dx
                q.append(y)
    return dist


def distance(g: Graph, u: int, v: int) -> float:
    if u not in g or v not in g:
        raise KeyError(f"unknown node {u if u not in g else v}")
    return bfs(g, u).get(v, INF)


def node_edge_distance(g: Graph, u: int, e: Iterable[int]) -> float:
    v, w = e
    if not g.has_edge(v, w):
        raise ValueError(f"{{{v},{w}}} is not an edge")
    d = bfs(g, u)
    return 1 + min(d.get(v, INF), d.get(w, INF))


def ball_edges(g: Graph, u: int, radius: int) -> set[Edge]:
    """Edges with at least one endpoint within `radius` hops of u."""
    d = bfs(g, u)
    return {e for e in g.edges() if min(d.get(e[0], INF), d.get(e[1], INF)) <= radius}


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class GraphParams:
    ecc: dict[int, int]
    diam: int
    rad: int
    center: frozenset[int]
    ne_ecc: dict[int, int]
    ne_diam: int
    ne_rad: int
    ne_center: frozenset[int]
    r_H: int
    r_H_prime: int
    is_clique: bool
    is_star: bool
    is_complete_multipartite: bool
    parts: tuple[tuple[int, ...], ...] | None = field(default=None)

    def to_json(self) -> dict:
        return {
            "ecc": {str(k): v for k, v in sorted(self.ecc.items())},
            "diam": self.diam, "rad": self.rad, "center": sorted(self.center),
            "ne_ecc": {str(k): v for k, v in sorted(self.ne_ecc.items())},
            "ne_diam": self.ne_diam, "ne_rad": self.ne_rad,
            "ne_center": sorted(self.ne_center),
            "r_H": self.r_H, "r_H_prime": self.r_H_prime,
            "is_clique": self.is_clique, "is_star": self.is_star,
            "is_complete_multipartite": self.is_complete_multipartite,
            "parts": [list(p) for p in self.parts] if self.parts else None,
        }


def is_connected(g: Graph) -> bool:
    if len(g) == 0:
        return True
    return len(bfs(g, g.nodes[0])) == len(g)


def params(g: Graph) -> GraphParams:
    if len(g) < 3:
        raise ValueError("target graph needs at least three nodes")
    if not is_connected(g):
        raise ValueError("target graph must be connected")
    edges = g.edges()
    dist = {v: bfs(g, v) for v in g.nodes}
    ecc = {v: max(dv.values()) for v, dv in dist.items()}
    ne_ecc = {v: max(1 + min(dv[a], dv[b]) for a, b in edges) for v, dv in dist.items()}
    diam, rad = max(ecc.values()), min(ecc.values())
    ne_diam, ne_rad = max(ne_ecc.values()), min(ne_ecc.values())
    multi, parts = is_complete_multipartite(g)
    return GraphParams(
        ecc=ecc, diam=diam, rad=rad,
        center=frozenset(v for v, e in ecc.items() if e == rad),
        ne_ecc=ne_ecc, ne_diam=ne_diam, ne_rad=ne_rad,
        ne_center=frozenset(v for v, e in ne_ecc.items() if e == ne_rad),
        r_H=ne_diam - 1, r_H_prime=diam - 1,
        is_clique=is_clique(g), is_star=is_star(g),
        is_complete_multipartite=multi, parts=parts,
    )


def is_clique(g: Graph) -> bool:
    k = len(g)
    return k > 0 and all(len(g.neighbors(v)) == k - 1 for v in g.nodes)


def is_star(g: Graph) -> bool:
    """K_{1,s} with s >= 1: one hub adjacent to every other node, no other edges."""
    k = len(g)
    if k < 2 or g.num_edges() != k - 1:
        return False
    return any(len(g.neighbors(v)) == k - 1 for v in g.nodes)


def is_complete_multipartite(g: Graph) -> tuple[bool, tuple[tuple[int, ...], ...] | None]:
    """No node is independent of an edge; parts are the non-adjacency classes."""
    for x in g.nodes:
        nx_ = g.neighbors(x)
        for a, b in g.edges():
            if x != a and x != b and a not in nx_ and b not in nx_:
                return False, None
    return True, nonadjacency_classes(g)


def nonadjacency_classes(g: Graph) -> tuple[tuple[int, ...], ...]:
    parts: list[list[int]] = []
    for v in g.nodes:
        for p in parts:
            if not g.has_edge(v, p[0]):
                p.append(v)
                break
        else:
            parts.append([v])
    return tuple(tuple(p) for p in sorted(parts, key=lambda p: p[0]))


def complement_components_are_cliques(g: Graph) -> bool:
    """Second classifier route: every component of the complement is a clique."""
    nodes = g.nodes
    comp = Graph(nodes=nodes, edges=((u, v) for u, v in combinations(nodes, 2)
                                     if not g.has_edge(u, v)))
    seen: set[int] = set()
    for v in nodes:
        if v in seen:
            continue
        members = set(bfs(comp, v))
        seen |= members
        if not is_clique(comp.subgraph(members)):
            return False
    return True


def has_co_p3(g: Graph) -> bool:
    """Third route: an induced three-node graph with exactly one edge."""
    for a, b, c in combinations(g.nodes, 3):
        if g.has_edge(a, b) + g.has_edge(b, c) + g.has_edge(a, c) == 1:
            return True
    return False


# ---------------------------------------------------------------- named families

def complete(k: int) -> Graph:
    return Graph(nodes=range(1, k + 1), edges=combinations(range(1, k + 1), 2))


def cycle(k: int) -> Graph:
    return Graph(nodes=range(1, k + 1), edges=[(i, i % k + 1) for i in range(1, k + 1)])


def path(k: int) -> Graph:
    return Graph(nodes=range(1, k + 1), edges=[(i, i + 1) for i in range(1, k)])


def complete_multipartite(*sizes: int) -> Graph:
    labels: list[int] = []
    for i, s in enumerate(sizes):
        labels += [i] * s
    ids = range(1, len(labels) + 1)
    return Graph(nodes=ids, edges=[(u, v) for u, v in combinations(ids, 2)
                                   if labels[u - 1] != labels[v - 1]])


def star(s: int) -> Graph:
    return complete_multipartite(1, s)


def paw() -> Graph:
    """Triangle 1-2-3 with pendant 4 attached to 3."""
    return Graph(nodes=range(1, 5), edges=[(1, 2), (1, 3), (2, 3), (3, 4)])


_SPEC_RE = {
    "K_": re.compile(r"^K_\{?([\d,]+)\}?$"),
    "K": re.compile(r"^K(\d+)$"),
    "C": re.compile(r"^C(\d+)$"),
    "P": re.compile(r"^P(\d+)$"),
}


def parse_graph(spec: str) -> Graph:
    """Named family (K3, K_{2,2,2}, C5, P4, paw) or explicit edges like '1-2,2-3'."""
    s = spec.strip().replace(" ", "")
    if s.lower() == "paw":
        return paw()
    m = _SPEC_RE["K_"].match(s)
    if m:
        return complete_multipartite(*(int(x) for x in m.group(1).split(",")))
    for key, fn in (("K", complete), ("C", cycle), ("P", path)):
        m = _SPEC_RE[key].match(s)
        if m:
            k = int(m.group(1))
            if k < 1 or (key == "C" and k < 3):
                raise ValueError(f"bad size in graph spec {spec!r}")
            return fn(k)
    if re.fullmatch(r"\d+-\d+(,\d+-\d+)*", s):
        return Graph(edges=[tuple(int(x) for x in p.split("-")) for p in s.split(",")])
    raise ValueError(f"cannot parse graph spec {spec!r}")
