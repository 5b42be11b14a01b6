"""Brute-force ground truth: every subgraph of a host isomorphic to a target."""
from __future__ import annotations

from collections import deque
from typing import Iterable

from .graph import Edge, Graph, is_connected, norm_edge

MAX_TARGET_NODES = 8

Copy = tuple[Edge, ...]


def canon(edges: Iterable[Iterable[int]]) -> Copy:
    return tuple(sorted({norm_edge(*e) for e in edges}))


def copy_nodes(c: Copy) -> frozenset[int]:
    return frozenset(x for e in c for x in e)


def _check_target(h: Graph) -> None:
    if len(h) > MAX_TARGET_NODES:
        raise ValueError(f"target has {len(h)} nodes; limit is {MAX_TARGET_NODES}")
    if len(h) < 3 or not is_connected(h):
        raise ValueError("target must be connected with at least three nodes")


def _search_order(h: Graph, first: int) -> list[int]:
    order, seen, q = [], {first}, deque([first])
    while q:
        x = q.popleft()
        order.append(x)
        for y in sorted(h.neighbors(x)):
            if y not in seen:
                seen.add(y)
                q.append(y)
    return order


def _plan(h: Graph, order: list[int]) -> list[list[int]]:
    """For each position after the first, the earlier positions it must stay adjacent to."""
    pos = {x: i for i, x in enumerate(order)}
    return [sorted(pos[y] for y in h.neighbors(x) if pos[y] < i) for i, x in enumerate(order)]


def _embeddings(g: Graph, h: Graph, order: list[int], roots: Iterable[int]):
    """Injective homomorphisms h -> g, following `order`, first node mapped into roots."""
    out: list[tuple[int, ...]] = []
    for_each_embedding(g, h, order, roots, out.append)
    return out


def for_each_embedding(g: Graph, h: Graph, order: list[int], roots: Iterable[int], emit) -> None:
    adj = g._adj
    back = _plan(h, order)
    k = len(order)
    img: list[int] = [0] * k

    def rec(i: int) -> None:
        anchors = back[i]
        first = adj[img[anchors[0]]]
        rest = [adj[img[j]] for j in anchors[1:]]
        used = img[:i]
        last = i == k - 1
        for c in first:
            if c in used:
                continue
            ok = True
            for ns in rest:
                if c not in ns:
                    ok = False
                    break
            if not ok:
                continue
            img[i] = c
            if last:
                emit(tuple(img))
            else:
                rec(i + 1)

    for r in roots:
        if r not in adj:
            continue
        img[0] = r
        if k == 1:
            emit(tuple(img))
        else:
            rec(1)


def _collect(g: Graph, h: Graph, first: int, roots: Iterable[int]) -> set[Copy]:
    order = _search_order(h, first)
    pos = {x: i for i, x in enumerate(order)}
    pairs = [(pos[a], pos[b]) for a, b in h.edges()]
    out: set[Copy] = set()
    add = out.add

    def emit(img):
        es = []
        for a, b in pairs:
            x, y = img[a], img[b]
            es.append((x, y) if x < y else (y, x))
        es.sort()
        add(tuple(es))

    for_each_embedding(g, h, order, roots, emit)
    return out


def enumerate_copies(g: Graph, h: Graph) -> set[Copy]:
    _check_target(h)
    first = min(h.nodes, key=lambda x: (-h.degree(x), x))
    return _collect(g, h, first, g.nodes)


def copies_containing(g: Graph, h: Graph, v: int) -> set[Copy]:
    """Copies whose node set includes v; searched by anchoring each target node at v."""
    _check_target(h)
    if v not in g:
        return set()
    out: set[Copy] = set()
    for x in h.nodes:
        out |= _collect(g, h, x, (v,))
    return out


def contains_copy(g: Graph, h: Graph) -> bool:
    _check_target(h)
    first = min(h.nodes, key=lambda x: (-h.degree(x), x))
    order = _search_order(h, first)

    class _Found(Exception):
        pass

    def stop(_img):
        raise _Found

    try:
        for_each_embedding(g, h, order, g.nodes, stop)
    except _Found:
        return True
    return False


def in_some_copy(g: Graph, h: Graph, v: int) -> bool:
    """Whether v lies in at least one copy; stops at the first embedding found."""
    _check_target(h)
    if v not in g:
        return False

    class _Found(Exception):
        pass

    def stop(_img):
        raise _Found

    try:
        for x in h.nodes:
            for_each_embedding(g, h, _search_order(h, x), (v,), stop)
    except _Found:
        return True
    return False


def copies_by_node(copies: Iterable[Copy]) -> dict[int, set[Copy]]:
    out: dict[int, set[Copy]] = {}
    for c in copies:
        for v in copy_nodes(c):
            out.setdefault(v, set()).add(c)
    return out


def copy_to_json(c: Copy) -> list[list[int]]:
    return [list(e) for e in c]
