from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from conftest import graphs, to_nx
from dynsub.graph import Graph, complete, complete_multipartite, cycle, path, paw, star
from dynsub.oracle import (canon, contains_copy, copies_by_node, copies_containing, copy_nodes,
                           copy_to_json, enumerate_copies, in_some_copy)

TARGETS = [complete(3), cycle(4), path(3), path(4), paw(), star(3), cycle(5),
           complete_multipartite(1, 2, 2)]


def nx_copies(g: Graph, h: Graph) -> set:
    """Independent route: monomorphisms of h into g, each mapped to its image edge set."""
    out = set()
    for m in GraphMatcher(to_nx(g), to_nx(h)).subgraph_monomorphisms_iter():
        inv = {hv: gv for gv, hv in m.items()}
        out.add(canon((inv[a], inv[b]) for a, b in h.edges()))
    return out


@settings(max_examples=120, deadline=None)
@given(graphs(min_nodes=0, max_nodes=7), st.sampled_from(TARGETS))
def test_enumeration_matches_networkx(g, h):
    got = enumerate_copies(g, h)
    assert got == nx_copies(g, h)
    assert contains_copy(g, h) == bool(got)
    by = copies_by_node(got)
    for v in g.nodes:
        assert copies_containing(g, h, v) == by.get(v, set())
        assert in_some_copy(g, h, v) == (v in by)


@pytest.mark.parametrize("k", [3, 4, 5, 6])
def test_triangles_in_cliques(k):
    assert len(enumerate_copies(complete(k), complete(3))) == math.comb(k, 3)


def test_c4_copies_in_k4_and_k33():
    assert len(enumerate_copies(complete(4), cycle(4))) == 3
    # K_{3,3}: choose 2 on each side
    assert len(enumerate_copies(complete_multipartite(3, 3), cycle(4))) == 9


def test_copies_are_not_induced():
    assert len(enumerate_copies(complete(4), path(3))) == 12


def test_canonical_form():
    c = canon([(3, 1), (2, 3), (1, 2)])
    assert c == ((1, 2), (1, 3), (2, 3))
    assert copy_nodes(c) == frozenset({1, 2, 3})
    assert copy_to_json(c) == [[1, 2], [1, 3], [2, 3]]


def test_rejects_disconnected_target():
    with pytest.raises(ValueError):
        enumerate_copies(complete(3), Graph([1, 2, 3, 4], [(1, 2), (3, 4)]))
