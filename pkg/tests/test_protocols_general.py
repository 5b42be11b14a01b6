from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from helpers import suite
from dynsub.graph import Graph, params, parse_graph
from dynsub.protocols.general import (ListCenterDel, ListRad1EdgeDel, ListStarDel, MemDetectMultipartiteNodeDel,
                                      MemDetectRad1NodeDel, MemDetectStar, MemListEdgeDel, MemListGeneral,
                                      MemListMultipartite, MemListNodeDel, _bitmap_nodes, _set_bitmap,
                                      blowup, decode_edges, encode_edges, pair_index)

C4, C5, P4, K3 = (parse_graph(x) for x in ("C4", "C5", "P4", "K3"))
PAW = parse_graph("paw")
STAR3 = parse_graph("1-2,1-3,1-4")
ALL = {"edge_ins": 1, "edge_del": 1, "node_ins": 1, "node_del": 1}


@pytest.mark.parametrize("n", [2, 3, 7, 12])
def test_pair_index_is_a_bijection(n):
    idx = [pair_index(a, b, n) for a, b in itertools.combinations(range(1, n + 1), 2)]
    assert idx == list(range(n * (n - 1) // 2))
    assert pair_index(2, 1, n) == pair_index(1, 2, n)


@given(st.integers(2, 14).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(1, n), st.integers(1, n))
                                            .filter(lambda e: e[0] < e[1])))))
def test_edge_bitmap_roundtrip(arg):
    n, edges = arg
    val = encode_edges(edges, n)
    assert val.bit_length() <= n * (n - 1) // 2
    assert decode_edges(val, n) == edges


@given(st.integers(1, 40).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n)))))
def test_node_bitmap_roundtrip(arg):
    n, nodes = arg
    assert sorted(_bitmap_nodes(_set_bitmap(nodes, n), n)) == sorted(nodes)


def test_blowup_shape():
    g, groups = blowup(C4, 3)
    assert len(g) == 12 and len(list(g.edges())) == 4 * 9
    assert all(len(v) == 3 for v in groups.values())
    g2, groups2 = blowup(K3, {1: 1, 2: 2, 3: 3})
    assert len(g2) == 6 and len(list(g2.edges())) == 2 + 3 + 6
    assert params(g2).is_complete_multipartite


@pytest.mark.parametrize("r", [1, 2, 4])
def test_memlist_multipartite(r):
    res = suite(MemListMultipartite(C4, r), "memlist", C4, 16, ALL, r=r, reps=3,
                delta=4, initial_edges=20)
    assert res.ok, res.failures
    assert res.max_bits <= MemListMultipartite(C4, r).bound(16)


@pytest.mark.parametrize("h", [P4, C5], ids=["P4", "C5"])
@pytest.mark.parametrize("mult", [1, 2])
def test_memlist_general(h, mult):
    r = params(h).r_H * mult
    p = MemListGeneral(h, r)
    res = suite(p, "memlist", h, 16, ALL, r=r, reps=3, delta=4, initial_edges=20)
    assert res.ok, res.failures
    assert res.max_bits <= p.bound(16)


def test_memlist_general_refuses_too_few_rounds():
    with pytest.raises(ValueError):
        MemListGeneral(C5, 1)


@pytest.mark.parametrize("h", [C4, C5, P4, K3], ids=["C4", "C5", "P4", "K3"])
def test_memlist_deletions(h):
    t = params(h).r_H
    p = MemListEdgeDel(h, t)
    res = suite(p, "memlist", h, 16, {"edge_del": 1}, r=t, reps=3, delta=5, initial_edges=40)
    assert res.ok and res.max_bits <= p.bound(16)
    t2 = max(1, params(h).r_H_prime)
    q = MemListNodeDel(h, t2)
    res = suite(q, "memlist", h, 16, {"node_del": 1}, r=t2, reps=3, delta=5, initial_edges=40)
    assert res.ok and res.max_bits <= q.bound(16)
    if h == K3:
        assert res.max_bits == 0


def test_memdetect_star():
    p = MemDetectStar.for_target(STAR3)
    res = suite(p, "memdetect", STAR3, 16, ALL, reps=3, delta=5, initial_edges=15)
    assert res.ok and res.max_bits <= p.bound(16)
    with pytest.raises(ValueError):
        MemDetectStar.for_target(C4)


def test_memdetect_rad1_node_del():
    p = MemDetectRad1NodeDel(PAW)
    res = suite(p, "memdetect", PAW, 16, {"node_del": 1}, reps=3, delta=6, initial_edges=40)
    assert res.ok and res.max_bits <= p.bound(16)


@pytest.mark.parametrize("spec,m", [("C4", 4), ("K_{2,2,2}", 2), ("K_{3,3}", 3)])
def test_memdetect_multipartite_node_del_one_bit(spec, m):
    h = parse_graph(spec)
    g, _ = blowup(h, m)
    res = suite(MemDetectMultipartiteNodeDel(h), "memdetect", h, len(g), {"node_del": 1},
                init=g, reps=3)
    assert res.ok, res.failures
    assert res.total_bits == res.messages


def test_list_star_del_is_silent():
    for h, model in ((STAR3, "edge_del"), (PAW, "node_del")):
        res = suite(ListStarDel(h, model), "list", h, 16, {model: 1}, reps=3, delta=5,
                    initial_edges=40)
        assert res.ok and res.max_bits == 0


def test_list_rad1_edge_del():
    res = suite(ListRad1EdgeDel(PAW), "list", PAW, 16, {"edge_del": 1}, reps=3, delta=5,
                initial_edges=40)
    assert res.ok and res.max_bits <= 1


def test_list_center_del():
    g, _ = blowup(C4, 3)
    p = ListCenterDel(C4, "edge_del")
    res = suite(p, "list", C4, 12, {"edge_del": 1}, init=g, reps=3)
    assert res.ok and res.max_bits <= p.bound(12)
    q = ListCenterDel(C5, "node_del")
    res = suite(q, "list", C5, 16, {"node_del": 1}, reps=3, delta=5, initial_edges=40)
    assert res.ok and res.max_bits <= q.bound(16)


def test_model_refusals():
    with pytest.raises(ValueError):
        ListStarDel(C4, "edge_del")
    with pytest.raises(ValueError):
        ListRad1EdgeDel(C4)
    with pytest.raises(ValueError):
        MemDetectMultipartiteNodeDel(P4)
