from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import from_nx, graphs, to_nx
from dynsub.graph import (Graph, ball_edges, bfs, complement_components_are_cliques, complete,
                          complete_multipartite, cycle, distance, has_co_p3, is_clique,
                          is_complete_multipartite, is_connected, is_star, node_edge_distance,
                          params, parse_graph, path, paw, star)


def test_known_radii():
    c4, c5 = params(cycle(4)), params(cycle(5))
    assert (c4.ne_rad, c4.rad) == (2, 2)
    assert (c5.ne_rad, c5.rad) == (3, 2)


def test_thresholds():
    assert params(complete(3)).r_H == 1
    assert params(complete(4)).r_H_prime == 0
    assert params(cycle(5)).r_H == 2
    assert params(path(4)).r_H == 2 and params(path(4)).r_H_prime == 2
    assert params(cycle(6)).r_H == 2 and params(cycle(6)).r_H_prime == 2


def test_multipartite_examples():
    ok, parts = is_complete_multipartite(cycle(4))
    assert ok and parts == ((1, 3), (2, 4))
    assert not is_complete_multipartite(path(4))[0]
    assert has_co_p3(path(4))
    assert is_complete_multipartite(complete_multipartite(2, 2, 2))[0]


def test_clique_and_star():
    assert is_clique(complete(3)) and not is_star(complete(3))
    assert is_star(star(4))
    assert not is_clique(cycle(4)) and not is_star(cycle(4))


def test_params_rejects_bad_targets():
    with pytest.raises(ValueError):
        params(Graph([1, 2, 3, 4], [(1, 2), (3, 4)]))
    with pytest.raises(ValueError):
        params(Graph([1, 2], [(1, 2)]))


@pytest.mark.parametrize("spec,nodes,edges", [
    ("K3", 3, 3), ("C5", 5, 5), ("P4", 4, 3), ("K_{2,2,2}", 6, 12), ("K_{1,3}", 4, 3),
    ("paw", 4, 4), ("1-2,2-3", 3, 2),
])
def test_parse_graph(spec, nodes, edges):
    g = parse_graph(spec)
    assert (len(g), g.num_edges()) == (nodes, edges)


@pytest.mark.parametrize("spec", ["X9", "C2", "", "1-"])
def test_parse_graph_rejects(spec):
    with pytest.raises(ValueError):
        parse_graph(spec)


def test_json_shape():
    assert cycle(4).to_json() == {"n": 4, "edges": [[1, 2], [1, 4], [2, 3], [3, 4]]}
    assert Graph.from_json(cycle(4).to_json()) == cycle(4)


def test_node_edge_distance_and_ball():
    g = path(5)
    assert node_edge_distance(g, 1, (4, 5)) == 4
    assert node_edge_distance(g, 1, (1, 2)) == 1
    assert ball_edges(g, 1, 0) == {(1, 2)}
    assert ball_edges(g, 1, 1) == {(1, 2), (2, 3)}
    assert distance(g, 1, 5) == 4


@settings(max_examples=150, deadline=None)
@given(graphs(min_nodes=3, max_nodes=8, connected=True))
def test_params_match_networkx(g):
    x = to_nx(g)
    p = params(g)
    ecc = nx.eccentricity(x)
    assert p.ecc == ecc
    assert p.diam == nx.diameter(x) and p.rad == nx.radius(x)
    assert p.center == frozenset(nx.center(x))
    assert p.diam <= p.ne_diam <= p.diam + 1
    assert p.center and p.ne_center
    # node-edge eccentricity straight from the definition
    sp = dict(nx.all_pairs_shortest_path_length(x))
    for v in g.nodes:
        assert p.ne_ecc[v] == max(1 + min(sp[v][a], sp[v][b]) for a, b in x.edges())


@settings(max_examples=150, deadline=None)
@given(graphs(min_nodes=1, max_nodes=8))
def test_bfs_and_connectivity_match_networkx(g):
    x = to_nx(g)
    assert is_connected(g) == (len(g) == 0 or nx.is_connected(x))
    for v in g.nodes:
        assert bfs(g, v) == nx.single_source_shortest_path_length(x, v)


def test_multipartite_routes_agree_on_all_small_connected_graphs():
    for x in nx.graph_atlas_g():
        if x.number_of_nodes() < 3 or not nx.is_connected(x):
            continue
        g = from_nx(x)
        p = params(g)
        a = is_complete_multipartite(g)[0]
        assert a == complement_components_are_cliques(g) == (not has_co_p3(g))
        assert (p.ne_diam == 2) == a
        assert p.diam <= p.ne_diam <= p.diam + 1


def test_named_families():
    assert paw().num_edges() == 4 and is_connected(paw())
    assert complete(5).num_edges() == 10
    assert star(3).max_degree() == 3
