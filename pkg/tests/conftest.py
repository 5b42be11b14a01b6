from __future__ import annotations

import networkx as nx
from hypothesis import strategies as st

from dynsub.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    x = nx.Graph()
    x.add_nodes_from(g.nodes)
    x.add_edges_from(g.edges())
    return x


def from_nx(x: nx.Graph) -> Graph:
    mapping = {v: i + 1 for i, v in enumerate(sorted(x.nodes))}
    return Graph(mapping.values(), [(mapping[a], mapping[b]) for a, b in x.edges()])


@st.composite
def graphs(draw, min_nodes=1, max_nodes=8, connected=False):
    k = draw(st.integers(min_nodes, max_nodes))
    pairs = [(a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        # a random spanning tree first
        for v in range(2, k + 1):
            u = draw(st.integers(1, v - 1))
            if (u, v) not in chosen:
                chosen.append((u, v))
    return Graph(range(1, k + 1), chosen)


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
