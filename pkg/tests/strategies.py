"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from sandpile_lab.bipartite import SortedBipartiteConfig
from sandpile_lab.graph_core import Graph


@st.composite
def connected_graphs(draw, min_vertices=2, max_vertices=8):
    n = draw(st.integers(min_vertices, max_vertices))
    # random spanning tree, then extra edges
    edges = {(draw(st.integers(1, v - 1)), v) for v in range(2, n + 1)}
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    edges |= set(draw(st.lists(st.sampled_from(pairs), max_size=len(pairs))))
    return Graph.from_edges(n, edges)


@st.composite
def stable_configs(draw, graph):
    return tuple(draw(st.integers(0, graph.degree(i) - 1)) for i in range(1, graph.vertex_count))


@st.composite
def graph_and_config(draw, max_vertices=8):
    g = draw(connected_graphs(max_vertices=max_vertices))
    return g, draw(stable_configs(g))


@st.composite
def sorted_configs(draw, max_m=6, max_n=6):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(1, max_n))
    a = sorted(draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n)))
    b = sorted(draw(st.lists(st.integers(0, n - 1), min_size=m - 1, max_size=m - 1)))
    return SortedBipartiteConfig(m, n, a, b)


def words(e, n):
    return st.permutations("E" * e + "N" * n).map("".join)


@st.composite
def path_pairs(draw, max_m=6, max_n=6):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(1, max_n))
    return draw(words(m - 1, n - 1)), draw(words(m - 1, n))
