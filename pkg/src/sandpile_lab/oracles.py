"""Slow, literal reference implementations used to cross-check the fast paths.

Nothing here is clever on purpose.  Each function follows a definition
word for word so that disagreement with the production code points at the
production code.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterator, Sequence

import networkx as nx

from .graph_core import Graph, SandpileError, add_cluster, require_stable, topple
from .operators import subsets_in_order
from .paths import binomial_words, is_polyomino

PARKING_SCAN_LIMIT = 12


def recurrent_by_permutations(g: Graph, c: Sequence[int]) -> bool:
    """Try every toppling order of the non-sink vertices after firing the sink."""
    start = topple(g, require_stable(g, c), g.sink)
    for order in permutations(range(1, g.vertex_count)):
        cur = start
        for i in order:
            cur = topple(g, cur, i)
            if min(cur) < 0:
                break
        else:
            return True
    return False


def parking_by_subsets(g: Graph, c: Sequence[int]) -> bool:
    """c - Delta_A has a negative entry for every non-empty A."""
    c = require_stable(g, c)
    if g.n > PARKING_SCAN_LIMIT:
        raise SandpileError(f"subset scan is capped at {PARKING_SCAN_LIMIT} non-sink vertices")
    return all(min(add_cluster(g, c, a, -1)) < 0 for a in subsets_in_order(g.n))


def minimal_subset_by_scan(g: Graph, c: Sequence[int], sign: int):
    """The first A in subset order with c + sign*Delta_A stable, via add_cluster."""
    c = require_stable(g, c)
    degs = g.degrees
    for a in subsets_in_order(g.n):
        cand = add_cluster(g, c, a, sign)
        if all(0 <= h < degs[i] for i, h in enumerate(cand)):
            return a
    return None


def polyominoes_by_pairs(m: int, n: int) -> Iterator[tuple[str, str]]:
    """Every (upper, lower) pair of (m, n)-paths that meet only at the ends."""
    words = list(binomial_words(m, n))
    for up in words:
        for lo in words:
            if is_polyomino(up, lo):
                yield up, lo


def graph_family(max_nonsink: int = 5, min_vertices: int = 2) -> list[Graph]:
    """Connected simple graphs from the networkx atlas, one per isomorphism class.

    The atlas lists all graphs on up to seven vertices; we keep the
    connected ones with between ``min_vertices`` and ``max_nonsink + 1``
    vertices.  The sink is the last vertex in atlas order.
    """
    max_vertices = max_nonsink + 1
    if max_vertices > 7:
        raise SandpileError("the graph atlas stops at seven vertices")
    out = []
    for h in nx.graph_atlas_g():
        k = h.number_of_nodes()
        if k < min_vertices or k > max_vertices or not nx.is_connected(h):
            continue
        out.append(Graph.from_edges(k, [(a + 1, b + 1) for a, b in h.edges()]))
    return out
