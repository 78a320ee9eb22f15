"""Sandpile primitives on a simple connected graph with a sink.

Vertices are numbered 1..N externally; the sink is always vertex N.  A
configuration stores only the N-1 non-sink heights, so two configurations
that differ at the sink compare equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

Configuration = tuple[int, ...]


class SandpileError(ValueError):
    """Domain error: bad graph, bad configuration, or violated precondition."""


class NotStableError(SandpileError):
    pass


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.vertex_count
        if n < 2:
            raise SandpileError("a graph needs at least a sink and one other vertex")
        adj: list[set[int]] = [set() for _ in range(n + 1)]
        seen = set()
        for a, b in self.edges:
            if not (1 <= a <= n and 1 <= b <= n):
                raise SandpileError(f"edge {(a, b)} out of range 1..{n}")
            if a == b:
                raise SandpileError(f"self-loop at vertex {a}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise SandpileError(f"multi-edge {key}")
            seen.add(key)
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "adjacency", tuple(frozenset(s) for s in adj))
        if any(not adj[v] for v in range(1, n + 1)):
            raise SandpileError("every vertex must have degree >= 1")
        if len(_bfs(self.adjacency, n)) != n:
            raise SandpileError("graph is not connected")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(vertex_count, tuple((int(a), int(b)) for a, b in edges))

    @property
    def sink(self) -> int:
        return self.vertex_count

    @property
    def n(self) -> int:
        """Number of non-sink vertices."""
        return self.vertex_count - 1

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.degree(v) for v in range(1, self.vertex_count + 1))

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges],
                "sink": self.sink}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        n = int(data["vertices"])
        sink = int(data.get("sink", n))
        if sink != n:
            raise SandpileError(f"sink must be the highest-indexed vertex ({n}), got {sink}")
        return cls.from_edges(n, data["edges"])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)])


def complete_bipartite_graph(m: int, n: int) -> Graph:
    """K_{m,n} with v_1..v_n on one side and v_{n+1}..v_{n+m} on the other (sink v_{n+m})."""
    return Graph.from_edges(n + m, [(a, b) for a in range(1, n + 1)
                                    for b in range(n + 1, n + m + 1)])


def example_graph() -> Graph:
    """The seven-vertex example graph, sink v_7."""
    return Graph.from_edges(7, [(1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6),
                                (5, 6), (5, 7), (6, 7)])


def _bfs(adjacency, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def check_config(g: Graph, c: Sequence[int]) -> Configuration:
    c = tuple(int(h) for h in c)
    if len(c) != g.n:
        raise SandpileError(f"configuration has {len(c)} heights, expected {g.n}")
    return c


def topple(g: Graph, c: Sequence[int], i: int, times: int = 1) -> Configuration:
    """Return c - times * Delta_i on the non-sink vertices.

    Toppling the sink is always permitted and gives one grain to each of its
    neighbours.  A negative ``times`` untopples.
    """
    c = check_config(g, c)
    if not 1 <= i <= g.vertex_count:
        raise SandpileError(f"vertex {i} out of range 1..{g.vertex_count}")
    out = list(c)
    if i != g.sink:
        out[i - 1] -= times * g.degree(i)
    for j in g.neighbors(i):
        if j != g.sink:
            out[j - 1] += times
    return tuple(out)


def add_cluster(g: Graph, c: Sequence[int], subset: Iterable[int], sign: int = 1) -> Configuration:
    """c + sign * Delta_A for a set A of vertices."""
    out = check_config(g, c)
    for i in subset:
        out = topple(g, out, i, -sign)
    return out


def is_stable(g: Graph, c: Sequence[int]) -> bool:
    c = check_config(g, c)
    return all(0 <= h < g.degree(i) for i, h in enumerate(c, start=1))


def require_stable(g: Graph, c: Sequence[int]) -> Configuration:
    c = check_config(g, c)
    if not is_stable(g, c):
        raise NotStableError(f"configuration {format_config(c)} is not stable")
    return c


def is_recurrent(g: Graph, c: Sequence[int]) -> bool:
    """Burning test: topple the sink, then greedily topple any vertex that can."""
    cur = list(require_stable(g, c))
    for j in g.neighbors(g.sink):
        cur[j - 1] += 1
    pending = set(range(1, g.vertex_count))
    ready = [i for i in pending if cur[i - 1] >= g.degree(i)]
    while ready:
        i = ready.pop()
        if i not in pending:
            continue
        pending.discard(i)
        cur[i - 1] -= g.degree(i)
        for j in g.neighbors(i):
            if j in pending:
                cur[j - 1] += 1
                if cur[j - 1] >= g.degree(j):
                    ready.append(j)
    return not pending


def is_parking(g: Graph, c: Sequence[int]) -> bool:
    """True iff c - Delta_A has a negative entry for every non-empty A.

    c - Delta_A is non-negative exactly when every i in A holds at least as
    many grains as it has edges leaving A (sink included).  Such sets are
    closed under union, so we prune down to the largest one.
    """
    c = require_stable(g, c)
    alive = set(range(1, g.vertex_count))
    changed = True
    while changed and alive:
        changed = False
        for i in sorted(alive):
            outside = sum(1 for j in g.neighbors(i) if j not in alive)
            if c[i - 1] < outside:
                alive.discard(i)
                changed = True
    return not alive


def distances_from_sink(g: Graph) -> tuple[int, ...]:
    """BFS distance of v_1..v_n to the sink."""
    dist = _bfs(g.adjacency, g.sink)
    return tuple(dist[v] for v in range(1, g.vertex_count))


def distance_profile(g: Graph, c: Sequence[int]) -> tuple[int, ...]:
    """(d_1, d_2, ...): grains at each distance from the sink, d_0 omitted."""
    c = check_config(g, c)
    dist = distances_from_sink(g)
    profile = [0] * max(dist)
    for h, k in zip(c, dist):
        profile[k - 1] += h
    return tuple(profile)


def compare_lt2(g: Graph, c: Sequence[int], c2: Sequence[int]) -> int:
    """-1 if c <_2 c2, 0 if the profiles agree, 1 otherwise.

    The sink shell d_0 does take part: grains are conserved once the sink
    is counted, so d_0 is -sum(c) up to a common constant.  Dropping it
    breaks monotonicity of psi and phi whenever A touches the sink.
    """
    p = (-sum(check_config(g, c)),) + distance_profile(g, c)
    q = (-sum(check_config(g, c2)),) + distance_profile(g, c2)
    return (p > q) - (p < q)


def beta(g: Graph, c: Sequence[int]) -> Configuration:
    c = check_config(g, c)
    return tuple(g.degree(i) - 1 - h for i, h in enumerate(c, start=1))


def reduced_laplacian(g: Graph) -> list[list[int]]:
    n = g.n
    rows = []
    for i in range(1, n + 1):
        row = [0] * n
        row[i - 1] = g.degree(i)
        for j in g.neighbors(i):
            if j != g.sink:
                row[j - 1] -= 1
        rows.append(row)
    return rows


def _inverse(matrix: list[list[int]]) -> list[list[Fraction]]:
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


class ClassIndex:
    """Toppling-class membership by exact rational arithmetic.

    Two configurations lie in the same class iff their difference is an
    integer combination of the toppling vectors, i.e. iff L^-1 (c - c') is
    integral for the reduced Laplacian L.
    """

    def __init__(self, g: Graph):
        self.graph = g
        self._inv = _inverse(reduced_laplacian(g))

    def key(self, c: Sequence[int]) -> tuple[Fraction, ...]:
        c = check_config(self.graph, c)
        return tuple(sum((x * h for x, h in zip(row, c)), Fraction(0)) % 1
                     for row in self._inv)

    def same_class(self, c: Sequence[int], c2: Sequence[int]) -> bool:
        return self.key(c) == self.key(c2)


def stable_configurations(g: Graph):
    """All stable configurations, in lexicographic order."""
    return product(*(range(g.degree(i)) for i in range(1, g.vertex_count)))


def format_config(c: Sequence[int]) -> str:
    return "(" + ",".join(str(h) for h in c) + ",*)"
