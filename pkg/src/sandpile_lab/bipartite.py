"""Sorted stable configurations on K_{m,n} and the fast phi/psi.

Vertices v_1..v_n (degree m) form the non-sink side and v_{n+1}..v_{n+m}
(degree n) the sink side, with sink v_{n+m}.  Configurations are kept
sorted within each side; orbits under permuting each side are represented
by their sorted member.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Sequence

from .graph_core import Graph, NotStableError, SandpileError, complete_bipartite_graph, topple
from .paths import config_to_framed_pair


class CompactRangeError(SandpileError):
    pass


@dataclass(frozen=True)
class SortedBipartiteConfig:
    m: int
    n: int
    nonsink: tuple[int, ...]
    sinkpart: tuple[int, ...]

    def __init__(self, m: int, n: int, nonsink: Sequence[int], sinkpart: Sequence[int],
                 check: bool = True):
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "nonsink", tuple(int(x) for x in nonsink))
        object.__setattr__(self, "sinkpart", tuple(int(x) for x in sinkpart))
        if self.m < 2:
            raise SandpileError(
                "K_{m,n} needs m >= 2 here; use the general-graph operators for m = 1")
        if self.n < 1:
            raise SandpileError("K_{m,n} needs n >= 1")
        if len(self.nonsink) != self.n or len(self.sinkpart) != self.m - 1:
            raise SandpileError(
                f"expected {self.n} non-sink and {self.m - 1} sink-side heights, "
                f"got {len(self.nonsink)} and {len(self.sinkpart)}")
        if check and not (_weakly_increasing(self.nonsink) and _weakly_increasing(self.sinkpart)):
            raise SandpileError(f"{self} is not sorted")

    @classmethod
    def sorted_from(cls, m: int, n: int, nonsink: Sequence[int], sinkpart: Sequence[int]):
        return cls(m, n, sorted(nonsink), sorted(sinkpart))

    @property
    def delta(self) -> "SortedBipartiteConfig":
        return SortedBipartiteConfig(self.m, self.n, [self.m - 1] * self.n,
                                     [self.n - 1] * (self.m - 1))

    def is_compact_range(self) -> bool:
        return (_spread(self.nonsink) <= self.m and _spread(self.sinkpart) <= self.n)

    def is_stable(self) -> bool:
        # sorted, so the extreme entries decide
        return (self.nonsink[0] >= 0 and self.nonsink[-1] <= self.m - 1
                and (self.m == 1 or (self.sinkpart[0] >= 0 and self.sinkpart[-1] <= self.n - 1)))

    @property
    def heights(self) -> tuple[int, ...]:
        """Heights of v_1..v_{n+m-1} in vertex order."""
        return self.nonsink + self.sinkpart

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "nonsink": list(self.nonsink),
                "sinkpart": list(self.sinkpart)}

    @classmethod
    def from_json(cls, data: dict) -> "SortedBipartiteConfig":
        return cls(data["m"], data["n"], data["nonsink"], data["sinkpart"])

    def __str__(self) -> str:
        return ("{" + ",".join(map(str, self.nonsink)) + "; "
                + ",".join(map(str, self.sinkpart)) + "}")


def _weakly_increasing(xs) -> bool:
    return all(a <= b for a, b in zip(xs, xs[1:]))


def _spread(xs) -> int:
    return max(xs) - min(xs) if xs else 0


def require_stable_sorted(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    if not c.is_stable():
        raise NotStableError(f"{c} is not stable on K_{{{c.m},{c.n}}}")
    return c


def _require_compact(c: SortedBipartiteConfig) -> None:
    if not c.is_compact_range():
        raise CompactRangeError(f"{c} violates the compact range assumption")


def t_nonsink(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    """Topple v_n and re-sort (closed form valid under compact range)."""
    _require_compact(c)
    return SortedBipartiteConfig(c.m, c.n, (c.nonsink[-1] - c.m,) + c.nonsink[:-1],
                                 tuple(h + 1 for h in c.sinkpart), check=False)


def t_sink(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    """Topple v_{n+m-1} and re-sort (closed form valid under compact range)."""
    _require_compact(c)
    return SortedBipartiteConfig(c.m, c.n, tuple(h + 1 for h in c.nonsink),
                                 (c.sinkpart[-1] - c.n,) + c.sinkpart[:-1], check=False)


def t_nonsink_inverse(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    _require_compact(c)
    return SortedBipartiteConfig(c.m, c.n, c.nonsink[1:] + (c.nonsink[0] + c.m,),
                                 tuple(h - 1 for h in c.sinkpart), check=False)


def t_sink_inverse(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    _require_compact(c)
    return SortedBipartiteConfig(c.m, c.n, tuple(h - 1 for h in c.nonsink),
                                 c.sinkpart[1:] + (c.sinkpart[0] + c.n,), check=False)


def topple_and_sort(c: SortedBipartiteConfig, side: str) -> SortedBipartiteConfig:
    """Reference path: literally topple the top vertex of one side, then sort."""
    g = to_graph(c)
    vertex = c.n if side == "nonsink" else c.n + c.m - 1
    h = topple(g, c.heights, vertex)
    return SortedBipartiteConfig.sorted_from(c.m, c.n, h[:c.n], h[c.n:])


def phi_kmn(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    """phi on a sorted stable configuration, by the two-sided toppling loop."""
    require_stable_sorted(c)
    m, n = c.m, c.n
    cur = t_nonsink(t_sink(c))
    nloops = 0
    while not cur.is_stable():
        if nloops >= m + n:
            return c
        if cur.nonsink[-1] > m - 1 or cur.sinkpart[0] < 0:
            cur = t_nonsink(cur)
        if cur.sinkpart[-1] > n - 1 or cur.nonsink[0] < 0:
            cur = t_sink(cur)
        nloops += 1
    return cur


def rho_beta(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    """Complement against delta, then reverse each side (keeps sortedness)."""
    return SortedBipartiteConfig(
        c.m, c.n,
        tuple(c.m - 1 - h for h in reversed(c.nonsink)),
        tuple(c.n - 1 - h for h in reversed(c.sinkpart)), check=False)


def psi_kmn(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    require_stable_sorted(c)
    return rho_beta(phi_kmn(rho_beta(c)))


def grade_kmn(c: SortedBipartiteConfig) -> int:
    """Number of green east steps E_0..E_{m-1} with pos >= 1 at the origin frame."""
    p = config_to_framed_pair(c)
    return sum(1 for k in range(c.m) if p.pos(k) >= 1)


def recurrent_of(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    cur = require_stable_sorted(c)
    for _ in range(c.m):
        nxt = psi_kmn(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError(f"psi did not reach a fixed point within m={c.m} steps from {c}")


def parking_of(c: SortedBipartiteConfig) -> SortedBipartiteConfig:
    cur = require_stable_sorted(c)
    for _ in range(c.m):
        nxt = phi_kmn(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise RuntimeError(f"phi did not reach a fixed point within m={c.m} steps from {c}")


def walk_class(c: SortedBipartiteConfig) -> list[SortedBipartiteConfig]:
    """[recurrent, phi(recurrent), ..., parking]: the m sorted stable members of the class."""
    cur = recurrent_of(c)
    walk = [cur]
    for _ in range(c.m - 1):
        cur = phi_kmn(cur)
        walk.append(cur)
    return walk


def to_graph(c: SortedBipartiteConfig) -> Graph:
    return complete_bipartite_graph(c.m, c.n)


def from_heights(m: int, n: int, heights: Sequence[int]) -> SortedBipartiteConfig:
    """Sorted representative of an arbitrary K_{m,n} configuration (vertex order)."""
    heights = list(heights)
    if len(heights) != n + m - 1:
        raise SandpileError(f"expected {n + m - 1} heights, got {len(heights)}")
    return SortedBipartiteConfig.sorted_from(m, n, heights[:n], heights[n:])


def sorted_stable_configs(m: int, n: int):
    """Every sorted stable configuration on K_{m,n}, in lexicographic order."""
    for a in combinations_with_replacement(range(m), n):
        for b in combinations_with_replacement(range(n), m - 1):
            yield SortedBipartiteConfig(m, n, a, b)
