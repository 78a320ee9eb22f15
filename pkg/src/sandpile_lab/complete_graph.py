"""phi and psi on the complete graph K_n via the staircase embedding in K_{n,n}.

A configuration v on K_n (sink v_n) is lifted to
u = (0, 1, ..., n-1; v + 1) on K_{n,n}.  We then iterate the K_{n,n}
operator until the sink side is 0-free again (and differs from u), and
read the answer off as that sink side minus one.

Two engines are available.  ``"sorted"`` runs the fast sorted operators
and returns sorted heights.  ``"general"`` runs the subset-scan operators
on the unsorted lift, which keeps vertex identities (and is exponential).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bipartite import SortedBipartiteConfig, phi_kmn, psi_kmn
from .graph_core import (
    NotStableError,
    SandpileError,
    complete_bipartite_graph,
    format_config,
)
from . import operators


@dataclass(frozen=True)
class CompleteConfig:
    n: int
    heights: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "heights", tuple(int(h) for h in self.heights))
        if self.n < 2:
            raise SandpileError("K_n needs n >= 2")
        if len(self.heights) != self.n - 1:
            raise SandpileError(f"K_{self.n} needs {self.n - 1} heights, got {len(self.heights)}")

    def is_stable(self) -> bool:
        return all(0 <= h < self.n - 1 for h in self.heights)

    def require_stable(self) -> "CompleteConfig":
        if not self.is_stable():
            raise NotStableError(f"{format_config(self.heights)} is not stable on K_{self.n}")
        return self

    def sorted(self) -> "CompleteConfig":
        return CompleteConfig(self.n, tuple(sorted(self.heights)))

    def to_json(self) -> dict:
        return {"n": self.n, "heights": list(self.heights)}

    @classmethod
    def from_json(cls, data: dict) -> "CompleteConfig":
        return cls(int(data["n"]), data["heights"])

    def __str__(self) -> str:
        return format_config(self.heights)


def embed_staircase(v: CompleteConfig) -> SortedBipartiteConfig:
    v.require_stable()
    return SortedBipartiteConfig(v.n, v.n, range(v.n), sorted(h + 1 for h in v.heights))


def _staircase_ok(nonsink: Sequence[int], n: int) -> bool:
    return sorted(h % n for h in nonsink) == list(range(n))


def _reduce(v: CompleteConfig, step, start, trajectory: bool):
    """Shared loop: iterate ``step`` from ``start`` until a 0-free iterate other than start."""
    n = v.n
    path = [start]
    cur = start
    result, k = None, 0
    for i in range(1, n + 1):
        nxt = step(cur)
        if nxt == cur:
            break
        cur = nxt
        path.append(cur)
        nonsink, sink = cur[0], cur[1]
        if not _staircase_ok(nonsink, n):
            raise RuntimeError(f"staircase property lost at iterate {i}: {cur}")
        if min(sink) >= 1 and cur != start:
            result, k = CompleteConfig(n, tuple(h - 1 for h in sink)), i
            break
    else:
        raise RuntimeError(f"no 0-free iterate within {n} steps from {v}")
    if result is None:
        result = v
    if trajectory:
        return result, k, path
    return result


def _sorted_engine(v: CompleteConfig, fast_op):
    u = embed_staircase(v)

    def step(pair):
        c = fast_op(SortedBipartiteConfig(v.n, v.n, pair[0], pair[1]))
        return (c.nonsink, c.sinkpart)

    return step, (u.nonsink, u.sinkpart)


def _general_engine(v: CompleteConfig, general_op):
    v.require_stable()
    n = v.n
    g = complete_bipartite_graph(n, n)

    def step(pair):
        h = general_op(g, pair[0] + pair[1])
        return (h[:n], h[n:])

    return step, (tuple(range(n)), tuple(h + 1 for h in v.heights))


def _run(v: CompleteConfig, fast_op, general_op, engine: str, trajectory: bool):
    v = v.require_stable()
    if engine == "sorted":
        step, start = _sorted_engine(v.sorted(), fast_op)
        v = v.sorted()
    elif engine == "general":
        step, start = _general_engine(v, general_op)
    else:
        raise SandpileError(f"unknown engine {engine!r}")
    return _reduce(v, step, start, trajectory)


def phi_kn(v: CompleteConfig, engine: str = "sorted", trajectory: bool = False):
    """phi(v) on K_n.  With ``trajectory`` returns (result, k, lifted iterates)."""
    return _run(v, phi_kmn, operators.phi, engine, trajectory)


def psi_kn(v: CompleteConfig, engine: str = "sorted", trajectory: bool = False):
    """psi(v) on K_n, mirror of :func:`phi_kn`."""
    return _run(v, psi_kmn, operators.psi, engine, trajectory)
