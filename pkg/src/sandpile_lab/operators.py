"""The operators psi, phi and beta on stable configurations of any graph.

psi adds, and phi subtracts, the cluster toppling Delta_A for the first
non-empty A (in the subset order: size, then lexicographic) that keeps the
configuration stable.  Both scan up to 2^n - 1 subsets, so the number of
non-sink vertices is capped by ``MAX_SUBSET_SCAN``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterator, Optional, Sequence

from .graph_core import (
    Configuration,
    Graph,
    SandpileError,
    beta,
    check_config,
    is_stable,
    reduced_laplacian,
    require_stable,
)

MAX_SUBSET_SCAN = 20

RECURRENT = "recurrent"
PARKING = "parking"


def subsets_in_order(n: int) -> Iterator[tuple[int, ...]]:
    """Non-empty subsets of {1..n}: by size, then lexicographically."""
    for k in range(1, n + 1):
        yield from combinations(range(1, n + 1), k)


def next_subset(current: Sequence[int], n: int) -> Optional[tuple[int, ...]]:
    """Successor of ``current`` in the subset order, or None when exhausted."""
    cur = tuple(sorted(current))
    k = len(cur)
    if any(not 1 <= i <= n for i in cur) or len(set(cur)) != k:
        raise SandpileError(f"{current!r} is not a subset of 1..{n}")
    # rightmost position that can still be bumped
    for pos in range(k - 1, -1, -1):
        if cur[pos] < n - (k - 1 - pos):
            head = cur[:pos] + (cur[pos] + 1,)
            return head + tuple(range(head[-1] + 1, head[-1] + k - pos))
    if k == n:
        return None
    return tuple(range(1, k + 2))


def minimal_subset(g: Graph, c: Sequence[int], sign: int,
                   limit: int = MAX_SUBSET_SCAN) -> Optional[tuple[int, ...]]:
    """First A in subset order with c + sign * Delta_A stable, or None."""
    c = require_stable(g, c)
    if g.n > limit:
        raise SandpileError(f"subset scan capped at {limit} non-sink vertices (graph has {g.n})")
    rows = reduced_laplacian(g)
    degs = [g.degree(i) for i in range(1, g.n + 1)]
    for subset in subsets_in_order(g.n):
        cand = list(c)
        for i in subset:
            for j, d in enumerate(rows[i - 1]):
                cand[j] += sign * d
        if all(0 <= h < d for h, d in zip(cand, degs)):
            return subset
    return None


def _apply(g, c, subset, sign):
    if subset is None:
        return check_config(g, c)
    rows = reduced_laplacian(g)
    out = list(c)
    for i in subset:
        for j, d in enumerate(rows[i - 1]):
            out[j] += sign * d
    return tuple(out)


def psi_step(g: Graph, c: Sequence[int], limit: int = MAX_SUBSET_SCAN):
    """(psi(c), A) where A is the subset used, or None at a fixed point."""
    subset = minimal_subset(g, c, +1, limit)
    return _apply(g, c, subset, +1), subset


def phi_step(g: Graph, c: Sequence[int], limit: int = MAX_SUBSET_SCAN):
    subset = minimal_subset(g, c, -1, limit)
    return _apply(g, c, subset, -1), subset


def psi(g: Graph, c: Sequence[int], limit: int = MAX_SUBSET_SCAN) -> Configuration:
    return psi_step(g, c, limit)[0]


def phi(g: Graph, c: Sequence[int], limit: int = MAX_SUBSET_SCAN) -> Configuration:
    return phi_step(g, c, limit)[0]


def normalize(g: Graph, c: Sequence[int], target: str = RECURRENT,
              trajectory: bool = False, limit: int = MAX_SUBSET_SCAN):
    """Iterate psi (target="recurrent") or phi (target="parking") to a fixed point.

    Returns ``(fixed_point, steps)``, or ``(fixed_point, steps, path)`` when
    ``trajectory`` is set, with ``path`` starting at ``c``.
    """
    if target not in (RECURRENT, PARKING):
        raise SandpileError(f"unknown target {target!r}")
    op = psi if target == RECURRENT else phi
    cur = require_stable(g, c)
    path = [cur]
    # psi/phi are strictly monotone for <_2 off their fixed points, so the
    # number of stable configurations bounds the walk
    bound = 1
    for d in g.degrees[:-1]:
        bound *= d
    steps = 0
    while True:
        nxt = op(g, cur, limit)
        if nxt == cur:
            break
        steps += 1
        if steps > bound:
            raise RuntimeError("normalize did not terminate; ordering invariant broken")
        cur = nxt
        path.append(cur)
    if trajectory:
        return cur, steps, path
    return cur, steps


__all__ = [
    "MAX_SUBSET_SCAN", "PARKING", "RECURRENT", "beta", "is_stable", "minimal_subset",
    "next_subset", "normalize", "phi", "phi_step", "psi", "psi_step", "subsets_in_order",
]
