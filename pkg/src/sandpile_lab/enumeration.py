"""Counting parallelogram polyominoes, by formula and by brute force.

Brute-force routes can fan out over a process pool.  Each worker handles
whole upper words and the results are re-sorted, so serial and parallel
runs produce identical output.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import islice
from math import comb
from typing import Optional

from .graph_core import SandpileError
from .paths import (
    PathPair,
    Polyomino,
    binomial_words,
    complement,
    cyclic_part,
    is_polyomino,
    polyomino_of_part,
    word,
)

DEFAULT_ENUM_BOUND = 14
DEFAULT_CYCLIC_BOUND = 10
THREADS_ENV = "SANDPILE_LAB_THREADS"


def thread_cap(requested: Optional[int] = None) -> int:
    """Worker count: the request (default 1), capped by SANDPILE_LAB_THREADS."""
    n = 1 if requested is None else int(requested)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = min(n, int(env))
        except ValueError:
            raise SandpileError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return max(1, n)


def _fan_out(fn, items, threads):
    items = list(items)
    threads = thread_cap(threads)
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class CountReport:
    params: dict
    formula: int
    brute: Optional[int] = None
    agree: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "agree", self.brute is not None and self.brute == self.formula)

    def to_json(self) -> dict:
        out = dict(self.params)
        out.update(formula=self.formula, agree=self.agree)
        if self.brute is not None:
            out["brute"] = self.brute
        return out


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{what}: {num} is not divisible by {den}")
    return q


def lgv_determinant(m: int, n: int) -> int:
    """The 2x2 non-intersecting-paths determinant for m x n polyominoes."""
    k = m + n - 2
    return _c(k, m - 1) ** 2 - _c(k, m) * _c(k, m - 2)


def _c(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b else 0


def count_polyominoes_formula(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise SandpileError("polyomino dimensions must be positive")
    value = _exact_div(comb(m + n - 2, m - 1) * comb(m + n - 1, m - 1), m,
                       f"|Polyo_{m},{n}|")
    det = lgv_determinant(m, n)
    if det != value:
        raise ArithmeticError(f"determinant {det} disagrees with product formula {value}")
    return value


def _check_bound(total: int, bound: int) -> None:
    if total > bound:
        raise SandpileError(f"m + n = {total} exceeds the enumeration bound {bound}")


def _polyominoes_with_upper(args) -> list[tuple[str, str]]:
    up, m, n = args
    return [(up, lo) for lo in binomial_words(m, n) if is_polyomino(up, lo)]


def enumerate_polyominoes(m: int, n: int, bound: int = DEFAULT_ENUM_BOUND,
                          threads: Optional[int] = None) -> list[Polyomino]:
    """All m x n parallelogram polyominoes, lexicographic in (upper, lower)."""
    if m < 1 or n < 1:
        raise SandpileError("polyomino dimensions must be positive")
    _check_bound(m + n, bound)
    # the upper path must start with N and end with E
    uppers = ["N" + w + "E" for w in binomial_words(m - 1, n - 1)]
    chunks = _fan_out(_polyominoes_with_upper, [(u, m, n) for u in uppers], threads)
    return [Polyomino(u, lo) for u, lo in sorted(p for chunk in chunks for p in chunk)]


def cyc_matches(w, p) -> bool:
    """True iff Ew splits as fg with gf equal to p."""
    ew, p = "E" + word(w), word(p)
    if len(ew) != len(p):
        raise SandpileError(f"length mismatch: |Ew| = {len(ew)}, |p| = {len(p)}")
    return any(ew[k:] + ew[:k] == p for k in range(len(ew)))


def cyc_class(p) -> list[str]:
    """Cyc[p]: words w with Ew a rotation of p, sorted."""
    p = word(p)
    return sorted({(p[k:] + p[:k])[1:] for k in range(len(p)) if (p[k:] + p[:k])[0] == "E"})


def simple_pattern(a: int, b: int, c: int) -> str:
    return ("E" * a + "N" * b) * c


def double_pattern(a: int, b: int, c: int) -> str:
    return ("E" * a + "N" * a + "E" * b + "N" * b) * c


def count_pattern_formula(a: int, b: int, c: int, kind: str = "simple") -> int:
    if min(a, b, c) < 1:
        raise SandpileError("a, b and c must be positive")
    if kind == "simple":
        return _exact_div(comb(c * (a + b) - 2, c * a - 1), c, f"simple({a},{b},{c})")
    if kind == "double":
        if a == b:
            raise SandpileError("the double-pattern formula needs a != b")
        k = c * (a + b)
        return _exact_div(comb(2 * k - 2, k - 1), 2 * c, f"double({a},{b},{c})")
    raise SandpileError(f"unknown pattern kind {kind!r}")


def pattern_word(a: int, b: int, c: int, kind: str = "simple") -> str:
    if kind == "simple":
        return simple_pattern(a, b, c)
    if kind == "double":
        return double_pattern(a, b, c)
    raise SandpileError(f"unknown pattern kind {kind!r}")


def enumerate_pattern(p, bound: int = DEFAULT_ENUM_BOUND) -> list[Polyomino]:
    """Polyominoes whose lower path is exactly p, by upper word."""
    p = word(p)
    if len(p) < 2 or p[0] != "E" or p[-1] != "N":
        raise SandpileError(f"pattern {p!r} must start with E and end with N")
    m, n = p.count("E"), p.count("N")
    _check_bound(m + n, bound)
    return [Polyomino("N" + w + "E", p) for w in binomial_words(m - 1, n - 1)
            if is_polyomino("N" + w + "E", p)]


def count_report(m: int, n: int, brute: bool = False, bound: int = DEFAULT_ENUM_BOUND,
                 threads: Optional[int] = None) -> CountReport:
    formula = count_polyominoes_formula(m, n)
    found = len(enumerate_polyominoes(m, n, bound, threads)) if brute else None
    return CountReport({"m": m, "n": n}, formula, found)


def pattern_report(a: int, b: int, c: int, kind: str = "simple", brute: bool = False,
                   bound: int = DEFAULT_ENUM_BOUND) -> CountReport:
    formula = count_pattern_formula(a, b, c, kind)
    found = len(enumerate_pattern(pattern_word(a, b, c, kind), bound)) if brute else None
    return CountReport({"a": a, "b": b, "c": c, "kind": kind}, formula, found)


@dataclass
class CyclicReport:
    m: int
    n: int
    mode: str
    pairs: int
    parts: int
    part_sizes_ok: bool
    disjoint_cover: bool
    one_polyomino_each: bool
    formula: int
    agree: bool = False

    def to_json(self) -> dict:
        return asdict(self)


def _part_key(members) -> tuple:
    return tuple(sorted(members))


def _check_part(pair) -> tuple[tuple, bool, bool]:
    """(sorted members, size ok, exactly one polyomino) for the part of ``pair``."""
    u2, l1 = pair
    p = PathPair(u2, l1)
    members = cyclic_part(u2, l1)
    size_ok = len(set(members)) == p.m and pair in members
    polys = [1 for v, k in members if is_polyomino("N" + v + "E", "E" + k)]
    poly = polyomino_of_part(u2, l1)
    unique = len(polys) == 1 and is_polyomino(poly.upper, poly.lower)
    return _part_key(members), size_ok, unique


def verify_cyclic_lemma(m: int, n: int, mode: str = "exhaustive", sample: int = 0,
                        bound: int = DEFAULT_CYCLIC_BOUND,
                        threads: Optional[int] = None, at=None) -> CyclicReport:
    """Check the cyclic partition of B(m-1,n-1) x B(m-1,n).

    ``mode="exhaustive"`` walks every pair and also checks that the parts
    are disjoint and cover.  ``mode="sample"`` checks the parts of the first
    ``sample`` pairs in lexicographic order, or the explicit pairs in ``at``.
    """
    if m < 2 or n < 1:
        raise SandpileError("the cyclic partition needs m >= 2 and n >= 1")
    uppers = list(binomial_words(m - 1, n - 1))
    lowers = list(binomial_words(m - 1, n))
    formula = count_polyominoes_formula(m, n)
    if mode == "exhaustive":
        _check_bound(m + n, bound)
        pairs = [(u, lo) for u in uppers for lo in lowers]
    elif mode == "sample" and at is not None:
        pairs = [(word(u), word(lo)) for u, lo in at]
        for pair in pairs:
            if (PathPair(*pair).m, PathPair(*pair).n) != (m, n):
                raise SandpileError(f"pair {pair} does not have dimensions {m} x {n}")
    elif mode == "sample":
        if sample < 1:
            raise SandpileError("sample mode needs a positive sample size")
        pairs = list(islice(((u, lo) for u in uppers for lo in lowers), sample))
    else:
        raise SandpileError(f"unknown mode {mode!r}")

    results = _fan_out(_check_part, pairs, threads)
    parts: dict[tuple, None] = {}
    sizes_ok = unique_ok = True
    for key, size_ok, unique in results:
        parts[key] = None
        sizes_ok &= size_ok
        unique_ok &= unique
    cover = True
    if mode == "exhaustive":
        seen = [x for key in parts for x in key]
        cover = len(seen) == len(set(seen)) == len(pairs)
    report = CyclicReport(m, n, mode, len(pairs), len(parts), sizes_ok, cover, unique_ok, formula)
    report.agree = (sizes_ok and cover and unique_ok
                    and (mode != "exhaustive" or len(parts) == formula))
    return report


def kappa_symmetric(a: int, b: int, c: int) -> bool:
    """|Polyo[(E^aN^aE^bN^b)^c]| equals the count with a and b swapped."""
    return (len(enumerate_pattern(double_pattern(a, b, c)))
            == len(enumerate_pattern(double_pattern(b, a, c))))


__all__ = [
    "CountReport", "CyclicReport", "count_pattern_formula", "count_polyominoes_formula",
    "count_report", "cyc_class", "cyc_matches", "complement", "double_pattern",
    "enumerate_pattern", "enumerate_polyominoes", "kappa_symmetric", "lgv_determinant",
    "pattern_report", "pattern_word", "simple_pattern", "thread_cap", "verify_cyclic_lemma",
]
