"""Binomial words, periodic path pairs, frames and the cyclic partition.

A pair (upper, lower) with upper in B(m-1, n-1) and lower in B(m-1, n)
stands for two bi-infinite periodic lattice paths through the origin: the
red path repeats ``"N" + upper`` (period vector (m-1, n)) and the green path
repeats ``"E" + lower`` (period vector (m, n)).  Steps are never
materialised; a step's coordinates come from per-period prefix tables and
floor division on its label.

Labels follow the usual convention: a north step is labelled by its
ordinate, an east step by its abscissa.  On each path every label occurs
exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

from .graph_core import SandpileError

Point = tuple[int, int]


@dataclass(frozen=True)
class BinomialWord:
    letters: str

    def __post_init__(self) -> None:
        letters = str(self.letters).upper()
        if set(letters) - {"N", "E"}:
            raise SandpileError(f"word {self.letters!r} is not over the alphabet {{N, E}}")
        object.__setattr__(self, "letters", letters)

    @property
    def e_count(self) -> int:
        return self.letters.count("E")

    @property
    def n_count(self) -> int:
        return self.letters.count("N")

    def __str__(self) -> str:
        return self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def in_b(self, e: int, n: int) -> bool:
        """Membership in B(e, n): e east steps and n north steps."""
        return self.e_count == e and self.n_count == n


WordLike = Union[str, BinomialWord]


def word(w: WordLike) -> str:
    return BinomialWord(w).letters if not isinstance(w, BinomialWord) else w.letters


def reverse(w: WordLike) -> str:
    return word(w)[::-1]


def complement(w: WordLike) -> str:
    return word(w).translate(str.maketrans("NE", "EN"))


def word_transform(w: WordLike, t: str) -> str:
    if t == "reverse":
        return reverse(w)
    if t == "complement":
        return complement(w)
    raise SandpileError(f"unknown transform {t!r}")


def binomial_words(e: int, n: int) -> Iterable[str]:
    """All words of B(e, n) in lexicographic order (E < N)."""
    if e < 0 or n < 0:
        return
    if e == 0 and n == 0:
        yield ""
        return
    if e:
        for rest in binomial_words(e - 1, n):
            yield "E" + rest
    if n:
        for rest in binomial_words(e, n - 1):
            yield "N" + rest


def lattice_points(w: WordLike, start: Point = (0, 0)) -> list[Point]:
    x, y = start
    pts = [(x, y)]
    for ch in word(w):
        if ch == "E":
            x += 1
        else:
            y += 1
        pts.append((x, y))
    return pts


class _Periodic:
    """One bi-infinite path given by a period word through the origin."""

    def __init__(self, period: str):
        self.period = period
        self.dx = period.count("E")
        self.dy = period.count("N")
        self.east_at = []   # east step r of the period: (index in word, ordinate)
        self.north_at = []  # north step r of the period: (index in word, abscissa)
        x = y = 0
        for idx, ch in enumerate(period):
            if ch == "E":
                self.east_at.append((idx, y))
                x += 1
            else:
                self.north_at.append((idx, x))
                y += 1

    def east_ordinate(self, i: int) -> int:
        """Ordinate of the east step starting at abscissa i."""
        q, r = divmod(i, self.dx)
        return q * self.dy + self.east_at[r][1]

    def north_abscissa(self, j: int) -> int:
        """Abscissa of the north step starting at ordinate j."""
        q, r = divmod(j, self.dy)
        return q * self.dx + self.north_at[r][1]

    def east_index(self, i: int) -> int:
        q, r = divmod(i, self.dx)
        return q * len(self.period) + self.east_at[r][0]

    def north_index(self, j: int) -> int:
        q, r = divmod(j, self.dy)
        return q * len(self.period) + self.north_at[r][0]

    def factor(self, start_index: int, length: int) -> str:
        L = len(self.period)
        return "".join(self.period[(start_index + k) % L] for k in range(length))


@dataclass(frozen=True)
class PathPair:
    """The bi-infinite pair ((N upper)^Z, (E lower)^Z)."""

    upper: str
    lower: str

    def __post_init__(self) -> None:
        up, lo = word(self.upper), word(self.lower)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)
        m, n = lo.count("E") + 1, lo.count("N")
        if m < 2:
            raise SandpileError("the lower word needs at least one east step (m >= 2)")
        if n < 1:
            raise SandpileError("the lower word needs at least one north step (n >= 1)")
        if up.count("E") != m - 1 or up.count("N") != n - 1:
            raise SandpileError(
                f"upper word {up!r} must lie in B({m - 1},{n - 1}) to match lower {lo!r}")

    @property
    def m(self) -> int:
        return self.lower.count("E") + 1

    @property
    def n(self) -> int:
        return self.lower.count("N")

    @cached_property
    def red(self) -> _Periodic:
        return _Periodic("N" + self.upper)

    @cached_property
    def green(self) -> _Periodic:
        return _Periodic("E" + self.lower)

    def pos(self, j: int) -> int:
        """Abscissa of green E_j minus that of the red north step at the same height."""
        return j - self.red.north_abscissa(self.green.east_ordinate(j))

    def cumuledpos(self, j: int) -> int:
        return sum(self.pos(j + k) for k in range(self.m))

    def stable_intersections(self, normalized: bool = True) -> list[Point]:
        """All m stable intersections, highest first.

        For each residue k mod m there is one east step with pos = 0, found
        by shifting E_k back by pos(E_k) whole periods.  With ``normalized``
        the list is translated so the lowest one sits at the origin.
        """
        pts = []
        for k in range(self.m):
            j = k - self.m * self.pos(k)
            pts.append((j, self.green.east_ordinate(j)))
        pts.sort(reverse=True)
        if normalized:
            ox, oy = pts[-1]
            pts = [(x - ox, y - oy) for x, y in pts]
        return pts

    def is_stable_intersection(self, y: Point) -> bool:
        y1, y2 = y
        return self.green.east_ordinate(y1) == y2 and self.red.north_abscissa(y2) == y1

    def measure(self, y: Point) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Frame measurement at anchor y: (non-sink part, sink part)."""
        y1, y2 = y
        a = tuple(self.green.north_abscissa(y2 + i) - y1 - 1 for i in range(self.n))
        b = tuple(self.red.east_ordinate(y1 + j) - y2 - 1 for j in range(self.m - 1))
        return a, b

    def factors_at(self, y: Point) -> tuple[str, str]:
        """Words read just after the forced first steps at a stable intersection y."""
        y1, y2 = y
        r = self.red.north_index(y2) + 1
        g = self.green.east_index(y1) + 1
        return (self.red.factor(r, self.m + self.n - 2),
                self.green.factor(g, self.m + self.n - 1))

    def translated(self, y: Point) -> "PathPair":
        """The pair seen from the stable intersection y."""
        return PathPair(*self.factors_at(y))


@dataclass(frozen=True)
class FramedPair(PathPair):
    anchor: Point = field(default=(0, 0))

    def __post_init__(self) -> None:
        super().__post_init__()
        object.__setattr__(self, "anchor", (int(self.anchor[0]), int(self.anchor[1])))

    @property
    def pair(self) -> PathPair:
        return PathPair(self.upper, self.lower)

    def to_json(self) -> dict:
        return {"upper": self.upper, "lower": self.lower, "anchor": list(self.anchor)}

    @classmethod
    def from_json(cls, data: dict) -> "FramedPair":
        return cls(data["upper"], data["lower"], tuple(data.get("anchor", (0, 0))))


def _pair(p, lower=None) -> PathPair:
    if isinstance(p, PathPair):
        return p
    return PathPair(p, lower)


def pos(p: PathPair, j: int) -> int:
    return _pair(p).pos(j)


def cumuledpos(p: PathPair, j: int) -> int:
    return _pair(p).cumuledpos(j)


def stable_intersections(p: PathPair, normalized: bool = True) -> list[Point]:
    return _pair(p).stable_intersections(normalized)


def is_stable_intersection(p: FramedPair) -> bool:
    return p.is_stable_intersection(p.anchor)


def measure_frame(p: FramedPair):
    """Sorted configuration on K_{m,n} read from the frame at ``p.anchor``."""
    from .bipartite import SortedBipartiteConfig

    a, b = p.measure(p.anchor)
    return SortedBipartiteConfig(p.m, p.n, a, b, check=False)


def config_to_framed_pair(c) -> FramedPair:
    """A framed pair anchored at the origin whose measurement is ``c``."""
    from .bipartite import require_stable_sorted

    c = require_stable_sorted(c)
    m, n = c.m, c.n
    lower, prev = [], 0
    for h in c.nonsink:
        lower.append("E" * (h - prev) + "N")
        prev = h
    lower.append("E" * (m - 1 - prev))
    upper, prev = [], 0
    for h in c.sinkpart:
        upper.append("N" * (h - prev) + "E")
        prev = h
    upper.append("N" * (n - 1 - prev))
    return FramedPair("".join(upper), "".join(lower), (0, 0))


NEXT, PREV = "next", "prev"


def jump(p: FramedPair, direction: str = NEXT) -> FramedPair:
    """Move the anchor to the next (phi) or preceding (psi) stable intersection."""
    if direction not in (NEXT, PREV):
        raise SandpileError(f"unknown direction {direction!r}")
    if not p.is_stable_intersection(p.anchor):
        raise SandpileError(f"anchor {p.anchor} is not a stable intersection")
    pts = p.stable_intersections(normalized=False)
    k = pts.index(p.anchor)
    k = k + 1 if direction == NEXT else k - 1
    if 0 <= k < len(pts):
        return FramedPair(p.upper, p.lower, pts[k])
    return p


@dataclass(frozen=True)
class Polyomino:
    """Parallelogram polyomino given by its upper and lower boundary words."""

    upper: str
    lower: str

    @property
    def m(self) -> int:
        return self.upper.count("E")

    @property
    def n(self) -> int:
        return self.upper.count("N")

    def cells(self) -> set[Point]:
        """Unit cells (lower-left corners) enclosed between the two paths."""
        top = {}  # column x -> height of the upper path over it
        for (x, y), ch in zip(lattice_points(self.upper), self.upper):
            if ch == "E":
                top[x] = y
        out = set()
        for (x, y), ch in zip(lattice_points(self.lower), self.lower):
            if ch == "E":
                out.update((x, h) for h in range(y, top[x]))
        return out

    def to_json(self) -> dict:
        return {"upper": self.upper, "lower": self.lower}


def is_polyomino(upper: WordLike, lower: WordLike) -> bool:
    """True iff the two paths from the origin enclose a parallelogram polyomino.

    Both words must have the same letter counts.  Paths that do not start
    and end with the forced steps (N...E above, E...N below) never qualify.
    """
    up, lo = word(upper), word(lower)
    if up.count("E") != lo.count("E") or up.count("N") != lo.count("N"):
        raise SandpileError(f"{up!r} and {lo!r} do not span the same rectangle")
    if not up or not (up[0] == "N" and up[-1] == "E" and lo[0] == "E" and lo[-1] == "N"):
        return False
    common = set(lattice_points(up)) & set(lattice_points(lo))
    return common == {(0, 0), (up.count("E"), up.count("N"))}


def cyclic_part(u2: WordLike, l1: WordLike) -> list[tuple[str, str]]:
    """The part of (u2, l1) in the cyclic partition, one member per stable intersection.

    Members are listed from the highest stable intersection down, so the
    polyomino-producing member comes first.
    """
    p = PathPair(u2, l1)
    return [p.factors_at(y) for y in p.stable_intersections(normalized=False)]


def polyomino_of_part(u2: WordLike, l1: WordLike) -> Polyomino:
    """The unique member of the part that closes into a polyomino.

    It is read at the last stable intersection, the one with the largest
    abscissa; every later east step there has pos >= 1.
    """
    p = PathPair(u2, l1)
    top = p.stable_intersections(normalized=False)[0]
    v, k = p.factors_at(top)
    return Polyomino("N" + v + "E", "E" + k)
