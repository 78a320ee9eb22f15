"""The ten acceptance checks, shared by the test suite and ``sandpile-lab selftest``.

Each check returns a list of failure messages (empty means pass).  The
runner times it against its budget and reports one line per check.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Callable

from . import bipartite as bp
from . import operators as op
from .complete_graph import CompleteConfig, phi_kn, psi_kn
from .enumeration import (
    count_pattern_formula,
    count_polyominoes_formula,
    double_pattern,
    enumerate_pattern,
    enumerate_polyominoes,
    simple_pattern,
    verify_cyclic_lemma,
)
from .graph_core import (
    ClassIndex,
    beta,
    complete_graph,
    example_graph,
    is_parking,
    is_recurrent,
    stable_configurations,
)
from .oracles import graph_family, parking_by_subsets
from .paths import PathPair, config_to_framed_pair, jump, measure_frame

SBC = bp.SortedBipartiteConfig
U = SBC(4, 6, (1, 2, 2, 3, 3, 3), (0, 3, 5))
WALK = [U, SBC(4, 6, (0, 0, 1, 1, 1, 3), (2, 4, 5)), SBC(4, 6, (0, 1, 1, 2, 2, 2), (0, 3, 5)),
        SBC(4, 6, (0, 0, 0, 2, 3, 3), (0, 2, 3))]
RUNNING_PAIR = ("ENNENENN", "NNNEENENN")


def _expect(fails: list, label: str, got, want) -> None:
    if got != want:
        fails.append(f"{label}: got {got!r}, expected {want!r}")


def check_example_reproduction() -> list[str]:
    g, fails = example_graph(), []
    _expect(fails, "psi(0,0,2,0,2,2)", op.psi_step(g, (0, 0, 2, 0, 2, 2)),
            ((1, 1, 0, 0, 2, 2), (1, 2)))
    _expect(fails, "psi(1,1,0,2,0,0)", op.psi_step(g, (1, 1, 0, 2, 0, 0)),
            ((1, 1, 0, 0, 2, 2), (5, 6)))
    return fails


def check_frame_measurement() -> list[str]:
    fails = []
    a, b = PathPair(*RUNNING_PAIR).measure((2, 7))
    _expect(fails, "measure at (2,7)", a + b, (2, 2, 4, 5, 5, 6, -4, -1, 1))
    return fails


def check_class_walk() -> list[str]:
    fails, cur = [], U
    for want in WALK[1:]:
        cur = bp.phi_kmn(cur)
        _expect(fails, "phi iterate", cur, want)
    _expect(fails, "parking fixed", bp.phi_kmn(cur), cur)
    _expect(fails, "grades", [bp.grade_kmn(c) for c in WALK], [3, 2, 1, 0])
    _expect(fails, "walk_class", bp.walk_class(U), WALK)
    return fails


def check_stable_intersections() -> list[str]:
    p, fails = PathPair(*RUNNING_PAIR), []
    _expect(fails, "stable intersections", p.stable_intersections(),
            [(5, 9), (3, 4), (2, 3), (0, 0)])
    _expect(fails, "pos(E_8)", p.pos(8), 2)
    return fails


def check_cyclic_lemma(max_total: int = 9) -> list[str]:
    fails = []
    for total in range(4, max_total + 1):
        for m in range(2, total - 1):
            r = verify_cyclic_lemma(m, total - m)
            if not r.agree:
                fails.append(f"cyclic lemma fails at m={m}, n={total - m}: {r}")
    return fails


def check_enumeration_formulas() -> list[str]:
    fails = []
    for total in range(2, 11):
        for m in range(1, total):
            n = total - m
            _expect(fails, f"|Polyo_{m},{n}|", len(enumerate_polyominoes(m, n)),
                    count_polyominoes_formula(m, n))
    for a, b, c in product(range(1, 4), repeat=3):
        if c * (a + b) <= 10:
            _expect(fails, f"simple({a},{b},{c})", len(enumerate_pattern(simple_pattern(a, b, c))),
                    count_pattern_formula(a, b, c, "simple"))
        if a != b and 2 * c * (a + b) <= 12:
            _expect(fails, f"double({a},{b},{c})", len(enumerate_pattern(double_pattern(a, b, c))),
                    count_pattern_formula(a, b, c, "double"))
    _expect(fails, "(2,2)", count_polyominoes_formula(2, 2), 3)
    _expect(fails, "simple(1,1,3)", count_pattern_formula(1, 1, 3), 2)
    _expect(fails, "double(1,2,1)", count_pattern_formula(1, 2, 1, "double"), 3)
    return fails


def check_operator_theorems(max_nonsink: int = 5) -> list[str]:
    fails = []
    family = graph_family(max_nonsink)
    if len(family) < 20:
        fails.append(f"graph family too small: {len(family)}")
    for g in family:
        classes = defaultdict(lambda: [0, 0])
        index = ClassIndex(g)
        for c in stable_configurations(g):
            ps, ph = op.psi(g, c), op.phi(g, c)
            rec, park = is_recurrent(g, c), is_parking(g, c)
            if (ps == c) != rec:
                fails.append(f"{g.edges} {c}: psi-fixed {ps == c} but recurrent {rec}")
            if (ph == c) != park:
                fails.append(f"{g.edges} {c}: phi-fixed {ph == c} but parking {park}")
            if park != parking_by_subsets(g, c):
                fails.append(f"{g.edges} {c}: pruning and subset scan disagree")
            if op.phi(g, beta(g, c)) != beta(g, ps):
                fails.append(f"{g.edges} {c}: phi(beta c) != beta(psi c)")
            counts = classes[index.key(c)]
            counts[0] += rec
            counts[1] += park
        bad = [k for k, v in classes.items() if v != [1, 1]]
        if bad:
            fails.append(f"{g.edges}: {len(bad)} classes without exactly one recurrent/parking")
    return fails


def _sorted_general(g, c: SBC, fn) -> SBC:
    return bp.from_heights(c.m, c.n, fn(g, c.heights))


def check_bipartite_equivalences(max_side: int = 4) -> list[str]:
    fails = []
    for m in range(2, max_side + 1):
        for n in range(1, max_side + 1):
            g = bp.to_graph(SBC(m, n, [0] * n, [0] * (m - 1)))
            for c in bp.sorted_stable_configs(m, n):
                phi_c, psi_c = bp.phi_kmn(c), bp.psi_kmn(c)
                fp = config_to_framed_pair(c)
                if phi_c != _sorted_general(g, c, op.phi):
                    fails.append(f"{c}: Algorithm 1 != general phi")
                if phi_c != measure_frame(jump(fp, "next")):
                    fails.append(f"{c}: Algorithm 1 != frame-jump phi")
                if psi_c != measure_frame(jump(fp, "prev")):
                    fails.append(f"{c}: rho-beta psi != frame-jump psi")
                if psi_c != _sorted_general(g, c, op.psi):
                    fails.append(f"{c}: rho-beta psi != general psi")
                if psi_c != c and bp.phi_kmn(psi_c) != c:
                    fails.append(f"{c}: phi(psi(c)) != c off recurrent")
                if phi_c != c and bp.psi_kmn(phi_c) != c:
                    fails.append(f"{c}: psi(phi(c)) != c off parking")
                grade = bp.grade_kmn(c)
                walk = bp.walk_class(c)
                if walk[m - 1 - grade] != c:
                    fails.append(f"{c}: not at index m-1-grade of its walk")
                cur = walk[-1]
                for _ in range(grade):
                    cur = bp.psi_kmn(cur)
                if cur != c:
                    fails.append(f"{c}: psi^grade(parking) != c")
                by_pos = all(fp.pos(i) <= 0 for i in range(1, m))
                if by_pos != (phi_c == c):
                    fails.append(f"{c}: pos characterisation of parking fails")
    return fails


def check_kn_reduction(max_n: int = 5) -> list[str]:
    fails = []
    v = CompleteConfig(5, (0, 2, 2, 3))
    res, k, path = phi_kn(v, engine="general", trajectory=True)
    _expect(fails, "phi_K5 result", res.heights, (3, 0, 0, 1))
    _expect(fails, "k", k, 2)
    _expect(fails, "phi(u)", path[1], ((1, 2, 3, 4, 0), (2, 4, 4, 0)))
    _expect(fails, "phi^2(u)", path[2], ((3, 4, 0, 1, 2), (4, 1, 1, 2)))
    if min(path[1][1]) >= 1:
        fails.append("phi(u) unexpectedly 0-free")
    _expect(fails, "sorted engine", phi_kn(v).heights, (0, 0, 1, 3))
    for n in range(2, max_n + 1):
        g = complete_graph(n)
        for c in stable_configurations(g):
            w = CompleteConfig(n, c)
            if phi_kn(w).heights != tuple(sorted(op.phi(g, c))):
                fails.append(f"K_{n} {c}: phi_kn disagrees with general phi")
            if psi_kn(w).heights != tuple(sorted(op.psi(g, c))):
                fails.append(f"K_{n} {c}: psi_kn disagrees with general psi")
    return fails


def check_translation_laws(max_side: int = 4) -> list[str]:
    fails = []
    for m in range(2, max_side + 1):
        for n in range(1, max_side + 1):
            for c in bp.sorted_stable_configs(m, n):
                p = config_to_framed_pair(c)
                for y1 in range(-m, 2 * m):
                    for y2 in range(-n, 2 * n):
                        here = SBC(m, n, *p.measure((y1, y2)), check=False)
                        south = SBC(m, n, *p.measure((y1, y2 - 1)), check=False)
                        west = SBC(m, n, *p.measure((y1 - 1, y2)), check=False)
                        if bp.t_nonsink(here) != south:
                            fails.append(f"{c} at {(y1, y2)}: T_nonsink != south shift")
                        if bp.t_sink(here) != west:
                            fails.append(f"{c} at {(y1, y2)}: T_sink != west shift")
                        # v_n has degree m, so T_nonsink costs the non-sink side m grains
                        # and T_sink hands it n
                        i1, i2 = sum(here.heights), sum(here.nonsink)
                        ts, tn = bp.t_nonsink(here), bp.t_sink(here)
                        if (sum(ts.heights), sum(ts.nonsink)) != (i1 - 1, i2 - m):
                            fails.append(f"{c} at {(y1, y2)}: height laws fail for T_nonsink")
                        if (sum(tn.heights), sum(tn.nonsink)) != (i1, i2 + n):
                            fails.append(f"{c} at {(y1, y2)}: height laws fail for T_sink")
    return fails


@dataclass(frozen=True)
class Criterion:
    number: int
    name: str
    check: Callable[[], list]
    budget: float


CRITERIA = [
    Criterion(1, "example reproduction", check_example_reproduction, 1.0),
    Criterion(2, "frame measurement", check_frame_measurement, 1.0),
    Criterion(3, "class walk", check_class_walk, 1.0),
    Criterion(4, "stable intersections", check_stable_intersections, 1.0),
    Criterion(5, "cyclic lemma exhaustive", check_cyclic_lemma, 60.0),
    Criterion(6, "enumeration formulas", check_enumeration_formulas, 120.0),
    Criterion(7, "operator theorems", check_operator_theorems, 120.0),
    Criterion(8, "bipartite equivalences", check_bipartite_equivalences, 120.0),
    Criterion(9, "K_n reduction", check_kn_reduction, 60.0),
    Criterion(10, "translation laws", check_translation_laws, 30.0),
]


@dataclass
class Outcome:
    number: int
    name: str
    passed: bool
    seconds: float
    failures: list

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d} {self.name} ({self.seconds:.2f}s)"


def run_criterion(crit: Criterion) -> Outcome:
    start = time.perf_counter()
    try:
        failures = list(crit.check())
    except Exception as exc:  # a crash is a failure, not a reason to stop the suite
        failures = [f"{type(exc).__name__}: {exc}"]
    elapsed = time.perf_counter() - start
    if elapsed > crit.budget:
        failures.append(f"took {elapsed:.2f}s, budget {crit.budget:.0f}s")
    return Outcome(crit.number, crit.name, not failures, elapsed, failures)


def run_all(numbers=None, echo=print) -> list[Outcome]:
    outcomes = []
    for crit in CRITERIA:
        if numbers and crit.number not in numbers:
            continue
        out = run_criterion(crit)
        echo(out.line())
        for msg in out.failures[:5]:
            echo(f"    {msg}")
        outcomes.append(out)
    return outcomes
