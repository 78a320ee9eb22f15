from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sandpile_lab import bipartite as bp
from sandpile_lab.graph_core import NotStableError, SandpileError
from sandpile_lab.paths import (
    BinomialWord,
    FramedPair,
    PathPair,
    binomial_words,
    complement,
    config_to_framed_pair,
    cumuledpos,
    cyclic_part,
    is_polyomino,
    is_stable_intersection,
    jump,
    measure_frame,
    polyomino_of_part,
    pos,
    reverse,
    stable_intersections,
    word_transform,
)
from strategies import path_pairs, sorted_configs

UP, LO = "ENNENENN", "NNNEENENN"
PAIR = PathPair(UP, LO)
SBC = bp.SortedBipartiteConfig
U = SBC(4, 6, (1, 2, 2, 3, 3, 3), (0, 3, 5))
SIZES = [(m, n) for m in range(2, 5) for n in range(1, 5)]


def test_pos_of_e8():
    assert pos(PAIR, 8) == 2


@given(path_pairs(), st.integers(-30, 30))
def test_pos_shifts_by_one_per_period(pair, j):
    p = PathPair(*pair)
    assert p.pos(j + p.m) == p.pos(j) + 1


@given(path_pairs(), st.integers(-30, 30), st.integers(-3, 3))
def test_cumuledpos_increment_law(pair, j, t):
    p = PathPair(*pair)
    assert cumuledpos(p, j + 1) == cumuledpos(p, j) + 1
    assert p.cumuledpos(j + p.m * t) == p.cumuledpos(j) + p.m * t


def test_stable_intersections_of_the_running_pair():
    assert stable_intersections(PAIR) == [(5, 9), (3, 4), (2, 3), (0, 0)]
    for x, _ in PAIR.stable_intersections():
        assert PAIR.pos(x) == 0


def test_after_the_top_intersection_pos_is_positive():
    top = PAIR.stable_intersections(normalized=False)[0][0]
    assert all(PAIR.pos(top + i) >= 1 for i in range(1, PAIR.m))


@pytest.mark.parametrize("lower", ["EN", "NE"])
def test_smallest_pairs_have_two_intersections(lower):
    assert len(PathPair("E", lower).stable_intersections()) == 2


@given(path_pairs(max_m=5, max_n=4))
def test_exactly_m_stable_intersections(pair):
    p = PathPair(*pair)
    pts = p.stable_intersections(normalized=False)
    assert len(set(pts)) == p.m
    assert all(p.is_stable_intersection(y) for y in pts)
    assert p.stable_intersections()[-1] == (0, 0)


def test_measure_examples():
    assert PAIR.measure((2, 7)) == ((2, 2, 4, 5, 5, 6), (-4, -1, 1))
    assert measure_frame(FramedPair(UP, LO, (5, 9))) == U


@given(path_pairs(), st.integers(-8, 8), st.integers(-8, 8))
def test_frame_shifts_are_the_translation_operators(pair, y1, y2):
    p = PathPair(*pair)
    here = SBC(p.m, p.n, *p.measure((y1, y2)), check=False)
    assert bp.t_nonsink(here) == SBC(p.m, p.n, *p.measure((y1, y2 - 1)), check=False)
    assert bp.t_sink(here) == SBC(p.m, p.n, *p.measure((y1 - 1, y2)), check=False)


@pytest.mark.parametrize("m, n", SIZES)
def test_rho_beta_duality(m, n):
    for c in bp.sorted_stable_configs(m, n):
        p = config_to_framed_pair(c)
        q = PathPair(reverse(p.upper), reverse(p.lower))
        for y1, y2 in product(range(-m, 2 * m), range(-n, 2 * n)):
            here = SBC(m, n, *p.measure((y1, y2)), check=False)
            there = SBC(m, n, *q.measure((-y1, -y2)), check=False)
            assert bp.rho_beta(here) == there


def test_config_to_framed_pair_on_parking_member():
    fp = config_to_framed_pair(SBC(4, 6, (0, 0, 0, 2, 3, 3), (0, 2, 3)))
    assert (fp.upper, fp.lower, fp.anchor) == (UP, LO, (0, 0))


def test_config_to_framed_pair_on_zero():
    fp = config_to_framed_pair(SBC(3, 4, (0,) * 4, (0, 0)))
    assert fp.lower == "NNNNEE" and fp.upper == "EENNN"


@pytest.mark.parametrize("m, n", SIZES)
def test_round_trip_and_anchor_is_stable(m, n):
    for c in bp.sorted_stable_configs(m, n):
        fp = config_to_framed_pair(c)
        assert measure_frame(fp) == c
        assert is_stable_intersection(fp)


def test_config_to_framed_pair_needs_stable():
    with pytest.raises(NotStableError):
        config_to_framed_pair(SBC(2, 2, (0, 2), (0,)))


def test_jump_next_and_prev():
    fp = FramedPair(UP, LO, (5, 9))
    nxt = jump(fp, "next")
    assert nxt.anchor == (3, 4)
    assert measure_frame(nxt) == bp.phi_kmn(U)
    assert jump(nxt, "prev") == fp
    bottom = FramedPair(UP, LO, (0, 0))
    assert jump(bottom, "next") == bottom
    assert jump(fp, "prev") == fp


def test_jump_needs_a_stable_anchor():
    with pytest.raises(SandpileError):
        jump(FramedPair(UP, LO, (2, 7)))
    with pytest.raises(SandpileError):
        jump(FramedPair(UP, LO, (0, 0)), "up")


@pytest.mark.parametrize("anchor, expected", [((2, 3), True), ((2, 7), False), ((0, 0), True)])
def test_is_stable_intersection(anchor, expected):
    assert is_stable_intersection(FramedPair(UP, LO, anchor)) is expected


@pytest.mark.parametrize("m, n", SIZES)
def test_parking_iff_no_positive_pos(m, n):
    for c in bp.sorted_stable_configs(m, n):
        fp = config_to_framed_pair(c)
        parking = bp.phi_kmn(c) == c
        assert parking == all(fp.pos(i) <= 0 for i in range(1, m))


def test_running_part():
    part = cyclic_part(UP, LO)
    assert len(part) == 4 and (UP, LO) in part
    poly = polyomino_of_part(UP, LO)
    assert (poly.upper, poly.lower) == ("NENNNENNEE", "EENENNENNN")
    assert is_polyomino(poly.upper, poly.lower)
    assert sum(is_polyomino("N" + v + "E", "E" + k) for v, k in part) == 1


def test_part_of_running_pair_sits_at_the_top_rectangle():
    top = PAIR.stable_intersections(normalized=False)[0]
    poly = polyomino_of_part(UP, LO)
    v, k = PAIR.factors_at(top)
    assert (poly.upper, poly.lower) == ("N" + v + "E", "E" + k)


@given(path_pairs(max_m=5, max_n=4))
def test_part_membership_is_symmetric(pair):
    for member in cyclic_part(*pair):
        assert pair in cyclic_part(*member)


def test_two_by_two_partition():
    pairs = [(u, lo) for u in binomial_words(1, 1) for lo in binomial_words(1, 2)]
    parts = {tuple(sorted(cyclic_part(*p))) for p in pairs}
    assert len(pairs) == 6 and len(parts) == 3
    assert all(len(part) == 2 for part in parts)
    polys = sorted((polyomino_of_part(*part[0]).upper, polyomino_of_part(*part[0]).lower)
                   for part in parts)
    assert polys == [("NENE", "EENN"), ("NNEE", "EENN"), ("NNEE", "ENEN")]


@pytest.mark.parametrize("m, n", [(m, n) for m in range(2, 6) for n in range(1, 6) if m + n <= 9])
def test_one_polyomino_per_part(m, n):
    for u in binomial_words(m - 1, n - 1):
        for lo in binomial_words(m - 1, n):
            part = cyclic_part(u, lo)
            assert len(set(part)) == m
            assert sum(is_polyomino("N" + v + "E", "E" + k) for v, k in part) == 1


@given(path_pairs(max_m=5, max_n=5), st.integers(-5, 5))
def test_part_is_translation_invariant(pair, dx):
    p = PathPair(*pair)
    pts = p.stable_intersections(normalized=False)
    # shifting the frame by whole periods reads the same words
    shifted = [(x + dx * p.m, y + dx * p.n) for x, y in pts]
    assert sorted(p.factors_at(y) for y in shifted) == sorted(cyclic_part(*pair))


@pytest.mark.parametrize("upper, lower, expected", [
    ("NNEE", "EENN", True),
    ("NENE", "ENEN", False),
    ("NENE", "NENE", False),
    ("ENEN", "EENN", False),
])
def test_is_polyomino(upper, lower, expected):
    assert is_polyomino(upper, lower) is expected


def test_is_polyomino_tally_mismatch():
    with pytest.raises(SandpileError):
        is_polyomino("NNE", "EEN")


def test_word_transforms():
    assert word_transform(UP, "reverse") == "NNENENNE"
    assert word_transform("NNEE", "complement") == "EENN"
    with pytest.raises(SandpileError):
        word_transform("NE", "shuffle")


@given(st.text(alphabet="NE", max_size=20))
def test_transforms_are_involutions(w):
    assert reverse(reverse(w)) == w
    assert complement(complement(w)) == w


def test_binomial_word_type():
    w = BinomialWord("enne")
    assert str(w) == "ENNE" and w.in_b(2, 2) and len(w) == 4
    with pytest.raises(SandpileError):
        BinomialWord("NEX")


def test_binomial_words_order_and_count():
    assert list(binomial_words(1, 2)) == ["ENN", "NEN", "NNE"]
    assert len(list(binomial_words(3, 4))) == 35


@pytest.mark.parametrize("upper, lower", [("", "N"), ("E", ""), ("EE", "EN")])
def test_path_pair_rejects_degenerate(upper, lower):
    with pytest.raises(SandpileError):
        PathPair(upper, lower)


def test_framed_pair_json():
    fp = FramedPair(UP, LO, (5, 9))
    assert fp.to_json() == {"upper": UP, "lower": LO, "anchor": [5, 9]}
    assert FramedPair.from_json(fp.to_json()) == fp


@given(sorted_configs(max_m=6, max_n=6))
def test_grade_counts_positive_pos(c):
    fp = config_to_framed_pair(c)
    assert bp.grade_kmn(c) == sum(1 for k in range(c.m) if fp.pos(k) >= 1)
