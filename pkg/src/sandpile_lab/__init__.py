"""Sandpile operators psi and phi, their bipartite and complete-graph fast paths,
periodic path-pair frames, and parallelogram polyomino enumeration."""

from .bipartite import (
    SortedBipartiteConfig,
    grade_kmn,
    phi_kmn,
    psi_kmn,
    t_nonsink,
    t_sink,
    walk_class,
)
from .complete_graph import CompleteConfig, embed_staircase, phi_kn, psi_kn
from .enumeration import (
    CountReport,
    count_pattern_formula,
    count_polyominoes_formula,
    cyc_matches,
    enumerate_pattern,
    enumerate_polyominoes,
    verify_cyclic_lemma,
)
from .graph_core import (
    Graph,
    NotStableError,
    SandpileError,
    beta,
    compare_lt2,
    distance_profile,
    example_graph,
    is_parking,
    is_recurrent,
    is_stable,
    topple,
)
from .operators import next_subset, normalize, phi, psi
from .paths import (
    BinomialWord,
    FramedPair,
    Polyomino,
    config_to_framed_pair,
    cumuledpos,
    cyclic_part,
    is_polyomino,
    is_stable_intersection,
    jump,
    measure_frame,
    polyomino_of_part,
    pos,
    stable_intersections,
    word_transform,
)

__version__ = "0.1.0"
