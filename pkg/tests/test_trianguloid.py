import pytest

from figures import FIG1_ARROWS, FIG3_ARROWS, FIG4_COLORS, K32, K34, arrow_entries, fig1_trees, parse_arrows
from trianguloids.errors import InconsistentColoring, NotComplete, NotPreTrianguloid, NotTrianguloid
from trianguloids.graph import complete_graph
from trianguloids.lattice import lambda_edges, points_PGminus
from trianguloids.trianguloid import (
    Trianguloid,
    check_axioms,
    decode_coloring,
    encode_coloring,
    from_triangulation,
    hexagons,
    label_support,
    path_lemma_violations,
    to_triangulation,
    tree_of,
)
from trianguloids.triangulation import validate


@pytest.fixture(scope="module")
def fig1():
    return validate(K34, fig1_trees())


@pytest.fixture(scope="module")
def fig1_T(fig1):
    return from_triangulation(fig1)


def test_fig1_arrows_exact(fig1_T):
    expected = {k: frozenset(v) for k, v in arrow_entries(FIG1_ARROWS).items()}
    got = {k: v for k, v in fig1_T.entries.items() if v}
    assert got == expected
    assert fig1_T.entry((1, 1, 1), 3) == {3, 4}
    assert fig1_T.entry((3, 0, 0), 1) == {1, 2, 3, 4}


def test_fig1_is_trianguloid_and_round_trips(fig1, fig1_T):
    rep = check_axioms(fig1_T)
    assert rep.is_trianguloid and rep.partition and not rep.violations
    assert to_triangulation(fig1_T) == fig1
    for b in points_PGminus(K34):
        assert tree_of(fig1_T, b) == fig1[b]
        assert path_lemma_violations(fig1_T, b) == []


def test_fig3_fails_only_hexagon_axiom():
    T = Trianguloid(K32, arrow_entries(FIG3_ARROWS))
    rep = T.report
    assert (rep.t1, rep.t2, rep.t3, rep.t4) == (True, True, True, False)
    assert rep.is_pre and not rep.is_trianguloid
    assert {v.axiom for v in rep.violations} == {"T4"}
    assert any(v.location == ((0, 0, 0), 1, 2, 3) for v in rep.violations)
    with pytest.raises(NotTrianguloid):
        to_triangulation(T)
    assert tree_of(T, (0, 1, 0)).edges == ((1, 1), (2, 1), (2, 2), (3, 2))


def test_axiom_violations_are_reported():
    K22 = complete_graph(2, 2)
    T = Trianguloid(K22, {((0, 1), 1): {1, 2}, ((1, 0), 1): {2}, ((0, 1), 2): {2}, ((1, 0), 2): {1, 2}})
    assert not T.report.t1
    with pytest.raises(NotPreTrianguloid):
        tree_of(T, (0, 1))
    # entry outside the domain
    bad = Trianguloid(K22, {((5, 5), 1): {1}})
    assert not bad.report.domain


def test_hexagon_count():
    # K_{3,3}: c ∈ compositions(1, 3) times the 3 choices of j
    assert len(hexagons(complete_graph(3, 3))) == 9
    assert hexagons(complete_graph(2, 4)) == []


def test_fig4_coloring(fig1_T):
    C = encode_coloring(fig1_T)
    expected = {(s, t): c for s, t, c in parse_arrows(FIG4_COLORS)}
    assert C.colors == expected
    assert C.colors[((0, 2, 1), (1, 1, 1))] == 4
    assert decode_coloring(K34, C) == fig1_T
    assert decode_coloring(K34, C.colors) == fig1_T


def test_decode_rejects_every_single_color_change(fig1_T):
    colors = dict(encode_coloring(fig1_T).colors)
    for e in sorted(colors):
        for c in range(1, 5):
            if c == colors[e]:
                continue
            with pytest.raises(InconsistentColoring):
                decode_coloring(K34, {**colors, e: c})


def test_decode_rejects_conflicting_increments():
    K22 = complete_graph(2, 2)
    # both Λ-edges raise a coordinate by the same colour: the entry at (0, 1)
    # in direction 1 would have to gain and already contain 1̄
    with pytest.raises(InconsistentColoring):
        decode_coloring(K22, {((0, 1), (1, 0)): 1, ((1, 0), (0, 1)): 1})
    with pytest.raises(InconsistentColoring):
        decode_coloring(K22, {((0, 1), (1, 0)): 1})
    with pytest.raises(InconsistentColoring):
        decode_coloring(K22, {((0, 1), (1, 0)): 1, ((1, 0), (0, 1)): 7})


def test_coloring_needs_complete_graph():
    from figures import FIG6_GRAPH

    with pytest.raises(NotComplete):
        decode_coloring(FIG6_GRAPH, {})


def test_label_support(fig1_T):
    # every label j appears on some step out of P_G⁻
    for j in range(1, 5):
        assert label_support(fig1_T, j)
    assert len(lambda_edges(K34)) == 36
