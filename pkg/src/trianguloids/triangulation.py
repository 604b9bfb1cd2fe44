"""Triangulations of the root polytope Q_G, stored as their spanning trees.

A triangulation τ is indexed by the lattice points of P_G⁻: the tree
``τ[b]`` is the unique tree of τ whose trimmed left-degree vector is ``b``.
"""
from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Iterable, Mapping

from . import _kernels
from .compat import find_long_cycle
from .errors import (
    CoverageMismatch,
    DuplicateDegreeVector,
    EdgeNotInTree,
    IncompatiblePair,
    NotFound,
    NotReplaceable,
    NotSpanningTree,
    PointOutsidePG,
    ReconstructionFailed,
    TrianguloidError,
)
from .graph import (
    BipartiteGraph,
    Edge,
    Subgraph,
    _DSU,
    _bits,
    dual,
    enumerate_spanning_trees,
    is_forest,
    is_spanning_tree,
    ld,
    ld_minus,
    partial_matchings,
    rd_minus,
    subforests,
)
from .lattice import Point, in_PG, points_PGminus

KINDS = ("trees", "rsm", "lsm", "pm")
# ℱ(τ) also determines τ but is exponentially large; accepted, not advertised
_ALL_KINDS = KINDS + ("forests",)


class Triangulation:
    """An immutable, validated triangulation. Build it with :func:`validate`."""

    def __init__(self, graph: BipartiteGraph, trees: Mapping[Point, Subgraph]):
        self.graph = graph
        self._trees = dict(sorted(trees.items()))

    @property
    def points(self) -> list[Point]:
        return list(self._trees)

    @property
    def trees(self) -> dict[Point, Subgraph]:
        return dict(self._trees)

    def __getitem__(self, b: Point) -> Subgraph:
        return self._trees[tuple(b)]

    def __len__(self):
        return len(self._trees)

    def __iter__(self):
        return iter(self._trees.items())

    def key(self) -> tuple:
        """Hashable canonical form: the tree masks in point order."""
        return tuple((b, T.rows) for b, T in self._trees.items())

    def __eq__(self, other):
        if not isinstance(other, Triangulation):
            return NotImplemented
        return self.graph == other.graph and self.key() == other.key()

    def __hash__(self):
        return hash((self.graph, self.key()))

    def __repr__(self):
        return f"Triangulation(m={self.graph.m}, n={self.graph.n}, trees={len(self)})"

    @cached_property
    def forests(self) -> frozenset[Subgraph]:
        out: set[Subgraph] = set()
        for T in self._trees.values():
            out.update(subforests(T))
        return frozenset(out)

    @cached_property
    def _rsm_by_ld(self) -> dict[Point, Subgraph]:
        out: dict[Point, Subgraph] = {}
        for T in self._trees.values():
            for F in _right_semi_matchings(T):
                out[ld(F)] = F
        return dict(sorted(out.items()))

    @cached_property
    def _lsms(self) -> frozenset[Subgraph]:
        out: set[Subgraph] = set()
        for T in self._trees.values():
            out.update(_left_semi_matchings(T))
        return frozenset(out)

    @cached_property
    def _pms(self) -> frozenset[Subgraph]:
        out: set[Subgraph] = set()
        for T in self._trees.values():
            out.update(partial_matchings(T))
        return frozenset(out)


def _right_semi_matchings(T: Subgraph):
    """Subgraphs of T keeping exactly one edge at every right vertex."""
    G = T.graph
    choices = [[i for i, r in enumerate(T.rows, start=1) if (r >> (j - 1)) & 1] for j in range(1, G.n + 1)]
    for pick in product(*choices):
        rows = [0] * G.m
        for j, i in enumerate(pick, start=1):
            rows[i - 1] |= 1 << (j - 1)
        yield Subgraph(tuple(rows), G)


def _left_semi_matchings(T: Subgraph):
    """Subgraphs of T keeping exactly one edge at every left vertex."""
    choices = [[1 << (j - 1) for j in _bits(r)] for r in T.rows]
    for pick in product(*choices):
        yield Subgraph(tuple(pick), T.graph)


def _check_pairs(G: BipartiteGraph, by_point: dict[Point, Subgraph]):
    """Raise IncompatiblePair for the first incompatible pair (point order)."""
    pts = list(by_point)
    trees = [by_point[b] for b in pts]
    masks = _kernels.pack(trees)
    for k in range(len(pts)):
        row = _kernels.one_vs_many(masks[k], masks[k + 1:], G.n)
        if not row.all():
            t = k + 1 + int(row.argmin())
            cycle = find_long_cycle(trees[k], trees[t])
            raise IncompatiblePair(pts[k], pts[t], cycle)


def validate(G: BipartiteGraph, trees: Iterable[Subgraph]) -> Triangulation:
    """Check that ``trees`` is the tree family 𝒯(τ) of a triangulation of Q_G."""
    by_point: dict[Point, Subgraph] = {}
    for T in trees:
        if len(T.rows) != G.m:
            raise NotSpanningTree("tree does not belong to the given graph")
        T = Subgraph(T.rows, G)
        if any(r & ~g for r, g in zip(T.rows, G.rows)) or not is_spanning_tree(T):
            raise NotSpanningTree(f"not a spanning tree of G: {list(T.edges)}")
        b = ld_minus(T)
        if b in by_point:
            raise DuplicateDegreeVector(f"two trees share LD- = {b}")
        by_point[b] = T
    expected = set(points_PGminus(G))
    got = set(by_point)
    if got != expected:
        raise CoverageMismatch(sorted(expected - got), sorted(got - expected))
    by_point = dict(sorted(by_point.items()))
    _check_pairs(G, by_point)
    return Triangulation(G, by_point)


def forests(tau: Triangulation) -> frozenset[Subgraph]:
    """ℱ(τ): every subforest of every tree of τ."""
    return tau.forests


def rsm_set(tau: Triangulation) -> frozenset[Subgraph]:
    return frozenset(tau._rsm_by_ld.values())


def lsm_set(tau: Triangulation) -> frozenset[Subgraph]:
    return tau._lsms


def pm_set(tau: Triangulation) -> frozenset[Subgraph]:
    return tau._pms


def collection(tau: Triangulation, kind: str) -> frozenset[Subgraph]:
    """One of the collections that determine τ: trees, rsm, lsm or pm
    (or ``forests`` for all of ℱ(τ))."""
    if kind == "trees":
        return frozenset(tau.trees.values())
    table = {"rsm": rsm_set, "lsm": lsm_set, "pm": pm_set, "forests": forests}
    try:
        return table[kind](tau)
    except KeyError:
        raise ValueError(f"unknown collection kind {kind!r}; expected one of {KINDS}") from None


def rsm_at(tau: Triangulation, a: Point) -> Subgraph:
    """F_τ(a): the right semi-matching of τ with left-degree vector ``a``."""
    a = tuple(a)
    if not in_PG(tau.graph, a):
        raise PointOutsidePG(f"{a} is not a lattice point of P_G")
    return tau._rsm_by_ld[a]


def phi(tau: Triangulation) -> dict[Point, Point]:
    """φ_τ: b ↦ RD⁻(τ[b]), a bijection P_G⁻ → P_{G*}⁻ on lattice points."""
    out = {b: rd_minus(T) for b, T in tau}
    target = set(points_PGminus(dual(tau.graph)))
    if set(out.values()) != target or len(out) != len(target):
        raise AssertionError("φ_τ is not a bijection onto the lattice points of P_{G*}⁻")
    return out


def reconstruct(G: BipartiteGraph, members: Iterable[Subgraph], kind: str = "trees") -> Triangulation:
    """Recover τ from 𝒯(τ), ℛ𝒮ℳ(τ), ℒ𝒮ℳ(τ) or 𝒫ℳ(τ).

    The trees of τ are exactly the spanning trees of G compatible with every
    member of the collection. ``kind`` is informational: the same rule
    applies to all four collections.
    """
    if kind not in _ALL_KINDS:
        raise ValueError(f"unknown collection kind {kind!r}; expected one of {KINDS}")
    members = sorted({Subgraph(F.rows, G) for F in members}, key=lambda F: F.edges)
    for F in members:
        if not is_forest(F):
            raise ReconstructionFailed(f"collection member is not a forest: {list(F.edges)}")
    candidates = enumerate_spanning_trees(G)
    keep = [True] * len(candidates)
    if members and candidates:
        cross = _kernels.compat_cross(_kernels.pack(members), _kernels.pack(candidates), G.n)
        keep = cross.all(axis=0)
    chosen = [T for T, ok in zip(candidates, keep) if ok]
    try:
        return validate(G, chosen)
    except TrianguloidError as exc:
        raise ReconstructionFailed(f"collection does not determine a triangulation: {exc}") from exc


def is_replaceable(T: Subgraph, edge: Edge) -> bool:
    """Whether removing ``edge`` = (v, ū) from the spanning tree T leaves a
    forest F with some (v′, ū′) ∈ G, v′ in the component of ū and ū′ in the
    component of v."""
    edge = (int(edge[0]), int(edge[1]))
    if edge not in T:
        raise EdgeNotInTree(f"edge {edge} is not in the tree")
    G = T.graph
    m = G.m
    F = T.without(edge)
    dsu = _DSU(m + G.n)
    for i, j in F.edges:
        dsu.union(i - 1, m + j - 1)
    v, u = edge
    comp_u = dsu.find(m + u - 1)
    comp_v = dsu.find(v - 1)
    for i, j in G.edges:
        if dsu.find(i - 1) == comp_u and dsu.find(m + j - 1) == comp_v:
            return True
    return False


def replaceable_edges(T: Subgraph) -> list[Edge]:
    return [e for e in T.edges if is_replaceable(T, e)]


def flip(tau: Triangulation, b: Point, edge: Edge) -> Point:
    """The point b′ of τ with τ[b] \\ τ[b′] = {edge}."""
    b = tuple(b)
    T = tau[b]
    if not is_replaceable(T, edge):
        raise NotReplaceable(f"edge {tuple(edge)} is not replaceable in the tree at {b}")
    edge = (int(edge[0]), int(edge[1]))
    for b2, T2 in tau:
        if b2 != b and (T - T2).edges == (edge,):
            return b2
    raise NotFound(f"no tree of the triangulation differs from the tree at {b} by exactly {edge}")


__all__ = [
    "KINDS",
    "Triangulation",
    "collection",
    "flip",
    "forests",
    "is_replaceable",
    "lsm_set",
    "phi",
    "pm_set",
    "reconstruct",
    "replaceable_edges",
    "rsm_at",
    "rsm_set",
    "validate",
]
