"""Lattice points of P_G, P_G⁻ and P_G±, matching supports, and the
directed graphs Γ_G (unit steps into P_G) and Λ_G (exchange moves on P_G⁻).

Points are plain tuples of ints. Every collection is returned sorted
lexicographically.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterator, NamedTuple

from .graph import BipartiteGraph, partial_matchings, supports

Point = tuple[int, ...]

# Above this many left vertices the 2^m Hall table is not built.
HALL_MAX_M = 20


class GammaEdge(NamedTuple):
    source: Point
    direction: int
    target: Point


class LambdaEdge(NamedTuple):
    source: Point
    target: Point
    i: int
    j: int


def unit(m: int, i: int) -> Point:
    return tuple(1 if k == i else 0 for k in range(1, m + 1))


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def shift(p: Point, plus: int | None = None, minus: int | None = None) -> Point:
    """``p + e_plus - e_minus`` (either index may be omitted)."""
    out = list(p)
    if plus is not None:
        out[plus - 1] += 1
    if minus is not None:
        out[minus - 1] -= 1
    return tuple(out)


def compositions(total: int, parts: int) -> Iterator[Point]:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``,
    in lexicographic order."""
    if parts == 1:
        if total >= 0:
            yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=64)
def hall_table(G: BipartiteGraph) -> tuple[int, ...]:
    """``table[mask] = |N_I(G)|`` for the left subset I encoded by ``mask``."""
    m = G.m
    if m > HALL_MAX_M:
        raise ValueError(f"Hall table not built for m={m} > {HALL_MAX_M}")
    union = [0] * (1 << m)
    for mask in range(1, 1 << m):
        low = mask & -mask
        union[mask] = union[mask ^ low] | G.rows[low.bit_length() - 1]
    return tuple(u.bit_count() for u in union)


def _subset_sums(p: Point) -> list[int]:
    sums = [0] * (1 << len(p))
    for mask in range(1, len(sums)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + p[low.bit_length() - 1]
    return sums


def in_PG(G: BipartiteGraph, a: Point) -> bool:
    """Hall-type membership test for P_G ∩ ℤ^m."""
    if len(a) != G.m or min(a) < 0 or sum(a) != G.n:
        return False
    if G.m > HALL_MAX_M:
        return tuple(a) in _image_PG(G)
    table = hall_table(G)
    return all(s <= t for s, t in zip(_subset_sums(a), table))


def in_PGminus(G: BipartiteGraph, b: Point) -> bool:
    """Membership in P_G⁻ via the trimmed Hall inequalities
    Σ_{i∈I} b_i ≤ |N_I(G)| − 1 for every nonempty I."""
    if len(b) != G.m or min(b) < 0 or sum(b) != G.n - 1:
        return False
    if G.m > HALL_MAX_M:
        return in_PGminus_by_difference(G, b)
    table = hall_table(G)
    sums = _subset_sums(b)
    return all(sums[mask] <= table[mask] - 1 for mask in range(1, len(sums)))


def in_PGminus_by_difference(G: BipartiteGraph, b: Point) -> bool:
    """Membership in P_G⁻ as a Minkowski difference: b + e_i ∈ P_G for all i."""
    if len(b) != G.m or min(b) < 0 or sum(b) != G.n - 1:
        return False
    return all(in_PG(G, shift(b, plus=i)) for i in range(1, G.m + 1))


@lru_cache(maxsize=64)
def _image_PG(G: BipartiteGraph) -> frozenset[Point]:
    """Σ_j e_{f(j)} over all choices f(j) ∈ N_j(G), built one right vertex
    at a time."""
    layer = {tuple([0] * G.m)}
    for N in G.nbhd:
        layer = {shift(p, plus=i) for p in layer for i in N}
    return frozenset(layer)


def points_PG_image(G: BipartiteGraph) -> list[Point]:
    return sorted(_image_PG(G))


@lru_cache(maxsize=64)
def _points_PG(G: BipartiteGraph) -> tuple[Point, ...]:
    if G.m > HALL_MAX_M:
        return tuple(points_PG_image(G))
    pts = tuple(a for a in compositions(G.n, G.m) if in_PG(G, a))
    if __debug__ and len(_image_PG(G)) != len(pts):
        raise AssertionError("Hall description of P_G disagrees with the Minkowski image")
    return pts


def points_PG(G: BipartiteGraph) -> list[Point]:
    """Lattice points of P_G = Σ_j Δ_{N_j(G)}."""
    return list(_points_PG(G))


@lru_cache(maxsize=64)
def _points_PGminus(G: BipartiteGraph) -> tuple[Point, ...]:
    pts = tuple(b for b in compositions(G.n - 1, G.m) if in_PGminus(G, b))
    if __debug__:
        other = tuple(b for b in compositions(G.n - 1, G.m) if in_PGminus_by_difference(G, b))
        if other != pts:
            raise AssertionError("Hall and Minkowski-difference descriptions of P_G⁻ disagree")
    return pts


def points_PGminus(G: BipartiteGraph) -> list[Point]:
    """Lattice points of P_G⁻ = P_G − Δ_[m]."""
    return list(_points_PGminus(G))


@lru_cache(maxsize=64)
def _points_PGpm(G: BipartiteGraph) -> tuple[Point, ...]:
    pts = {shift(a, minus=i) for a in _points_PG(G) for i in range(1, G.m + 1) if a[i - 1] > 0}
    return tuple(sorted(pts))


def points_PGpm(G: BipartiteGraph) -> list[Point]:
    """Lattice points of P_G± = {a − e_i : a ∈ P_G, a_i > 0}."""
    return list(_points_PGpm(G))


def ij_supports(G: BipartiteGraph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Support pairs (I(M), J(M)) of all partial matchings M of G."""
    seen = set()
    for M in partial_matchings(G.as_subgraph()):
        I, J = supports(M)
        seen.add((tuple(sorted(I)), tuple(sorted(J))))
    return sorted(seen, key=lambda p: (len(p[0]), p))


def gamma_edges(G: BipartiteGraph) -> list[GammaEdge]:
    """Edges a − e_i → a of Γ_G, for a ∈ P_G and a_i > 0."""
    out = [
        GammaEdge(shift(a, minus=i), i, a)
        for a in _points_PG(G)
        for i in range(1, G.m + 1)
        if a[i - 1] > 0
    ]
    out.sort()
    return out


def lambda_edges(G: BipartiteGraph) -> list[LambdaEdge]:
    """Edges b → b + e_i − e_j of Λ_G with both endpoints in P_G⁻."""
    pts = set(_points_PGminus(G))
    out = []
    for b in _points_PGminus(G):
        for i in range(1, G.m + 1):
            for j in range(1, G.m + 1):
                if i != j and b[j - 1] > 0:
                    b2 = shift(b, plus=i, minus=j)
                    if b2 in pts:
                        out.append(LambdaEdge(b, b2, i, j))
    out.sort()
    return out


def points(G: BipartiteGraph, polytope: str) -> list[Point]:
    """Dispatch on the polytope name used by the CLI (pg, pgminus, pgpm)."""
    table = {"pg": points_PG, "pgminus": points_PGminus, "pgpm": points_PGpm}
    try:
        return table[polytope](G)
    except KeyError:
        raise ValueError(f"unknown polytope {polytope!r}; expected one of {sorted(table)}") from None
