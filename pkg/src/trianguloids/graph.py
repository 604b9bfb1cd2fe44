"""Bipartite graphs G ⊆ K_{m,n}, their subgraphs and degree vectors.

Left vertices are ``1..m`` and right vertices ``1..n`` (the barred vertices).
A subgraph is stored as one bitmask per left vertex: bit ``j - 1`` of
``rows[i - 1]`` is set when the edge ``(i, j)`` is present.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .errors import Disconnected, IsolatedVertex, NotPartialMatching, OutOfRange

MAX_SIDE = 32

Edge = tuple[int, int]


def _bits(mask: int) -> Iterator[int]:
    """Yield the 1-based positions of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length()
        mask ^= low


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(_bits(mask))


def set_to_mask(items: Iterable[int]) -> int:
    mask = 0
    for j in items:
        mask |= 1 << (j - 1)
    return mask


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class BipartiteGraph:
    """A connected bipartite graph G ⊆ K_{m,n} without isolated vertices.

    ``nbhd[j - 1]`` is the neighborhood N_j̄(G) ⊆ {1..m} of right vertex j.
    Construction validates the graph; use :func:`new_graph` for raw input.
    """

    m: int
    n: int
    nbhd: tuple[frozenset[int], ...]
    rows: tuple[int, ...] = field(init=False, repr=False, compare=False)
    cols: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m, n = self.m, self.n
        if not (1 <= m <= MAX_SIDE and 1 <= n <= MAX_SIDE):
            raise OutOfRange(f"need 1 <= m, n <= {MAX_SIDE}, got m={m}, n={n}")
        if len(self.nbhd) != n:
            raise OutOfRange(f"expected {n} right neighborhoods, got {len(self.nbhd)}")
        nbhd = tuple(frozenset(int(i) for i in N) for N in self.nbhd)
        rows = [0] * m
        for j, N in enumerate(nbhd, start=1):
            if not N:
                raise IsolatedVertex(f"right vertex {j} has no neighbors")
            for i in N:
                if not 1 <= i <= m:
                    raise OutOfRange(f"left index {i} of right vertex {j} not in 1..{m}")
                rows[i - 1] |= 1 << (j - 1)
        for i, r in enumerate(rows, start=1):
            if not r:
                raise IsolatedVertex(f"left vertex {i} has no neighbors")
        object.__setattr__(self, "nbhd", nbhd)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "cols", tuple(set_to_mask(N) for N in nbhd))
        if len(components(self.as_subgraph())) != 1:
            raise Disconnected("the bipartite graph is not connected")

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple((i, j) for i, r in enumerate(self.rows, start=1) for j in _bits(r))

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def is_complete(self) -> bool:
        full = (1 << self.n) - 1
        return all(r == full for r in self.rows)

    def left_nbhd(self, i: int) -> frozenset[int]:
        """N_i(G): right neighbours of left vertex ``i``."""
        return mask_to_set(self.rows[i - 1])

    def as_subgraph(self) -> "Subgraph":
        return Subgraph(self.rows, self)

    def subgraph(self, edges: Iterable[Edge]) -> "Subgraph":
        return Subgraph.from_edges(self, edges)

    def __hash__(self):
        return hash((self.m, self.n, self.nbhd))


def new_graph(m: int, n: int, right_neighborhoods) -> BipartiteGraph:
    """Validate raw input and build a :class:`BipartiteGraph`."""
    return BipartiteGraph(int(m), int(n), tuple(frozenset(N) for N in right_neighborhoods))


def complete_graph(m: int, n: int) -> BipartiteGraph:
    return new_graph(m, n, [range(1, m + 1)] * n)


def dual(G: BipartiteGraph) -> BipartiteGraph:
    """G* ⊆ K_{n,m}: swap the roles of the two sides."""
    return BipartiteGraph(G.n, G.m, tuple(mask_to_set(r) for r in G.rows))


@dataclass(frozen=True)
class Subgraph:
    """An edge set F ⊆ G, stored as per-left-vertex bitmasks.

    Equality and hashing only look at the edge set; ``graph`` is carried
    along for convenience.
    """

    rows: tuple[int, ...]
    graph: BipartiteGraph = field(compare=False, repr=False)

    @classmethod
    def from_edges(cls, G: BipartiteGraph, edges: Iterable[Edge]) -> "Subgraph":
        rows = [0] * G.m
        for i, j in edges:
            i, j = int(i), int(j)
            if not (1 <= i <= G.m and 1 <= j <= G.n) or not (G.rows[i - 1] >> (j - 1)) & 1:
                raise OutOfRange(f"edge ({i}, {j}) is not an edge of the graph")
            rows[i - 1] |= 1 << (j - 1)
        return cls(tuple(rows), G)

    @property
    def edges(self) -> tuple[Edge, ...]:
        """Edges in canonical (lexicographic) order."""
        return tuple((i, j) for i, r in enumerate(self.rows, start=1) for j in _bits(r))

    def __len__(self):
        return sum(r.bit_count() for r in self.rows)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, edge) -> bool:
        i, j = edge
        return 1 <= i <= len(self.rows) and bool((self.rows[i - 1] >> (j - 1)) & 1)

    def __sub__(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(tuple(a & ~b for a, b in zip(self.rows, other.rows)), self.graph)

    def __and__(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(tuple(a & b for a, b in zip(self.rows, other.rows)), self.graph)

    def __or__(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(tuple(a | b for a, b in zip(self.rows, other.rows)), self.graph)

    def issubset(self, other: "Subgraph") -> bool:
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def without(self, edge: Edge) -> "Subgraph":
        i, j = edge
        rows = list(self.rows)
        rows[i - 1] &= ~(1 << (j - 1))
        return Subgraph(tuple(rows), self.graph)

    def with_edge(self, edge: Edge) -> "Subgraph":
        i, j = edge
        rows = list(self.rows)
        rows[i - 1] |= 1 << (j - 1)
        return Subgraph(tuple(rows), self.graph)

    def left_nbhd(self, i: int) -> frozenset[int]:
        """N_i(F)."""
        return mask_to_set(self.rows[i - 1])

    def left_degrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self.rows)

    def right_degrees(self) -> tuple[int, ...]:
        n = self.graph.n
        deg = [0] * n
        for r in self.rows:
            for j in _bits(r):
                deg[j - 1] += 1
        return tuple(deg)

    def transpose(self, G_star: BipartiteGraph | None = None) -> "Subgraph":
        """The same edge set viewed inside the dual graph G*."""
        G_star = G_star or dual(self.graph)
        return Subgraph.from_edges(G_star, ((j, i) for i, j in self.edges))


class DegreeVector(NamedTuple):
    entries: tuple[int, ...]
    side: str
    trimmed: bool


def degree_vector(F: Subgraph, side: str = "left", trimmed: bool = False) -> DegreeVector:
    if side == "left":
        deg = F.left_degrees()
    elif side == "right":
        deg = F.right_degrees()
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if trimmed:
        deg = tuple(d - 1 for d in deg)
    return DegreeVector(deg, side, trimmed)


def ld(F: Subgraph) -> tuple[int, ...]:
    return F.left_degrees()


def rd(F: Subgraph) -> tuple[int, ...]:
    return F.right_degrees()


def ld_minus(F: Subgraph) -> tuple[int, ...]:
    return tuple(d - 1 for d in F.left_degrees())


def rd_minus(F: Subgraph) -> tuple[int, ...]:
    return tuple(d - 1 for d in F.right_degrees())


def is_forest(F: Subgraph) -> bool:
    m = len(F.rows)
    dsu = _DSU(m + F.graph.n)
    for i, j in F.edges:
        if not dsu.union(i - 1, m + j - 1):
            return False
    return True


class Classification(NamedTuple):
    is_forest: bool
    is_spanning_tree: bool
    is_rsm: bool
    is_lsm: bool
    is_pm: bool


def classify(F: Subgraph) -> Classification:
    forest = is_forest(F)
    G = F.graph
    ldeg, rdeg = F.left_degrees(), F.right_degrees()
    spanning = forest and len(F) == G.m + G.n - 1
    rsm = forest and all(d == 1 for d in rdeg)
    lsm = forest and all(d == 1 for d in ldeg)
    pm = forest and all(d <= 1 for d in ldeg) and all(d <= 1 for d in rdeg)
    return Classification(forest, spanning, rsm, lsm, pm)


def is_spanning_tree(F: Subgraph) -> bool:
    G = F.graph
    return len(F) == G.m + G.n - 1 and is_forest(F)


def supports(M: Subgraph) -> tuple[frozenset[int], frozenset[int]]:
    """Left and right supports (I(M), J(M)) of a partial matching."""
    ldeg, rdeg = M.left_degrees(), M.right_degrees()
    if any(d > 1 for d in ldeg) or any(d > 1 for d in rdeg):
        raise NotPartialMatching("subgraph has a vertex of degree >= 2")
    I = frozenset(i for i, d in enumerate(ldeg, start=1) if d)
    J = frozenset(j for j, d in enumerate(rdeg, start=1) if d)
    return I, J


def components(F: Subgraph) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Connected components of F on the vertex set [m] ⊔ [n̄].

    Each component is returned as ``(left_vertices, right_vertices)``;
    isolated vertices form singleton components. Components are sorted by
    their smallest left vertex, then smallest right vertex.
    """
    G = F.graph
    m, n = G.m, G.n
    dsu = _DSU(m + n)
    for i, j in F.edges:
        dsu.union(i - 1, m + j - 1)
    groups: dict[int, tuple[set, set]] = {}
    for v in range(m + n):
        left, right = groups.setdefault(dsu.find(v), (set(), set()))
        if v < m:
            left.add(v + 1)
        else:
            right.add(v - m + 1)
    comps = [(frozenset(a), frozenset(b)) for a, b in groups.values()]
    comps.sort(key=lambda c: (min(c[0], default=MAX_SIDE + 1), min(c[1], default=MAX_SIDE + 1)))
    return comps


def _bareiss_det(mat: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free elimination)."""
    a = [row[:] for row in mat]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def kirchhoff_count(G: BipartiteGraph) -> int:
    """Number of spanning trees by the matrix-tree theorem."""
    m, n = G.m, G.n
    size = m + n
    lap = [[0] * size for _ in range(size)]
    for i, j in G.edges:
        u, v = i - 1, m + j - 1
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    minor = [row[1:] for row in lap[1:]]
    return _bareiss_det(minor)


def enumerate_spanning_trees(G: BipartiteGraph) -> list[Subgraph]:
    """All spanning trees of G, canonically sorted by edge list.

    Include/exclude recursion over the canonical edge order; an edge is only
    excluded when the remaining edges can still connect the graph. The count
    is cross-checked against Kirchhoff's theorem.
    """
    m, n = G.m, G.n
    edges = G.edges
    need = m + n - 1
    out: list[tuple[int, ...]] = []

    def connected_with(parent: list[int], start: int) -> bool:
        dsu = _DSU(m + n)
        dsu.parent = parent[:]
        count = len({dsu.find(v) for v in range(m + n)})
        for i, j in edges[start:]:
            if dsu.union(i - 1, m + j - 1):
                count -= 1
                if count == 1:
                    return True
        return count == 1

    def rec(k: int, parent: list[int], chosen: list[Edge]):
        if len(chosen) == need:
            rows = [0] * m
            for i, j in chosen:
                rows[i - 1] |= 1 << (j - 1)
            out.append(tuple(rows))
            return
        if len(edges) - k < need - len(chosen):
            return
        i, j = edges[k]
        dsu = _DSU(0)
        dsu.parent = parent[:]
        if dsu.union(i - 1, m + j - 1):
            chosen.append((i, j))
            rec(k + 1, dsu.parent, chosen)
            chosen.pop()
        if connected_with(parent, k + 1):
            rec(k + 1, parent, chosen)

    rec(0, list(range(m + n)), [])
    trees = sorted((Subgraph(r, G) for r in out), key=lambda T: T.edges)
    expected = kirchhoff_count(G)
    if len(trees) != expected:
        raise AssertionError(f"spanning tree enumeration found {len(trees)}, Kirchhoff says {expected}")
    return trees


def partial_matchings(F: Subgraph) -> Iterator[Subgraph]:
    """All partial matchings M ⊆ F (including the empty one)."""
    m = len(F.rows)
    rows = F.rows

    def rec(i: int, used: int, acc: list[int]):
        if i == m:
            yield Subgraph(tuple(acc), F.graph)
            return
        acc.append(0)
        yield from rec(i + 1, used, acc)
        acc.pop()
        free = rows[i] & ~used
        while free:
            low = free & -free
            free ^= low
            acc.append(low)
            yield from rec(i + 1, used | low, acc)
            acc.pop()

    yield from rec(0, 0, [])


def subforests(F: Subgraph) -> Iterator[Subgraph]:
    """All edge subsets of a forest F (each is again a forest)."""
    edges = F.edges
    G = F.graph
    for bits in range(1 << len(edges)):
        rows = [0] * G.m
        k = 0
        while bits:
            if bits & 1:
                i, j = edges[k]
                rows[i - 1] |= 1 << (j - 1)
            bits >>= 1
            k += 1
        yield Subgraph(tuple(rows), G)
