"""Compatibility of forests via the directed union graph U(F, F').

U(F, F') has an arc i → j̄ for every (i, j̄) ∈ F and j̄ → i for every
(i, j̄) ∈ F'. Two forests are compatible iff U has no simple directed cycle
through three or more vertices.

Detection contracts the connected components of F ∩ F' (their arcs go both
ways) and looks for a directed cycle among the remaining one-way arcs. A
cycle of the contracted graph lifts to a simple cycle of U by walking tree
paths inside each component, and a self-loop cannot occur because it would
close a cycle inside F or F'.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .errors import NotAForest, TooLarge
from .graph import Subgraph, _DSU, is_forest, partial_matchings, supports

ORACLE_MAX_EDGES = 16


class Vertex(NamedTuple):
    side: str  # "L" or "R"
    index: int

    def __str__(self):
        return f"{self.side}{self.index}"


@dataclass(frozen=True)
class UnionDigraph:
    m: int
    n: int
    arcs: frozenset[tuple[Vertex, Vertex]]

    def successors(self, v: Vertex) -> list[Vertex]:
        return sorted(w for u, w in self.arcs if u == v)


def union_digraph(F: Subgraph, F2: Subgraph) -> UnionDigraph:
    arcs = {(Vertex("L", i), Vertex("R", j)) for i, j in F.edges}
    arcs |= {(Vertex("R", j), Vertex("L", i)) for i, j in F2.edges}
    G = F.graph
    return UnionDigraph(G.m, G.n, frozenset(arcs))


def _vid(v: Vertex, m: int) -> int:
    return v.index - 1 if v.side == "L" else m + v.index - 1


def _vertex(x: int, m: int) -> Vertex:
    return Vertex("L", x + 1) if x < m else Vertex("R", x - m + 1)


def find_long_cycle(F: Subgraph, F2: Subgraph) -> list[Vertex] | None:
    """A simple directed cycle of U(F, F') on ≥ 3 vertices, or ``None``.

    The cycle is returned as a closed vertex sequence (first == last).
    Both arguments must be forests of the same graph.
    """
    G = F.graph
    m, n = G.m, G.n
    size = m + n
    shared = F & F2
    dsu = _DSU(size)
    adj_shared: list[list[int]] = [[] for _ in range(size)]
    for i, j in shared.edges:
        u, v = i - 1, m + j - 1
        dsu.union(u, v)
        adj_shared[u].append(v)
        adj_shared[v].append(u)

    # one-way arcs between components: (tail vertex, head vertex)
    out_arcs: dict[int, list[tuple[int, int]]] = {}
    for i, j in (F - F2).edges:
        u, v = i - 1, m + j - 1
        out_arcs.setdefault(dsu.find(u), []).append((u, v))
    for i, j in (F2 - F).edges:
        u, v = m + j - 1, i - 1
        out_arcs.setdefault(dsu.find(u), []).append((u, v))
    for arcs in out_arcs.values():
        arcs.sort()

    color: dict[int, int] = {}
    stack_arcs: list[tuple[int, int]] = []
    cycle_arcs: list[tuple[int, int]] | None = None

    def dfs(comp: int) -> bool:
        nonlocal cycle_arcs
        color[comp] = 1
        for u, v in out_arcs.get(comp, ()):
            target = dsu.find(v)
            stack_arcs.append((u, v))
            state = color.get(target, 0)
            if state == 1:
                start = next(k for k, (a, _) in enumerate(stack_arcs) if dsu.find(a) == target)
                cycle_arcs = stack_arcs[start:]
                return True
            if state == 0 and dfs(target):
                return True
            stack_arcs.pop()
        color[comp] = 2
        return False

    roots = sorted({dsu.find(x) for x in range(size)})
    for r in roots:
        if color.get(r, 0) == 0 and dfs(r):
            break
    if cycle_arcs is None:
        return None

    def tree_path(a: int, b: int) -> list[int]:
        prev = {a: a}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            if x == b:
                break
            for y in adj_shared[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        path = [b]
        while path[-1] != a:
            path.append(prev[path[-1]])
        return path[::-1]

    walk: list[int] = []
    k = len(cycle_arcs)
    for idx, (u, v) in enumerate(cycle_arcs):
        nxt_tail = cycle_arcs[(idx + 1) % k][0]
        if not walk:
            walk.append(u)
        walk.extend(tree_path(v, nxt_tail))
    # walk ends at the tail of the first arc, which is walk[0]
    return [_vertex(x, m) for x in walk]


def _require_forests(F: Subgraph, F2: Subgraph):
    if not is_forest(F) or not is_forest(F2):
        raise NotAForest("compatibility is only defined for forests")


def is_compatible(F: Subgraph, F2: Subgraph, check: bool = True) -> bool:
    """True iff U(F, F') has no directed cycle of length ≥ 3."""
    if check:
        _require_forests(F, F2)
    return find_long_cycle(F, F2) is None


def is_compatible_oracle(F: Subgraph, F2: Subgraph) -> bool:
    """Brute-force compatibility: no two distinct partial matchings M ⊆ F,
    M' ⊆ F' share both supports. Exponential; forests of ≤ 16 edges only."""
    _require_forests(F, F2)
    if len(F) > ORACLE_MAX_EDGES or len(F2) > ORACLE_MAX_EDGES:
        raise TooLarge(f"oracle limited to forests with <= {ORACLE_MAX_EDGES} edges")
    by_support: dict = {}
    for M in partial_matchings(F):
        by_support.setdefault(supports(M), set()).add(M)
    for M2 in partial_matchings(F2):
        found = by_support.get(supports(M2))
        if found and (len(found) > 1 or M2 not in found):
            return False
    return True
