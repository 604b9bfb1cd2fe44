"""Trianguloids: maps from the edges of Γ_G to subsets of the right vertices.

An entry is addressed by its source point and direction: ``(b, i)`` stands
for the step ``b →_i b + e_i``. Internally each set is a bitmask over the
right vertices (bit ``j - 1`` for j̄). Steps into a point a with a_i = 0 do
not exist and read as the empty set.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import (
    InconsistentColoring,
    NotComplete,
    NotPreTrianguloid,
    NotTrianguloid,
    TrianguloidError,
    ValidationFailed,
)
from .graph import BipartiteGraph, Subgraph, _bits, mask_to_set, set_to_mask
from .lattice import Point, compositions, gamma_edges, lambda_edges, points_PG, points_PGminus, shift
from .triangulation import Triangulation, rsm_at, validate

Key = tuple[Point, int]


class Trianguloid:
    """A map Γ_G → 2^[n̄]. Axioms are checked on demand, not at construction."""

    def __init__(self, graph: BipartiteGraph, entries: Mapping[Key, Iterable[int] | int]):
        self.graph = graph
        norm: dict[Key, int] = {}
        for (b, i), val in entries.items():
            mask = val if isinstance(val, int) else set_to_mask(val)
            norm[(tuple(int(x) for x in b), int(i))] = mask
        self._entries = dict(sorted(norm.items()))

    @property
    def entries(self) -> dict[Key, frozenset[int]]:
        return {k: mask_to_set(v) for k, v in self._entries.items()}

    def mask(self, b: Point, i: int) -> int:
        """Bitmask of 𝕋(b →_i ·); absent steps read as 0."""
        return self._entries.get((tuple(b), i), 0)

    def entry(self, b: Point, i: int) -> frozenset[int]:
        return mask_to_set(self.mask(b, i))

    def into(self, a: Point, i: int) -> int:
        """Bitmask of 𝕋(→_i a)."""
        if a[i - 1] <= 0:
            return 0
        return self.mask(shift(a, minus=i), i)

    def key(self) -> tuple:
        return tuple(self._entries.items())

    def __eq__(self, other):
        if not isinstance(other, Trianguloid):
            return NotImplemented
        return self.graph == other.graph and self.key() == other.key()

    def __hash__(self):
        return hash((self.graph, self.key()))

    def __repr__(self):
        return f"Trianguloid(m={self.graph.m}, n={self.graph.n}, entries={len(self._entries)})"

    @cached_property
    def report(self) -> "AxiomReport":
        return check_axioms(self)


class Violation(NamedTuple):
    axiom: str
    location: tuple
    details: str


@dataclass(frozen=True)
class AxiomReport:
    t1: bool
    t2: bool
    t3: bool
    t4: bool
    partition: bool
    domain: bool
    violations: list[Violation] = field(default_factory=list)

    @property
    def is_pre(self) -> bool:
        return self.domain and self.t1 and self.t2 and self.t3

    @property
    def is_trianguloid(self) -> bool:
        return self.is_pre and self.t4

    def as_dict(self) -> dict:
        return {
            "t1": self.t1,
            "t2": self.t2,
            "t3": self.t3,
            "t4": self.t4,
            "partition": self.partition,
            "domain": self.domain,
            "is_pre": self.is_pre,
            "is_trianguloid": self.is_trianguloid,
            "violations": [
                {"axiom": v.axiom, "location": _jsonable(v.location), "details": v.details}
                for v in self.violations
            ],
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _fmt(mask: int) -> str:
    return "{" + ",".join(str(j) for j in _bits(mask)) + "}"


def hexagons(G: BipartiteGraph) -> list[tuple[Point, int, int, int]]:
    """All (c, i, j, k) with i < k, j ∉ {i, k}, and c + e_i, c + e_k ∈ P_G⁻."""
    m = G.m
    pts = set(points_PGminus(G))
    out = []
    if G.n < 2:
        return out
    for c in compositions(G.n - 2, m):
        for i in range(1, m + 1):
            if shift(c, plus=i) not in pts:
                continue
            for k in range(i + 1, m + 1):
                if shift(c, plus=k) not in pts:
                    continue
                for j in range(1, m + 1):
                    if j != i and j != k:
                        out.append((c, i, j, k))
    return out


def check_axioms(T: Trianguloid) -> AxiomReport:
    """Evaluate T1′–T4′ and the partition property; violations are data."""
    G = T.graph
    m, n = G.m, G.n
    full = (1 << n) - 1
    violations: list[Violation] = []
    PG = points_PG(G)
    PG_set = set(PG)
    PGm = set(points_PGminus(G))

    domain_keys = {(e.source, e.direction) for e in gamma_edges(G)}
    extra = sorted(set(T._entries) - domain_keys)
    for b, i in extra:
        violations.append(Violation("domain", (b, i), "entry outside the edges of Γ_G"))
    bad_bits = [(k, v) for k, v in T._entries.items() if v & ~full]
    for k, v in bad_bits:
        violations.append(Violation("domain", k, f"set {_fmt(v)} not inside 1..{n}"))
    domain = not extra and not bad_bits

    t1 = True
    for b, i in sorted(domain_keys):
        a = shift(b, plus=i)
        size = T.mask(b, i).bit_count()
        if size != a[i - 1]:
            t1 = False
            violations.append(Violation("T1", (b, i), f"|set|={size}, expected {a[i - 1]}"))

    t2 = True
    partition = True
    for a in PG:
        sets = [T.into(a, i) for i in range(1, m + 1)]
        union = 0
        disjoint = True
        for s in sets:
            if union & s:
                disjoint = False
            union |= s
        if not disjoint or union != full:
            partition = False
            violations.append(Violation("partition", (a,), f"sets {[_fmt(s) for s in sets]}"))
        for j in range(1, n + 1):
            bit = 1 << (j - 1)
            if not any(sets[i - 1] & bit for i in G.nbhd[j - 1]):
                t2 = False
                violations.append(Violation("T2", (a, j), f"{j} not covered by any i in N_{j}"))

    t3 = True
    for a in PG:
        for i in range(1, m + 1):
            if a[i - 1] <= 0:
                continue
            lo = T.into(a, i)
            for j in range(1, m + 1):
                if j == i:
                    continue
                a2 = shift(a, plus=i, minus=j)
                if a2 in PG_set:
                    hi = T.into(a2, i)
                    if lo & ~hi:
                        t3 = False
                        violations.append(
                            Violation("T3", (a, i, j), f"{_fmt(lo)} not inside {_fmt(hi)} at {a2}")
                        )

    t4 = True
    for c, i, j, k in hexagons(G):
        ci, ck, cj = shift(c, plus=i), shift(c, plus=k), shift(c, plus=j)
        if T.mask(ci, j) == T.mask(ck, j):
            continue
        if cj not in PGm:
            t4 = False
            violations.append(Violation("T4", (c, i, j, k), f"{cj} is not in P_G-"))
            continue
        if T.mask(ci, k) != T.mask(cj, k) or T.mask(cj, i) != T.mask(ck, i):
            t4 = False
            violations.append(
                Violation(
                    "T4",
                    (c, i, j, k),
                    f"T(c+e_i->k)={_fmt(T.mask(ci, k))} T(c+e_j->k)={_fmt(T.mask(cj, k))} "
                    f"T(c+e_j->i)={_fmt(T.mask(cj, i))} T(c+e_k->i)={_fmt(T.mask(ck, i))}",
                )
            )
    return AxiomReport(t1, t2, t3, t4, partition, domain, violations)


def from_triangulation(tau: Triangulation) -> Trianguloid:
    """𝕋_τ(→_i a) = N_i(F_τ(a)), F_τ(a) the right semi-matching with LD = a."""
    G = tau.graph
    entries: dict[Key, int] = {}
    for a in points_PG(G):
        F = rsm_at(tau, a)
        for i in range(1, G.m + 1):
            if a[i - 1] > 0:
                entries[(shift(a, minus=i), i)] = F.rows[i - 1]
    return Trianguloid(G, entries)


def tree_of(T: Trianguloid, b: Point, check: bool = True) -> Subgraph:
    """T_𝕋(b) = {(i, j̄) : j̄ ∈ 𝕋(b →_i ·)}."""
    if check and not T.report.is_pre:
        raise NotPreTrianguloid("tree_of needs a map satisfying T1'-T3'")
    G = T.graph
    b = tuple(b)
    rows = tuple(T.mask(b, i) for i in range(1, G.m + 1))
    return Subgraph(rows, G)


def to_triangulation(T: Trianguloid) -> Triangulation:
    if not T.report.is_trianguloid:
        first = T.report.violations[0] if T.report.violations else None
        raise NotTrianguloid(f"axioms fail: {first}")
    G = T.graph
    trees = [tree_of(T, b, check=False) for b in points_PGminus(G)]
    try:
        tau = validate(G, trees)
    except TrianguloidError as exc:
        raise ValidationFailed(f"trees of a trianguloid do not form a triangulation: {exc}") from exc
    if from_triangulation(tau) != T:
        raise ValidationFailed("round trip through the triangulation changed the trianguloid")
    return tau


@dataclass(frozen=True)
class EdgeColoring:
    graph: BipartiteGraph
    colors: dict  # (source, target) -> j

    def key(self) -> tuple:
        return tuple(sorted(self.colors.items()))

    def __eq__(self, other):
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return self.graph == other.graph and self.key() == other.key()

    def __hash__(self):
        return hash((self.graph, self.key()))


def encode_coloring(T: Trianguloid) -> EdgeColoring:
    """ℰ_𝕋: colour b → b + e_i − e_j by the j̄ with
    𝕋(b′ →_i ·) = 𝕋(b →_i ·) ⊔ {j̄}."""
    G = T.graph
    if not G.is_complete():
        raise NotComplete("edge colourings are only defined for complete bipartite graphs")
    colors = {}
    for e in lambda_edges(G):
        lo, hi = T.mask(e.source, e.i), T.mask(e.target, e.i)
        diff = hi & ~lo
        if lo & ~hi or diff.bit_count() != 1:
            raise NotPreTrianguloid(
                f"step {e.source}->{e.target} changes {_fmt(lo)} to {_fmt(hi)}, not by one element"
            )
        colors[(e.source, e.target)] = diff.bit_length()
    return EdgeColoring(G, dict(sorted(colors.items())))


def decode_coloring(G: BipartiteGraph, coloring: EdgeColoring | Mapping) -> Trianguloid:
    """Rebuild 𝕋 from its edge colouring.

    For each direction i the entry at the corner (n−1)e_i is [n̄]; entries at
    other points follow by walking Λ-edges that change coordinate i, adding
    or removing one colour per step. Every edge is checked, and the result
    is re-encoded and compared with the input. Colourings that decode to a
    map violating T1'-T3' are rejected as well.
    """
    if not G.is_complete():
        raise NotComplete("edge colourings are only defined for complete bipartite graphs")
    colors = dict(coloring.colors if isinstance(coloring, EdgeColoring) else coloring)
    colors = {(tuple(s), tuple(t)): int(c) for (s, t), c in colors.items()}
    m, n = G.m, G.n
    edges = lambda_edges(G)
    expected = {(e.source, e.target) for e in edges}
    if set(colors) != expected:
        missing = sorted(expected - set(colors))
        extra = sorted(set(colors) - expected)
        raise InconsistentColoring(f"colouring domain mismatch: missing={missing[:3]} extra={extra[:3]}")
    for key, c in colors.items():
        if not 1 <= c <= n:
            raise InconsistentColoring(f"colour {c} of edge {key} outside 1..{n}")

    by_dir: dict[int, dict[Point, list]] = {i: {} for i in range(1, m + 1)}
    for e in edges:
        # e raises coordinate i: entry(target, i) = entry(source, i) + colour
        c = colors[(e.source, e.target)]
        by_dir[e.i].setdefault(e.source, []).append((e.target, c, +1))
        by_dir[e.i].setdefault(e.target, []).append((e.source, c, -1))

    entries: dict[Key, int] = {}
    full = (1 << n) - 1
    for i in range(1, m + 1):
        corner = tuple((n - 1) if k == i else 0 for k in range(1, m + 1))
        known = {corner: full}
        queue = deque([corner])
        while queue:
            b = queue.popleft()
            cur = known[b]
            for b2, c, sign in by_dir[i].get(b, ()):
                bit = 1 << (c - 1)
                if sign > 0:
                    if cur & bit:
                        raise InconsistentColoring(f"colour {c} on {b}->{b2} already present at {b}")
                    nxt = cur | bit
                else:
                    if not cur & bit:
                        raise InconsistentColoring(f"colour {c} on {b2}->{b} missing at {b}")
                    nxt = cur & ~bit
                if b2 in known:
                    if known[b2] != nxt:
                        raise InconsistentColoring(
                            f"direction {i}: {b2} reached with {_fmt(known[b2])} and {_fmt(nxt)}"
                        )
                else:
                    known[b2] = nxt
                    queue.append(b2)
        for b, mask in known.items():
            entries[(b, i)] = mask
    T = Trianguloid(G, entries)
    try:
        again = encode_coloring(T)
    except NotPreTrianguloid as exc:
        raise InconsistentColoring(str(exc)) from exc
    if again.colors != colors:
        raise InconsistentColoring("decoded map does not reproduce the colouring")
    if not T.report.is_pre:
        raise InconsistentColoring(f"decoded map is not a pre-trianguloid: {T.report.violations[0]}")
    return T


def label_support(T: Trianguloid, j: int) -> list[Point]:
    """Points a = b + e_i (b ∈ P_G⁻) whose incoming step from b carries j̄."""
    G = T.graph
    bit = 1 << (j - 1)
    out = set()
    for b in points_PGminus(G):
        for i in range(1, G.m + 1):
            if T.mask(b, i) & bit:
                out.add(shift(b, plus=i))
    return sorted(out)


def _tree_paths(tree: Subgraph):
    """Simple paths j̄_1, i_1, …, j̄_r, i_r in a tree (starting at a right
    vertex and ending at a left vertex), as lists of (j̄_s, i_s) pairs."""
    adj_left = [list(_bits(r)) for r in tree.rows]
    adj_right: dict[int, list[int]] = {}
    for i, j in tree.edges:
        adj_right.setdefault(j, []).append(i)

    def walk(j, seen_l, seen_r, acc):
        for i in adj_right.get(j, ()):
            if i in seen_l:
                continue
            path = acc + [(j, i)]
            yield path
            for j2 in adj_left[i - 1]:
                if j2 not in seen_r:
                    yield from walk(j2, seen_l | {i}, seen_r | {j2}, path)

    for j in sorted(adj_right):
        yield from walk(j, frozenset(), frozenset({j}), [])


def path_lemma_violations(T: Trianguloid, b: Point) -> list[tuple]:
    """Check j̄_s ∈ 𝕋(→_{i_s} b + e_{i_t}) for every simple path
    j̄_1, i_1, …, j̄_r, i_r of T_𝕋(b) and all s ≤ t; return failures."""
    b = tuple(b)
    tree = tree_of(T, b, check=False)
    bad = []
    for path in _tree_paths(tree):
        t = len(path) - 1
        target = shift(b, plus=path[t][1])
        for s in range(t + 1):
            js, is_ = path[s]
            if not T.into(target, is_) & (1 << (js - 1)):
                bad.append((tuple(path), s, t))
    return bad
