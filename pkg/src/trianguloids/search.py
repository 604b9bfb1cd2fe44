"""Exhaustive enumeration of triangulations (tree search) and of
trianguloids (axiom search) for small graphs.

The two searches share no code beyond lattice points: the tree search
relies on forest compatibility, the axiom search only on the local axioms.
Agreement of their outputs is therefore a meaningful cross-check.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import _kernels
from .errors import LimitExceeded, NotFound
from .graph import BipartiteGraph, Subgraph, _bits, enumerate_spanning_trees, ld_minus
from .lattice import Point, points_PG, points_PGminus, shift
from .trianguloid import Trianguloid, hexagons
from .triangulation import Triangulation, flip, phi, replaceable_edges


# tree search

class _TreeSearch:
    """Backtracking over P_G⁻ points, one spanning tree per point.

    Compatibility rows are computed lazily through the batch kernel and kept
    as Python ints (bit t set when tree t is compatible)."""

    def __init__(self, G: BipartiteGraph):
        self.G = G
        self.trees = enumerate_spanning_trees(G)
        self.masks = _kernels.pack(self.trees)
        buckets: dict[Point, list[int]] = {b: [] for b in points_PGminus(G)}
        for t, T in enumerate(self.trees):
            buckets[ld_minus(T)].append(t)
        # fail-first: fewest candidates, ties broken by point order
        self.order = sorted(buckets, key=lambda b: (len(buckets[b]), b))
        self.cands = [buckets[b] for b in self.order]
        self.cand_masks = [sum(1 << t for t in c) for c in self.cands]
        self._rows: dict[int, int] = {}

    def row(self, t: int) -> int:
        r = self._rows.get(t)
        if r is None:
            bools = _kernels.compat_row(self.masks, t, self.G.n)
            packed = np.packbits(bools, bitorder="little").tobytes()
            r = int.from_bytes(packed, "little")
            self._rows[t] = r
        return r

    def prefixes(self, depth: int) -> list[tuple[int, ...]]:
        """Consistent assignments of the first ``depth`` points, DFS order."""
        out: list[tuple[int, ...]] = []
        full = (1 << len(self.trees)) - 1

        def rec(level, allowed, chosen):
            if level == min(depth, len(self.order)):
                out.append(tuple(chosen))
                return
            for t in self.cands[level]:
                if (allowed >> t) & 1:
                    nxt = allowed & self.row(t)
                    if self._forward_ok(level + 1, nxt):
                        chosen.append(t)
                        rec(level + 1, nxt, chosen)
                        chosen.pop()

        rec(0, full, [])
        return out

    def _forward_ok(self, level: int, allowed: int) -> bool:
        cm = self.cand_masks
        for k in range(level, len(cm)):
            if not cm[k] & allowed:
                return False
        return True

    def run(self, prefix: tuple[int, ...], limit: int | None) -> list[tuple[int, ...]]:
        allowed = (1 << len(self.trees)) - 1
        for t in prefix:
            allowed &= self.row(t)
        out: list[tuple[int, ...]] = []
        chosen = list(prefix)
        L = len(self.order)

        def rec(level, allowed):
            if level == L:
                out.append(tuple(chosen))
                return limit is not None and len(out) >= limit
            for t in self.cands[level]:
                if (allowed >> t) & 1:
                    nxt = allowed & self.row(t)
                    if self._forward_ok(level + 1, nxt):
                        chosen.append(t)
                        stop = rec(level + 1, nxt)
                        chosen.pop()
                        if stop:
                            return True
            return False

        rec(len(prefix), allowed)
        return out

    def to_triangulation(self, sol: tuple[int, ...]) -> Triangulation:
        return Triangulation(self.G, {b: self.trees[t] for b, t in zip(self.order, sol)})


_WORKER: _TreeSearch | None = None


def _worker_init(G: BipartiteGraph):
    global _WORKER
    _WORKER = _TreeSearch(G)


def _worker_run(args):
    prefix, limit = args
    return _WORKER.run(prefix, limit)


def _check_limit(found: int, limit: int | None, strict: bool, what: str):
    if strict and limit is not None and found > limit:
        raise LimitExceeded(f"more than {limit} {what}")


def enumerate_triangulations(
    G: BipartiteGraph, limit: int | None = None, jobs: int = 1, strict: bool = False
) -> list[Triangulation]:
    """All triangulations of Q_G, canonically sorted.

    With ``limit`` the search stops after that many results (the first ones
    in search order, then sorted), so the output does not depend on
    ``jobs``. With ``strict=True`` exceeding the limit raises LimitExceeded.
    """
    search = _TreeSearch(G)
    cap = None if limit is None else limit + (1 if strict else 0)
    if jobs <= 1 or len(search.order) < 3:
        sols = search.run((), cap)
    else:
        prefixes = search.prefixes(2)
        # with a cap, prefixes go out in ordered batches so the pool stops
        # once the first `cap` solutions (in prefix order) are known
        batch = len(prefixes) if cap is None else 4 * jobs
        sols = []
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init, initargs=(G,)) as ex:
            for start in range(0, len(prefixes), batch):
                chunk = prefixes[start : start + batch]
                for part in ex.map(_worker_run, [(p, cap) for p in chunk]):
                    sols.extend(part)
                if cap is not None and len(sols) >= cap:
                    break
        if cap is not None:
            sols = sols[:cap]
    _check_limit(len(sols), limit, strict, "triangulations")
    result = [search.to_triangulation(s) for s in sols]
    result.sort(key=Triangulation.key)
    return result


# axiom search

class _AxiomSearch:
    """Assign 𝕋(→_i a) for all i at each a ∈ P_G in lex order.

    Pruning at each point: the sets partition [n̄] with sizes a_i and j̄ only
    in blocks i ∈ N_j̄ (T1′, T2′); containment against already assigned
    neighbours a ± (e_i − e_j) (T3′); every hexagon is checked once its
    lex-last point is assigned (T4′)."""

    def __init__(self, G: BipartiteGraph):
        self.G = G
        m, n = G.m, G.n
        self.points = points_PG(G)
        self.index = {a: k for k, a in enumerate(self.points)}
        self.full = (1 << n) - 1
        PGm = set(points_PGminus(G))

        # T3′ links: for point k and direction i, earlier points whose entry
        # must be a subset (lower) or superset (upper) of ours
        self.lower: list[list[list[int]]] = []
        self.upper: list[list[list[int]]] = []
        for k, a in enumerate(self.points):
            lo_i, up_i = [], []
            for i in range(1, m + 1):
                lo, up = [], []
                if a[i - 1] > 0:
                    for j in range(1, m + 1):
                        if j == i:
                            continue
                        x = shift(a, minus=i, plus=j)  # x + e_i - e_j = a
                        if x[i - 1] > 0 and self.index.get(x, k) < k:
                            lo.append(self.index[x])
                        y = shift(a, plus=i, minus=j)
                        if self.index.get(y, k) < k:
                            up.append(self.index[y])
                lo_i.append(lo)
                up_i.append(up)
            self.lower.append(lo_i)
            self.upper.append(up_i)

        # hexagons, keyed by the index of their lex-last point; each entry
        # 𝕋(p →_d ·) is stored as (index of p + e_d, d)
        self.hex_at: list[list[tuple]] = [[] for _ in self.points]
        for c, i, j, k in hexagons(G):
            ci, ck, cj = shift(c, plus=i), shift(c, plus=k), shift(c, plus=j)

            def ref(p, d):
                return (self.index[shift(p, plus=d)], d)

            pts = [shift(ci, plus=j), shift(ck, plus=j), shift(ci, plus=k)]
            last = max(self.index[p] for p in pts)
            if cj in PGm:
                self.hex_at[last].append(
                    (ref(ci, j), ref(ck, j), (ref(ci, k), ref(cj, k)), (ref(cj, i), ref(ck, i)))
                )
            else:
                self.hex_at[last].append((ref(ci, j), ref(ck, j), None, None))

    def run(self, limit: int | None) -> list[list[list[int]]]:
        G = self.G
        m = G.m
        rows = G.rows
        P = len(self.points)
        assign: list[list[int] | None] = [None] * P
        out = []

        def hex_ok(k):
            for (p1, d1), (p2, d2), eq1, eq2 in self.hex_at[k]:
                if assign[p1][d1 - 1] == assign[p2][d2 - 1]:
                    continue
                if eq1 is None:
                    return False
                (q1, e1), (q2, e2) = eq1
                (r1, f1), (r2, f2) = eq2
                if assign[q1][e1 - 1] != assign[q2][e2 - 1] or assign[r1][f1 - 1] != assign[r2][f2 - 1]:
                    return False
            return True

        def choose(k, a, i, used, lows, ups, sets):
            if i > m:
                assign[k] = list(sets)
                if hex_ok(k):
                    if rec(k + 1):
                        return True
                assign[k] = None
                return False
            size = a[i - 1]
            lo, up = lows[i - 1], ups[i - 1]
            if size == 0:
                if lo:
                    return False
                sets.append(0)
                stop = choose(k, a, i + 1, used, lows, ups, sets)
                sets.pop()
                return stop
            pool = up & rows[i - 1] & ~used
            if lo & ~pool or lo.bit_count() > size:
                return False
            extra = pool & ~lo
            need = size - lo.bit_count()
            free = list(_bits(extra))
            if len(free) < need:
                return False
            for combo in combinations(free, need):
                s = lo
                for j in combo:
                    s |= 1 << (j - 1)
                nused = used | s
                # every still-free j̄ must fit into some later block
                rest = self.full & ~nused
                later = 0
                for i2 in range(i + 1, m + 1):
                    if a[i2 - 1]:
                        later |= rows[i2 - 1] & ups[i2 - 1]
                if rest & ~later:
                    continue
                sets.append(s)
                stop = choose(k, a, i + 1, nused, lows, ups, sets)
                sets.pop()
                if stop:
                    return True
            return False

        def rec(k):
            if k == P:
                out.append([list(s) for s in assign])
                return limit is not None and len(out) >= limit
            a = self.points[k]
            lows, ups = [], []
            for i in range(1, m + 1):
                lo = 0
                for x in self.lower[k][i - 1]:
                    lo |= assign[x][i - 1]
                up = self.full
                for y in self.upper[k][i - 1]:
                    up &= assign[y][i - 1]
                lows.append(lo)
                ups.append(up)
            return choose(k, a, 1, 0, lows, ups, [])

        rec(0)
        return out

    def to_trianguloid(self, sol) -> Trianguloid:
        entries = {}
        for a, sets in zip(self.points, sol):
            for i, s in enumerate(sets, start=1):
                if a[i - 1] > 0:
                    entries[(shift(a, minus=i), i)] = s
        return Trianguloid(self.G, entries)


def enumerate_trianguloids(
    G: BipartiteGraph, limit: int | None = None, strict: bool = False
) -> list[Trianguloid]:
    """All maps Γ_G → 2^[n̄] satisfying T1′–T4′, canonically sorted."""
    search = _AxiomSearch(G)
    cap = None if limit is None else limit + (1 if strict else 0)
    sols = search.run(cap)
    _check_limit(len(sols), limit, strict, "trianguloids")
    result = [search.to_trianguloid(s) for s in sols]
    result.sort(key=Trianguloid.key)
    return result


# reports and probes

@dataclass
class EnumerationReport:
    graph: dict
    method: str
    count: int
    elapsed: float
    items: list = field(default_factory=list)
    truncated: bool = False

    def as_dict(self, include_items: bool = False) -> dict:
        d = {
            "graph": self.graph,
            "method": self.method,
            "count": self.count,
            "elapsed_seconds": round(self.elapsed, 6),
            "truncated": self.truncated,
        }
        if include_items:
            d["items"] = self.items
        return d


def report(G: BipartiteGraph, method: str, limit: int | None = None, jobs: int = 1) -> EnumerationReport:
    """Run one search method and wrap the result with timing."""
    from .io import graph_to_json

    start = time.perf_counter()
    if method == "trees":
        items = enumerate_triangulations(G, limit=limit, jobs=jobs)
    elif method == "axioms":
        items = enumerate_trianguloids(G, limit=limit)
    else:
        raise ValueError(f"unknown method {method!r}")
    elapsed = time.perf_counter() - start
    truncated = limit is not None and len(items) >= limit
    return EnumerationReport(graph_to_json(G), method, len(items), elapsed, items, truncated)


def phi_injectivity(G: BipartiteGraph, triangulations: list[Triangulation] | None = None):
    """Whether φ_τ separates the triangulations; returns (ok, witness pair)."""
    if triangulations is None:
        triangulations = enumerate_triangulations(G)
    seen: dict[tuple, Triangulation] = {}
    for tau in triangulations:
        key = tuple(sorted(phi(tau).items()))
        if key in seen and seen[key] != tau:
            return False, (seen[key], tau)
        seen[key] = tau
    return True, None


@dataclass
class FlipProbe:
    triangulations: int
    flips: int
    failures: list
    connected: int

    def as_dict(self) -> dict:
        return {
            "triangulations": self.triangulations,
            "flips": self.flips,
            "failures": len(self.failures),
            "flip_graph_connected": self.connected,
        }


def flip_probe(triangulations: list[Triangulation]) -> FlipProbe:
    """Flip every replaceable edge of every tree of every τ.

    Records the number of flips, any NotFound failures, and how many τ
    have a connected flip graph on their trees. Connectivity is recorded,
    not required."""
    flips = 0
    failures = []
    connected = 0
    for tau in triangulations:
        adj: dict[Point, set] = {b: set() for b in tau.points}
        for b, T in tau:
            for e in replaceable_edges(T):
                try:
                    b2 = flip(tau, b, e)
                except NotFound as exc:
                    failures.append((tau, b, e, str(exc)))
                    continue
                flips += 1
                adj[b].add(b2)
                adj[b2].add(b)
        start = tau.points[0]
        seen = {start}
        stack = [start]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        connected += len(seen) == len(tau)
    return FlipProbe(len(triangulations), flips, failures, connected)
