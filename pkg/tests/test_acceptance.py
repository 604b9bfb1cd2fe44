"""Acceptance criteria, one test per criterion.

Each test records its criterion number, a title and a one-line detail; the
conftest hook prints a PASS/FAIL line per criterion at the end of the run.
Run directly with ``python3 tests/test_acceptance.py``.
"""
import json
import random
import sys
import time
from itertools import combinations
from math import comb
from pathlib import Path

import pytest

import cache
import oracles
from figures import FIG1_ARROWS, FIG3_TREES, FIG6_GRAPH, K32, K34, arrow_entries
from trianguloids import _kernels, io
from trianguloids.cli import run
from trianguloids.compat import is_compatible, is_compatible_oracle
from trianguloids.errors import NotFound
from trianguloids.graph import complete_graph, dual, enumerate_spanning_trees, ld, ld_minus, rd, rd_minus
from trianguloids.lattice import points_PGminus
from trianguloids.search import enumerate_triangulations, enumerate_trianguloids
from trianguloids.tiling3 import faces, pseudoline_segments, render_svg
from trianguloids.trianguloid import from_triangulation, path_lemma_violations
from trianguloids.triangulation import KINDS, collection, flip, phi, reconstruct, replaceable_edges

DATA = Path(__file__).parent / "data"
JOBS = 4


@pytest.fixture
def crit(record_property):
    """Record title/detail for the summary; returns a setter."""

    def set_(number, title, detail=""):
        record_property("criterion", number)
        record_property("title", title)
        record_property("detail", detail)

    return set_


@pytest.fixture(scope="module", autouse=True)
def warm_up():
    # compile the numba kernels outside the timed sections
    G = complete_graph(2, 2)
    masks = _kernels.pack(enumerate_spanning_trees(G))
    _kernels.compat_matrix(masks, G.n)


@pytest.fixture(scope="module")
def scale_results():
    """Both searches on every graph of criterion 4, with timings."""
    out = {}
    for name in cache.SCALE:
        G = cache.GRAPHS[name]
        t0 = time.perf_counter()
        tris = enumerate_triangulations(G, jobs=JOBS)
        t1 = time.perf_counter()
        tgs = enumerate_trianguloids(G)
        t2 = time.perf_counter()
        out[name] = {"G": G, "tris": tris, "tgs": tgs, "t_trees": t1 - t0, "t_axioms": t2 - t1}
    return out


def test_criterion_01_figure1_fidelity(crit, tmp_path):
    crit(1, "Figure-1 fidelity")
    t0 = time.perf_counter()
    tau = io.triangulation_from_json(io.read_json(DATA / "fig1.json"))
    out = tmp_path / "fig1_trianguloid.json"
    code = run(["convert", "--from", "triangulation", "--to", "trianguloid", "--in", str(DATA / "fig1.json"), "--out", str(out)])
    T = io.trianguloid_from_json(io.read_json(out))
    elapsed = time.perf_counter() - t0
    got = {k: set(v) for k, v in T.entries.items() if v}
    expected = arrow_entries(FIG1_ARROWS)
    spot1, spot2 = T.entry((1, 1, 1), 3), T.entry((3, 0, 0), 1)
    crit(1, "Figure-1 fidelity", f"{len(tau)} trees, {len(expected)} arrows matched={got == expected}, {elapsed:.3f}s")
    assert code == 0
    assert len(tau) == 10
    assert got == expected
    assert spot1 == {3, 4} and spot2 == {1, 2, 3, 4}
    assert elapsed < 1.0


def test_criterion_02_figure3_negative(crit):
    t0 = time.perf_counter()
    T = io.trianguloid_from_json(io.read_json(DATA / "fig3.json"))
    rep = T.report
    trees = [K32.subgraph(e) for e in FIG3_TREES.values()]
    fast = [is_compatible(a, b) for a, b in combinations(trees, 2)]
    slow = [is_compatible_oracle(a, b) for a, b in combinations(trees, 2)]
    elapsed = time.perf_counter() - t0
    crit(2, "Figure-3 negative", f"T1-T4={rep.t1},{rep.t2},{rep.t3},{rep.t4}; pairs fast={fast} oracle={slow}; {elapsed:.3f}s")
    assert rep.t1 and rep.t2 and rep.t3 and not rep.t4
    assert fast == [False] * 3 and slow == [False] * 3
    assert elapsed < 1.0


def test_criterion_03_compat_oracle_equivalence(crit):
    t0 = time.perf_counter()
    pairs = 0
    bad = []
    for m, n in [(2, 2), (2, 3), (3, 2)]:
        for G in oracles.connected_subgraphs(m, n):
            fs = oracles.forests(G)
            for F1 in fs:
                for F2 in fs:
                    pairs += 1
                    if is_compatible(F1, F2) != is_compatible_oracle(F1, F2):
                        bad.append((F1, F2))
    exhaustive = pairs
    rng = random.Random(20240601)
    for G in [K34, FIG6_GRAPH]:
        for _ in range(10_000):
            F1, F2 = oracles.random_forest(G, rng), oracles.random_forest(G, rng)
            pairs += 1
            if is_compatible(F1, F2) != is_compatible_oracle(F1, F2):
                bad.append((F1, F2))
    elapsed = time.perf_counter() - t0
    crit(3, "compatibility oracle equivalence",
         f"{exhaustive} exhaustive + {pairs - exhaustive} random pairs, {len(bad)} disagreements, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 60


def test_criterion_04_searches_agree(crit, scale_results):
    parts = []
    bad = []
    total = 0.0
    for name, r in scale_results.items():
        total += r["t_trees"] + r["t_axioms"]
        mapped = sorted((from_triangulation(t) for t in r["tris"]), key=lambda T: T.key())
        if len(r["tris"]) != len(r["tgs"]) or mapped != r["tgs"]:
            bad.append(name)
        parts.append(f"{name}={len(r['tris'])}/{len(r['tgs'])}")
    k22_oracle = len(oracles.triangulations_by_pairing(cache.GRAPHS["K22"]))
    crit(4, "tree search = axiom search", f"{' '.join(parts)}; K22 oracle={k22_oracle}; jobs={JOBS}; {total:.1f}s")
    assert not bad
    assert len(scale_results["K22"]["tris"]) == 2 == k22_oracle
    assert total < 600


def test_criterion_05_cardinality(crit):
    bad = []
    checked = 0
    for m in range(1, 5):
        for n in range(1, 5):
            G = complete_graph(m, n)
            want = comb(n + m - 2, m - 1)
            for tau in enumerate_triangulations(G, limit=200, jobs=JOBS):
                checked += 1
                if len(tau) != want:
                    bad.append((m, n, len(tau)))
    crit(5, "cardinality law", f"{checked} triangulations of K_m,n (m,n<=4, limit 200), {len(bad)} exceptions")
    assert not bad


def _bijective(objs, f, target):
    images = [f(x) for x in objs]
    return len(set(images)) == len(images) and set(images) == set(target)


def _pm_support(F):
    L = tuple(i for i, d in enumerate(F.left_degrees(), start=1) if d)
    R = tuple(j for j, d in enumerate(F.right_degrees(), start=1) if d)
    return (L, R)


def test_criterion_06_five_bijections(crit, scale_results):
    bad = []
    checked = 0
    for name, r in scale_results.items():
        G = r["G"]
        pm_minus, pm_minus_dual = oracles.points_PGminus(G), oracles.points_PGminus(dual(G))
        pg, pg_dual = oracles.points_PG(G), oracles.points_PG(dual(G))
        supports = oracles.ij_supports(G)
        for tau in r["tris"]:
            trees = list(tau.trees.values())
            # collections are filtered from all subforests, independent of the
            # library's own semi-matching generators
            fs = tau.forests
            rsms = [F for F in fs if all(d == 1 for d in F.right_degrees())]
            lsms = [F for F in fs if all(d == 1 for d in F.left_degrees())]
            pms = [F for F in fs if max(F.left_degrees() + F.right_degrees(), default=0) <= 1]
            ok = (
                _bijective(trees, ld_minus, pm_minus)
                and _bijective(trees, rd_minus, pm_minus_dual)
                and _bijective(rsms, ld, pg)
                and _bijective(lsms, rd, pg_dual)
                and _bijective(pms, _pm_support, supports)
            )
            checked += 1
            if not ok:
                bad.append((name, tau))
    crit(6, "five degree-vector bijections", f"{checked} triangulations, {len(bad)} exceptions")
    assert not bad


def test_criterion_07_reconstruction(crit):
    bad = []
    checked = 0
    t0 = time.perf_counter()
    for name in ("K22", "K23", "FIG6"):
        G = cache.GRAPHS[name]
        for tau in cache.triangulations(name):
            for kind in KINDS:
                checked += 1
                if reconstruct(G, collection(tau, kind), kind) != tau:
                    bad.append((name, kind, tau))
    crit(7, "reconstruction from collections",
         f"{checked} (triangulation, kind) pairs, {len(bad)} exceptions, {time.perf_counter() - t0:.1f}s")
    assert not bad


def test_criterion_08_phi_determines_tau(crit, scale_results):
    parts = []
    collisions = 0
    for name, r in scale_results.items():
        keys = [tuple(sorted(phi(t).items())) for t in r["tris"]]
        collisions += len(keys) - len(set(keys))
        parts.append(f"{name}:{len(set(keys))}/{len(keys)}")
    crit(8, "phi determines tau", f"distinct phi maps {' '.join(parts)}; {collisions} collisions")
    assert collisions == 0


def test_criterion_09_flips(crit):
    flips = 0
    failures = []
    for name in ("K23", "K33"):
        for tau in cache.triangulations(name):
            for b, T in tau:
                for e in replaceable_edges(T):
                    try:
                        b2 = flip(tau, b, e)
                    except NotFound as exc:
                        failures.append((name, b, e, str(exc)))
                        continue
                    if (T - tau[b2]).edges != (e,):
                        failures.append((name, b, e, "wrong partner"))
                    flips += 1
    crit(9, "flips of replaceable edges", f"{flips} flips over K23 and K33, {len(failures)} failures")
    assert flips > 0 and not failures


def test_criterion_10_path_lemma(crit, scale_results):
    from trianguloids.trianguloid import _tree_paths, tree_of

    triples = 0
    bad = []
    for name, r in scale_results.items():
        for T in r["tgs"]:
            for b in points_PGminus(T.graph):
                triples += sum(len(p) for p in _tree_paths(tree_of(T, b, check=False)))
                v = path_lemma_violations(T, b)
                if v:
                    bad.append((name, b, v[0]))
    crit(10, "path lemma", f"{triples} (trianguloid, point, path, t) checks, {len(bad)} exceptions")
    assert triples > 0 and not bad


def test_criterion_11_tiling(crit, scale_results):
    fig1 = from_triangulation(io.triangulation_from_json(io.read_json(DATA / "fig1.json")))
    instances = list(scale_results["K33"]["tgs"]) + [fig1]
    bad = []
    for T in instances:
        n = T.graph.n
        kinds = {}
        for f in faces(T):
            kinds[f.kind] = kinds.get(f.kind, 0) + 1
        if kinds != {"lozenge": comb(n, 2), "upright": n}:
            bad.append(("faces", kinds))
        lines = {}
        for s in pseudoline_segments(T):
            lines.setdefault(s.label, set()).update({s.start, s.end})
        if any(len(lines[j] & lines[k]) != 1 for j, k in combinations(sorted(lines), 2)):
            bad.append(("crossings", lines))
    svg = render_svg(fig1)
    again = render_svg(from_triangulation(io.triangulation_from_json(json.loads((DATA / "fig1.json").read_text()))))
    deterministic = svg == again and svg.encode() == again.encode()
    crit(11, "m=3 tiling and pseudolines",
         f"{len(instances)} trianguloids, {len(bad)} exceptions, render deterministic={deterministic}")
    assert not bad and deterministic


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-rA"]))
