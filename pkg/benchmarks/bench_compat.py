"""Compare the numba and numpy compatibility kernels.

Two measurements:

* kernel: ``compat_row`` for a sample of trees against all spanning trees of
  K_{m,n}, both backends in this process (numba compiled beforehand);
* search: full ``enumerate_triangulations`` in a child process per backend,
  the numpy one started with TRIANGULOIDS_NO_NUMBA=1.

Usage: python3 benchmarks/bench_compat.py [--graphs 3x3,3x4,4x4] [--rows 64]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from trianguloids import _kernels
from trianguloids.graph import complete_graph, enumerate_spanning_trees

CHILD = """
import json, time
from trianguloids import _kernels
from trianguloids.graph import complete_graph
from trianguloids.search import enumerate_triangulations
G = complete_graph({m}, {n})
enumerate_triangulations(complete_graph(2, 2))  # warm-up / JIT
t = time.perf_counter()
count = len(enumerate_triangulations(G, limit={limit}))
print(json.dumps({{"backend": _kernels.BACKEND, "count": count, "seconds": time.perf_counter() - t}}))
"""


def bench_kernel(m: int, n: int, rows: int, repeat: int) -> dict:
    trees = enumerate_spanning_trees(complete_graph(m, n))
    masks = _kernels.pack(trees)
    rng = np.random.default_rng(0)
    picks = rng.choice(len(trees), size=min(rows, len(trees)), replace=False)
    out = {"graph": f"K{m},{n}", "trees": len(trees), "rows": len(picks)}
    backends = ["numpy"] + (["numba"] if _kernels.njit is not None else [])
    results = {}
    for b in backends:
        _kernels.compat_row(masks, 0, n, b)  # compile / warm caches
        t = min(timeit.repeat(lambda: [_kernels.compat_row(masks, int(k), n, b) for k in picks], number=1, repeat=repeat))
        results[b] = [_kernels.compat_row(masks, int(k), n, b) for k in picks]
        out[f"{b}_s"] = t
    if len(results) == 2:
        out["agree"] = all((x == y).all() for x, y in zip(results["numpy"], results["numba"]))
        out["speedup"] = out["numpy_s"] / out["numba_s"]
    return out


def bench_search(m: int, n: int, limit, force_numpy: bool) -> dict:
    env = dict(os.environ)
    env.pop("TRIANGULOIDS_NO_NUMBA", None)
    if force_numpy:
        env["TRIANGULOIDS_NO_NUMBA"] = "1"
    code = CHILD.format(m=m, n=n, limit=limit)
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    return json.loads(res.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", default="3x3,3x4,4x4")
    ap.add_argument("--rows", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--search-limit", type=int, default=500)
    ap.add_argument("--json", action="store_true", help="print raw results as JSON")
    args = ap.parse_args(argv)
    sizes = [tuple(int(x) for x in g.split("x")) for g in args.graphs.split(",")]

    kernel = [bench_kernel(m, n, args.rows, args.repeat) for m, n in sizes]
    search = []
    for m, n in sizes:
        a = bench_search(m, n, args.search_limit, force_numpy=False)
        b = bench_search(m, n, args.search_limit, force_numpy=True)
        search.append({"graph": f"K{m},{n}", "limit": args.search_limit, "default": a, "numpy": b})

    if args.json:
        print(json.dumps({"kernel": kernel, "search": search}, indent=1))
        return
    print(f"kernel: compat_row x rows against all spanning trees (best of {args.repeat})")
    print(f"{'graph':>6} {'trees':>6} {'rows':>5} {'numpy s':>9} {'numba s':>9} {'speedup':>8} agree")
    for r in kernel:
        print(
            f"{r['graph']:>6} {r['trees']:>6} {r['rows']:>5} {r['numpy_s']:>9.4f} "
            f"{r.get('numba_s', float('nan')):>9.4f} {r.get('speedup', float('nan')):>8.1f} {r.get('agree', '-')}"
        )
    print()
    print("search: enumerate_triangulations in a fresh process")
    print(f"{'graph':>6} {'limit':>6} {'default':>16} {'numpy':>16}")
    for r in search:
        a, b = r["default"], r["numpy"]
        print(
            f"{r['graph']:>6} {r['limit']:>6} {a['backend'] + ' ' + format(a['seconds'], '.3f'):>16} "
            f"{b['backend'] + ' ' + format(b['seconds'], '.3f'):>16}  counts {a['count']}/{b['count']}"
        )


if __name__ == "__main__":
    main()
