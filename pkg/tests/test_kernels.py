import json
import os
import subprocess
import sys

import numpy as np
import pytest

from trianguloids import _kernels
from trianguloids.graph import complete_graph, enumerate_spanning_trees

SCRIPT = """
import json
from trianguloids import _kernels
from trianguloids.graph import complete_graph
from trianguloids.search import enumerate_triangulations
G = complete_graph(3, 3)
print(json.dumps({"backend": _kernels.BACKEND, "count": len(enumerate_triangulations(G))}))
"""


def _child(flag):
    env = dict(os.environ)
    env.pop("TRIANGULOIDS_NO_NUMBA", None)
    if flag is not None:
        env["TRIANGULOIDS_NO_NUMBA"] = flag
    res = subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, env=env, check=True)
    return json.loads(res.stdout)


def test_env_flag_forces_numpy():
    got = _child("1")
    assert got == {"backend": "numpy", "count": 108}


def test_flag_off_values_keep_default():
    pytest.importorskip("numba")
    assert _child("0")["backend"] == "numba"
    assert _child(None) == {"backend": "numba", "count": 108}


def test_empty_inputs():
    assert _kernels.pack([]).shape == (0, 0)
    masks = _kernels.pack(enumerate_spanning_trees(complete_graph(2, 2)))
    for backend in ["numpy"] + (["numba"] if _kernels.njit else []):
        out = _kernels.compat_cross(masks[:0], masks, 2, backend)
        assert out.shape == (0, 4)


def test_pair_reference_matches_batch():
    G = complete_graph(3, 3)
    masks = _kernels.pack(enumerate_spanning_trees(G))
    ref = np.array(
        [[_kernels._pair_compatible_py(a, b, G.m, G.n) for b in masks] for a in masks[:20]], dtype=bool
    )
    assert (_kernels.compat_cross(masks[:20], masks, G.n, "numpy") == ref).all()


def test_benchmark_script_runs(capsys):
    import runpy
    from pathlib import Path

    path = Path(__file__).parents[1] / "benchmarks" / "bench_compat.py"
    mod = runpy.run_path(str(path))
    mod["main"](["--graphs", "2x3", "--rows", "3", "--repeat", "1", "--search-limit", "5", "--json"])
    out = json.loads(capsys.readouterr().out)
    assert out["kernel"][0]["trees"] == 12
    assert {r["numpy"]["count"] for r in out["search"]} == {5}
    assert all(r.get("agree", True) for r in out["kernel"])
