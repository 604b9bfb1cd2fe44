"""Batch compatibility kernels used by the tree search.

Trees are packed as an ``(T, m)`` int64 array of right-vertex bitmasks.
``compat_row(masks, k, n)`` returns a boolean vector whose entry ``t`` says
whether tree ``k`` and tree ``t`` are compatible.

Two interchangeable backends:

* ``numba``: per pair, contract the shared edges with union-find and run
  Kahn's algorithm on the one-way arcs between components.
* ``numpy``: vectorised over all trees at once with boolean matrix
  products (transitive closure of the shared part, then of the contracted
  arc relation, looking for a diagonal entry).

Set ``TRIANGULOIDS_NO_NUMBA=1`` to force the numpy path. The numpy path is
also used when numba cannot be imported.
"""
from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("TRIANGULOIDS_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _FORCE_NUMPY:
        raise ImportError
    from numba import njit
except ImportError:  # pragma: no cover - exercised through the env flag
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


def pack(trees) -> np.ndarray:
    """Pack a sequence of subgraphs into an ``(T, m)`` int64 mask array."""
    if not trees:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([T.rows for T in trees], dtype=np.int64)


def _pair_compatible_py(a, b, m, n):
    """Reference implementation used by the numba kernel (same algorithm)."""
    size = m + n
    parent = np.arange(size)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(m):
        s = a[i] & b[i]
        for j in range(n):
            if (s >> j) & 1:
                ra, rb = find(i), find(m + j)
                if ra != rb:
                    parent[rb] = ra
    comp = np.empty(size, dtype=np.int64)
    for v in range(size):
        comp[v] = find(v)
    indeg = np.zeros(size, dtype=np.int64)
    tails = np.empty(2 * m * n, dtype=np.int64)
    heads = np.empty(2 * m * n, dtype=np.int64)
    k = 0
    for i in range(m):
        only_a = a[i] & ~b[i]
        only_b = b[i] & ~a[i]
        for j in range(n):
            if (only_a >> j) & 1:
                tails[k] = comp[i]
                heads[k] = comp[m + j]
                k += 1
            if (only_b >> j) & 1:
                tails[k] = comp[m + j]
                heads[k] = comp[i]
                k += 1
    for e in range(k):
        indeg[heads[e]] += 1
    stack = np.empty(size, dtype=np.int64)
    top = 0
    roots = 0
    for v in range(size):
        if comp[v] == v:
            roots += 1
            if indeg[v] == 0:
                stack[top] = v
                top += 1
    done = 0
    while top > 0:
        top -= 1
        v = stack[top]
        done += 1
        for e in range(k):
            if tails[e] == v:
                h = heads[e]
                indeg[h] -= 1
                if indeg[h] == 0:
                    stack[top] = h
                    top += 1
    return done == roots


if njit is not None:
    _pair_compatible_nb = njit(cache=True)(_pair_compatible_py)

    @njit(cache=True)
    def _one_vs_many_numba(a, masks, n):
        T, m = masks.shape
        out = np.empty(T, dtype=np.bool_)
        for t in range(T):
            out[t] = _pair_compatible_nb(a, masks[t], m, n)
        return out


def _adjacency(masks: np.ndarray, n: int) -> np.ndarray:
    """Boolean ``(T, m, n)`` edge-incidence array."""
    bits = (masks[:, :, None] >> np.arange(n, dtype=np.int64)[None, None, :]) & 1
    return bits.astype(bool)


def _closure(R: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a batch of boolean relations."""
    V = R.shape[-1]
    R = R | np.eye(V, dtype=bool)[None]
    steps = max(1, int(np.ceil(np.log2(max(V, 2)))))
    for _ in range(steps):
        R = np.matmul(R.astype(np.uint8), R.astype(np.uint8)) > 0
    return R


def _one_vs_many_numpy(a_mask: np.ndarray, masks: np.ndarray, n: int) -> np.ndarray:
    T, m = masks.shape
    V = m + n
    adj = _adjacency(masks, n)
    a = _adjacency(a_mask[None], n)
    shared = a & adj
    only_a = np.broadcast_to(a, adj.shape) & ~adj
    only_b = adj & ~a
    S = np.zeros((T, V, V), dtype=bool)
    S[:, :m, m:] = shared
    S[:, m:, :m] = shared.transpose(0, 2, 1)
    C = _closure(S)
    D = np.zeros((T, V, V), dtype=bool)
    D[:, :m, m:] = only_a
    D[:, m:, :m] = only_b.transpose(0, 2, 1)
    M = np.matmul(C.astype(np.uint8), D.astype(np.uint8)) > 0
    # a directed cycle among components shows up as a closed walk x ->+ x
    P = np.matmul(_closure(M).astype(np.uint8), M.astype(np.uint8)) > 0
    return ~np.diagonal(P, axis1=1, axis2=2).any(axis=1)


def one_vs_many(a: np.ndarray, masks: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    """Compatibility of forest ``a`` (an ``(m,)`` mask row) with every row of ``masks``."""
    backend = backend or BACKEND
    if masks.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if backend == "numba":
        if njit is None:
            raise RuntimeError("numba backend requested but numba is unavailable")
        return _one_vs_many_numba(a, masks, n)
    if backend == "numpy":
        return _one_vs_many_numpy(a, masks, n)
    raise ValueError(f"unknown backend {backend!r}")


def compat_row(masks: np.ndarray, k: int, n: int, backend: str | None = None) -> np.ndarray:
    return one_vs_many(masks[k], masks, n, backend)


def compat_cross(A: np.ndarray, B: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    """``out[s, t]`` = compatibility of ``A[s]`` and ``B[t]``."""
    out = np.zeros((A.shape[0], B.shape[0]), dtype=bool)
    for s in range(A.shape[0]):
        out[s] = one_vs_many(A[s], B, n, backend)
    return out


def compat_matrix(masks: np.ndarray, n: int, backend: str | None = None) -> np.ndarray:
    """Full symmetric compatibility matrix (for tests and benchmarks)."""
    T = masks.shape[0]
    out = np.zeros((T, T), dtype=bool)
    for k in range(T):
        out[k] = compat_row(masks, k, n, backend)
    return out
