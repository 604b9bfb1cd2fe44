"""Canonical JSON for graphs, subgraphs, triangulations, trianguloids and
edge colourings.

Vertices are 1-based on both sides. Lists are sorted canonically and keys
are sorted, so equal values always serialize to identical bytes.
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import TrianguloidError
from .graph import BipartiteGraph, Subgraph, new_graph
from .trianguloid import EdgeColoring, Trianguloid
from .triangulation import Triangulation, validate


class FormatError(TrianguloidError):
    """Malformed input document."""


# innermost lists of integers are kept on one line; string literals are
# matched first so brackets inside them are left alone
_FLAT_LIST = re.compile(r'"(?:[^"\\]|\\.)*"|\[[\s\d,-]*\]')


def _flatten(m: re.Match) -> str:
    tok = m.group(0)
    if tok.startswith('"'):
        return tok
    return json.dumps(json.loads(tok), separators=(",", ":"))


def dumps(obj: dict) -> str:
    text = json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True)
    return _FLAT_LIST.sub(_flatten, text) + "\n"


def graph_to_json(G: BipartiteGraph) -> dict:
    return {"m": G.m, "n": G.n, "neighborhoods": [sorted(N) for N in G.nbhd]}


def graph_from_json(d: dict) -> BipartiteGraph:
    try:
        return new_graph(d["m"], d["n"], d["neighborhoods"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad graph object: {exc!r}") from exc


def subgraph_to_json(F: Subgraph) -> dict:
    return {"edges": [list(e) for e in F.edges]}


def subgraph_from_json(G: BipartiteGraph, d: dict) -> Subgraph:
    try:
        return G.subgraph(tuple(e) for e in d["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TrianguloidError):
            raise
        raise FormatError(f"bad subgraph object: {exc!r}") from exc


def triangulation_to_json(tau: Triangulation) -> dict:
    return {
        "graph": graph_to_json(tau.graph),
        "trees": [{"ld_minus": list(b), "edges": [list(e) for e in T.edges]} for b, T in tau],
    }


def trees_from_json(d: dict) -> tuple[BipartiteGraph, list[Subgraph]]:
    """Parse without validating (so callers can report validation errors)."""
    G = graph_from_json(_get(d, "graph"))
    return G, [subgraph_from_json(G, t) for t in _get(d, "trees")]


def triangulation_from_json(d: dict) -> Triangulation:
    G, trees = trees_from_json(d)
    return validate(G, trees)


def trianguloid_to_json(T: Trianguloid) -> dict:
    return {
        "graph": graph_to_json(T.graph),
        "entries": [
            {"from": list(b), "dir": i, "set": sorted(s)} for (b, i), s in T.entries.items()
        ],
    }


def trianguloid_from_json(d: dict) -> Trianguloid:
    G = graph_from_json(_get(d, "graph"))
    try:
        entries = {(tuple(e["from"]), int(e["dir"])): [int(x) for x in e["set"]] for e in d["entries"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad trianguloid entries: {exc!r}") from exc
    return Trianguloid(G, entries)


def coloring_to_json(C: EdgeColoring) -> dict:
    return {
        "graph": graph_to_json(C.graph),
        "colors": [{"from": list(s), "to": list(t), "color": c} for (s, t), c in sorted(C.colors.items())],
    }


def coloring_from_json(d: dict) -> EdgeColoring:
    G = graph_from_json(_get(d, "graph"))
    try:
        colors = {(tuple(e["from"]), tuple(e["to"])): int(e["color"]) for e in d["colors"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad colouring entries: {exc!r}") from exc
    return EdgeColoring(G, colors)


def _get(d, key):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise FormatError(f"missing field {key!r}") from None


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def write_json(path, obj: dict):
    Path(path).write_text(dumps(obj))
