"""Command-line interface.

Exit codes: 0 success or a positive answer, 1 a negative answer (invalid
input object, incompatible forests, failed axioms, ...), 2 usage or I/O
errors. Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io, search, tiling3
from .compat import find_long_cycle, is_compatible
from .errors import (
    Disconnected,
    IsolatedVertex,
    OutOfRange,
    TrianguloidError,
)
from .io import FormatError
from .lattice import points
from .trianguloid import (
    check_axioms,
    decode_coloring,
    encode_coloring,
    from_triangulation,
    to_triangulation,
)
from .triangulation import flip, phi, reconstruct, validate


class UsageError(Exception):
    pass


def _point(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fmt_point(p) -> str:
    return ",".join(str(x) for x in p)


def _emit(obj: dict, out: str | None = None):
    text = io.dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_graph(path: str):
    d = io.read_json(path)
    # a graph may also be read from any document that embeds one
    return io.graph_from_json(d.get("graph", d) if isinstance(d, dict) else d)


def _error_report(exc: TrianguloidError) -> dict:
    rep = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("missing", "extra"):
        if hasattr(exc, attr):
            rep[attr] = [list(p) for p in getattr(exc, attr)]
    if hasattr(exc, "points"):
        rep["points"] = [list(p) for p in exc.points]
        rep["cycle"] = [str(v) for v in exc.cycle]
    return rep


# commands

def cmd_lattice_points(args) -> int:
    G = _load_graph(args.graph)
    for p in points(G, args.polytope):
        print(_fmt_point(p))
    return 0


def cmd_compat(args) -> int:
    if len(args.forest) != 2:
        raise UsageError("compat needs exactly two --forest arguments")
    G = _load_graph(args.graph)
    F1, F2 = (io.subgraph_from_json(G, io.read_json(p)) for p in args.forest)
    if is_compatible(F1, F2):
        print("compatible")
        return 0
    print("incompatible")
    print(" -> ".join(str(v) for v in find_long_cycle(F1, F2)))
    return 1


def cmd_validate(args) -> int:
    G, trees = io.trees_from_json(io.read_json(args.triangulation))
    try:
        tau = validate(G, trees)
    except TrianguloidError as exc:
        _emit({"valid": False, **_error_report(exc)})
        return 1
    _emit({"valid": True, "trees": len(tau)})
    return 0


def cmd_phi(args) -> int:
    tau = io.triangulation_from_json(io.read_json(args.triangulation))
    for b, v in phi(tau).items():
        print(f"{_fmt_point(b)} -> {_fmt_point(v)}")
    return 0


def cmd_reconstruct(args) -> int:
    d = io.read_json(args.collection)
    G = _load_graph(args.graph) if args.graph else io.graph_from_json(d.get("graph"))
    try:
        members = [io.subgraph_from_json(G, f) for f in d["forests"]]
    except (KeyError, TypeError):
        raise FormatError("collection file needs a 'forests' list") from None
    try:
        tau = reconstruct(G, members, args.kind)
    except TrianguloidError as exc:
        _emit({"reconstructed": False, **_error_report(exc)})
        return 1
    _emit(io.triangulation_to_json(tau), args.out)
    return 0


_READERS = {
    "triangulation": io.triangulation_from_json,
    "trianguloid": io.trianguloid_from_json,
    "coloring": io.coloring_from_json,
}


def cmd_convert(args) -> int:
    obj = _READERS[args.source](io.read_json(args.input))
    # normalise everything through the trianguloid
    if args.source == "triangulation":
        T = from_triangulation(obj)
    elif args.source == "coloring":
        T = decode_coloring(obj.graph, obj)
    else:
        T = obj
    if args.target == "trianguloid":
        _emit(io.trianguloid_to_json(T), args.out)
    elif args.target == "triangulation":
        _emit(io.triangulation_to_json(obj if args.source == "triangulation" else to_triangulation(T)), args.out)
    else:
        _emit(io.coloring_to_json(encode_coloring(T)), args.out)
    return 0


def cmd_check(args) -> int:
    T = io.trianguloid_from_json(io.read_json(args.trianguloid))
    rep = check_axioms(T)
    _emit(rep.as_dict())
    return 0 if rep.is_trianguloid else 1


def _emit_items(directory: str, prefix: str, items, to_json):
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(len(items))))
    for k, item in enumerate(items, start=1):
        io.write_json(out / f"{prefix}_{k:0{width}d}.json", to_json(item))


def cmd_enumerate(args) -> int:
    G = _load_graph(args.graph)
    methods = ["trees", "axioms"] if args.method == "both" else [args.method]
    reports = {}
    for method in methods:
        rep = search.report(G, method, limit=args.limit, jobs=args.jobs)
        reports[method] = rep
        if args.emit:
            if method == "trees":
                _emit_items(args.emit, "triangulation", rep.items, io.triangulation_to_json)
            else:
                _emit_items(args.emit, "trianguloid", rep.items, io.trianguloid_to_json)
    if len(reports) == 1:
        _emit(reports[methods[0]].as_dict())
        return 0
    a, b = reports["trees"], reports["axioms"]
    agree = a.count == b.count
    if agree and not (a.truncated or b.truncated):
        agree = {from_triangulation(t) for t in a.items} == set(b.items)
    _emit({"reports": [a.as_dict(), b.as_dict()], "agree": agree})
    return 0 if agree else 1


def cmd_render(args) -> int:
    T = io.trianguloid_from_json(io.read_json(args.trianguloid))
    layers = tuple(x for x in args.layers.split(",") if x)
    style = json.loads(args.style) if args.style else None
    svg = tiling3.render_svg(T, style=style, layers=layers)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


def cmd_flip(args) -> int:
    tau = io.triangulation_from_json(io.read_json(args.triangulation))
    b = _point(args.point)
    edge = _point(args.edge)
    if len(edge) != 2:
        raise UsageError("--edge takes i,j")
    try:
        b2 = flip(tau, b, edge)
    except TrianguloidError as exc:
        _emit({"flipped": False, **_error_report(exc)})
        return 1
    new_edge = (tau[b2] - tau[b]).edges
    _emit({"flipped": True, "from": list(b), "to": list(b2), "removed": list(edge), "added": [list(e) for e in new_edge]})
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trianguloids", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lattice-points", help="list lattice points of P_G, P_G- or P_G+-")
    s.add_argument("--graph", required=True)
    s.add_argument("--polytope", choices=["pg", "pgminus", "pgpm"], required=True)
    s.set_defaults(func=cmd_lattice_points)

    s = sub.add_parser("compat", help="test two forests for compatibility")
    s.add_argument("--graph", required=True)
    s.add_argument("--forest", action="append", default=[])
    s.set_defaults(func=cmd_compat)

    s = sub.add_parser("validate", help="validate a triangulation file")
    s.add_argument("--triangulation", required=True)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("phi", help="print the map b -> RD-(T_b)")
    s.add_argument("--triangulation", required=True)
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("reconstruct", help="rebuild a triangulation from one of its collections")
    s.add_argument("--graph")
    s.add_argument("--collection", required=True)
    s.add_argument("--kind", choices=["trees", "rsm", "lsm", "pm"], required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_reconstruct)

    kinds = ["triangulation", "trianguloid", "coloring"]
    s = sub.add_parser("convert", help="convert between triangulations, trianguloids and colourings")
    s.add_argument("--from", dest="source", choices=kinds, required=True)
    s.add_argument("--to", dest="target", choices=kinds, required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("check", help="check the trianguloid axioms")
    s.add_argument("--trianguloid", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("enumerate", help="enumerate triangulations and/or trianguloids")
    s.add_argument("--graph", required=True)
    s.add_argument("--method", choices=["trees", "axioms", "both"], default="both")
    s.add_argument("--limit", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--emit")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("render", help="render an m=3 trianguloid as SVG")
    s.add_argument("--trianguloid", required=True)
    s.add_argument("--out")
    s.add_argument("--layers", default=",".join(tiling3.LAYERS))
    s.add_argument("--style", help="JSON object overriding style defaults")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("flip", help="flip a replaceable edge inside a triangulation")
    s.add_argument("--triangulation", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--edge", required=True)
    s.set_defaults(func=cmd_flip)

    for action in sub.choices.values():
        action.add_argument("--format", choices=["json"], default="json", help=argparse.SUPPRESS)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FormatError, Disconnected, IsolatedVertex, OutOfRange, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TrianguloidError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
