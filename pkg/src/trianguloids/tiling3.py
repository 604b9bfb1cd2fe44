"""Lozenge tilings and tropical pseudolines from a trianguloid with m = 3.

For each c with c + e_1, c + e_2, c + e_3 ∈ P_G⁻ exactly one direction j has
𝕋(c+e_i →_j ·) ≠ 𝕋(c+e_k →_j ·) ({i, j, k} = {1, 2, 3}). That hexagon
contributes two solid tiling edges from c+e_i+e_k and two dashed
pseudoline edges into c+e_j. The solid edges plus the boundary of nΔ cut
it into C(n,2) lozenges and n upright triangles.

Tilings and pseudolines need G = K_{3,n}; for other graphs with m = 3
only the trianguloid layer and the nodes are drawn.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .errors import NotComplete, NotThreeRows, NotTrianguloid
from .graph import BipartiteGraph, _DSU
from .lattice import Point, compositions, points_PG, points_PGminus, shift
from .trianguloid import Trianguloid, tree_of

# unit vectors for the three coordinates, in degrees; they sum to zero
DIRECTIONS = (-150.0, -30.0, 90.0)


class TilingSegment(NamedTuple):
    kind: str  # "solid" or "dashed"
    start: Point
    end: Point
    label: int | None = None


def _seg(kind: str, p: Point, q: Point, label=None) -> TilingSegment:
    p, q = sorted((p, q))
    return TilingSegment(kind, p, q, label)


def _require(T: Trianguloid, complete: bool = True):
    if T.graph.m != 3:
        raise NotThreeRows(f"tilings need m = 3, got m = {T.graph.m}")
    if complete and not T.graph.is_complete():
        raise NotComplete("the hexagon construction is only stated for K_{3,n}")
    if not T.report.is_trianguloid:
        raise NotTrianguloid("tilings are drawn for trianguloids only")


class Hexagon(NamedTuple):
    c: Point
    i: int
    j: int
    k: int


def differing_hexagons(T: Trianguloid) -> list[Hexagon]:
    """For each full hexagon c, the (i, j, k), i < k, with the j-th pair differing."""
    _require(T)
    G = T.graph
    pm = set(points_PGminus(G))
    out = []
    if G.n < 2:
        return out
    for c in compositions(G.n - 2, 3):
        if not all(shift(c, plus=x) in pm for x in (1, 2, 3)):
            continue
        found = []
        for j in (1, 2, 3):
            i, k = [x for x in (1, 2, 3) if x != j]
            if T.mask(shift(c, plus=i), j) != T.mask(shift(c, plus=k), j):
                found.append(Hexagon(c, i, j, k))
        if len(found) != 1:
            raise NotTrianguloid(f"hexagon at {c} has {len(found)} differing pairs, expected 1")
        out.append(found[0])
    return out


def _unit_triangles(G: BipartiteGraph) -> list[tuple[Point, Point, Point]]:
    pg = set(points_PG(G))
    n = G.n
    tris = []
    for x in compositions(n - 1, 3):
        vs = tuple(shift(x, plus=i) for i in (1, 2, 3))
        if all(v in pg for v in vs):
            tris.append(vs)
    for y in compositions(n + 1, 3):
        if min(y) >= 1:
            vs = tuple(shift(y, minus=i) for i in (1, 2, 3))
            if all(v in pg for v in vs):
                tris.append(vs)
    return tris


def _triangle_edges(tri):
    a, b, c = tri
    return [tuple(sorted(e)) for e in ((a, b), (b, c), (a, c))]


def boundary_segments(G: BipartiteGraph) -> list[TilingSegment]:
    """Unit edges that lie in exactly one unit triangle of P_G."""
    count: dict = {}
    for tri in _unit_triangles(G):
        for e in _triangle_edges(tri):
            count[e] = count.get(e, 0) + 1
    return sorted(_seg("solid", *e) for e, c in count.items() if c == 1)


def tiling_segments(T: Trianguloid) -> list[TilingSegment]:
    """Solid edges of the lozenge tiling, including the boundary."""
    segs = set(boundary_segments(T.graph))
    for c, i, j, k in differing_hexagons(T):
        apex = shift(shift(c, plus=i), plus=k)
        segs.add(_seg("solid", apex, shift(shift(c, plus=i), plus=j)))
        segs.add(_seg("solid", apex, shift(shift(c, plus=k), plus=j)))
    return sorted(segs)


def pseudoline_segments(T: Trianguloid) -> list[TilingSegment]:
    """Dashed, labelled edges of the tropical pseudoline arrangement."""
    segs = []
    for c, i, j, k in differing_hexagons(T):
        ci, ck, cj = shift(c, plus=i), shift(c, plus=k), shift(c, plus=j)
        si, sk = T.mask(ci, j), T.mask(ck, j)
        x, y = si & ~sk, sk & ~si
        if x.bit_count() != 1 or y.bit_count() != 1:
            raise NotTrianguloid(f"hexagon at {c}: entries differ by more than one element")
        segs.append(_seg("dashed", ci, cj, x.bit_length()))
        segs.append(_seg("dashed", ck, cj, y.bit_length()))
    return sorted(segs, key=lambda s: (s.label, s.start, s.end))


class Face(NamedTuple):
    kind: str  # "lozenge", "upright", "inverted" or "other"
    vertices: frozenset


def faces(T: Trianguloid) -> list[Face]:
    """Tiles of the planar subdivision cut out by the solid segments."""
    solid = {(s.start, s.end) for s in tiling_segments(T)}
    tris = _unit_triangles(T.graph)
    dsu = _DSU(len(tris))
    by_edge: dict = {}
    for t, tri in enumerate(tris):
        for e in _triangle_edges(tri):
            by_edge.setdefault(e, []).append(t)
    for e, ts in by_edge.items():
        if e not in solid and len(ts) == 2:
            dsu.union(ts[0], ts[1])
    groups: dict[int, list[int]] = {}
    for t in range(len(tris)):
        groups.setdefault(dsu.find(t), []).append(t)
    out = []
    for members in groups.values():
        verts = frozenset(v for t in members for v in tris[t])
        if len(members) == 2 and len(verts) == 4:
            kind = "lozenge"
        elif len(members) == 1:
            tri = tris[members[0]]
            # upright triangles are x + e_1, x + e_2, x + e_3
            base = tuple(min(v[d] for v in tri) for d in range(3))
            kind = "upright" if sum(base) == T.graph.n - 1 else "inverted"
        else:
            kind = "other"
        out.append(Face(kind, verts))
    out.sort(key=lambda f: (f.kind, sorted(f.vertices)))
    return out


def tree_cell(T: Trianguloid, b: Point) -> frozenset:
    """Lattice points Σ_j e_{f(j̄)}, f(j̄) a neighbour of j̄ in T_𝕋(b)."""
    tree = tree_of(T, b, check=False)
    G = T.graph
    layer = {(0, 0, 0)}
    for j in range(1, G.n + 1):
        nb = [i for i in (1, 2, 3) if (tree.rows[i - 1] >> (j - 1)) & 1]
        layer = {shift(p, plus=i) for p in layer for i in nb}
    return frozenset(layer)


# SVG output

DEFAULT_STYLE = {
    "scale": 60.0,
    "margin": 30.0,
    "node_radius": 4.0,
    "solid_width": 2.0,
    "dashed_width": 1.5,
    "arrow_width": 0.8,
    "font_size": 11.0,
    "solid_color": "#000000",
    "dashed_color": "#1f5fbf",
    "arrow_color": "#888888",
    "label_color": "#b03030",
}

LAYERS = ("tiling", "pseudolines", "trianguloid")


def project(p: Point, scale: float = 1.0) -> tuple[float, float]:
    """Planar position of a point of ℤ^3 (SVG y axis pointing down)."""
    x = sum(c * math.cos(math.radians(a)) for c, a in zip(p, DIRECTIONS))
    y = sum(c * math.sin(math.radians(a)) for c, a in zip(p, DIRECTIONS))
    return x * scale, -y * scale


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(T: Trianguloid, style: dict | None = None, layers=LAYERS) -> str:
    """Deterministic SVG of the tiling, pseudolines and trianguloid arrows.

    Black nodes are the lattice points of P_G, white nodes those of P_G⁻.
    The tiling and pseudoline layers need a complete graph.
    """
    _require(T, complete=bool({"tiling", "pseudolines"} & set(layers)))
    st = dict(DEFAULT_STYLE)
    st.update(style or {})
    unknown = set(layers) - set(LAYERS)
    if unknown:
        raise ValueError(f"unknown layers {sorted(unknown)}; choose from {LAYERS}")
    G = T.graph
    sc = float(st["scale"])
    black = points_PG(G)
    white = points_PGminus(G)
    pts = [project(p, sc) for p in black + white]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    mg = float(st["margin"])
    x0, y0 = min(xs) - mg, min(ys) - mg
    w, h = max(xs) - min(xs) + 2 * mg, max(ys) - min(ys) + 2 * mg

    def xy(p):
        x, y = project(p, sc)
        return _num(x - x0), _num(y - y0)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(w)}" height="{_num(h)}" '
        f'viewBox="0 0 {_num(w)} {_num(h)}">'
    ]
    if "trianguloid" in layers:
        out.append(f'<g id="trianguloid" stroke="{st["arrow_color"]}" stroke-width="{_num(st["arrow_width"])}">')
        for (b, i), s in T.entries.items():
            (x1, y1), (x2, y2) = xy(b), xy(shift(b, plus=i))
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
            mx, my = project(b, sc)
            nx, ny = project(shift(b, plus=i), sc)
            lx, ly = _num((mx + nx) / 2 - x0), _num((my + ny) / 2 - y0)
            label = ",".join(str(j) for j in sorted(s))
            out.append(
                f'<text x="{lx}" y="{ly}" font-size="{_num(st["font_size"] * 0.8)}" '
                f'fill="{st["arrow_color"]}" stroke="none">{label}</text>'
            )
        out.append("</g>")
    if "tiling" in layers:
        out.append(f'<g id="tiling" stroke="{st["solid_color"]}" stroke-width="{_num(st["solid_width"])}">')
        for s in tiling_segments(T):
            (x1, y1), (x2, y2) = xy(s.start), xy(s.end)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        out.append("</g>")
    if "pseudolines" in layers:
        out.append(
            f'<g id="pseudolines" stroke="{st["dashed_color"]}" '
            f'stroke-width="{_num(st["dashed_width"])}" stroke-dasharray="5,4">'
        )
        for s in pseudoline_segments(T):
            (x1, y1), (x2, y2) = xy(s.start), xy(s.end)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" data-label="{s.label}"/>')
            sx, sy = project(s.start, sc)
            ex, ey = project(s.end, sc)
            out.append(
                f'<text x="{_num((sx + ex) / 2 - x0)}" y="{_num((sy + ey) / 2 - y0)}" '
                f'font-size="{_num(st["font_size"])}" fill="{st["label_color"]}" stroke="none">{s.label}</text>'
            )
        out.append("</g>")
    r = _num(st["node_radius"])
    out.append('<g id="nodes" stroke="#000000" stroke-width="1">')
    for p in black:
        x, y = xy(p)
        out.append(f'<circle class="node-black" cx="{x}" cy="{y}" r="{r}" fill="#000000"/>')
    for p in white:
        x, y = xy(p)
        out.append(f'<circle class="node-white" cx="{x}" cy="{y}" r="{r}" fill="#ffffff"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
