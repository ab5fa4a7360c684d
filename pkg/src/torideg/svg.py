"""SVG rendering of planar flag triangulations."""

from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedDimension
from .stratification import FlagTriangulation

SCALE = 100
MARGIN = 20


def _num(x: Fraction) -> str:
    """Decimal with at most three places, rounded half-even by exact arithmetic."""
    k = round(Fraction(x) * 1000)
    sign = "-" if k < 0 else ""
    k = abs(k)
    whole, frac = divmod(k, 1000)
    return f"{sign}{whole}" if frac == 0 else f"{sign}{whole}.{frac:03d}".rstrip("0")


def _outline(T: FlagTriangulation) -> list[tuple[int, int]]:
    """Vertices of the polygon in boundary order, walking along the edges."""
    L = T.lattice
    P = L.polytope
    edges = [sorted(f.vertices) for f in L if f.dim == 1]
    order = [min(range(len(P.vertices)), key=lambda i: P.vertices[i])]
    while len(order) < len(P.vertices):
        last = order[-1]
        nxt = [j for e in edges if last in e for j in e if j != last and j not in order]
        order.append(min(nxt))
    return [P.vertices[i] for i in order]


def render_svg(T: FlagTriangulation) -> str:
    if T.dim != 2:
        raise UnsupportedDimension(f"rendering needs a polygon, got dimension {T.dim}")
    P = T.lattice.polytope
    xs = [v[0] for v in P.vertices]
    ys = [v[1] for v in P.vertices]
    x0, y1 = min(xs), max(ys)
    width = (max(xs) - x0) * SCALE + 2 * MARGIN
    height = (y1 - min(ys)) * SCALE + 2 * MARGIN

    def pt(p):
        return _num(MARGIN + (Fraction(p[0]) - x0) * SCALE), _num(MARGIN + (y1 - Fraction(p[1])) * SCALE)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]
    for c in T.maximal_chains:
        coords = " ".join(",".join(pt(v)) for v in T.simplex(c))
        lines.append(f'  <polygon class="simplex" data-chain="{"/".join(c)}" points="{coords}" '
                     'fill="#f4e3c3" stroke="#555" stroke-width="1"/>')
    outline = " ".join(",".join(pt(v)) for v in _outline(T))
    lines.append(f'  <polygon class="outline" points="{outline}" fill="none" stroke="#000" stroke-width="2"/>')
    for fid in T.lattice.ids:
        cx, cy = pt(T.marking[fid])
        lines.append(f'  <circle class="marking" data-face="{fid}" cx="{cx}" cy="{cy}" r="4" fill="#c0392b"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
