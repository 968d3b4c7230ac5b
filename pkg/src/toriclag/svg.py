"""Static SVG drawings of a slice polygon and of the sign-copy gluing grid.

Output depends only on the input objects, so repeated calls are byte-identical.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from toriclag.slice import SlicePolytope
from toriclag.topology import GluedSurface


def _plane_coords(poly: SlicePolytope) -> list[tuple[float, float]]:
    """Vertices in an orthonormal basis of the slicing plane, centred and scaled to unit radius."""
    V = np.array([[float(x) for x in v] for v in poly.vertices])
    n = np.array([float(z) for z in poly.spec.zeta])
    n /= np.linalg.norm(n)
    # first axis: projection of the first coordinate axis not parallel to n
    for k in range(len(n)):
        e = np.zeros(len(n))
        e[k] = 1.0
        a = e - (e @ n) * n
        if np.linalg.norm(a) > 1e-6:
            break
    a /= np.linalg.norm(a)
    b = np.cross(n, a)
    P = np.column_stack([V @ a, V @ b])
    P -= P.mean(axis=0)
    r = float(np.max(np.linalg.norm(P, axis=1))) or 1.0
    return [(float(x) / r, float(y) / r) for x, y in P]


def _fmt(x: float) -> str:
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _polygon_group(pts, cx, cy, scale, labels, title=None, font=12) -> list[str]:
    sp = [(cx + scale * x, cy - scale * y) for x, y in pts]
    out = ['<polygon points="' + " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in sp)
           + '" fill="#eef3fb" stroke="#1f3b73" stroke-width="1.5"/>']
    n = len(sp)
    for j in range(n):
        (x0, y0), (x1, y1) = sp[(j - 1) % n], sp[j]
        mx, my = (x0 + x1) / 2, (y0 + y1) / 2
        # push the label slightly outward from the centre
        dx, dy = mx - cx, my - cy
        d = math.hypot(dx, dy) or 1.0
        lx, ly = mx + 0.18 * scale * dx / d, my + 0.18 * scale * dy / d
        out.append(f'<text x="{_fmt(lx)}" y="{_fmt(ly)}" font-size="{font}" text-anchor="middle" '
                   f'dominant-baseline="middle">{escape(labels[j])}</text>')
    if title:
        out.append(f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" font-size="{font}" text-anchor="middle" '
                   f'dominant-baseline="middle" fill="#555">{escape(title)}</text>')
    return out


def _document(width, height, body) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">')
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="white"/>', *body, "</svg>"]) + "\n"


def slice_svg(poly: SlicePolytope, size: int = 360) -> str:
    """Slice polygon with edge ``j`` labelled ``E<j+1>``."""
    pts = _plane_coords(poly)
    labels = [f"E{j + 1}" for j in range(len(pts))]
    c = size / 2
    body = _polygon_group(pts, c, c, 0.62 * size / 2, labels, font=14)
    return _document(size, size, body)


def gluing_svg(poly: SlicePolytope, surface: GluedSurface, cell: int = 220) -> str:
    """Grid of the sign copies; every edge label names the copy it is glued to.

    Edge ``j`` of copy ``k`` carries ``E<j+1>:<k'>`` where ``k'`` is the
    partner copy; labels therefore match pairwise across the grid.
    """
    pts = _plane_coords(poly)
    partner = {}
    for p in surface.pairings:
        partner[(p.face, p.edge)] = p.face2
        partner[(p.face2, p.edge2)] = p.face
    F = surface.F
    cols = 4 if F >= 4 else F
    rows = math.ceil(F / cols)
    body = []
    for f in range(F):
        r, c = divmod(f, cols)
        cx, cy = (c + 0.5) * cell, (r + 0.5) * cell
        labels = [f"E{j + 1}:{partner[(f, j)]}" for j in range(len(pts))]
        if surface.face_labels:
            title = f"{f} (" + "".join("+" if s > 0 else "-" for s in surface.face_labels[f]) + ")"
        else:
            title = str(f)
        body.append(f'<g id="copy{f}">')
        body += _polygon_group(pts, cx, cy, 0.3 * cell, labels, title=title, font=10)
        body.append("</g>")
    return _document(cols * cell, rows * cell, body)


def emit_svg(obj, surface: GluedSurface | None = None) -> str:
    """Slice drawing for a polygon, gluing grid when the glued surface is supplied too."""
    if surface is None:
        return slice_svg(obj)
    return gluing_svg(obj, surface)
