"""SVG drawings of Newton polytopes in dimensions 2 and 3.

Output is plain text with fixed precision so the bytes only depend on the
polytope.
"""

from __future__ import annotations

import math
from typing import Sequence

from .lattice import LatticePolytope, affine_length

UNIT = 40
MARGIN = 40


class UnsupportedDim(ValueError):
    pass


def _f(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _header(width: float, height: float) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]


def _cyclic(vs: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    cx = sum(v[0] for v in vs) / len(vs)
    cy = sum(v[1] for v in vs) / len(vs)
    return sorted(vs, key=lambda v: (math.atan2(v[1] - cy, v[0] - cx), v))


def render_polygon(p: LatticePolytope, title: str = "") -> str:
    if p.ambient_dim != 2:
        raise UnsupportedDim(f"expected a planar polytope, got dimension {p.ambient_dim}")
    xs = [v[0] for v in p.vertices]
    ys = [v[1] for v in p.vertices]
    x0, x1, y0, y1 = min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1
    width = (x1 - x0) * UNIT + 2 * MARGIN
    height = (y1 - y0) * UNIT + 2 * MARGIN

    def at(x, y):
        return MARGIN + (x - x0) * UNIT, MARGIN + (y1 - y) * UNIT

    out = _header(width, height)
    if title:
        out.append(f'<text x="{_f(MARGIN)}" y="{_f(MARGIN / 2)}" font-size="14">{title}</text>')
    out.append('<g fill="#999">')
    for gx in range(x0, x1 + 1):
        for gy in range(y0, y1 + 1):
            px, py = at(gx, gy)
            out.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="1.5"/>')
    out.append("</g>")
    ox, oy = at(0, 0)
    out.append(f'<circle cx="{_f(ox)}" cy="{_f(oy)}" r="3" fill="red"/>')
    ring = _cyclic(p.vertices) if len(p.vertices) > 2 else list(p.vertices)
    pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in (at(*v) for v in ring))
    out.append(f'<polygon points="{pts}" fill="#cde" fill-opacity="0.6" stroke="black" stroke-width="1.5"/>')
    cx = sum(v[0] for v in ring) / len(ring)
    cy = sum(v[1] for v in ring) / len(ring)
    for a, b in p.edge_segments():
        mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
        dx, dy = mx - cx, my - cy
        norm = math.hypot(dx, dy) or 1.0
        lx, ly = at(mx + 0.4 * dx / norm, my + 0.4 * dy / norm)
        out.append(
            f'<text x="{_f(lx)}" y="{_f(ly)}" font-size="13" text-anchor="middle" '
            f'dominant-baseline="middle">{affine_length(a, b)}</text>'
        )
    for v in p.vertices:
        px, py = at(*v)
        out.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="3.5" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# fixed isometric view: x to the lower left, y to the lower right, z up
_ISO = (
    (-math.cos(math.pi / 6), math.cos(math.pi / 6), 0.0),
    (math.sin(math.pi / 6), math.sin(math.pi / 6), -1.0),
)


def render_wireframe(p: LatticePolytope, title: str = "") -> str:
    if p.ambient_dim != 3:
        raise UnsupportedDim(f"expected a polytope in R^3, got dimension {p.ambient_dim}")
    proj = {v: tuple(sum(r[i] * v[i] for i in range(3)) for r in _ISO) for v in p.vertices}
    xs = [q[0] for q in proj.values()]
    ys = [q[1] for q in proj.values()]
    width = (max(xs) - min(xs)) * UNIT + 2 * MARGIN
    height = (max(ys) - min(ys)) * UNIT + 2 * MARGIN

    def at(q):
        return MARGIN + (q[0] - min(xs)) * UNIT, MARGIN + (q[1] - min(ys)) * UNIT

    out = _header(width, height)
    if title:
        out.append(f'<text x="{_f(MARGIN)}" y="{_f(MARGIN / 2)}" font-size="14">{title}</text>')
    for axis in range(3):
        e = tuple(int(i == axis) for i in range(3))
        q = tuple(sum(r[i] * e[i] for i in range(3)) for r in _ISO)
        (ax, ay), (bx, by) = at((0.0, 0.0)), at(q)
        out.append(
            f'<line x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
            'stroke="#bbb" stroke-dasharray="3,3"/>'
        )
    for a, b in p.edge_segments():
        (ax, ay), (bx, by) = at(proj[a]), at(proj[b])
        out.append(f'<line x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" stroke="black" stroke-width="1.5"/>')
        length = affine_length(a, b)
        if length > 1:
            out.append(
                f'<text x="{_f((ax + bx) / 2 + 6)}" y="{_f((ay + by) / 2 - 6)}" font-size="12">{length}</text>'
            )
    for v in p.vertices:
        px, py = at(proj[v])
        label = "(" + ",".join(str(c) for c in v) + ")"
        out.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="3.5" fill="black"/>')
        out.append(f'<text x="{_f(px + 6)}" y="{_f(py + 14)}" font-size="11">{label}</text>')
    ox, oy = at((0.0, 0.0))
    out.append(f'<circle cx="{_f(ox)}" cy="{_f(oy)}" r="3" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(p: LatticePolytope, title: str = "") -> str:
    if p.ambient_dim == 2:
        return render_polygon(p, title)
    if p.ambient_dim == 3:
        return render_wireframe(p, title)
    raise UnsupportedDim(f"cannot draw a polytope in dimension {p.ambient_dim}")
