"""Exact convex hulls of integer point sets.

The hull is computed in the affine span of the input. Points are projected to
coordinates in which the span is full-dimensional, then processed with an
incremental (beneath-beyond) algorithm over a simplicial boundary complex;
coplanar boundary simplices are merged into facets afterwards. Large inputs
are pruned with vectorised facet tests, in int64 when the magnitudes allow
and with Python ints otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import intlinalg as ila

Point = tuple[int, ...]

_INT64_SAFE = 2**62


@dataclass(frozen=True)
class Facet:
    normal: Point  # primitive, outward: normal . x <= offset on the polytope
    offset: int
    vertices: frozenset[int]  # indices into Hull.vertices


@dataclass
class Hull:
    ambient: int
    dim: int
    vertices: list[Point]
    facets: list[Facet]
    equations: list[tuple[Point, int]]  # normal . x == offset on the span
    simplices: list[tuple[Point, ...]] = field(default_factory=list)

    def contains(self, x: Sequence) -> bool:
        if any(ila.dot(a, x) != b for a, b in self.equations):
            return False
        return all(ila.dot(f.normal, x) <= f.offset for f in self.facets)

    def interior_contains(self, x: Sequence) -> bool:
        """Strictly inside, relative to the ambient space."""
        return self.dim == self.ambient and all(
            ila.dot(f.normal, x) < f.offset for f in self.facets
        )

    def halfspaces(self) -> list[tuple[Point, int]]:
        """Inequalities a . x <= b describing the polytope in ambient space."""
        out = [(f.normal, f.offset) for f in self.facets]
        for a, b in self.equations:
            out.append((a, b))
            out.append((tuple(-x for x in a), -b))
        return out


def _exact_matmul(pts: np.ndarray, mat: list[Sequence[int]]) -> np.ndarray:
    """``pts @ mat.T`` exactly, for integer arrays."""
    if not mat:
        return np.zeros((len(pts), 0), dtype=np.int64)
    pmax = int(np.abs(pts).max()) if pts.size else 0
    mmax = max(abs(x) for row in mat for x in row)
    if pts.dtype != object and (pmax + 1) * (mmax + 1) * (pts.shape[1] + 1) < _INT64_SAFE:
        return pts @ np.array(mat, dtype=np.int64).T
    return pts.astype(object) @ np.array(mat, dtype=object).T


def _as_array(points: list[Point]) -> np.ndarray:
    big = max((abs(x) for p in points for x in p), default=0)
    return np.array(points, dtype=np.int64 if big < 2**31 else object)


def affine_frame(points: list[Point]) -> tuple[list[int], list[tuple[Point, int]]]:
    """Indices of an affinely independent spanning subset, and span equations.

    The first index is the lexicographically smallest point. Further points are
    chosen farthest from the current flat, which favours hull vertices.
    """
    n = len(points[0])
    arr = _as_array(points)
    base = 0
    chosen = [base]
    dirs: list[Point] = []
    while len(dirs) < n:
        normals = ila.nullspace(dirs, n) if dirs else [
            tuple(int(i == j) for j in range(n)) for i in range(n)
        ]
        vals = _exact_matmul(arr - arr[base], normals)
        score = np.abs(vals).sum(axis=1)
        best = int(np.argmax(score))
        if score[best] == 0:
            break
        chosen.append(best)
        dirs.append(tuple(a - b for a, b in zip(points[best], points[base])))
    eqs = []
    if len(dirs) < n:
        for a in ila.nullspace(dirs, n) if dirs else [
            tuple(int(i == j) for j in range(n)) for i in range(n)
        ]:
            eqs.append((a, ila.dot(a, points[base])))
    return chosen, eqs


def _projection_columns(dirs: list[Point]) -> list[int]:
    cols: list[int] = []
    for c in range(len(dirs[0])):
        trial = cols + [c]
        if ila.rank([[d[i] for i in trial] for d in dirs]) == len(trial):
            cols = trial
        if len(cols) == len(dirs):
            break
    return cols


def convex_hull(points: Iterable[Sequence[int]]) -> Hull:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise ValueError("convex hull of an empty set")
    n = len(pts[0])
    chosen, eqs = affine_frame(pts)
    k = len(chosen) - 1
    if k == 0:
        return Hull(n, 0, [pts[0]], [], eqs, [(pts[0],)])
    p0 = pts[chosen[0]]
    dirs = [tuple(a - b for a, b in zip(pts[i], p0)) for i in chosen[1:]]
    cols = _projection_columns(dirs)
    proj = [tuple(p[c] for c in cols) for p in pts]

    if k == 1:
        lo = min(range(len(pts)), key=lambda i: proj[i])
        hi = max(range(len(pts)), key=lambda i: proj[i])
        verts = sorted([pts[lo], pts[hi]])
        facets = []
        for idx, v in enumerate(verts):
            other = verts[1 - idx]
            sgn = 1 if v[cols[0]] > other[cols[0]] else -1
            normal = tuple(sgn * int(c == cols[0]) for c in range(n))
            facets.append(Facet(normal, ila.dot(normal, v), frozenset([idx])))
        return Hull(n, 1, verts, facets, eqs, [(v,) for v in verts])

    if k == 2:
        ring = _monotone_chain(proj)
        planar = []
        for a, b in zip(ring, ring[1:] + ring[:1]):
            pa, pb = proj[a], proj[b]
            normal2 = ila.primitive((pb[1] - pa[1], pa[0] - pb[0]))
            planar.append((normal2, (a, b)))
        vert_idx = sorted(ring, key=lambda i: pts[i])
        simplices = [(pts[a], pts[b]) for a, b in zip(ring, ring[1:] + ring[:1])]
        return _assemble(pts, cols, n, k, vert_idx, planar, eqs, simplices)

    simplicial = _beneath_beyond(proj, chosen)
    groups: dict[tuple[Point, int], set[int]] = {}
    for normal, offset, idx in simplicial:
        groups.setdefault((normal, offset), set()).update(idx)
    # A boundary point is a vertex iff its facet normals span the space.
    incident: dict[int, list[Point]] = {}
    for (normal, _), idx in groups.items():
        for i in idx:
            incident.setdefault(i, []).append(normal)
    vert_idx = sorted((i for i, ns in incident.items() if ila.rank(ns) == k), key=lambda i: pts[i])
    vset = set(vert_idx)
    planar = [(normal, tuple(i for i in idx if i in vset)) for (normal, _), idx in groups.items()]
    simplices = [tuple(pts[i] for i in idx) for _, _, idx in simplicial]
    return _assemble(pts, cols, n, k, vert_idx, planar, eqs, simplices)


def _assemble(pts, cols, n, k, vert_idx, planar, eqs, simplices) -> Hull:
    verts = [pts[i] for i in vert_idx]
    pos = {i: j for j, i in enumerate(vert_idx)}
    facets = []
    for normal_k, idx in planar:
        normal = [0] * n
        for c, a in zip(cols, normal_k):
            normal[c] = a
        normal = tuple(normal)
        members = frozenset(pos[i] for i in idx if i in pos)
        offset = ila.dot(normal, verts[next(iter(members))])
        facets.append(Facet(normal, offset, members))
    facets.sort(key=lambda f: (f.normal, f.offset))
    return Hull(n, k, verts, facets, eqs, simplices)


def _monotone_chain(proj: list[Point]) -> list[int]:
    """Counter-clockwise strict hull of 2-D integer points (indices)."""
    order = sorted(range(len(proj)), key=lambda i: proj[i])

    def turn(o, a, b):
        po, pa, pb = proj[o], proj[a], proj[b]
        return (pa[0] - po[0]) * (pb[1] - po[1]) - (pa[1] - po[1]) * (pb[0] - po[0])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _facet_plane(proj, idx, interior_sum, scale):
    base = proj[idx[0]]
    normal = ila.cross([tuple(a - b for a, b in zip(proj[i], base)) for i in idx[1:]])
    normal = ila.primitive(normal)
    offset = ila.dot(normal, base)
    if ila.dot(normal, interior_sum) > scale * offset:
        normal = tuple(-x for x in normal)
        offset = -offset
    return normal, offset


def _beneath_beyond(proj: list[Point], init: list[int]) -> list[tuple[Point, int, tuple[int, ...]]]:
    k = len(proj[0])
    interior = tuple(sum(proj[i][c] for i in init) for c in range(k))
    scale = len(init)
    facets: dict[tuple[int, ...], tuple[Point, int]] = {}
    ridges: dict[tuple[int, ...], set[tuple[int, ...]]] = {}

    def add_facet(idx: tuple[int, ...]):
        idx = tuple(sorted(idx))
        facets[idx] = _facet_plane(proj, idx, interior, scale)
        for drop in range(k):
            ridges.setdefault(idx[:drop] + idx[drop + 1 :], set()).add(idx)

    def remove_facet(idx):
        del facets[idx]
        for drop in range(k):
            r = idx[:drop] + idx[drop + 1 :]
            ridges[r].discard(idx)
            if not ridges[r]:
                del ridges[r]

    for sub in combinations(sorted(init), k):
        add_facet(sub)

    arr = _as_array(proj)
    init_set = set(init)
    remaining = np.array([i for i in range(len(proj)) if i not in init_set], dtype=np.int64)
    while len(remaining):
        keys = list(facets)
        normals = [facets[f][0] for f in keys]
        offsets = [facets[f][1] for f in keys]
        vals = _exact_matmul(arr[remaining], normals)
        excess = vals - np.array(offsets, dtype=vals.dtype)
        worst = excess.max(axis=1)
        outside = worst > 0
        if not outside.any():
            break
        remaining = remaining[outside]
        worst = worst[outside]
        pick = int(np.argmax(worst))
        p = int(remaining[pick])
        remaining = np.delete(remaining, pick)
        point = proj[p]
        visible = [f for f in keys if ila.dot(facets[f][0], point) > facets[f][1]]
        vis_set = set(visible)
        horizon = []
        for f in visible:
            for drop in range(k):
                r = f[:drop] + f[drop + 1 :]
                if any(g not in vis_set for g in ridges.get(r, ())):
                    horizon.append(r)
        for f in visible:
            remove_facet(f)
        for r in horizon:
            add_facet(r + (p,))
    return [(normal, offset, idx) for idx, (normal, offset) in facets.items()]


def vertices_from_constraints(
    inequalities: Sequence[tuple[Sequence[int], int]],
    equations: Sequence[tuple[Sequence[int], int]],
    n: int,
) -> list[tuple[Fraction, ...]]:
    """Vertices of the bounded polyhedron {a.x <= b (ineqs), a.x == b (eqs)}.

    Brute force over subsets of the inequalities completing a basis of the
    equations; fine for the handful of constraints that occur here.
    """
    ineqs = sorted({(tuple(a), b) for a, b in inequalities})
    all_eqs = sorted({(tuple(a), b) for a, b in equations})
    eqs: list[tuple[Point, int]] = []
    for a, b in all_eqs:
        if ila.rank([e for e, _ in eqs] + [a]) > len(eqs):
            eqs.append((a, b))
    free = n - len(eqs)
    found: set[tuple[Fraction, ...]] = set()
    for sub in combinations(ineqs, free):
        rows = eqs + list(sub)
        mat = [a for a, _ in rows]
        d = ila.det(mat)
        if d == 0:
            continue
        rhs = [b for _, b in rows]
        x = []
        for c in range(n):
            swapped = [row[:c] + (r,) + row[c + 1 :] for row, r in zip(mat, rhs)]
            x.append(Fraction(ila.det(swapped), d))
        if all(ila.dot(a, x) <= b for a, b in ineqs) and all(ila.dot(a, x) == b for a, b in all_eqs):
            found.add(tuple(x))
    return sorted(found)
