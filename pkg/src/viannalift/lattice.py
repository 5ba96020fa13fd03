"""Lattice polytopes: Newton polytopes, faces, Fano tests, combinatorial
mutation and GL(n, Z)-equivalence of simplices.

No floating point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations, permutations
from math import gcd
from typing import Iterable, Mapping, Sequence

from . import intlinalg as ila
from .hull import Hull, convex_hull, vertices_from_constraints
from .laurent import LaurentPoly, MutationDatum, NotMutable, UnimodularMap

Point = tuple[int, ...]


class EmptyPolynomial(ValueError):
    pass


class DegenerateSegment(ValueError):
    pass


class UnsupportedShape(ValueError):
    pass


class NotCombinatoriallyMutable(NotMutable):
    def __init__(self, degree: int, detail: str = ""):
        self.degree = degree
        self.remainder = None
        ArithmeticError.__init__(
            self, f"level {degree} admits no Minkowski factor" + (f" ({detail})" if detail else "")
        )


class LatticePolytope:
    """Convex hull of finitely many integer points, kept as its vertex list."""

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = [tuple(int(x) for x in p) for p in points]
        if not pts:
            raise ValueError("a polytope needs at least one point")
        self._hull: Hull = convex_hull(pts)
        self.ambient_dim = self._hull.ambient
        self.vertices: list[Point] = list(self._hull.vertices)

    @classmethod
    def from_hull(cls, hull: Hull) -> "LatticePolytope":
        obj = object.__new__(cls)
        obj._hull = hull
        obj.ambient_dim = hull.ambient
        obj.vertices = list(hull.vertices)
        return obj

    # -- protocol -------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.ambient_dim, tuple(self.vertices)))

    def __repr__(self) -> str:
        return f"LatticePolytope({self.vertices})"

    @property
    def dim(self) -> int:
        """Dimension of the affine span."""
        return self._hull.dim

    @property
    def is_full_dimensional(self) -> bool:
        return self._hull.dim == self.ambient_dim

    @property
    def facets(self):
        return self._hull.facets

    def halfspaces(self) -> list[tuple[Point, int]]:
        return [(f.normal, f.offset) for f in self._hull.facets]

    @property
    def equations(self) -> list[tuple[Point, int]]:
        return self._hull.equations

    def contains(self, x: Sequence) -> bool:
        return self._hull.contains(x)

    def level_range(self, w: Sequence[int]) -> tuple[int, int]:
        vals = [ila.dot(w, v) for v in self.vertices]
        return min(vals), max(vals)

    def transform(self, m: UnimodularMap | Sequence[Sequence[int]]) -> "LatticePolytope":
        if not isinstance(m, UnimodularMap):
            m = UnimodularMap(m)
        return LatticePolytope(m(v) for v in self.vertices)

    # -- faces ----------------------------------------------------------

    @cached_property
    def _incidence(self) -> list[frozenset[int]]:
        return [
            frozenset(j for j, f in enumerate(self._hull.facets) if i in f.vertices)
            for i in range(len(self.vertices))
        ]

    def _face_rank(self, common: frozenset[int], cache: dict) -> int:
        if common not in cache:
            cache[common] = ila.rank([self._hull.facets[j].normal for j in common]) if common else 0
        return cache[common]

    @cached_property
    def _faces(self) -> tuple[list[tuple[int, int]], list[tuple[int, ...]]]:
        k = self.dim
        nv = len(self.vertices)
        if k == 0:
            return [], []
        if k == 1:
            return [(0, 1)], []
        if k == 2:
            edges = sorted(tuple(sorted(f.vertices)) for f in self._hull.facets)
            return edges, [tuple(range(nv))]
        inc = self._incidence
        cache: dict = {}
        edges = [
            (i, j)
            for i, j in combinations(range(nv), 2)
            if self._face_rank(inc[i] & inc[j], cache) == k - 1
        ]
        twos: set[tuple[int, ...]] = set()
        for i, j, l in combinations(range(nv), 3):
            common = inc[i] & inc[j] & inc[l]
            if self._face_rank(common, cache) == k - 2:
                twos.add(tuple(v for v in range(nv) if common <= inc[v]))
        return edges, sorted(twos)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return self._faces[0]

    @property
    def two_faces(self) -> list[tuple[int, ...]]:
        return self._faces[1]

    def edge_segments(self) -> list[tuple[Point, Point]]:
        return [(self.vertices[i], self.vertices[j]) for i, j in self.edges]

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        return {"dim": self.ambient_dim, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: Mapping) -> "LatticePolytope":
        p = cls(tuple(int(x) for x in v) for v in data["vertices"])
        if p.ambient_dim != int(data["dim"]):
            raise ValueError("dimension field disagrees with the vertices")
        if sorted(tuple(v) for v in data["vertices"]) != p.vertices:
            raise ValueError("listed points are not exactly the hull vertices")
        return p


def newton_polytope(f: LaurentPoly) -> LatticePolytope:
    if not f:
        raise EmptyPolynomial("the zero polynomial has no Newton polytope")
    return LatticePolytope(f.terms.keys())


def faces(p: LatticePolytope) -> tuple[list[tuple[int, int]], list[tuple[int, ...]]]:
    return p.edges, p.two_faces


def affine_length(p: Sequence[int], q: Sequence[int]) -> int:
    if tuple(p) == tuple(q):
        raise DegenerateSegment(f"segment from {tuple(p)} to itself")
    return ila.vgcd([b - a for a, b in zip(p, q)])


@dataclass(frozen=True)
class FanoReport:
    convex: bool
    full_dimensional: bool
    origin_interior: bool
    primitive_vertices: bool
    non_primitive: tuple[Point, ...] = ()

    @property
    def ok(self) -> bool:
        return self.convex and self.full_dimensional and self.origin_interior and self.primitive_vertices

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "fano": self.ok,
            "convex": self.convex,
            "full_dimensional": self.full_dimensional,
            "origin_interior": self.origin_interior,
            "primitive_vertices": self.primitive_vertices,
            "non_primitive": [list(v) for v in self.non_primitive],
        }


def is_fano(p: LatticePolytope) -> FanoReport:
    origin = (0,) * p.ambient_dim
    bad = tuple(v for v in p.vertices if ila.vgcd(v) != 1)
    # Convexity holds by construction: the vertex list is a hull.
    return FanoReport(
        convex=True,
        full_dimensional=p.is_full_dimensional,
        origin_interior=p._hull.interior_contains(origin),
        primitive_vertices=not bad,
        non_primitive=bad,
    )


def is_simplex(p: LatticePolytope) -> bool:
    n = p.ambient_dim
    if len(p.vertices) != n + 1:
        return False
    v0 = p.vertices[0]
    return ila.det([[a - b for a, b in zip(v, v0)] for v in p.vertices[1:]]) != 0


def _scaled_points(points: Iterable[Sequence[Fraction]]) -> tuple[list[Point], int]:
    pts = [tuple(Fraction(x) for x in p) for p in points]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for p in pts for x in p), 1)
    return [tuple(int(x * den) for x in p) for p in pts], den


def combinatorial_mutate(p: LatticePolytope, d: MutationDatum) -> LatticePolytope:
    """Piecewise-linear image of ``p`` matching :func:`laurent.mutate`.

    With ``g = sign * w`` and the shear ``phi(x) = x + g(x) u``: the part of
    ``p`` where ``g >= 0`` is replaced by the hull of it and its shear; the
    part where ``g <= 0`` is cut down to its intersection with the shear of
    ``p``, which must contain a Minkowski factor of each vertex level.
    """
    n = p.ambient_dim
    if d.dim != n:
        raise ValueError("datum dimension differs from the polytope's")
    g = tuple(d.sign * x for x in d.w)
    u = d.u

    def phi(x):
        s = ila.dot(g, x)
        return tuple(a + s * b for a, b in zip(x, u))

    for v in p.vertices:
        h = ila.dot(g, v)
        if h < 0:
            up = tuple(a - h * b for a, b in zip(v, u))
            down = tuple(a + h * b for a, b in zip(v, u))
            if not (p.contains(up) or p.contains(down)):
                raise NotCombinatoriallyMutable(d.sign * h, f"vertex {v}")

    ineqs = p.halfspaces()
    eqs = p.equations
    neg_g = tuple(-x for x in g)
    grow = vertices_from_constraints(ineqs + [(neg_g, 0)], eqs, n)
    # phi^{-1}(x) = x - g(x) u, so a . phi^{-1}(x) <= b reads (a - (a.u) g) . x <= b.
    sheared = [
        (tuple(ai - ila.dot(a, u) * gi for ai, gi in zip(a, g)), b) for a, b in ineqs
    ]
    sheared_eqs = [
        (tuple(ai - ila.dot(a, u) * gi for ai, gi in zip(a, g)), b) for a, b in eqs
    ]
    shrink = vertices_from_constraints(ineqs + sheared + [(g, 0)], eqs + sheared_eqs, n)
    candidates = grow + [phi(x) for x in grow] + shrink
    if not candidates:
        raise NotCombinatoriallyMutable(0, "empty result")
    scaled, den = _scaled_points(candidates)
    hull = convex_hull(scaled)
    if any(x % den for v in hull.vertices for x in v):
        raise NotCombinatoriallyMutable(0, "result has non-lattice vertices")
    return LatticePolytope(tuple(x // den for x in v) for v in hull.vertices)


@dataclass(frozen=True)
class PolytopeInvariants:
    edge_lengths: tuple[int, ...]
    normalized_volume: int
    vertex_count: int

    def to_json(self) -> dict:
        return {
            "edge_lengths": list(self.edge_lengths),
            "normalized_volume": self.normalized_volume,
            "vertex_count": self.vertex_count,
        }


def normalized_volume(p: LatticePolytope) -> int:
    """n! times the Euclidean volume, for a full-dimensional polytope."""
    if not p.is_full_dimensional:
        raise UnsupportedShape("normalized volume needs a full-dimensional polytope")
    v0 = p.vertices[0]
    total = 0
    for s in p._hull.simplices:
        total += abs(ila.det([[a - b for a, b in zip(x, v0)] for x in s]))
    return total


def invariants(p: LatticePolytope) -> PolytopeInvariants:
    lengths = tuple(sorted(affine_length(a, b) for a, b in p.edge_segments()))
    return PolytopeInvariants(lengths, normalized_volume(p), len(p.vertices))


def unimodular_equivalent(p: LatticePolytope, q: LatticePolytope) -> UnimodularMap | None:
    """A matrix in GL(n, Z) carrying the vertices of ``p`` onto those of ``q``.

    Both must be full-dimensional simplices; the search is exhaustive over
    vertex assignments, so None certifies inequivalence.
    """
    for poly in (p, q):
        if not (poly.is_full_dimensional and is_simplex(poly)):
            raise UnsupportedShape("equivalence is only decided for full-dimensional simplices")
    n = p.ambient_dim
    if q.ambient_dim != n:
        return None
    basis = next(
        (
            idx
            for idx in combinations(range(n + 1), n)
            if ila.det([p.vertices[i] for i in idx]) != 0
        ),
        None,
    )
    if basis is None:
        raise UnsupportedShape("vertices do not span the space")
    # Columns of bp are the chosen vertices; M = bq * bp^{-1}.
    bp_inv = ila.inverse(ila.transpose([p.vertices[i] for i in basis]))
    target = set(q.vertices)
    for images in permutations(range(n + 1), n):
        bq = ila.transpose([q.vertices[j] for j in images])
        m = ila.matmul(bq, bp_inv)
        if any(x.denominator != 1 for row in m for x in row):
            continue
        mi = [[int(x) for x in row] for row in m]
        if ila.det(mi) not in (1, -1):
            continue
        if {ila.matvec(mi, v) for v in p.vertices} == target:
            return UnimodularMap(mi)
    return None
