"""Disk potentials of the Clifford, Chekanov and lifted Vianna tori.

Potentials are produced by walking the Markov tree from the Clifford
potential ``x1 + ... + xn + 1/(x1...xn)``. Each step picks an edge of the
distinguished triangle (the Newton polytope of ``W - (x3 + ... + xn)``), builds
the grading/direction pair for that edge, rotates coordinates so the pair
becomes ``(e2, e1)`` and then applies ``x2 -> x2 / (1 + x1)``. Variables
``x3..xn`` are never touched, so the monomials ``x3, ..., xn`` stay put.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from . import intlinalg as ila
from . import laurent as lp
from .lattice import (
    LatticePolytope,
    affine_length,
    combinatorial_mutate,
    newton_polytope,
)
from .laurent import LaurentPoly, MutationDatum, NotMutable, UnimodularMap
from .markov import ROOT, canonical_node, is_markov, replay_path, sorted_triple

Triple = tuple[int, int, int]


class DimensionTooSmall(ValueError):
    pass


class SeedNotFound(RuntimeError):
    def __init__(self, step: int, target: Triple, found: list):
        self.step = step
        self.target = target
        self.found = found
        super().__init__(f"step {step}: no seed produces {target}; candidates give {found}")


class AmbiguousSeed(RuntimeError):
    pass


class StructureViolation(AssertionError):
    def __init__(self, clauses: Sequence[int], report: "LiftReport"):
        self.clauses = tuple(clauses)
        self.report = report
        super().__init__(f"lift structure clauses {list(self.clauses)} fail: {report.messages}")


def unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


@dataclass(frozen=True)
class Step:
    parent: Triple
    child: Triple
    datum: MutationDatum  # in the coordinates of the parent potential
    alignment: UnimodularMap  # sends datum to (e2 grading, e1 factor)
    ambiguous: bool = False
    # Newton vertices of parent and child; derived from the polynomials on demand
    vertices: list = field(default_factory=lambda: [None, None], compare=False, repr=False)
    sources: tuple = field(default=(), compare=False, repr=False)

    def _vertices(self, i: int) -> tuple[tuple[int, ...], ...]:
        if self.vertices[i] is None:
            self.vertices[i] = tuple(newton_polytope(self.sources[i]).vertices)
        return self.vertices[i]

    @property
    def before(self) -> tuple[tuple[int, ...], ...]:
        return self._vertices(0)

    @property
    def after(self) -> tuple[tuple[int, ...], ...]:
        return self._vertices(1)

    def to_json(self) -> dict:
        return {
            "parent": [str(x) for x in self.parent],
            "child": [str(x) for x in self.child],
            "datum": self.datum.to_json(),
            "alignment": self.alignment.to_json(),
            "before": [list(v) for v in self.before],
            "after": [list(v) for v in self.after],
            "ambiguous": self.ambiguous,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Step":
        return cls(
            tuple(int(x) for x in data["parent"]),
            tuple(int(x) for x in data["child"]),
            MutationDatum.from_json(data["datum"]),
            UnimodularMap(data["alignment"]),
            bool(data.get("ambiguous", False)),
            [tuple(tuple(v) for v in data["before"]), tuple(tuple(v) for v in data["after"])],
        )


@dataclass(eq=False)
class PotentialRecord:
    triple: Triple
    dim: int
    poly: LaurentPoly
    basis: UnimodularMap
    steps: tuple[Step, ...] = ()
    path: tuple[int, ...] = field(default=())

    @cached_property
    def newton(self) -> LatticePolytope:
        return newton_polytope(self.poly)

    @cached_property
    def triangle(self) -> LatticePolytope:
        return distinguished_triangle(self.poly)

    def to_json(self) -> dict:
        return {
            "triple": [str(x) for x in self.triple],
            "dim": self.dim,
            "path": list(self.path),
            "poly": lp.to_json(self.poly),
            "basis": self.basis.to_json(),
            "steps": [s.to_json() for s in self.steps],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PotentialRecord":
        rec = cls(
            tuple(int(x) for x in data["triple"]),
            int(data["dim"]),
            lp.from_json(data["poly"]),
            UnimodularMap(data["basis"]),
            tuple(Step.from_json(s) for s in data["steps"]),
            tuple(int(k) for k in data.get("path", ())),
        )
        return rec


def inert_terms(n: int) -> LaurentPoly:
    """``x3 + ... + xn``."""
    return LaurentPoly(n, {unit(n, i): 1 for i in range(2, n)})


def distinguished_triangle(poly: LaurentPoly) -> LatticePolytope:
    n = poly.dim
    for i in range(2, n):
        if poly[unit(n, i)] != 1:
            raise StructureViolation([1], LiftReport(n, {1: False}, {1: f"x{i + 1} term missing"}))
    return newton_polytope(poly - inert_terms(n))


def clifford(n: int) -> PotentialRecord:
    if n < 2:
        raise DimensionTooSmall("the Clifford potential needs n >= 2")
    terms = {unit(n, i): 1 for i in range(n)}
    terms[(-1,) * n] = 1
    return PotentialRecord(ROOT, n, LaurentPoly(n, terms), UnimodularMap.identity(n))


def seed_data(poly: LaurentPoly) -> list[tuple[MutationDatum, tuple, tuple]]:
    """One grading/direction pair per edge of the distinguished triangle.

    Returns ``(datum, p, q)`` sorted by ``(w, u)``; divisibility is not checked.
    """
    n = poly.dim
    tri = distinguished_triangle(poly)
    if len(tri.vertices) != 3 or tri.dim != 2:
        raise StructureViolation([1], LiftReport(n, {1: False}, {1: f"not a triangle: {tri.vertices}"}))
    out = []
    verts = tri.vertices
    for a, b in tri.edges:
        p, q = verts[a], verts[b]
        r = next(v for v in verts if v not in (p, q))
        u = ila.sign_normalize(ila.primitive([y - x for x, y in zip(p, q)]))
        rows = [u] + [unit(n, i) for i in range(2, n)]
        (w,) = ila.nullspace(rows, n)
        if ila.dot(w, r) > ila.dot(w, p):
            w = tuple(-x for x in w)
        if ila.dot(w, p) <= 0:
            continue
        out.append((MutationDatum(w, u, -1), p, q))
    out.sort(key=lambda t: (t[0].w, t[0].u))
    return out


def seed_candidates(rec: PotentialRecord | LaurentPoly) -> list[MutationDatum]:
    """Mutation data along triangle edges that pass the divisibility test."""
    poly = rec.poly if isinstance(rec, PotentialRecord) else rec
    return [d for d, _, _ in seed_data(poly) if lp.is_mutable(poly, d)]


def alignment(d: MutationDatum) -> UnimodularMap:
    """Unimodular M with M u = e1, (grading w) o M^{-1} = e2 and M e_i = e_i, i >= 3."""
    n = d.dim
    w, u = d.w, d.u
    if any(w[2:]):
        raise ValueError(f"grading {w} involves the inert variables")
    u2 = (u[0], u[1])
    if ila.vgcd(u2) != 1:
        raise ValueError(f"direction {u} does not project to a primitive planar vector")
    _, s, t = ila.xgcd(w[0], w[1])
    # All solutions of w . v == 1 are (s, t) + k * u2; take the smallest.
    best = None
    candidates = set()
    for i in range(2):
        if u2[i]:
            k0 = Fraction(-(s, t)[i], u2[i])
            candidates.update({int(k0.__floor__()), int(k0.__ceil__())})
    for k in sorted(candidates) or [0]:
        v = (s + k * u2[0], t + k * u2[1])
        key = (abs(v[0]) + abs(v[1]), v)
        if best is None or key < best[0]:
            best = (key, v)
    v = best[1]
    cols = [u, v + (0,) * (n - 2)] + [unit(n, i) for i in range(2, n)]
    b = ila.transpose(cols)
    return UnimodularMap(ila.unimodular_inverse(b))


def apply_step(poly: LaurentPoly, d: MutationDatum) -> tuple[UnimodularMap, LaurentPoly]:
    m = alignment(d)
    aligned = lp.apply_unimodular(poly, m)
    return m, lp.mutate(aligned, MutationDatum.standard(poly.dim))


def _lengths(p: LatticePolytope) -> tuple[int, ...]:
    return tuple(sorted(affine_length(a, b) for a, b in p.edge_segments()))


def _step(rec: PotentialRecord, target: Triple, path, prefer=None, pick: int = 0) -> PotentialRecord:
    poly = rec.poly
    data = seed_data(poly)
    matches = []
    found = []
    for d, _, _ in data:
        if prefer is not None and (d.w, d.u) != prefer:
            continue
        try:
            tri = combinatorial_mutate(rec.triangle, d)
        except NotMutable:
            continue
        lengths = _lengths(tri)
        found.append(lengths)
        if lengths == tuple(sorted(target)) and lp.is_mutable(poly, d):
            matches.append(d)
    if not matches:
        raise SeedNotFound(len(rec.steps), target, found)
    if pick >= len(matches):
        raise AmbiguousSeed(f"step {len(rec.steps)}: only {len(matches)} matching seeds")
    d = matches[pick]
    m, child = apply_step(poly, d)
    out = PotentialRecord(
        sorted_triple(target), rec.dim, child, m @ rec.basis, (), tuple(path)
    )
    step = Step(rec.triple, out.triple, d, m, ambiguous=len(matches) > 1, sources=(poly, child))
    out.steps = rec.steps + (step,)
    return out


def chekanov(n: int) -> PotentialRecord:
    """One step from Clifford along the edge [e1, e2]."""
    if n < 2:
        raise DimensionTooSmall("the Chekanov potential needs n >= 2")
    root = clifford(n)
    d = MutationDatum((1, 1) + (0,) * (n - 2), (1, -1) + (0,) * (n - 2))
    m, poly = apply_step(root.poly, d)
    step = Step(ROOT, (1, 1, 2), d, m, sources=(root.poly, poly))
    return PotentialRecord((1, 1, 2), n, poly, m, (step,), (0,))


_memo: dict[tuple[Triple, int], PotentialRecord] = {}
_memo_lock = threading.Lock()


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


def vianna(t: Sequence[int], n: int) -> PotentialRecord:
    """Potential of the lifted torus for the Markov triple ``t`` in dimension n."""
    if n < 2:
        raise DimensionTooSmall("lifted tori need n >= 2")
    if not is_markov(t):
        raise ValueError(f"{tuple(t)} is not a Markov triple")
    key = (sorted_triple(t), n)
    with _memo_lock:
        hit = _memo.get(key)
    if hit is not None:
        return hit
    node = canonical_node(t)
    if not node.path:
        rec = clifford(n)
    else:
        parent = vianna(replay_path(node.path[:-1]), n)
        rec = _step(parent, key[0], node.path)
    with _memo_lock:
        rec = _memo.setdefault(key, rec)
    return rec


def walk(t: Sequence[int], n: int, picks: Sequence[int] = ()) -> PotentialRecord:
    """Unmemoized walk to ``t``; ``picks[i]`` selects among matching seeds at step i.

    With no picks this reproduces :func:`vianna`.
    """
    node = canonical_node(t)
    rec = clifford(n)
    for i, _ in enumerate(node.path):
        target = sorted_triple(replay_path(node.path[: i + 1]))
        pick = picks[i] if i < len(picks) else 0
        rec = _step(rec, target, node.path[: i + 1], pick=pick)
    return rec


def seed_multiplicities(t: Sequence[int], n: int) -> list[int]:
    """Number of matching seeds at each step of the canonical walk to ``t``."""
    node = canonical_node(t)
    out = []
    rec = clifford(n)
    for i, _ in enumerate(node.path):
        target = sorted_triple(replay_path(node.path[: i + 1]))
        count = 0
        for d, _, _ in seed_data(rec.poly):
            try:
                tri = combinatorial_mutate(rec.triangle, d)
            except NotMutable:
                continue
            if _lengths(tri) == target and lp.is_mutable(rec.poly, d):
                count += 1
        out.append(count)
        rec = _step(rec, target, node.path[: i + 1])
    return out


def _planar_step(st: Step) -> Step:
    # the alignment is block triangular, so its (x1, x2) block acts on z = 1
    m = tuple(tuple(row[:2]) for row in st.alignment.matrix[:2])
    d = MutationDatum(st.datum.w[:2], ila.primitive(st.datum.u[:2]), st.datum.sign)
    return Step(st.parent, st.child, d, UnimodularMap(m))


def replay(n: int, steps: Sequence[Step]) -> LaurentPoly:
    """Rebuild a potential from Clifford by re-applying logged steps."""
    poly = clifford(n).poly
    std = MutationDatum.standard(n)
    for s in steps:
        poly = lp.mutate(lp.apply_unimodular(poly, s.alignment), std)
    return poly


@dataclass
class LiftReport:
    dim: int
    clauses: dict[int, bool]
    messages: dict[int, str] = field(default_factory=dict)
    constant: int | None = None
    triangle: tuple[tuple[int, ...], ...] = ()
    slopes: tuple = ()
    grading: tuple[int, int] | None = None

    @property
    def ok(self) -> bool:
        return all(self.clauses.values())

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "clauses": {str(k): v for k, v in self.clauses.items()},
            "messages": {str(k): v for k, v in self.messages.items()},
            "constant": self.constant,
            "triangle": [list(v) for v in self.triangle],
            "slopes": [[str(x) for x in s] for s in self.slopes],
            "grading": list(self.grading) if self.grading else None,
        }


def _lift_grading(rest: LaurentPoly) -> tuple[int, int] | None:
    """Grading of the (x1, x2)-plane along which the support's z-part can be affine.

    The support must span a plane meeting ``z = 0`` in a line with direction
    ``u``; the grading is ``u`` rotated by a quarter turn. In the mutable basis
    ``u = e1`` and this is the ``x2``-degree.
    """
    pts = sorted(rest.terms)
    diffs = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]
    basis: list[tuple[int, ...]] = []
    for d in diffs:
        if ila.rank(basis + [d]) > len(basis):
            basis.append(d)
    if len(basis) != 2:
        return None
    zrows = [[b[r] for b in basis] for r in range(2, rest.dim)]
    if not any(any(row) for row in zrows):
        return (0, 1)
    kernel = ila.nullspace(zrows, 2)
    if len(kernel) != 1:
        return None
    a, b = kernel[0]
    u = ila.primitive((a * basis[0][0] + b * basis[1][0], a * basis[0][1] + b * basis[1][1]))
    return ila.sign_normalize((-u[1], u[0]))


def check_lift_structure(rec: PotentialRecord | LaurentPoly, triple: Sequence[int] | None = None,
                         raise_on_fail: bool = True) -> LiftReport:
    """Check the three lift clauses on an n >= 3 potential.

    1. ``W - (x3 + ... + xn)`` has a triangle as Newton polytope;
    2. the exponents of ``x3..xn`` are affine functions of the ``x2``-exponent;
    3. ``W(x1, x2, 1, ..., 1)`` is the planar potential plus ``n - 2``.
    """
    poly = rec.poly if isinstance(rec, PotentialRecord) else rec
    if triple is None and isinstance(rec, PotentialRecord):
        triple = rec.triple
    n = poly.dim
    if n < 3:
        raise DimensionTooSmall("lift structure is only defined for n >= 3")
    report = LiftReport(n, {})
    rest = poly - inert_terms(n)
    if any(poly[unit(n, i)] != 1 for i in range(2, n)):
        report.clauses[1] = False
        report.messages[1] = "inert monomials x3..xn are not all present with coefficient 1"
    else:
        tri = newton_polytope(rest)
        report.triangle = tuple(tri.vertices)
        report.clauses[1] = tri.dim == 2 and len(tri.vertices) == 3
        if not report.clauses[1]:
            report.messages[1] = f"Newton polytope of W - z has dim {tri.dim}, vertices {tri.vertices}"

    grading = _lift_grading(rest)
    report.grading = grading
    ok2 = grading is not None
    if ok2:
        levels: dict[int, set[tuple[int, ...]]] = {}
        for e in rest.terms:
            levels.setdefault(grading[0] * e[0] + grading[1] * e[1], set()).add(e[2:])
        ok2 = all(len(zs) == 1 for zs in levels.values())
    if ok2 and len(levels) >= 2:
        (y0, z0), (y1, z1) = [(y, next(iter(levels[y]))) for y in sorted(levels)[:2]]
        slopes = tuple(Fraction(b - a, y1 - y0) for a, b in zip(z0, z1))
        report.slopes = (slopes,)
        for y, zs in levels.items():
            z = next(iter(zs))
            if any(zi != a + s * (y - y0) for zi, a, s in zip(z, z0, slopes)):
                ok2 = False
                break
    report.clauses[2] = ok2
    if not ok2:
        report.messages[2] = "inert exponents are not an affine function of a grading of the (x1, x2)-plane"

    special = lp.specialize_units(poly, range(2, n))
    report.constant = special[(0, 0)]
    if isinstance(rec, PotentialRecord) and rec.steps:
        planar = replay(2, [_planar_step(st) for st in rec.steps])
    elif triple is not None:
        planar = vianna(triple, 2).poly
    else:
        planar = None
    if planar is not None:
        report.clauses[3] = special == planar + (n - 2)
        if not report.clauses[3]:
            report.messages[3] = f"W(x,y,1..1) - planar potential = {special - planar}"
    failing = [k for k, v in report.clauses.items() if not v]
    if failing and raise_on_fail:
        raise StructureViolation(failing, report)
    return report
