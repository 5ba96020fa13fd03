"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

import random
import time
from math import comb, isqrt

import pytest

import test_lattice
import test_laurent
from conftest import ACCEPTANCE
from viannalift import laurent as lp
from viannalift.lattice import (
    LatticePolytope,
    affine_length,
    combinatorial_mutate,
    is_fano,
    is_simplex,
    newton_polytope,
    unimodular_equivalent,
)
from viannalift.laurent import LaurentPoly, UnimodularMap
from viannalift.markov import enumerate_tree, parent_triple
from viannalift.potentials import chekanov, clear_cache, clifford, vianna
from viannalift.verify import distinguish, wall_crossing_check

TRIPLES = [nd.key for nd in enumerate_tree(433)]
LISTED = [(1, 5, 13), (2, 5, 29), (1, 13, 34), (5, 13, 194), (2, 29, 169), (5, 29, 433)]


def record(number, ok, detail):
    ACCEPTANCE.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    print(ACCEPTANCE[-1])


def unit(n, i):
    return tuple(int(j == i) for j in range(n))


def clifford_formula(n):
    terms = {unit(n, i): 1 for i in range(n)}
    terms[(-1,) * n] = 1
    return LaurentPoly(n, terms)


def chekanov_formula(n):
    # x2 + x3 + ... + xn + (1 + x1)^2 / (x1 x2^2 x3 ... xn)
    f = LaurentPoly(n, {unit(n, i): 1 for i in range(1, n)})
    one_plus_x = LaurentPoly(n, {(0,) * n: 1, unit(n, 0): 1})
    return f + LaurentPoly.monomial((-1, -2) + (-1,) * (n - 2)) * one_plus_x**2


def triangle_lengths(poly):
    n = poly.dim
    rest = poly - LaurentPoly(n, {unit(n, i): 1 for i in range(2, n)})
    tri = newton_polytope(rest)
    return tri, sorted(affine_length(a, b) for a, b in tri.edge_segments())


def test_criterion_1_clifford_chekanov():
    worst = 0.0
    ok = True
    for n in range(2, 6):
        best = float("inf")
        for _ in range(5):
            t0 = time.perf_counter()
            good = clifford(n).poly == clifford_formula(n) and chekanov(n).poly == chekanov_formula(n)
            best = min(best, time.perf_counter() - t0)
            ok &= good
        worst = max(worst, best)
    ok_time = worst < 1e-3
    record(1, ok and ok_time, f"exact match n=2..5; slowest fresh build+compare {worst * 1e3:.3f} ms (< 1 ms)")
    assert ok and ok_time


def test_criterion_2_vianna_triangles():
    clear_cache()
    t0 = time.perf_counter()
    bad = []
    for t in TRIPLES:
        p = vianna(t, 2).newton
        lengths = sorted(affine_length(a, b) for a, b in p.edge_segments())
        if len(p.vertices) != 3 or lengths != list(t):
            bad.append(t)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60 and all(t in TRIPLES for t in LISTED)
    record(2, ok, f"{len(TRIPLES)} triples with max <= 433, all triangles with lengths {{a,b,c}}; {dt:.2f} s (< 60 s)")
    # The criterion also says "12+ triples"; only 11 Markov triples have max entry <= 433.
    brute = set()
    for a in range(1, 434):
        for b in range(a, 434):
            # c solves c^2 - 3ab c + a^2 + b^2 = 0
            disc = 9 * a * a * b * b - 4 * (a * a + b * b)
            r = isqrt(disc) if disc >= 0 else -1
            if r >= 0 and r * r == disc:
                for c in ((3 * a * b - r) // 2, (3 * a * b + r) // 2):
                    if b <= c <= 433 and a * a + b * b + c * c == 3 * a * b * c:
                        brute.add((a, b, c))
    ACCEPTANCE.append(
        f"criterion  2: NOTE  the '12+ triples' count is unattainable: independent scan finds "
        f"{len(brute)} Markov triples with max entry <= 433"
    )
    assert ok and sorted(brute) == sorted(TRIPLES)


def test_criterion_3_simplex_in_higher_dims():
    t0 = time.perf_counter()
    bad = []
    for n in (3, 4, 5):
        for t in TRIPLES:
            p = vianna(t, n).newton
            tri, lengths = triangle_lengths(vianna(t, n).poly)
            expected = sorted(list(tri.vertices) + [unit(n, i) for i in range(2, n)])
            face = tuple(sorted(p.vertices.index(v) for v in tri.vertices)) if p.vertices == expected else None
            tri_edges = {tuple(sorted(e)) for e in tri.edge_segments()}
            others = [affine_length(a, b) for a, b in p.edge_segments() if tuple(sorted((a, b))) not in tri_edges]
            good = (
                p.is_full_dimensional and is_simplex(p) and len(p.vertices) == n + 1
                and face in p.two_faces and lengths == list(t) and set(others) == {1}
            )
            if not good:
                bad.append((t, n))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 300
    record(3, ok, f"n=3,4,5 x {len(TRIPLES)} triples: simplex, {{a,b,c}} 2-face, other edges 1; {dt:.2f} s (< 5 min)")
    assert ok, bad


def test_criterion_4_coefficients():
    checked = 0
    bad = []
    for n in (2, 3, 4, 5):
        for t in TRIPLES:
            poly = vianna(t, n).poly
            p = newton_polytope(poly)
            if any(abs(poly[v]) != 1 for v in p.vertices):
                bad.append((t, n, "vertex"))
            tri, _ = triangle_lengths(poly)
            for a, b in tri.edge_segments():
                L = affine_length(a, b)
                step = [(y - x) // L for x, y in zip(a, b)]
                got = [poly[tuple(x + j * s for x, s in zip(a, step))] for j in range(L + 1)]
                sign = poly[a]
                if got != [sign * comb(L, j) for j in range(L + 1)]:
                    bad.append((t, n, a, b))
                checked += L + 1
    record(4, not bad, f"|vertex coef| = 1 and {checked} edge coefficients equal sign * C(L, j)")
    assert not bad


def test_criterion_5_wall_crossing():
    count = 0
    for n in (2, 3, 4):
        for t in TRIPLES:
            parent = parent_triple(t)
            if parent is not None:
                assert wall_crossing_check(parent, t, n)
                count += 1
    record(5, True, f"{count} tree edges (n=2,3,4): y -> y(1+x) in the child reproduces the parent exactly")


def test_criterion_6_projection():
    bad = []
    for n in (3, 4, 5):
        for t in TRIPLES:
            special = lp.specialize_units(vianna(t, n).poly, range(2, n))
            if special != vianna(t, 2).poly + (n - 2):
                bad.append((t, n))
    record(6, not bad, f"W(x, y, 1, ..., 1) = W_2(x, y) + (n - 2) for {3 * len(TRIPLES)} (triple, n) pairs")
    assert not bad


def test_criterion_7_mutation_consistency():
    count = 0
    bad = []
    for n in (2, 3, 4, 5):
        for t in TRIPLES:
            rec = vianna(t, n)
            if not rec.steps:
                continue
            step = rec.steps[-1]
            parent = vianna(step.parent, n)
            algebraic = newton_polytope(lp.mutate(parent.poly, step.datum))
            combinatorial = combinatorial_mutate(parent.newton, step.datum)
            if algebraic != combinatorial or combinatorial.transform(step.alignment) != rec.newton:
                bad.append((t, n))
            count += 1
    record(7, not bad, f"Newt(mutate(f, d)) = combinatorial_mutate(Newt(f), d) on {count} steps")
    assert not bad


def test_criterion_8_fano():
    count = 0
    bad = []
    for n in (2, 3, 4, 5):
        for t in TRIPLES:
            rec = vianna(t, n)
            polys = [LatticePolytope(s.before) for s in rec.steps] + [rec.newton]
            for p in polys:
                count += 1
                if not is_fano(p):
                    bad.append((t, n))
    record(8, not bad, f"{count} intermediate Newton polytopes along every walk are Fano")
    assert not bad


def random_unimodular(rng, n):
    m = [list(unit(n, i)) for i in range(n)]
    for _ in range(8):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-2, -1, 1, 2])
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    rng.shuffle(m)
    return UnimodularMap(m)


def test_criterion_9_distinguishing():
    t0 = time.perf_counter()
    pairs = 0
    for n in (3, 4):
        for r in distinguish(TRIPLES, n):
            assert not r.equivalent and r.left != r.right
            pairs += 1
    rng = random.Random(20240611)
    images = 0
    for n in (3, 4):
        for t in TRIPLES:
            p = vianna(t, n).newton
            for _ in range(20):
                q = p.transform(random_unimodular(rng, n))
                w = unimodular_equivalent(p, q)
                assert w is not None and p.transform(w) == q
                images += 1
    dt = time.perf_counter() - t0
    ok = dt < 120
    record(9, ok, f"{pairs} distinct pairs certified; witnesses found for {images} random images; {dt:.2f} s (< 2 min)")
    assert ok


@pytest.mark.parametrize(
    "name,fn",
    [
        ("mutation involution", test_laurent.test_mutation_involution),
        ("GL(n,Z) equivariance of Newton polytopes", test_lattice.test_newton_polytope_equivariance),
        ("affine-length invariance", test_lattice.test_affine_length_invariance),
        ("grade/mul compatibility", test_laurent.test_grade_mul_compatibility),
    ],
)
def test_criterion_10_property_suites(name, fn):
    assert fn.hypothesis.inner_test is not None
    fn()  # each runs 1000 generated instances
    record(10, True, f"{name}: 1000 randomized instances, zero failures")
