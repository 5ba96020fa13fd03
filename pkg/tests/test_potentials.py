import pytest

from viannalift import laurent as lp
from viannalift.lattice import LatticePolytope, affine_length, invariants, is_fano, is_simplex, unimodular_equivalent
from viannalift.laurent import LaurentPoly
from viannalift.markov import canonical_node, enumerate_tree, replay_path, sorted_triple
from viannalift.potentials import (
    AmbiguousSeed,
    DimensionTooSmall,
    PotentialRecord,
    StructureViolation,
    _step,
    check_lift_structure,
    chekanov,
    clifford,
    replay,
    seed_candidates,
    vianna,
    walk,
)


def chekanov_by_hand(n):
    # y + z + (1+x)^2 / (x y^2 z1...z_{n-2}), expanded by hand
    zs = (-1,) * (n - 2)
    terms = {(0, 1) + (0,) * (n - 2): 1}
    for i in range(2, n):
        terms[tuple(int(j == i) for j in range(n))] = 1
    for k, c in ((-1, 1), (0, 2), (1, 1)):
        terms[(k, -2) + zs] = c
    return LaurentPoly(n, terms)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_clifford_and_chekanov(n):
    cliff = clifford(n).poly
    assert len(cliff) == n + 1 and cliff[(-1,) * n] == 1
    assert chekanov(n).poly == chekanov_by_hand(n)


def test_dimension_checks():
    with pytest.raises(DimensionTooSmall):
        clifford(1)
    with pytest.raises(ValueError):
        vianna((1, 2, 3), 2)


def test_vianna_small_triangles():
    tri = vianna((1, 2, 5), 2).newton
    assert sorted(affine_length(a, b) for a, b in tri.edge_segments()) == [1, 2, 5]
    p = vianna((1, 5, 13), 3).newton
    assert is_simplex(p) and len(p.vertices) == 4
    assert invariants(p).edge_lengths == (1, 1, 1, 1, 5, 13)


def test_vianna_112_is_chekanov_up_to_basis():
    for n in (2, 3, 4):
        assert unimodular_equivalent(vianna((1, 1, 2), n).newton, chekanov(n).newton) is not None


def test_steps_replay_to_the_record():
    for nd in enumerate_tree(433):
        rec = vianna(nd.key, 3)
        assert replay(3, rec.steps) == rec.poly
        assert len(rec.steps) == len(nd.path)


def test_record_json_round_trip():
    rec = vianna((2, 5, 29), 3)
    back = PotentialRecord.from_json(rec.to_json())
    assert back.poly == rec.poly and back.basis == rec.basis and back.steps == rec.steps


def test_basis_is_cumulative_alignment():
    rec = vianna((1, 13, 34), 2)
    m = lp.UnimodularMap.identity(2)
    for s in rec.steps:
        m = s.alignment @ m
    assert rec.basis == m


def _all_walks(t, n):
    """Every record reachable by the canonical path with any choice of matching seed."""
    node = canonical_node(t)
    frontier = [clifford(n)]
    for i in range(len(node.path)):
        target = sorted_triple(replay_path(node.path[: i + 1]))
        nxt = []
        for rec in frontier:
            pick = 0
            while True:
                try:
                    nxt.append(_step(rec, target, node.path[: i + 1], pick=pick))
                except AmbiguousSeed:
                    break
                pick += 1
        frontier = nxt
    return frontier


@pytest.mark.parametrize("n", [2, 3])
def test_path_independence_up_to_34(n):
    for nd in enumerate_tree(34):
        ref = vianna(nd.key, n).newton
        walks = _all_walks(nd.key, n)
        assert walks
        for rec in walks:
            assert unimodular_equivalent(rec.newton, ref) is not None
            for step in rec.steps:
                assert is_fano(LatticePolytope(step.before)) and is_fano(LatticePolytope(step.after))


def test_walk_without_picks_is_canonical():
    assert walk((2, 5, 29), 3).poly == vianna((2, 5, 29), 3).poly


def test_seed_candidates_of_clifford():
    seeds = seed_candidates(clifford(2))
    assert seeds and all(lp.is_mutable(clifford(2).poly, d) for d in seeds)


def test_lift_structure_examples():
    rep = check_lift_structure(chekanov(3))
    assert rep.ok and rep.constant == 1
    rep = check_lift_structure(clifford(4))
    assert rep.ok and sorted(rep.triangle) == [(-1, -1, -1, -1), (0, 1, 0, 0), (1, 0, 0, 0)]


def test_lift_structure_negative_control():
    rec = vianna((1, 5, 13), 3)
    e = next(e for e in sorted(rec.poly.terms) if e != (0, 0, 1))
    c = rec.poly[e]
    bumped = rec.poly - LaurentPoly.monomial(e, c) + LaurentPoly.monomial((e[0], e[1], e[2] + 1), c)
    with pytest.raises(StructureViolation) as exc:
        check_lift_structure(bumped, (1, 5, 13))
    assert 2 in exc.value.clauses
    with pytest.raises(DimensionTooSmall):
        check_lift_structure(vianna((1, 2, 5), 2))
