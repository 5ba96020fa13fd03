import json

import pytest

from viannalift.verify import CLAUSES, IdentityFailed, distinguish, verify_theorem, wall_crossing_check


def test_chekanov_n3():
    rep = verify_theorem((1, 1, 2), 3)
    assert rep.ok, rep.failing()
    assert rep.clauses["triangle-face"].witness["lengths"] == [1, 1, 2]
    assert rep.clauses["unit-edges"].witness["other_edge_lengths"] == [1, 1, 1]


def test_clifford_n4():
    rep = verify_theorem((1, 1, 1), 4)
    assert rep.ok
    assert rep.clauses["unit-edges"].witness["other_edge_lengths"] == [1] * 7
    assert rep.clauses["mutation-consistency"].skipped


def test_125_n3_and_report_shape():
    rep = verify_theorem((5, 2, 1), 3)
    assert rep.ok and rep.triple == (1, 2, 5)
    assert rep.clauses["triangle-face"].witness["lengths"] == [1, 2, 5]
    data = json.loads(json.dumps(rep.to_json()))
    assert [c["name"] for c in data["clauses"]] == list(CLAUSES)


def test_n2_skips_lift_clauses():
    rep = verify_theorem((1, 5, 13), 2)
    assert rep.ok
    assert rep.clauses["z1-projection"].skipped and rep.clauses["lift-structure"].skipped


def test_binomial_witness():
    rep = verify_theorem((1, 5, 13), 3)
    edges = rep.clauses["binomial-edges"].witness["edges"]
    assert sorted(e["length"] for e in edges) == [1, 5, 13]
    assert all(e["binomial"] for e in edges)


@pytest.mark.parametrize("n", [2, 3])
def test_wall_crossing_first_edge(n):
    assert wall_crossing_check((1, 1, 1), (1, 1, 2), n)


def test_wall_crossing_negative_controls():
    with pytest.raises(IdentityFailed) as exc:
        wall_crossing_check((1, 1, 1), (1, 2, 5), 2)
    assert exc.value.difference
    with pytest.raises(IdentityFailed):
        wall_crossing_check((1, 1, 2), (1, 1, 1), 2)


def test_distinguish_examples():
    (r,) = distinguish([(1, 1, 2), (1, 2, 5)], 3)
    assert not r.equivalent and r.method == "edge-lengths"
    assert r.witness == {"left": [1, 1, 1, 1, 1, 2], "right": [1, 1, 1, 1, 2, 5]}
    (r,) = distinguish([(1, 1, 1)], 3)
    assert r.equivalent and r.witness.matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    (r,) = distinguish([(1, 2, 5), (2, 5, 29)], 4)
    assert not r.equivalent
    (r,) = distinguish([(1, 2, 5), (5, 2, 1)], 3)
    assert r.equivalent and r.method == "witness"
