import pytest
from hypothesis import given, settings, strategies as st

from viannalift.markov import (
    ROOT,
    InvalidTriple,
    MarkovNode,
    ancestry,
    canonical_node,
    enumerate_tree,
    is_markov,
    mutate_triple,
    neighbours,
    parent_triple,
    parse_triple,
    replay_path,
    sorted_triple,
)


def brute_markov(bound):
    # independent oracle: scan all sorted triples directly
    out = []
    for a in range(1, bound + 1):
        for b in range(a, bound + 1):
            for c in range(b, bound + 1):
                if a * a + b * b + c * c == 3 * a * b * c:
                    out.append((a, b, c))
    return out


def test_small_tree_matches_brute_force():
    got = sorted(nd.key for nd in enumerate_tree(200))
    assert got == brute_markov(200)


def test_tree_up_to_13():
    assert [nd.key for nd in enumerate_tree(13)] == [(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13)]


def test_tree_up_to_433_has_eleven_triples():
    keys = {nd.key for nd in enumerate_tree(433)}
    assert len(keys) == 11
    for t in [(1, 5, 13), (2, 5, 29), (1, 13, 34), (5, 13, 194), (2, 29, 169), (5, 29, 433)]:
        assert t in keys


def test_root_only():
    assert [nd.key for nd in enumerate_tree(1)] == [ROOT]
    with pytest.raises(ValueError):
        enumerate_tree(0)


def test_vieta_jump():
    assert mutate_triple((1, 1, 1), 0) == (2, 1, 1)
    assert mutate_triple((1, 2, 5), 0) == (29, 2, 5)
    assert sorted(map(sorted_triple, neighbours((1, 2, 5)))) == [(1, 1, 2), (1, 5, 13), (2, 5, 29)]


def test_parent_and_ancestry():
    assert parent_triple(ROOT) is None
    assert sorted_triple(parent_triple((5, 29, 433))) == (2, 5, 29)
    assert [sorted_triple(t) for t in ancestry((2, 5, 29))] == [(1, 1, 1), (1, 1, 2), (1, 2, 5), (2, 5, 29)]
    with pytest.raises(InvalidTriple):
        parent_triple((1, 2, 3))


def test_canonical_path_replays():
    for nd in enumerate_tree(433):
        assert sorted_triple(replay_path(nd.path)) == nd.key
        assert canonical_node(nd.key).path == nd.path


def test_node_json_round_trip():
    for nd in enumerate_tree(433):
        assert MarkovNode.from_json(nd.to_json()) == nd
    with pytest.raises(InvalidTriple):
        MarkovNode.from_json({"triple": ["1", "2", "5"], "path": [0]})


def test_big_entries_stay_exact():
    t = replay_path([0, 1, 2] * 4)
    assert is_markov(t)
    assert max(t) > 2**64


@pytest.mark.parametrize("text", ["1,2", "1,2,x", "1,2,4", "0,0,0", "", "1,1,1,1"])
def test_parse_rejects(text):
    with pytest.raises(InvalidTriple):
        parse_triple(text)


def test_parse_accepts():
    assert parse_triple(" 5, 2 ,29") == (5, 2, 29)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=12))
def test_random_walks_stay_on_the_surface(path):
    t = replay_path(path)
    assert is_markov(t)
    for k in range(3):
        assert mutate_triple(mutate_triple(t, k), k) == t
