"""Markov triples and the Markov tree.

A Markov triple is a triple of positive integers with a^2 + b^2 + c^2 = 3abc.
Mutating one entry (Vieta jumping) replaces it by three times the product of
the other two minus itself; the triples form an infinite 3-regular tree rooted
at (1, 1, 1) once permutations are identified.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

ROOT = (1, 1, 1)


class InvalidTriple(ValueError):
    pass


@dataclass(frozen=True)
class MarkovNode:
    triple: tuple[int, int, int]
    path: tuple[int, ...]

    @property
    def key(self) -> tuple[int, int, int]:
        return sorted_triple(self.triple)

    def to_json(self) -> dict:
        return {"triple": [str(x) for x in self.triple], "path": list(self.path)}

    @classmethod
    def from_json(cls, data: dict) -> "MarkovNode":
        triple = tuple(int(x) for x in data["triple"])
        path = tuple(int(k) for k in data["path"])
        if replay_path(path) != triple:
            raise InvalidTriple(f"path {path} does not reach {triple}")
        return cls(triple, path)


def sorted_triple(t: Sequence[int]) -> tuple[int, int, int]:
    a, b, c = sorted(int(x) for x in t)
    return (a, b, c)


def is_markov(t: Sequence[int]) -> bool:
    if len(t) != 3:
        return False
    a, b, c = t
    return a > 0 and b > 0 and c > 0 and a * a + b * b + c * c == 3 * a * b * c


def _check(t: Sequence[int]) -> tuple[int, int, int]:
    if not is_markov(t):
        raise InvalidTriple(f"{tuple(t)} is not a Markov triple")
    a, b, c = t
    return (a, b, c)


def mutate_triple(t: Sequence[int], k: int) -> tuple[int, int, int]:
    """Vieta jump at position ``k``: t[k] -> 3 * (product of the others) - t[k]."""
    out = list(t)
    others = [t[i] for i in range(3) if i != k]
    out[k] = 3 * others[0] * others[1] - t[k]
    return (out[0], out[1], out[2])


def neighbours(t: Sequence[int]) -> list[tuple[int, int, int]]:
    return [mutate_triple(t, k) for k in range(3)]


def parent_triple(t: Sequence[int]) -> tuple[int, int, int] | None:
    """The neighbour with strictly smaller maximum entry; None at the root."""
    t = _check(t)
    top = max(t)
    smaller = [s for s in neighbours(t) if max(s) < top]
    if not smaller:
        return None
    # Two distinct descents would give two paths to the root in a tree.
    assert len({sorted_triple(s) for s in smaller}) == 1, smaller
    return smaller[0]


def replay_path(path: Iterable[int], start: Sequence[int] = ROOT) -> tuple[int, int, int]:
    t = tuple(start)
    for k in path:
        if k not in (0, 1, 2):
            raise InvalidTriple(f"mutation index {k} not in 0..2")
        t = mutate_triple(t, k)
    return t  # type: ignore[return-value]


def ancestry(t: Sequence[int]) -> list[tuple[int, int, int]]:
    """Sorted triples on the tree path from the root to ``t`` (inclusive)."""
    chain = [sorted_triple(_check(t))]
    cur: tuple[int, int, int] | None = tuple(t)  # type: ignore[assignment]
    while True:
        cur = parent_triple(cur)
        if cur is None:
            break
        chain.append(sorted_triple(cur))
    chain.reverse()
    return chain


def canonical_node(t: Sequence[int]) -> MarkovNode:
    """Node for ``t`` carrying the lexicographically smallest shortest path.

    Agrees with the node produced by :func:`enumerate_tree`.
    """
    chain = ancestry(t)
    cur = ROOT
    path: list[int] = []
    for target in chain[1:]:
        for k in range(3):
            nxt = mutate_triple(cur, k)
            if sorted_triple(nxt) == target:
                path.append(k)
                cur = nxt
                break
    return MarkovNode(cur, tuple(path))


def enumerate_tree(max_entry: int) -> list[MarkovNode]:
    """Breadth-first list of tree nodes with every entry <= ``max_entry``.

    Triples equal up to permutation appear once, with the first path found in
    breadth-first order (children expanded by increasing mutation index).
    """
    if max_entry < 1:
        raise ValueError("max_entry must be positive")
    root = MarkovNode(ROOT, ())
    seen = {root.key}
    out = [root]
    queue = deque([root])
    while queue:
        node = queue.popleft()
        for k in range(3):
            child = mutate_triple(node.triple, k)
            key = sorted_triple(child)
            if max(child) > max_entry or key in seen:
                continue
            seen.add(key)
            nxt = MarkovNode(child, node.path + (k,))
            out.append(nxt)
            queue.append(nxt)
    return out


def parse_triple(text: str) -> tuple[int, int, int]:
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != 3:
        raise InvalidTriple(f"expected three comma-separated integers, got {text!r}")
    try:
        t = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise InvalidTriple(f"malformed triple {text!r}") from exc
    return _check(t)
