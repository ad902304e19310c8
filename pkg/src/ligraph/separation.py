"""Asymmetric graph separation for directed, possibly cyclic graphs.

``delta_separates`` is the normative moral-graph procedure: reduce
overlapping query sets, delete the edges leaving the predicted set,
restrict to the ancestral set of the query, moralize, and test
undirected separation.  ``delta_separates_trail`` answers the same
question by searching for an active allowed trail; the two must agree
on every input, and that agreement is itself a tested property.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graphs import (
    DiGraph,
    GraphError,
    _iter_bits,
    moral_adjacency,
    u_separated_masks,
)

MAX_ENUMERATION_NODES = 6


class EnumerationGuardError(GraphError):
    """An exhaustive enumeration was requested on too large an instance."""


@dataclass(frozen=True)
class SeparationQuery:
    """Query "c separates a from b": is the past of ``a`` irrelevant for
    predicting the present of ``b`` once the past of ``c`` is known?

    The three sets may overlap; evaluation reduces them first.
    """

    a: frozenset[str]
    b: frozenset[str]
    c: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        object.__setattr__(self, "b", frozenset(self.b))
        object.__setattr__(self, "c", frozenset(self.c))

    def reduced(self) -> "SeparationQuery":
        return SeparationQuery(self.a - (self.b | self.c), self.b, self.c - self.b)


def _reduce_masks(a: int, b: int, c: int) -> tuple[int, int, int]:
    return a & ~(b | c), b, c & ~b


def delta_separates_masks(g: DiGraph, a: int, b: int, c: int) -> bool:
    a, b, c = _reduce_masks(a, b, c)
    if a == 0 or b == 0:
        return True
    anc = g.ancestral_mask(a | b | c)
    adj = moral_adjacency(g, banned_sources=b, keep=anc)
    return u_separated_masks(adj, a, b, c)


def delta_trail_masks(g: DiGraph, a: int, b: int, c: int) -> bool:
    a, b, c = _reduce_masks(a, b, c)
    if a == 0 or b == 0:
        return True
    if a & b:
        return False
    n = len(g.labels)
    # Allowed trails contain no edge from b to the outside; drop those
    # edges in both traversal directions.
    children = [
        g._children[i] if not (b >> i) & 1 else g._children[i] & b for i in range(n)
    ]
    parents = [
        g._parents[i] if (b >> i) & 1 else g._parents[i] & ~b for i in range(n)
    ]
    anc_c = g.ancestral_mask(c)  # collider openness is judged in the full graph

    # Reachability over (node, arrival-direction) states.  "head" means the
    # trail entered along an edge pointing into the node, "tail" along an
    # edge pointing out of it.
    head = 0
    tail = 0
    new_head = 0
    new_tail = 0
    for x in _iter_bits(a):
        new_head |= children[x]
        new_tail |= parents[x]
    while new_head or new_tail:
        if (new_head | new_tail) & b:
            return False
        head |= new_head
        tail |= new_tail
        grow_head = 0
        grow_tail = 0
        for v in _iter_bits(new_head):
            if not (c >> v) & 1:
                grow_head |= children[v]  # pass through as a chain
            if (anc_c >> v) & 1:
                grow_tail |= parents[v]  # head-to-head, opened by c
        for v in _iter_bits(new_tail):
            if not (c >> v) & 1:
                grow_head |= children[v]
                grow_tail |= parents[v]
        new_head = grow_head & ~head
        new_tail = grow_tail & ~tail
    return True


def _query_masks(g: DiGraph, q: SeparationQuery) -> tuple[int, int, int]:
    return g.mask_of(q.a), g.mask_of(q.b), g.mask_of(q.c)


def delta_separates(g: DiGraph, q: SeparationQuery) -> bool:
    """Moral-graph decision procedure (the normative one)."""
    return delta_separates_masks(g, *_query_masks(g, q))


def delta_separates_trail(g: DiGraph, q: SeparationQuery) -> bool:
    """Trail decision procedure: no active allowed trail from a to b."""
    return delta_trail_masks(g, *_query_masks(g, q))


def subsets_by_size(labels: Iterable[str]) -> list[frozenset[str]]:
    """All subsets of ``labels`` ordered by (size, sorted member labels)."""
    labels = sorted(set(labels))
    masks = [(0, ())]
    for i, name in enumerate(labels):
        masks += [(m | (1 << i), members + (name,)) for m, members in masks]
    ranked = sorted(masks, key=lambda mm: (len(mm[1]), mm[1]))
    return [frozenset(members) for _, members in ranked]


def all_separations(g: DiGraph, max_cond: int) -> list[SeparationQuery]:
    """Every separated (a, b, c) with a, b nonempty and a, b, c pairwise
    disjoint, |c| <= max_cond, in deterministic enumeration order."""
    if len(g.labels) > MAX_ENUMERATION_NODES:
        raise EnumerationGuardError(
            f"refusing to enumerate separations on {len(g.labels)} nodes "
            f"(limit {MAX_ENUMERATION_NODES})"
        )
    subsets = subsets_by_size(g.labels)
    found = []
    for a in subsets:
        if not a:
            continue
        for b in subsets:
            if not b or (a & b):
                continue
            rest = [s for s in subsets if len(s) <= max_cond and not s & (a | b)]
            for c in rest:
                q = SeparationQuery(a, b, c)
                if delta_separates(g, q):
                    found.append(q)
    return found
