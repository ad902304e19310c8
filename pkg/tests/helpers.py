"""Shared test machinery: an independent slow-path property checker and
random spec/graph generators.

The slow checker re-states every property as explicit nested loops over
subsets with direct oracle queries, deliberately sharing no code with
the vectorized engine; agreement between the two is itself a test.
"""

from __future__ import annotations

import itertools
import random

from ligraph.cfmp import CfmpSpec, ComponentIntensity, ComponentSpace, RateRow
from ligraph.graphs import DiGraph
from ligraph.graphoid import Axiom, DerivedProperty, OracleDomainError
from ligraph.separation import subsets_by_size


def _query_fn(oracle):
    def q(a, b, c):
        try:
            return oracle.query(a, b, c)
        except OracleDomainError:
            return None

    return q


def _instances(prop, subs):
    """Yield quantified-set dicts in canonical nested order, applying the
    property's structural side conditions."""
    four = (
        Axiom.LEFT_DECOMPOSITION,
        Axiom.RIGHT_DECOMPOSITION,
        Axiom.LEFT_WEAK_UNION,
        Axiom.RIGHT_WEAK_UNION,
        Axiom.LEFT_CONTRACTION,
        Axiom.RIGHT_CONTRACTION,
        DerivedProperty.LEFT_DISJOINT_INTERSECTION,
        DerivedProperty.RIGHT_DISJOINT_INTERSECTION,
        DerivedProperty.SHIFTED_RIGHT_DECOMPOSITION,
        DerivedProperty.OVERLAP_TOLERANT_INTERSECTION,
        DerivedProperty.GUARDED_RIGHT_DECOMPOSITION,
    )
    if prop in (Axiom.LEFT_REDUNDANCY, Axiom.RIGHT_REDUNDANCY):
        for a in subs:
            for b in subs:
                yield {"A": a, "B": b}
    elif prop in (
        Axiom.LEFT_INTERSECTION,
        Axiom.RIGHT_INTERSECTION,
        DerivedProperty.LEFT_TRIM,
        DerivedProperty.RIGHT_TRIM,
    ):
        for a in subs:
            for b in subs:
                for c in subs:
                    yield {"A": a, "B": b, "C": c}
    elif prop in four:
        for a in subs:
            for b in subs:
                for c in subs:
                    for d in subs:
                        sets = {"A": a, "B": b, "C": c, "D": d}
                        if _structurally_valid(prop, sets):
                            yield sets
    else:
        raise ValueError(prop)


def _structurally_valid(prop, s) -> bool:
    a, b, c, d = s["A"], s["B"], s["C"], s["D"]
    if prop in (Axiom.LEFT_DECOMPOSITION, Axiom.LEFT_WEAK_UNION):
        return d <= a
    if prop in (
        Axiom.RIGHT_DECOMPOSITION,
        Axiom.RIGHT_WEAK_UNION,
        DerivedProperty.SHIFTED_RIGHT_DECOMPOSITION,
    ):
        return d <= b
    if prop in (Axiom.LEFT_CONTRACTION, Axiom.RIGHT_CONTRACTION):
        return True
    if prop in (
        DerivedProperty.LEFT_DISJOINT_INTERSECTION,
        DerivedProperty.RIGHT_DISJOINT_INTERSECTION,
    ):
        return (
            not a & b and not a & c and not a & d
            and not b & c and not b & d and not c & d
        )
    if prop is DerivedProperty.OVERLAP_TOLERANT_INTERSECTION:
        return not b & c and not b & d and not c & d and not a & d
    if prop is DerivedProperty.GUARDED_RIGHT_DECOMPOSITION:
        return d <= b and not (a & b) - (c | d)
    raise ValueError(prop)


def _queries(prop, s):
    """All oracle triples an instance touches: premises first, conclusion
    last (biconditionals list both sides; the guarded form lists its side
    conditions between premise and conclusion)."""
    a, b, c, d = (
        s.get("A", frozenset()),
        s.get("B", frozenset()),
        s.get("C", frozenset()),
        s.get("D", frozenset()),
    )
    if prop is Axiom.LEFT_REDUNDANCY:
        return [(a, b, a)]
    if prop is Axiom.RIGHT_REDUNDANCY:
        return [(a, b, b)]
    if prop is Axiom.LEFT_DECOMPOSITION:
        return [(a, b, c), (d, b, c)]
    if prop is Axiom.RIGHT_DECOMPOSITION:
        return [(a, b, c), (a, d, c)]
    if prop is Axiom.LEFT_WEAK_UNION:
        return [(a, b, c), (a, b, c | d)]
    if prop is Axiom.RIGHT_WEAK_UNION:
        return [(a, b, c), (a, b, c | d)]
    if prop is Axiom.LEFT_CONTRACTION:
        return [(a, b, c), (d, b, a | c), (a | d, b, c)]
    if prop is Axiom.RIGHT_CONTRACTION:
        return [(a, b, c), (a, d, b | c), (a, b | d, c)]
    if prop is Axiom.LEFT_INTERSECTION:
        return [(a, b, c), (c, b, a), (a | c, b, a & c)]
    if prop is Axiom.RIGHT_INTERSECTION:
        return [(a, b, c), (a, c, b), (a, b | c, b & c)]
    if prop is DerivedProperty.LEFT_TRIM:
        return [(a, b, c), (a - c, b, c)]
    if prop is DerivedProperty.RIGHT_TRIM:
        return [(a, b, c), (a, b - c, c)]
    if prop is DerivedProperty.LEFT_DISJOINT_INTERSECTION:
        return [(a, b, c | d), (c, b, a | d), (a | c, b, d)]
    if prop in (
        DerivedProperty.RIGHT_DISJOINT_INTERSECTION,
        DerivedProperty.OVERLAP_TOLERANT_INTERSECTION,
    ):
        return [(a, b, c | d), (a, c, b | d), (a, b | c, d)]
    if prop is DerivedProperty.SHIFTED_RIGHT_DECOMPOSITION:
        return [(a, b, c), (a, d, (c | b) - d)]
    if prop is DerivedProperty.GUARDED_RIGHT_DECOMPOSITION:
        qs = [(a, b, c), (b, d, a | c), (b, a - (c | d), c | d)]
        for k in sorted(c - d):
            qs.append((a, frozenset([k]), (c - {k}) | b))
            qs.append((b, frozenset([k]), (c - {k}) | d | a))
        qs.append((a, d, c))
        return qs
    raise ValueError(prop)


def _violated(prop, s, vals) -> bool:
    """Decide violation from the query values in _queries order."""
    if prop in (Axiom.LEFT_REDUNDANCY, Axiom.RIGHT_REDUNDANCY):
        return not vals[0]
    if prop in (DerivedProperty.LEFT_TRIM, DerivedProperty.RIGHT_TRIM):
        return vals[0] != vals[1]
    if prop is DerivedProperty.GUARDED_RIGHT_DECOMPOSITION:
        premise, guard_i, guard_ii_base = vals[0], vals[1], vals[2]
        ks = sorted(s["C"] - s["D"])
        per_k = vals[3 : 3 + 2 * len(ks)]
        conclusion = vals[-1]
        guard = guard_i or (
            guard_ii_base
            and all(per_k[2 * i] or per_k[2 * i + 1] for i in range(len(ks)))
        )
        return premise and guard and not conclusion
    return all(vals[:-1]) and not vals[-1]


def slow_check(oracle, prop):
    """Independent reference implementation of check_axiom/check_derived.

    Returns (holds, first counterexample, checked, skipped).
    """
    subs = subsets_by_size(oracle.ground)
    q = _query_fn(oracle)
    cache: dict = {}

    def cached(triple):
        if triple not in cache:
            cache[triple] = q(*triple)
        return cache[triple]

    checked = 0
    skipped = 0
    first = None
    for sets in _instances(prop, subs):
        vals = [cached(t) for t in _queries(prop, sets)]
        if any(v is None for v in vals):
            skipped += 1
            continue
        checked += 1
        if first is None and _violated(prop, sets, vals):
            first = dict(sets)
    return first is None, first, checked, skipped


def random_digraph(labels, rng: random.Random, p: float = 0.35) -> DiGraph:
    edges = [
        (j, k) for j in labels for k in labels if j != k and rng.random() < p
    ]
    return DiGraph(labels, edges)


def random_spec(rng: random.Random) -> CfmpSpec:
    """A random valid spec: 2-4 components with 2-3 states each, random
    dependency sets, rates in [0.1, 3]."""
    n = rng.randint(2, 4)
    names = tuple(f"c{i}" for i in range(n))
    cards = tuple(rng.randint(2, 3) for _ in range(n))
    space = ComponentSpace(names, cards)
    intensities = {}
    for i, name in enumerate(names):
        others = [m for m in names if m != name]
        deps = tuple(sorted(rng.sample(others, rng.randint(0, min(2, len(others))))))
        dep_cards = [cards[names.index(d)] for d in deps]
        rows = []
        for given in itertools.product(*(range(c) for c in dep_cards)):
            for s in range(cards[i]):
                for t in range(cards[i]):
                    if s != t:
                        rows.append(RateRow(given, s, t, rng.uniform(0.1, 3.0)))
        intensities[name] = ComponentIntensity(deps, tuple(rows))
    return CfmpSpec(space, intensities)


def closure_under(relation: set, subs, rules: str) -> set:
    """Close a set of true triples under the left or right family of
    {redundancy facts, decomposition, contraction} until a fixpoint."""
    rel = set(relation)
    for a in subs:
        for b in subs:
            rel.add((a, b, a) if rules == "left" else (a, b, b))
    changed = True
    while changed:
        changed = False
        for a, b, c in list(rel):
            if rules == "left":
                for d in subs:
                    if d <= a and (d, b, c) not in rel:
                        rel.add((d, b, c))
                        changed = True
                for d in subs:
                    if (d, b, a | c) in rel and (a | d, b, c) not in rel:
                        rel.add((a | d, b, c))
                        changed = True
            else:
                for d in subs:
                    if d <= b and (a, d, c) not in rel:
                        rel.add((a, d, c))
                        changed = True
                for d in subs:
                    if (a, d, b | c) in rel and (a, b | d, c) not in rel:
                        rel.add((a, b | d, c))
                        changed = True
    return rel
