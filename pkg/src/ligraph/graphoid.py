"""Executable checking of asymmetric (semi)graphoid properties.

An irrelevance oracle is any deterministic ternary predicate
``query(a, b, c)`` over subsets of a finite ground set, read "the past
of ``a`` is irrelevant for ``b`` given ``c``".  The checkers enumerate
every instance of a property over the power-set lattice (join = union,
meet = intersection, order = inclusion), report whether it holds, and
extract the first counterexample in a deterministic order: subsets are
ranked by (size, sorted member labels) and quantifiers nest in the
order the sets appear in the property.

Axioms come in left/right pairs because the relation is asymmetric.
The derived properties are:

- left/right trim: dropping the conditioning set from the left (right)
  argument does not change the relation (a biconditional).
- left/right disjoint intersection: the intersection property restated
  for four pairwise disjoint sets.
- shifted right decomposition: discarding part of the right argument is
  sound when the discard moves into the conditioning set.
- overlap-tolerant intersection: the right disjoint form with the first
  argument allowed to overlap the second and third.
- guarded right decomposition: plain right decomposition under the two
  sufficient side conditions that make it sound.

Instances are evaluated against a truth table held in "rank space"
with numpy, so exhaustive sweeps over thousands of graphs stay fast.
Reported counterexamples replay through the raw oracle via
``violates``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from .graphs import DiGraph, UGraph, enumerate_digraphs
from .separation import EnumerationGuardError, delta_separates_masks

MAX_AXIOM_GROUND = 5
MAX_SEARCH_GROUND = 4


class OracleDomainError(Exception):
    """The oracle cannot evaluate this triple (outside its domain)."""


@dataclass(frozen=True)
class IrrelevanceOracle:
    """A ternary irrelevance predicate over subsets of ``ground``.

    ``query`` must be total and deterministic, except that it may raise
    OracleDomainError for triples outside a declared domain; such
    instances are skipped (and counted) by the checkers.

    ``overlap_reducible`` asserts query(A,B,C) == query(A-(B|C), B, C-B)
    for every triple, which lets the table builder evaluate disjoint
    triples only.  Set it only for relations where that identity holds.
    """

    ground: tuple[str, ...]
    query: Callable[[frozenset, frozenset, frozenset], bool]
    name: str = "oracle"
    overlap_reducible: bool = False


class Axiom(Enum):
    LEFT_REDUNDANCY = "left_redundancy"
    RIGHT_REDUNDANCY = "right_redundancy"
    LEFT_DECOMPOSITION = "left_decomposition"
    RIGHT_DECOMPOSITION = "right_decomposition"
    LEFT_WEAK_UNION = "left_weak_union"
    RIGHT_WEAK_UNION = "right_weak_union"
    LEFT_CONTRACTION = "left_contraction"
    RIGHT_CONTRACTION = "right_contraction"
    LEFT_INTERSECTION = "left_intersection"
    RIGHT_INTERSECTION = "right_intersection"


class DerivedProperty(Enum):
    LEFT_TRIM = "left_trim"
    RIGHT_TRIM = "right_trim"
    LEFT_DISJOINT_INTERSECTION = "left_disjoint_intersection"
    RIGHT_DISJOINT_INTERSECTION = "right_disjoint_intersection"
    SHIFTED_RIGHT_DECOMPOSITION = "shifted_right_decomposition"
    OVERLAP_TOLERANT_INTERSECTION = "overlap_tolerant_intersection"
    GUARDED_RIGHT_DECOMPOSITION = "guarded_right_decomposition"


SEMIGRAPHOID_AXIOMS = (
    Axiom.LEFT_REDUNDANCY,
    Axiom.RIGHT_REDUNDANCY,
    Axiom.LEFT_DECOMPOSITION,
    Axiom.RIGHT_DECOMPOSITION,
    Axiom.LEFT_WEAK_UNION,
    Axiom.RIGHT_WEAK_UNION,
    Axiom.LEFT_CONTRACTION,
    Axiom.RIGHT_CONTRACTION,
)
GRAPHOID_AXIOMS = SEMIGRAPHOID_AXIOMS + (
    Axiom.LEFT_INTERSECTION,
    Axiom.RIGHT_INTERSECTION,
)

# Properties guaranteed for delta-separation on every directed graph;
# right redundancy and right decomposition are the two that may fail.
DELTA_SEPARATION_GUARANTEES = (
    Axiom.LEFT_REDUNDANCY,
    Axiom.LEFT_DECOMPOSITION,
    Axiom.LEFT_WEAK_UNION,
    Axiom.RIGHT_WEAK_UNION,
    Axiom.LEFT_CONTRACTION,
    Axiom.RIGHT_CONTRACTION,
    Axiom.LEFT_INTERSECTION,
    Axiom.RIGHT_INTERSECTION,
)

# Properties guaranteed for the intensity-based local independence
# relation of a composable process.
LOCAL_INDEPENDENCE_GUARANTEES = (
    Axiom.LEFT_REDUNDANCY,
    Axiom.LEFT_DECOMPOSITION,
    Axiom.LEFT_WEAK_UNION,
    Axiom.RIGHT_WEAK_UNION,
    Axiom.LEFT_CONTRACTION,
    Axiom.RIGHT_INTERSECTION,
)


@dataclass(frozen=True)
class CheckReport:
    prop: Axiom | DerivedProperty
    holds: bool
    counterexample: dict[str, frozenset[str]] | None
    checked: int
    skipped: int = 0

    def to_json_dict(self) -> dict:
        cx = None
        if self.counterexample is not None:
            cx = {k: sorted(v) for k, v in self.counterexample.items()}
        return {
            "property": self.prop.value,
            "holds": self.holds,
            "counterexample": cx,
            "checked": self.checked,
            "skipped": self.skipped,
        }


@dataclass(frozen=True)
class ProfileReport:
    reports: tuple[CheckReport, ...]
    matches_expected: bool | None = None

    def report_for(self, ax: Axiom) -> CheckReport:
        for r in self.reports:
            if r.prop is ax:
                return r
        raise KeyError(ax)

    def holds_pattern(self) -> dict[Axiom, bool]:
        return {r.prop: r.holds for r in self.reports}


# --- rank-space tables ------------------------------------------------------


class _Tables:
    """Per-ground lookup tables: subset ranks and rank-space set algebra."""

    def __init__(self, ground: tuple[str, ...]):
        n = len(ground)
        size = 1 << n
        members = [
            tuple(sorted(ground[i] for i in range(n) if (m >> i) & 1))
            for m in range(size)
        ]
        order = sorted(range(size), key=lambda m: (len(members[m]), members[m]))
        self.ground = ground
        self.n = n
        self.size = size
        self.masks = np.array(order, dtype=np.int64)  # rank -> mask
        rank_of = np.empty(size, dtype=np.int64)
        rank_of[self.masks] = np.arange(size)
        self.rank_of = rank_of  # mask -> rank
        mi = self.masks[:, None]
        mj = self.masks[None, :]
        self.union = rank_of[mi | mj]
        self.inter = rank_of[mi & mj]
        self.diff = rank_of[mi & ~mj]
        self.subset = (mi & ~mj) == 0  # subset[i, j]: set_i <= set_j
        self.disjoint = (mi & mj) == 0
        # reduction indices: values[A,B,C] = core[A-(B|C), B, C-B]
        a3 = self.masks[:, None, None]
        b3 = self.masks[None, :, None]
        c3 = self.masks[None, None, :]
        self.red_a = rank_of[a3 & ~(b3 | c3)]  # (S, S, S)
        self.red_c = rank_of[mj & ~mi]  # (S, S) indexed [B, C]

    def set_of(self, rank: int) -> frozenset[str]:
        m = int(self.masks[rank])
        return frozenset(self.ground[i] for i in range(self.n) if (m >> i) & 1)


@lru_cache(maxsize=64)
def _tables(ground: tuple[str, ...]) -> _Tables:
    return _Tables(ground)


@dataclass
class TruthTable:
    """Oracle answers for every subset triple, indexed by subset rank."""

    oracle: IrrelevanceOracle
    tables: _Tables
    values: np.ndarray
    evaluable: np.ndarray


def build_truth_table(oracle: IrrelevanceOracle) -> TruthTable:
    ground = tuple(oracle.ground)
    if len(ground) > MAX_AXIOM_GROUND:
        raise EnumerationGuardError(
            f"refusing axiom enumeration over {len(ground)} ground elements "
            f"(limit {MAX_AXIOM_GROUND})"
        )
    t = _tables(ground)
    size = t.size
    sets = [t.set_of(r) for r in range(size)]
    if oracle.overlap_reducible:
        core = np.zeros((size, size, size), dtype=bool)
        rank_of = t.rank_of
        for assignment in itertools.product(range(4), repeat=t.n):
            am = bm = cm = 0
            for i, slot in enumerate(assignment):
                if slot == 1:
                    am |= 1 << i
                elif slot == 2:
                    bm |= 1 << i
                elif slot == 3:
                    cm |= 1 << i
            ra, rb, rc = int(rank_of[am]), int(rank_of[bm]), int(rank_of[cm])
            core[ra, rb, rc] = oracle.query(sets[ra], sets[rb], sets[rc])
        ar = np.arange(size)
        values = core[t.red_a, ar[None, :, None], t.red_c[None, :, :]]
        evaluable = np.ones((size, size, size), dtype=bool)
    else:
        values = np.zeros((size, size, size), dtype=bool)
        evaluable = np.ones((size, size, size), dtype=bool)
        for i in range(size):
            for j in range(size):
                for k in range(size):
                    try:
                        values[i, j, k] = oracle.query(sets[i], sets[j], sets[k])
                    except OracleDomainError:
                        evaluable[i, j, k] = False
    return TruthTable(oracle, t, values, evaluable)


def _axes(size: int, k: int):
    """Index arrays for k nested quantifiers, broadcastable to (size,)*k."""
    ar = np.arange(size)
    out = []
    for axis in range(k):
        shape = [1] * k
        shape[axis] = size
        out.append(ar.reshape(shape))
    return out


def _evaluate_axiom(tt: TruthTable, ax: Axiom):
    """Return (violations, structural domain, evaluability, var names)."""
    t = tt.tables
    V, E = tt.values, tt.evaluable
    S = t.size
    U, N, SUB = t.union, t.inter, t.subset

    if ax in (Axiom.LEFT_REDUNDANCY, Axiom.RIGHT_REDUNDANCY):
        A, B = _axes(S, 2)
        C = A if ax is Axiom.LEFT_REDUNDANCY else B
        struct = np.ones((S, S), dtype=bool)
        ev = E[A, B, C]
        return ev & ~V[A, B, C], struct, ev, "AB"

    if ax in (Axiom.LEFT_INTERSECTION, Axiom.RIGHT_INTERSECTION):
        A, B, C = _axes(S, 3)
        if ax is Axiom.LEFT_INTERSECTION:
            p2 = (C, B, A)
            concl = (U[A, C], B, N[A, C])
        else:
            p2 = (A, C, B)
            concl = (A, U[B, C], N[B, C])
        struct = np.ones((S, S, S), dtype=bool)
        ev = E[A, B, C] & E[p2] & E[concl]
        viol = ev & V[A, B, C] & V[p2] & ~V[concl]
        return viol, struct, ev, "ABC"

    A, B, C, D = _axes(S, 4)
    p2 = None
    if ax is Axiom.LEFT_DECOMPOSITION:
        struct = SUB[D, A]
        concl = (D, B, C)
    elif ax is Axiom.RIGHT_DECOMPOSITION:
        struct = SUB[D, B]
        concl = (A, D, C)
    elif ax is Axiom.LEFT_WEAK_UNION:
        struct = SUB[D, A]
        concl = (A, B, U[C, D])
    elif ax is Axiom.RIGHT_WEAK_UNION:
        struct = SUB[D, B]
        concl = (A, B, U[C, D])
    elif ax is Axiom.LEFT_CONTRACTION:
        struct = np.ones((1,) * 4, dtype=bool)
        p2 = (D, B, U[A, C])
        concl = (U[A, D], B, C)
    elif ax is Axiom.RIGHT_CONTRACTION:
        struct = np.ones((1,) * 4, dtype=bool)
        p2 = (A, D, U[B, C])
        concl = (A, U[B, D], C)
    else:
        raise ValueError(f"not an axiom: {ax}")

    premise = V[A, B, C]
    ev = E[A, B, C] & E[concl]
    if p2 is not None:
        premise = premise & V[p2]
        ev = ev & E[p2]
    viol = struct & ev & premise & ~V[concl]
    return viol, struct, ev, "ABCD"


def _evaluate_derived(tt: TruthTable, prop: DerivedProperty):
    t = tt.tables
    V, E = tt.values, tt.evaluable
    S = t.size
    U, SUB, DIS, DIFF = t.union, t.subset, t.disjoint, t.diff
    M = t.masks

    if prop in (DerivedProperty.LEFT_TRIM, DerivedProperty.RIGHT_TRIM):
        A, B, C = _axes(S, 3)
        if prop is DerivedProperty.LEFT_TRIM:
            other = (DIFF[A, C], B, C)
        else:
            other = (A, DIFF[B, C], C)
        struct = np.ones((S, S, S), dtype=bool)
        ev = E[A, B, C] & E[other]
        viol = ev & (V[A, B, C] != V[other])
        return viol, struct, ev, "ABC"

    A, B, C, D = _axes(S, 4)
    if prop in (
        DerivedProperty.LEFT_DISJOINT_INTERSECTION,
        DerivedProperty.RIGHT_DISJOINT_INTERSECTION,
        DerivedProperty.OVERLAP_TOLERANT_INTERSECTION,
    ):
        if prop is DerivedProperty.OVERLAP_TOLERANT_INTERSECTION:
            struct = DIS[B, C] & DIS[B, D] & DIS[C, D] & DIS[A, D]
        else:
            struct = (
                DIS[A, B] & DIS[A, C] & DIS[A, D]
                & DIS[B, C] & DIS[B, D] & DIS[C, D]
            )
        if prop is DerivedProperty.LEFT_DISJOINT_INTERSECTION:
            p1 = (A, B, U[C, D])
            p2 = (C, B, U[A, D])
            concl = (U[A, C], B, D)
        else:
            p1 = (A, B, U[C, D])
            p2 = (A, C, U[B, D])
            concl = (A, U[B, C], D)
        ev = E[p1] & E[p2] & E[concl]
        viol = struct & ev & V[p1] & V[p2] & ~V[concl]
        return viol, struct, ev, "ABCD"

    if prop is DerivedProperty.SHIFTED_RIGHT_DECOMPOSITION:
        struct = SUB[D, B]
        concl = (A, D, DIFF[U[C, B], D])
        ev = E[A, B, C] & E[concl]
        viol = struct & ev & V[A, B, C] & ~V[concl]
        return viol, struct, ev, "ABCD"

    if prop is DerivedProperty.GUARDED_RIGHT_DECOMPOSITION:
        Am, Bm, Cm, Dm = M[A], M[B], M[C], M[D]
        struct = SUB[D, B] & ((Am & Bm & ~(Cm | Dm)) == 0)
        ucd = U[C, D]
        guard_i = V[B, D, U[A, C]]
        guard_ii = V[B, DIFF[A, ucd], ucd]
        ev = (
            E[A, B, C] & E[A, D, C]
            & E[B, D, U[A, C]] & E[B, DIFF[A, ucd], ucd]
        )
        for bit_index in range(t.n):
            bit = 1 << bit_index
            k = int(t.rank_of[bit])
            applies = ((Cm & bit) != 0) & ((Dm & bit) == 0)
            c_minus_k = t.rank_of[Cm & ~bit]
            cl1 = (A, k, U[c_minus_k, B])
            cl2 = (B, k, U[U[c_minus_k, D], A])
            clause = V[cl1] | V[cl2]
            guard_ii = guard_ii & np.where(applies, clause, True)
            ev = ev & np.where(applies, E[cl1] & E[cl2], True)
        guard = guard_i | guard_ii
        viol = struct & ev & guard & V[A, B, C] & ~V[A, D, C]
        return viol, struct, ev, "ABCD"

    raise ValueError(f"unknown derived property: {prop}")


def _first_violation(viol: np.ndarray) -> tuple[int, ...] | None:
    flat = viol.reshape(-1)
    idx = int(np.argmax(flat))
    if not flat[idx]:
        return None
    return tuple(int(x) for x in np.unravel_index(idx, viol.shape))


def _finish(tt: TruthTable, prop, viol, struct, ev, names) -> CheckReport:
    k = len(names)
    shape = (tt.tables.size,) * k
    dom = np.broadcast_to(struct & ev, shape)
    checked = int(np.count_nonzero(dom))
    skipped = int(np.count_nonzero(np.broadcast_to(struct, shape))) - checked
    viol = np.broadcast_to(viol, shape)
    hit = _first_violation(viol)
    cx = None
    if hit is not None:
        cx = {name: tt.tables.set_of(rank) for name, rank in zip(names, hit)}
    return CheckReport(prop, hit is None, cx, checked, skipped)


def check_axiom(
    oracle: IrrelevanceOracle, ax: Axiom, table: TruthTable | None = None
) -> CheckReport:
    """Exhaustively check one axiom; report the first violation if any."""
    tt = table if table is not None else build_truth_table(oracle)
    viol, struct, ev, names = _evaluate_axiom(tt, ax)
    return _finish(tt, ax, viol, struct, ev, names)


def check_derived(
    oracle: IrrelevanceOracle, prop: DerivedProperty, table: TruthTable | None = None
) -> CheckReport:
    """Exhaustively check one derived property."""
    tt = table if table is not None else build_truth_table(oracle)
    viol, struct, ev, names = _evaluate_derived(tt, prop)
    return _finish(tt, prop, viol, struct, ev, names)


def check_semigraphoid_profile(
    oracle: IrrelevanceOracle,
    expected: Mapping[Axiom, bool] | None = None,
    table: TruthTable | None = None,
) -> ProfileReport:
    """Run all ten axioms; optionally compare against an expected pattern.

    ``expected`` may constrain any subset of the axioms; unmentioned
    axioms are allowed to come out either way.
    """
    tt = table if table is not None else build_truth_table(oracle)
    reports = tuple(check_axiom(oracle, ax, tt) for ax in GRAPHOID_AXIOMS)
    matches = None
    if expected is not None:
        observed = {r.prop: r.holds for r in reports}
        matches = all(observed[ax] == want for ax, want in expected.items())
    return ProfileReport(reports, matches)


# --- direct replay of reported counterexamples ------------------------------


def violates(
    oracle: IrrelevanceOracle,
    prop: Axiom | DerivedProperty,
    sets: Mapping[str, frozenset],
) -> bool:
    """Re-evaluate a property instance through the raw oracle.

    True iff the instance is a genuine violation: structural side
    conditions and premises hold but the conclusion fails.  This is the
    self-check for counterexamples carried by CheckReport.
    """
    q = oracle.query
    A = frozenset(sets.get("A", frozenset()))
    B = frozenset(sets.get("B", frozenset()))
    C = frozenset(sets.get("C", frozenset()))
    D = frozenset(sets.get("D", frozenset()))

    if prop is Axiom.LEFT_REDUNDANCY:
        return not q(A, B, A)
    if prop is Axiom.RIGHT_REDUNDANCY:
        return not q(A, B, B)
    if prop is Axiom.LEFT_DECOMPOSITION:
        return D <= A and q(A, B, C) and not q(D, B, C)
    if prop is Axiom.RIGHT_DECOMPOSITION:
        return D <= B and q(A, B, C) and not q(A, D, C)
    if prop is Axiom.LEFT_WEAK_UNION:
        return D <= A and q(A, B, C) and not q(A, B, C | D)
    if prop is Axiom.RIGHT_WEAK_UNION:
        return D <= B and q(A, B, C) and not q(A, B, C | D)
    if prop is Axiom.LEFT_CONTRACTION:
        return q(A, B, C) and q(D, B, A | C) and not q(A | D, B, C)
    if prop is Axiom.RIGHT_CONTRACTION:
        return q(A, B, C) and q(A, D, B | C) and not q(A, B | D, C)
    if prop is Axiom.LEFT_INTERSECTION:
        return q(A, B, C) and q(C, B, A) and not q(A | C, B, A & C)
    if prop is Axiom.RIGHT_INTERSECTION:
        return q(A, B, C) and q(A, C, B) and not q(A, B | C, B & C)

    if prop is DerivedProperty.LEFT_TRIM:
        return q(A, B, C) != q(A - C, B, C)
    if prop is DerivedProperty.RIGHT_TRIM:
        return q(A, B, C) != q(A, B - C, C)
    if prop is DerivedProperty.LEFT_DISJOINT_INTERSECTION:
        if not _pairwise_disjoint(A, B, C, D):
            return False
        return q(A, B, C | D) and q(C, B, A | D) and not q(A | C, B, D)
    if prop is DerivedProperty.RIGHT_DISJOINT_INTERSECTION:
        if not _pairwise_disjoint(A, B, C, D):
            return False
        return q(A, B, C | D) and q(A, C, B | D) and not q(A, B | C, D)
    if prop is DerivedProperty.OVERLAP_TOLERANT_INTERSECTION:
        if not (_pairwise_disjoint(B, C, D) and not A & D):
            return False
        return q(A, B, C | D) and q(A, C, B | D) and not q(A, B | C, D)
    if prop is DerivedProperty.SHIFTED_RIGHT_DECOMPOSITION:
        return D <= B and q(A, B, C) and not q(A, D, (C | B) - D)
    if prop is DerivedProperty.GUARDED_RIGHT_DECOMPOSITION:
        if not (D <= B and not (A & B) - (C | D)):
            return False
        guard = q(B, D, A | C)
        if not guard:
            guard = q(B, A - (C | D), C | D) and all(
                q(A, frozenset([k]), (C - {k}) | B)
                or q(B, frozenset([k]), (C - {k}) | D | A)
                for k in C - D
            )
        return guard and q(A, B, C) and not q(A, D, C)

    raise ValueError(f"unknown property: {prop}")


def _pairwise_disjoint(*sets) -> bool:
    total = 0
    union = set()
    for s in sets:
        total += len(s)
        union |= s
    return len(union) == total


# --- oracle factories --------------------------------------------------------


def delta_separation_oracle(g: DiGraph) -> IrrelevanceOracle:
    """Irrelevance via graph separation: (a, b, c) true iff c separates
    a from b in g."""

    def query(a: frozenset, b: frozenset, c: frozenset) -> bool:
        return delta_separates_masks(g, g.mask_of(a), g.mask_of(b), g.mask_of(c))

    return IrrelevanceOracle(
        ground=g.labels, query=query, name="delta-separation", overlap_reducible=True
    )


def undirected_separation_oracle(h: UGraph) -> IrrelevanceOracle:
    """Classical symmetric separation in an undirected graph."""

    def query(a: frozenset, b: frozenset, c: frozenset) -> bool:
        return h.u_separated(a, b, c)

    return IrrelevanceOracle(ground=h.labels, query=query, name="u-separation")


def constant_oracle(ground, value: bool = True) -> IrrelevanceOracle:
    ground = tuple(sorted(set(ground)))
    return IrrelevanceOracle(
        ground=ground, query=lambda a, b, c: value, name=f"constant-{value}"
    )


# --- counterexample searches over small graph families -----------------------


def find_right_decomposition_counterexample(
    ground_size: int,
) -> tuple[DiGraph, dict[str, frozenset[str]]] | None:
    """Search all digraphs on ``ground_size`` labeled nodes for a right
    decomposition violation on disjoint sets: nonempty disjoint A, B and
    disjoint C with D a proper subset of B such that A is separated from
    B by C but not from D.  Returns the first (graph, sets) found.

    Overlapping-set violations are excluded here (they already occur on
    two nodes through the query reduction); the full lattice is covered
    by check_axiom instead.
    """
    if ground_size > MAX_SEARCH_GROUND:
        raise EnumerationGuardError(
            f"refusing graph search over {ground_size} nodes "
            f"(limit {MAX_SEARCH_GROUND})"
        )
    labels = ("a", "b", "c", "d")[:ground_size]
    t = _tables(labels)
    S = t.size
    A, B, C, D = _axes(S, 4)
    nonempty = t.masks != 0
    struct = (
        t.disjoint[A, B] & t.disjoint[A, C] & t.disjoint[B, C]
        & t.subset[D, B] & (D != B)
        & nonempty[A] & nonempty[B]
    )
    for g in enumerate_digraphs(labels):
        tt = build_truth_table(delta_separation_oracle(g))
        viol = struct & tt.values[A, B, C] & ~tt.values[A, D, C]
        hit = _first_violation(np.broadcast_to(viol, (S,) * 4))
        if hit is not None:
            sets = {name: t.set_of(r) for name, r in zip("ABCD", hit)}
            return g, sets
    return None
