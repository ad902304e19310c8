"""Composable finite Markov processes.

A process is specified per component: a state-space cardinality, a set
of components it declares to depend on, and a rate table giving the
intensity of each of its transitions for every configuration of the
declared dependencies and its own state.  Two components never jump at
the same instant, so the joint generator is sparse: entries between
product states differing in two or more components are exactly zero.

The module derives the independence graph from the tables (a declared
dependency whose rows never actually differ is vacuous and produces no
edge), validates the graph's separation statements numerically through
conditional-mutual-information decay, and supports exact event-driven
simulation with occurrence/exposure re-estimation of the rates.

Rates are homogeneous (time-constant).
"""

from __future__ import annotations

import itertools
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graphs import DiGraph, UnknownNodeError, _check_label
from .graphoid import IrrelevanceOracle, OracleDomainError

MAX_PRODUCT_STATES = 4096
RATE_CONSTANCY_RTOL = 1e-9
POISSON_TAIL = 1e-14
UNIFORMIZATION_MAX_MEAN = 50.0
CMI_PROB_FLOOR = 1e-15
CMI_ZERO_TOL = 1e-12
# The target's own jump within a window of length h is an event of
# probability O(h), so mutual information with the source state is
# linear (not quadratic) in the rate perturbation: directions with a
# first-order rate dependence decay like h, separated directions like
# h^3.  The class boundary sits between the two measured regimes.
DECAY_ORDER_SPLIT = 2.0
DEFAULT_HS = (0.2, 0.1, 0.05, 0.025)
MIN_H = 1e-4


class SpecValidationError(ValueError):
    """Raised when an operation requires a valid spec but validation failed."""

    def __init__(self, errors: Sequence[str]):
        super().__init__("invalid process spec:\n" + "\n".join(errors))
        self.errors = list(errors)


class NonCoveringQueryError(ValueError):
    """Set-level constancy is only defined when the three sets partition
    the component set; use graph-based separation queries otherwise."""


@dataclass(frozen=True)
class ComponentSpace:
    """Ordered components with their state-space cardinalities."""

    names: tuple[str, ...]
    cards: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "cards", tuple(int(c) for c in self.cards))
        if len(self.names) != len(self.cards):
            raise ValueError("names and cardinalities differ in length")

    @property
    def n_states(self) -> int:
        out = 1
        for c in self.cards:
            out *= c
        return out

    @property
    def strides(self) -> tuple[int, ...]:
        out = [1] * len(self.cards)
        for i in range(len(self.cards) - 2, -1, -1):
            out[i] = out[i + 1] * self.cards[i + 1]
        return tuple(out)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownNodeError(name) from None

    def states(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(c) for c in self.cards))

    def state_index(self, state: Sequence[int]) -> int:
        idx = 0
        for v, s in zip(state, self.strides):
            idx += v * s
        return idx


@dataclass(frozen=True)
class RateRow:
    """One table cell: rate of jumping from ``source`` to ``target`` while
    the declared dependencies sit in configuration ``given``."""

    given: tuple[int, ...]
    source: int
    target: int
    rate: float


@dataclass(frozen=True)
class ComponentIntensity:
    depends_on: tuple[str, ...]
    rows: tuple[RateRow, ...]


@dataclass(frozen=True, eq=False)
class CfmpSpec:
    space: ComponentSpace
    intensities: Mapping[str, ComponentIntensity]

    def validate(self) -> list[str]:
        return validate_spec(self)


@dataclass(frozen=True, eq=False)
class Generator:
    """Joint rate matrix over the product state space."""

    space: ComponentSpace
    matrix: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """One sampled path: jump times with the full product state after
    each jump.  Consecutive states differ in exactly one component."""

    initial: tuple[int, ...]
    jumps: tuple[tuple[float, tuple[int, ...]], ...]
    horizon: float

    def __post_init__(self):
        prev_t = 0.0
        prev = self.initial
        for t, state in self.jumps:
            if not (prev_t < t <= self.horizon):
                raise ValueError(f"jump times must increase within the horizon: {t}")
            if sum(a != b for a, b in zip(prev, state)) != 1:
                raise ValueError("consecutive states must differ in exactly one component")
            prev_t, prev = t, state

    def states_and_durations(self):
        """Yield (state, dwell time) segments covering [0, horizon]."""
        prev_t = 0.0
        prev = self.initial
        for t, state in self.jumps:
            yield prev, t - prev_t
            prev_t, prev = t, state
        yield prev, self.horizon - prev_t


# --- validation ---------------------------------------------------------------


def validate_spec(spec: CfmpSpec) -> list[str]:
    """Every invariant violation as a message; an empty list means valid."""
    errors: list[str] = []
    space = spec.space
    names = space.names
    if len(names) != len(set(names)):
        errors.append("component names must be unique")
    for name in names:
        try:
            _check_label(name)
        except ValueError as exc:
            errors.append(str(exc))
    if len(names) < 2:
        errors.append(f"at least 2 components required (got {len(names)})")
    for name, card in zip(names, space.cards):
        if card < 2:
            errors.append(f"{name}: state count must be >= 2 (got {card})")
    if errors:
        return errors
    if space.n_states > MAX_PRODUCT_STATES:
        errors.append(
            f"product state space has {space.n_states} states "
            f"(limit {MAX_PRODUCT_STATES})"
        )
        return errors

    for name in names:
        ci = spec.intensities.get(name)
        card = space.cards[space.index_of(name)]
        if ci is None:
            errors.append(f"{name}: no intensity table")
            continue
        deps = ci.depends_on
        if len(deps) != len(set(deps)):
            errors.append(f"{name}: duplicate entries in depends_on")
            continue
        bad = [d for d in deps if d not in names or d == name]
        if bad:
            errors.append(f"{name}: depends_on must name other components, got {bad}")
            continue
        dep_cards = [space.cards[space.index_of(d)] for d in deps]
        seen: dict[tuple, float] = {}
        for row in ci.rows:
            cell = f"{name}: given={dict(zip(deps, row.given))} from={row.source} to={row.target}"
            if len(row.given) != len(deps):
                errors.append(f"{cell}: configuration does not match depends_on")
                continue
            if any(not (0 <= v < c) for v, c in zip(row.given, dep_cards)):
                errors.append(f"{cell}: configuration value out of range")
                continue
            if not (0 <= row.source < card and 0 <= row.target < card):
                errors.append(f"{cell}: state out of range")
                continue
            if row.source == row.target:
                errors.append(f"{cell}: source and target must differ")
                continue
            if not math.isfinite(row.rate):
                errors.append(f"{cell}: rate must be finite, got {row.rate}")
                continue
            if row.rate < 0:
                errors.append(f"{cell}: negative rate {row.rate}")
                continue
            key = (row.given, row.source, row.target)
            if key in seen:
                errors.append(f"{cell}: duplicate table cell")
                continue
            seen[key] = row.rate
        for given in itertools.product(*(range(c) for c in dep_cards)):
            for s in range(card):
                for t in range(card):
                    if s != t and (given, s, t) not in seen:
                        errors.append(
                            f"{name}: missing rate for "
                            f"given={dict(zip(deps, given))} from={s} to={t}"
                        )
    return errors


def ensure_valid(spec: CfmpSpec) -> None:
    errors = validate_spec(spec)
    if errors:
        raise SpecValidationError(errors)


def _compile(spec: CfmpSpec) -> dict[str, dict[tuple, float]]:
    return {
        name: {(r.given, r.source, r.target): r.rate for r in ci.rows}
        for name, ci in spec.intensities.items()
    }


# --- constancy checks and graph derivation ------------------------------------


def _rates_nearly_equal(rates: Sequence[float]) -> bool:
    lo, hi = min(rates), max(rates)
    return hi - lo <= RATE_CONSTANCY_RTOL * max(abs(lo), abs(hi))


def component_depends_only_on(spec: CfmpSpec, component: str, keep: Iterable[str]) -> bool:
    """True iff the component's rate table is constant in every declared
    dependency outside ``keep`` (i.e. it factors through ``keep``)."""
    ensure_valid(spec)
    spec.space.index_of(component)
    keep = set(keep)
    ci = spec.intensities[component]
    kept_pos = [i for i, d in enumerate(ci.depends_on) if d in keep]
    if len(kept_pos) == len(ci.depends_on):
        return True
    groups: dict[tuple, list[float]] = defaultdict(list)
    for row in ci.rows:
        reduced = tuple(row.given[i] for i in kept_pos)
        groups[(reduced, row.source, row.target)].append(row.rate)
    return all(_rates_nearly_equal(rs) for rs in groups.values())


def is_locally_independent(spec: CfmpSpec, source: str, target: str) -> bool:
    """True iff the target component's intensity is constant in the
    source component's state (a declared dependency may still be vacuous)."""
    if source == target:
        raise ValueError(f"source and target must differ (got {source!r})")
    spec.space.index_of(source)
    deps = set(spec.intensities[target].depends_on) if target in spec.intensities else set()
    return component_depends_only_on(spec, target, deps - {source})


def set_locally_independent(
    spec: CfmpSpec,
    sources: Iterable[str],
    targets: Iterable[str],
    given: Iterable[str],
) -> bool:
    """True iff every target component's intensity is constant in all the
    source components' states.  The three sets must be pairwise disjoint
    and jointly cover every component."""
    ensure_valid(spec)
    b = frozenset(sources)
    a = frozenset(targets)
    c = frozenset(given)
    for name in b | a | c:
        spec.space.index_of(name)
    names = set(spec.space.names)
    if (b & a) or (b & c) or (a & c) or (b | a | c) != names:
        raise NonCoveringQueryError(
            "sources, targets and given must partition the component set; "
            "use delta-separation on the derived graph for other queries"
        )
    return all(
        component_depends_only_on(
            spec, j, set(spec.intensities[j].depends_on) - b
        )
        for j in a
    )


def derive_graph(spec: CfmpSpec) -> DiGraph:
    """Independence graph: edge (j, k) iff k's intensity genuinely varies
    with j's state.  Vacuous declared dependencies produce no edge."""
    ensure_valid(spec)
    names = spec.space.names
    edges = [
        (j, k)
        for k in names
        for j in spec.intensities[k].depends_on
        if not is_locally_independent(spec, j, k)
    ]
    return DiGraph(names, edges)


def vacuous_dependencies(spec: CfmpSpec) -> list[tuple[str, str]]:
    """Declared dependencies whose rate rows never actually differ."""
    ensure_valid(spec)
    return [
        (j, k)
        for k in spec.space.names
        for j in spec.intensities[k].depends_on
        if is_locally_independent(spec, j, k)
    ]


# --- generator and transition probabilities ------------------------------------


def build_generator(spec: CfmpSpec) -> Generator:
    """Joint rate matrix; entries between states that differ in two or
    more components are identically zero."""
    ensure_valid(spec)
    space = spec.space
    n = space.n_states
    tables = _compile(spec)
    dep_positions = {
        name: tuple(space.index_of(d) for d in spec.intensities[name].depends_on)
        for name in space.names
    }
    strides = space.strides
    q = np.zeros((n, n))
    for idx, y in enumerate(space.states()):
        for ki, name in enumerate(space.names):
            tab = tables[name]
            given = tuple(y[p] for p in dep_positions[name])
            src = y[ki]
            for dst in range(space.cards[ki]):
                if dst != src:
                    q[idx, idx + (dst - src) * strides[ki]] = tab[(given, src, dst)]
    q[np.arange(n), np.arange(n)] = -q.sum(axis=1)
    q.setflags(write=False)
    return Generator(space, q)


def transition_matrix(gen: Generator, h: float) -> np.ndarray:
    """Transition probabilities over a window of length h, by Poisson
    mixing of powers of the uniformized kernel (series truncated when the
    Poisson tail mass drops below 1e-14).  Nonnegativity and unit row
    sums hold by construction."""
    if h < 0:
        raise ValueError(f"window length must be nonnegative, got {h}")
    return _expm_uniformized(np.asarray(gen.matrix, dtype=float), float(h))


def _expm_uniformized(q: np.ndarray, h: float) -> np.ndarray:
    n = q.shape[0]
    lam = float(np.max(-np.diag(q)))
    if h == 0.0 or lam <= 0.0:
        return np.eye(n)
    mean = lam * h
    if mean > UNIFORMIZATION_MAX_MEAN:
        half = _expm_uniformized(q, h / 2.0)
        return half @ half
    kernel = np.eye(n) + q / lam
    weight = math.exp(-mean)
    cum = weight
    power = np.eye(n)
    out = weight * np.eye(n)
    k = 0
    while 1.0 - cum > POISSON_TAIL:
        k += 1
        power = power @ kernel
        weight *= mean / k
        cum += weight
        out += weight * power
    np.clip(out, 0.0, None, out=out)
    return out


def uniform_distribution(space: ComponentSpace) -> np.ndarray:
    return np.full(space.n_states, 1.0 / space.n_states)


def stationary_distribution(gen: Generator) -> np.ndarray:
    """Solve pi @ Q = 0 with unit mass (least squares; assumes a single
    communicating class, which all shipped fixtures have)."""
    q = gen.matrix
    n = q.shape[0]
    a = np.vstack([q.T, np.ones(n)])
    b = np.zeros(n + 1)
    b[-1] = 1.0
    pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def _check_distribution(space: ComponentSpace, pi) -> np.ndarray:
    pi = np.asarray(pi, dtype=float)
    if pi.shape != (space.n_states,):
        raise ValueError(
            f"distribution must have length {space.n_states}, got shape {pi.shape}"
        )
    if np.any(pi < 0):
        raise ValueError("distribution has negative mass")
    if abs(float(pi.sum()) - 1.0) > 1e-12:
        raise ValueError(f"distribution mass is {pi.sum()}, not 1")
    return pi


# --- conditional mutual information decay --------------------------------------


@dataclass(frozen=True)
class CiDecayReport:
    """Conditional mutual information between a target component shortly
    after time zero and a source component at time zero, given the time
    zero states of the conditioning components (always including the
    target itself), over a ladder of window lengths."""

    target: str
    source: str
    cond: tuple[str, ...]
    hs: tuple[float, ...]
    cmis: tuple[float, ...]
    ratios: tuple[float, ...]
    orders: tuple[float, ...]
    decay_class: str

    def to_json_dict(self) -> dict:
        return {
            "target": self.target,
            "source": self.source,
            "cond": list(self.cond),
            "hs": list(self.hs),
            "cmi_nats": list(self.cmis),
            "ratios": [None if math.isnan(r) else r for r in self.ratios],
            "orders": [None if math.isnan(o) else o for o in self.orders],
            "decay_class": self.decay_class,
        }


def classify_decay(hs: Sequence[float], cmis: Sequence[float]) -> tuple[str, tuple[float, ...]]:
    """Decay class from fitted log-log slopes between consecutive rungs:
    "zero" when nothing rises above noise, otherwise "fast" for slopes
    at or above DECAY_ORDER_SPLIT and "slow" below it."""
    orders = []
    for i in range(len(hs) - 1):
        if cmis[i] > CMI_ZERO_TOL and cmis[i + 1] > CMI_ZERO_TOL:
            orders.append(
                math.log(cmis[i] / cmis[i + 1]) / math.log(hs[i] / hs[i + 1])
            )
        else:
            orders.append(float("nan"))
    usable = [o for o in orders if not math.isnan(o)]
    if not usable:
        return "zero", tuple(orders)
    mean = sum(usable) / len(usable)
    return ("fast" if mean >= DECAY_ORDER_SPLIT else "slow"), tuple(orders)


def ci_decay(
    spec: CfmpSpec,
    pi,
    target: str,
    source: str,
    cond: Iterable[str] = (),
    hs: Sequence[float] = DEFAULT_HS,
) -> CiDecayReport:
    """Measure I(target at h ; source at 0 | conditioning set at 0) in
    nats for each window length h, starting the process from ``pi``.

    The conditioning set always includes the target's own time-zero
    state.  The source must not be in it.
    """
    ensure_valid(spec)
    space = spec.space
    pi = _check_distribution(space, pi)
    t_idx = space.index_of(target)
    s_idx = space.index_of(source)
    cond = frozenset(cond)
    for name in cond:
        space.index_of(name)
    if source == target or source in cond:
        raise ValueError("source must be outside the conditioning set and target")
    hs = tuple(float(h) for h in hs)
    if any(h < MIN_H for h in hs) or any(
        hs[i] <= hs[i + 1] for i in range(len(hs) - 1)
    ):
        raise ValueError(f"window lengths must be strictly decreasing and >= {MIN_H}")

    w_idx = sorted({space.index_of(n) for n in cond} | {t_idx})
    states = np.array(list(space.states()), dtype=int)
    n = space.n_states
    card_t = space.cards[t_idx]
    card_s = space.cards[s_idx]
    w_cards = [space.cards[i] for i in w_idx]
    w_ids = np.ravel_multi_index([states[:, i] for i in w_idx], w_cards)
    s0 = states[:, s_idx]
    onehot = np.zeros((n, card_t))
    onehot[np.arange(n), states[:, t_idx]] = 1.0

    gen = build_generator(spec)
    cmis = []
    for h in hs:
        p_h = _expm_uniformized(gen.matrix, h)
        p_target = p_h @ onehot  # P(target state at h | full state at 0)
        joint = np.zeros((int(np.prod(w_cards)), card_s, card_t))
        np.add.at(joint, (w_ids, s0), pi[:, None] * p_target)
        cmis.append(_cmi(joint))

    ratios = tuple(
        cmis[i + 1] / cmis[i] if cmis[i] > 0 else float("nan")
        for i in range(len(cmis) - 1)
    )
    decay_class, orders = classify_decay(hs, cmis)
    return CiDecayReport(
        target=target,
        source=source,
        cond=tuple(sorted(cond)),
        hs=hs,
        cmis=tuple(cmis),
        ratios=ratios,
        orders=orders,
        decay_class=decay_class,
    )


def _cmi(joint: np.ndarray) -> float:
    """I(T; S | W) in nats from a (W, S, T) joint table; cells below
    CMI_PROB_FLOOR are treated as zero."""
    p_ws = joint.sum(axis=2, keepdims=True)
    p_wt = joint.sum(axis=1, keepdims=True)
    p_w = joint.sum(axis=(1, 2), keepdims=True)
    num = joint * p_w
    den = np.broadcast_to(p_ws * p_wt, joint.shape)
    mask = joint > CMI_PROB_FLOOR
    total = float(np.sum(joint[mask] * np.log(num[mask] / den[mask])))
    return max(total, 0.0)


# --- simulation and estimation --------------------------------------------------


def _jump_table(spec: CfmpSpec):
    """Per product state: total exit rate, cumulative transition weights,
    and the state index reached by each transition."""
    space = spec.space
    tables = _compile(spec)
    dep_positions = {
        name: tuple(space.index_of(d) for d in spec.intensities[name].depends_on)
        for name in space.names
    }
    strides = space.strides
    out = []
    for idx, y in enumerate(space.states()):
        rates = []
        targets = []
        for ki, name in enumerate(space.names):
            given = tuple(y[p] for p in dep_positions[name])
            src = y[ki]
            for dst in range(space.cards[ki]):
                if dst != src:
                    r = tables[name][(given, src, dst)]
                    if r > 0.0:
                        rates.append(r)
                        targets.append(idx + (dst - src) * strides[ki])
        total = float(sum(rates))
        cum = np.cumsum(rates) / total if total > 0 else np.empty(0)
        out.append((total, cum, targets))
    return out


def simulate(spec: CfmpSpec, pi, horizon: float, seed: int) -> Trajectory:
    """Exact event-driven sample of the joint chain: exponential holding
    times at the total exit rate, next transition chosen proportionally
    to its rate.  Deterministic given the seed.  An absorbing state
    simply holds until the horizon."""
    ensure_valid(spec)
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    space = spec.space
    pi = _check_distribution(space, pi)
    rng = np.random.default_rng(seed)
    states = list(space.states())
    jump_table = _jump_table(spec)
    idx = int(rng.choice(space.n_states, p=pi))
    initial = states[idx]
    jumps = []
    t = 0.0
    while True:
        total, cum, targets = jump_table[idx]
        if total <= 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t > horizon:
            break
        # cum[-1] can sit a few ulps under 1, so clamp the draw's index
        pick = min(int(np.searchsorted(cum, rng.random(), side="right")), len(targets) - 1)
        idx = targets[pick]
        jumps.append((t, states[idx]))
    return Trajectory(initial, tuple(jumps), float(horizon))


def simulate_batch(
    spec: CfmpSpec, pi, horizon: float, seed: int, count: int
) -> list[Trajectory]:
    """Independent trajectories with per-trajectory seeds seed + index."""
    return [simulate(spec, pi, horizon, seed + i) for i in range(count)]


@dataclass(frozen=True)
class CellEstimate:
    exposure: float
    events: dict[int, int]
    rates: dict[int, float | None]


@dataclass(frozen=True, eq=False)
class IntensityEstimates:
    """Occurrence/exposure rate estimates, one cell per (component,
    dependency configuration, own state); cells with zero exposure are
    undefined (None), not zero."""

    space: ComponentSpace
    depends_on: dict[str, tuple[str, ...]]
    cells: dict[str, dict[tuple[tuple[int, ...], int], CellEstimate]]

    def to_json_dict(self) -> dict:
        comps = {}
        for name in self.space.names:
            deps = self.depends_on[name]
            rows = []
            for (given, src), cell in sorted(self.cells[name].items()):
                rows.append(
                    {
                        "given": {d: v for d, v in zip(deps, given)},
                        "from": src,
                        "exposure": cell.exposure,
                        "events": {str(t): c for t, c in sorted(cell.events.items())},
                        "rates": {str(t): r for t, r in sorted(cell.rates.items())},
                    }
                )
            comps[name] = {"depends_on": list(deps), "cells": rows}
        return {"components": comps}


def estimate_intensities(
    trajectories: Sequence[Trajectory], spec: CfmpSpec
) -> IntensityEstimates:
    """Rate estimates under the spec's dependency structure: events in a
    cell divided by the total time exposed in that cell."""
    ensure_valid(spec)
    space = spec.space
    dep_positions = {
        name: tuple(space.index_of(d) for d in spec.intensities[name].depends_on)
        for name in space.names
    }
    exposure: dict[str, dict[tuple, float]] = {n: defaultdict(float) for n in space.names}
    counts: dict[str, dict[tuple, int]] = {n: defaultdict(int) for n in space.names}
    for traj in trajectories:
        for state, dwell in traj.states_and_durations():
            for ki, name in enumerate(space.names):
                given = tuple(state[p] for p in dep_positions[name])
                exposure[name][(given, state[ki])] += dwell
        prev = traj.initial
        for _, state in traj.jumps:
            ki = next(
                i for i in range(len(state)) if state[i] != prev[i]
            )
            name = space.names[ki]
            given = tuple(prev[p] for p in dep_positions[name])
            counts[name][(given, prev[ki], state[ki])] += 1
            prev = state

    cells: dict[str, dict[tuple[tuple[int, ...], int], CellEstimate]] = {}
    depends_on = {}
    for ki, name in enumerate(space.names):
        deps = spec.intensities[name].depends_on
        depends_on[name] = deps
        dep_cards = [space.cards[space.index_of(d)] for d in deps]
        card = space.cards[ki]
        comp_cells = {}
        for given in itertools.product(*(range(c) for c in dep_cards)):
            for src in range(card):
                expo = exposure[name].get((given, src), 0.0)
                events = {
                    dst: counts[name].get((given, src, dst), 0)
                    for dst in range(card)
                    if dst != src
                }
                rates = {
                    dst: (cnt / expo if expo > 0 else None)
                    for dst, cnt in events.items()
                }
                comp_cells[(given, src)] = CellEstimate(expo, events, rates)
        cells[name] = comp_cells
    return IntensityEstimates(space, depends_on, cells)


# --- irrelevance oracle ----------------------------------------------------------


def local_independence_oracle(spec: CfmpSpec) -> IrrelevanceOracle:
    """Irrelevance by intensity constancy.  Only triples that partition
    the component set are in the oracle's domain; others raise
    OracleDomainError and are skipped by the axiom checkers."""
    ensure_valid(spec)

    def query(a: frozenset, b: frozenset, c: frozenset) -> bool:
        try:
            return set_locally_independent(spec, a, b, c)
        except NonCoveringQueryError as exc:
            raise OracleDomainError(str(exc)) from None

    return IrrelevanceOracle(
        ground=tuple(spec.space.names), query=query, name="local-independence"
    )


# --- JSON wire formats ------------------------------------------------------------


def spec_to_json_dict(spec: CfmpSpec) -> dict:
    comps = [
        {"name": n, "states": c} for n, c in zip(spec.space.names, spec.space.cards)
    ]
    intens = {}
    for name in spec.space.names:
        ci = spec.intensities[name]
        rows = sorted(ci.rows, key=lambda r: (r.given, r.source, r.target))
        intens[name] = {
            "depends_on": list(ci.depends_on),
            "table": [
                {
                    "given": {d: v for d, v in zip(ci.depends_on, r.given)},
                    "from": r.source,
                    "to": r.target,
                    "rate": r.rate,
                }
                for r in rows
            ],
        }
    return {"components": comps, "intensities": intens}


def spec_from_json_dict(data: dict) -> CfmpSpec:
    if not isinstance(data, dict) or "components" not in data:
        raise ValueError("process spec JSON must be an object with 'components'")
    names = []
    cards = []
    for comp in data["components"]:
        names.append(str(comp["name"]))
        cards.append(int(comp["states"]))
    space = ComponentSpace(tuple(names), tuple(cards))
    intens_data = data.get("intensities", {})
    intensities = {}
    for name in names:
        entry = intens_data.get(name, {})
        deps = tuple(str(d) for d in entry.get("depends_on", ()))
        rows = []
        for raw in entry.get("table", ()):
            given_map = raw.get("given", {})
            if set(given_map) != set(deps):
                raise ValueError(
                    f"{name}: 'given' must assign exactly {list(deps)}, "
                    f"got {sorted(given_map)}"
                )
            rows.append(
                RateRow(
                    given=tuple(int(given_map[d]) for d in deps),
                    source=int(raw["from"]),
                    target=int(raw["to"]),
                    rate=float(raw["rate"]),
                )
            )
        intensities[name] = ComponentIntensity(deps, tuple(rows))
    return CfmpSpec(space, intensities)


def spec_to_json(spec: CfmpSpec) -> str:
    return json.dumps(spec_to_json_dict(spec), indent=2) + "\n"


def spec_from_json(text: str) -> CfmpSpec:
    return spec_from_json_dict(json.loads(text))


def trajectory_to_jsonl(traj: Trajectory, space: ComponentSpace) -> str:
    header = {
        "components": list(space.names),
        "initial": list(traj.initial),
        "horizon": traj.horizon,
    }
    lines = [json.dumps(header)]
    prev = traj.initial
    for t, state in traj.jumps:
        ki = next(i for i in range(len(state)) if state[i] != prev[i])
        lines.append(
            json.dumps(
                {"time": t, "component": space.names[ki], "new_state": state[ki]}
            )
        )
        prev = state
    return "\n".join(lines) + "\n"


def trajectory_from_jsonl(text: str, space: ComponentSpace) -> Trajectory:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty trajectory file")
    header = json.loads(lines[0])
    if tuple(header.get("components", ())) != space.names:
        raise ValueError(
            f"trajectory components {header.get('components')} do not match "
            f"the spec components {list(space.names)}"
        )
    state = list(int(v) for v in header["initial"])
    horizon = float(header["horizon"])
    initial = tuple(state)
    jumps = []
    for ln in lines[1:]:
        ev = json.loads(ln)
        ki = space.index_of(str(ev["component"]))
        state[ki] = int(ev["new_state"])
        jumps.append((float(ev["time"]), tuple(state)))
    return Trajectory(initial, tuple(jumps), horizon)
