"""Reference graphs and process specs used by the docs, CLI walkthrough
and test suites.

``three_cycle`` is the smallest graph showing the asymmetry of the
separation relation: in a -> b -> c -> a, node c separates b from a but
not a from b.

``home_visits`` models an elder-care program: regular nurse visits
reduce the hospitalization rate, hospitalization intensifies future
visits, and an unobserved health status drives both hospitalization and
survival but not the visits.  Ignoring health makes survival look
dependent on visits: hospitalization alone does not separate them.

Rates are deliberately asymmetric so that no accidental constancy hides
a declared dependency (every edge of the derived graph is genuine).
"""

from __future__ import annotations

from .cfmp import CfmpSpec, ComponentIntensity, ComponentSpace, RateRow, spec_to_json
from .graphs import DiGraph


def _binary_intensity(
    deps: tuple[str, ...], rates: dict[tuple[int, ...], tuple[float, float]]
) -> ComponentIntensity:
    """Table for a binary component: per dependency configuration, the
    (0 -> 1, 1 -> 0) rate pair."""
    rows = []
    for given in sorted(rates):
        up, down = rates[given]
        rows.append(RateRow(given, 0, 1, up))
        rows.append(RateRow(given, 1, 0, down))
    return ComponentIntensity(deps, tuple(rows))


def three_cycle_graph() -> DiGraph:
    return DiGraph.from_edges([("a", "b"), ("b", "c"), ("c", "a")])


def three_cycle_process() -> CfmpSpec:
    """Three binary components wired in a directed cycle: a listens to c,
    b to a, c to b."""
    space = ComponentSpace(("a", "b", "c"), (2, 2, 2))
    return CfmpSpec(
        space,
        {
            "a": _binary_intensity(("c",), {(0,): (0.6, 1.4), (1,): (1.7, 0.5)}),
            "b": _binary_intensity(("a",), {(0,): (0.9, 1.1), (1,): (2.2, 0.3)}),
            "c": _binary_intensity(("b",), {(0,): (1.3, 0.8), (1,): (0.45, 1.9)}),
        },
    )


def home_visits_graph() -> DiGraph:
    return DiGraph.from_edges(
        [
            ("visits", "hosp"),
            ("hosp", "visits"),
            ("health", "hosp"),
            ("health", "survival"),
            ("hosp", "survival"),
        ]
    )


def home_visits_process() -> CfmpSpec:
    """Four binary components: health runs autonomously, hospitalization
    listens to health and visits, survival to health and hospitalization,
    visits to hospitalization."""
    space = ComponentSpace(("health", "hosp", "survival", "visits"), (2, 2, 2, 2))
    return CfmpSpec(
        space,
        {
            "health": _binary_intensity((), {(): (0.35, 0.55)}),
            "hosp": _binary_intensity(
                ("health", "visits"),
                {
                    (0, 0): (1.0, 1.6),
                    (0, 1): (0.35, 2.0),
                    (1, 0): (2.4, 0.9),
                    (1, 1): (0.84, 1.1),
                },
            ),
            "survival": _binary_intensity(
                ("health", "hosp"),
                {
                    (0, 0): (0.15, 1.1),
                    (0, 1): (0.55, 0.8),
                    (1, 0): (0.9, 0.6),
                    (1, 1): (2.0, 0.4),
                },
            ),
            "visits": _binary_intensity(
                ("hosp",), {(0,): (0.5, 1.2), (1,): (2.6, 0.7)}
            ),
        },
    )


def independent_pair_process() -> CfmpSpec:
    """Two binary components that ignore each other (all flip rates 1)."""
    space = ComponentSpace(("x", "y"), (2, 2))
    return CfmpSpec(
        space,
        {
            "x": _binary_intensity((), {(): (1.0, 1.0)}),
            "y": _binary_intensity((), {(): (1.0, 1.0)}),
        },
    )


def vacuous_dependency_process() -> CfmpSpec:
    """y declares a dependency on x but its rate rows are identical, so
    the derived graph has no edge x -> y."""
    space = ComponentSpace(("x", "y"), (2, 2))
    return CfmpSpec(
        space,
        {
            "x": _binary_intensity((), {(): (0.8, 1.2)}),
            "y": _binary_intensity(("x",), {(0,): (0.7, 1.3), (1,): (0.7, 1.3)}),
        },
    )


def repo_fixture_files() -> dict[str, str]:
    """Canonical serialized form of the fixtures shipped in fixtures/."""
    return {
        "three_cycle_graph.json": three_cycle_graph().to_json(),
        "home_visits_graph.json": home_visits_graph().to_json(),
        "three_cycle_process.json": spec_to_json(three_cycle_process()),
        "home_visits_process.json": spec_to_json(home_visits_process()),
        "independent_pair_process.json": spec_to_json(independent_pair_process()),
    }
