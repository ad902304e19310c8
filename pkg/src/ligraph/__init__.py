"""Local independence graphs: asymmetric separation on directed
possibly-cyclic graphs, asymmetric (semi)graphoid checking, and
composable finite Markov processes."""

from .graphs import (
    DiGraph,
    GraphError,
    UGraph,
    UnknownNodeError,
    enumerate_digraphs,
)
from .separation import (
    EnumerationGuardError,
    SeparationQuery,
    all_separations,
    delta_separates,
    delta_separates_trail,
)
from .graphoid import (
    Axiom,
    CheckReport,
    DELTA_SEPARATION_GUARANTEES,
    DerivedProperty,
    IrrelevanceOracle,
    LOCAL_INDEPENDENCE_GUARANTEES,
    OracleDomainError,
    ProfileReport,
    check_axiom,
    check_derived,
    check_semigraphoid_profile,
    constant_oracle,
    delta_separation_oracle,
    find_right_decomposition_counterexample,
    undirected_separation_oracle,
    violates,
)
from .cfmp import (
    CfmpSpec,
    CiDecayReport,
    ComponentIntensity,
    ComponentSpace,
    Generator,
    IntensityEstimates,
    NonCoveringQueryError,
    RateRow,
    SpecValidationError,
    Trajectory,
    build_generator,
    ci_decay,
    derive_graph,
    estimate_intensities,
    is_locally_independent,
    local_independence_oracle,
    set_locally_independent,
    simulate,
    simulate_batch,
    spec_from_json,
    spec_to_json,
    stationary_distribution,
    transition_matrix,
    uniform_distribution,
    validate_spec,
    vacuous_dependencies,
)

__version__ = "0.1.0"
