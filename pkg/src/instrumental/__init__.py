"""Exact analysis of classical, quantum and no-signalling correlations
in instrumental causal scenarios."""

from .errors import CapacityError, ConvergenceError
from .scenario import (
    Correlation,
    DeterministicStrategy,
    Kind,
    Scenario,
    append_dummy_input,
    classical_correlations,
    dummy_input_extension,
    enumerate_deterministic_strategies,
    max_signalling_residual,
    mix_correlations,
    postselect,
    pr_box,
    random_mixture,
    strategy_to_correlation,
    uniform_box,
    validate,
)
from .polytope import (
    HPolytope,
    LinearInequality,
    MembershipCertificate,
    VPolytope,
    classical_vpolytope,
    facet_enumeration,
    fourier_motzkin_project,
    h_polytopes_equal,
    maximize_linear,
    membership,
    no_signalling_polytope,
    reduce_modulo,
    vertex_enumeration,
)
from .inequalities import (
    BoundsTriple,
    ExactValue,
    LinearExpression,
    Orbit,
    SymmetryGroup,
    bounds,
    catalog,
    classical_maximum,
    correlator,
    extension_membership,
    facet_orbit_classify,
    gpt_maximum,
    identity_check,
    lift_to_bell,
    pearl_expressions,
    relabel_correlation,
    relabel_expression,
    symmetry_group,
    verify_identity,
)
from .quantum import (
    Observable2,
    QuantumStrategy,
    SeeSawResult,
    TwoQubitState,
    bonet_strategy,
    born_table,
    chained_strategy,
    chsh_strategy,
    gpt_box_search,
    rationalize_correlation,
    tilted_search,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConvergenceError",
    "Kind",
    "Scenario",
    "Correlation",
    "DeterministicStrategy",
    "enumerate_deterministic_strategies",
    "strategy_to_correlation",
    "classical_correlations",
    "postselect",
    "dummy_input_extension",
    "append_dummy_input",
    "validate",
    "max_signalling_residual",
    "mix_correlations",
    "random_mixture",
    "pr_box",
    "uniform_box",
    "LinearInequality",
    "HPolytope",
    "VPolytope",
    "MembershipCertificate",
    "reduce_modulo",
    "facet_enumeration",
    "vertex_enumeration",
    "fourier_motzkin_project",
    "membership",
    "maximize_linear",
    "no_signalling_polytope",
    "classical_vpolytope",
    "h_polytopes_equal",
    "LinearExpression",
    "ExactValue",
    "BoundsTriple",
    "Orbit",
    "SymmetryGroup",
    "catalog",
    "bounds",
    "correlator",
    "pearl_expressions",
    "lift_to_bell",
    "identity_check",
    "verify_identity",
    "classical_maximum",
    "gpt_maximum",
    "extension_membership",
    "facet_orbit_classify",
    "symmetry_group",
    "relabel_expression",
    "relabel_correlation",
    "Observable2",
    "TwoQubitState",
    "QuantumStrategy",
    "SeeSawResult",
    "born_table",
    "chsh_strategy",
    "bonet_strategy",
    "chained_strategy",
    "tilted_search",
    "gpt_box_search",
    "rationalize_correlation",
    "__version__",
]
