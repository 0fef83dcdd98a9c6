"""Conic upper bounds on graph independence numbers, and closure checks for
the matrix cones behind them."""

from .bounds import (
    BoundResult,
    MembershipResult,
    MonomialBasis,
    lovasz_theta,
    motzkin_straus_value,
    parrilo_membership,
    schrijver_theta,
    sos_cone_membership,
    theta_r,
)
from .errors import (
    GraphExprError,
    NoCounterexampleError,
    ResourceLimitError,
    SolverFailureError,
)
from .graphs import (
    Graph,
    chromatic_number,
    complement,
    from_edge_list,
    independence_number,
    make_complete,
    make_cycle,
    make_edgeless,
    parse_graph_expr,
    strong_power,
    strong_product,
    to_edge_list,
)
from .productprop import (
    CONES,
    CounterexampleReport,
    check_product_pair,
    cone_membership,
    construct_counterexample,
)
from .sdp import Block, ConicProblem, FeasibilityResult, Solution, check_feasibility, solve
from .symmat import (
    SymMatrix,
    Witness,
    all_ones,
    identity,
    is_copositive_oracle,
    is_psd,
    kron,
    lambda2,
    lemma1_transform,
    min_quadratic_on_simplex,
    odot,
    quad_form,
    read_matrix_text,
    write_matrix_text,
    zeros,
)

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "Block",
    "CONES",
    "ConicProblem",
    "CounterexampleReport",
    "FeasibilityResult",
    "Graph",
    "GraphExprError",
    "MembershipResult",
    "MonomialBasis",
    "NoCounterexampleError",
    "ResourceLimitError",
    "Solution",
    "SolverFailureError",
    "SymMatrix",
    "Witness",
    "all_ones",
    "check_feasibility",
    "check_product_pair",
    "chromatic_number",
    "complement",
    "cone_membership",
    "construct_counterexample",
    "from_edge_list",
    "identity",
    "independence_number",
    "is_copositive_oracle",
    "is_psd",
    "kron",
    "lambda2",
    "lemma1_transform",
    "lovasz_theta",
    "make_complete",
    "make_cycle",
    "make_edgeless",
    "min_quadratic_on_simplex",
    "motzkin_straus_value",
    "odot",
    "parrilo_membership",
    "parse_graph_expr",
    "quad_form",
    "read_matrix_text",
    "schrijver_theta",
    "solve",
    "sos_cone_membership",
    "strong_power",
    "strong_product",
    "theta_r",
    "to_edge_list",
    "write_matrix_text",
    "zeros",
]
