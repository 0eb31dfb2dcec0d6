"""Adaptive maximum residual flow under k arc destructions."""

from .attack import AttackReport, BudgetExceeded, certify, k1_bisection_oracle, worst_case
from .maxflow import MaxFlowResult, max_flow, min_cut_cardinality, residual_value
from .model import (
    InvariantViolation,
    ModelMap,
    ModelTooLarge,
    ScenarioIndex,
    Solution,
    build_model,
    solve_kamrfp,
    variable_count,
)
from .network import (
    UNBOUNDED,
    Arc,
    Flow,
    FlowError,
    IncidenceMatrix,
    Network,
    NetworkError,
    check_flow,
    incidence,
    make_flow,
    parse_flow,
    parse_network,
    serialize_flow,
    serialize_network,
)
from .simplex import LinearProgram, LPOutcome, LPStatus, lp_to_text, solve_lp

__version__ = "0.1.0"
