"""Compact finite-difference solver for the time-fractional Black-Scholes equation.

Fourth-order compact discretization in space on graded meshes (uniform,
quadratic, Tavella-Randall or any monotone grading) combined with the L1
scheme for the Caputo time derivative.
"""

from tfbs_compact.caputo import L1Weights, gamma_fn, l1_apply, l1_weights
from tfbs_compact.compact import (
    CompactStencil,
    compact_residual,
    stencil_coefficients,
    truncation_bound_global,
    truncation_bound_node,
)
from tfbs_compact.mesh import (
    GradingFunction,
    Mesh,
    TavellaRandallParams,
    build_from_grading,
    build_quadratic,
    build_tavella_randall,
    build_uniform,
    tr_min_step_estimate,
)
from tfbs_compact.problems import (
    DiffusionProblem,
    ManufacturedCase,
    MarketParams,
    manufactured_case,
    payoff,
    recover_option_prices,
    to_diffusion,
)
from tfbs_compact.solver import (
    SchemeMatrix,
    SingularSystemError,
    SolutionGrid,
    assemble_matrix,
    assemble_rhs,
    thomas_solve,
    time_march,
)

__version__ = "0.1.0"

__all__ = [
    "CompactStencil",
    "DiffusionProblem",
    "GradingFunction",
    "L1Weights",
    "ManufacturedCase",
    "MarketParams",
    "Mesh",
    "SchemeMatrix",
    "SingularSystemError",
    "SolutionGrid",
    "TavellaRandallParams",
    "assemble_matrix",
    "assemble_rhs",
    "build_from_grading",
    "build_quadratic",
    "build_tavella_randall",
    "build_uniform",
    "compact_residual",
    "gamma_fn",
    "l1_apply",
    "l1_weights",
    "manufactured_case",
    "payoff",
    "recover_option_prices",
    "stencil_coefficients",
    "thomas_solve",
    "time_march",
    "to_diffusion",
    "tr_min_step_estimate",
    "truncation_bound_global",
    "truncation_bound_node",
]
