"""Approximate projection onto the tangent cone to third-order tensors of bounded TT-rank."""

__version__ = "0.1.0"

from .estimator import ExactTangentConeProjector, TangentConeProjector
from .exceptions import (
    ConfigError,
    DimensionError,
    InadmissibleFrameError,
    NumericalError,
    RankDeficientError,
    RankError,
    T3DFormatError,
    TTProjError,
    ZeroTensorError,
)
from .oracle import OracleResult, exact_project_grid, exact_project_multistart
from .projection import (
    ProjectionResult,
    alternating_uv,
    angle_value,
    approx_project,
    kutschan_omega,
    omega_bound,
    omega_ratio,
)
from .tangent import (
    TangentParams,
    assemble,
    assemble_block,
    closed_form_params,
    extract_params,
    project_tangent_space,
    y_parallel,
)
from .ttd import CanonicalTtPair, Ttd, canonicalize, random_tt, tt_rank, tt_svd

__all__ = [
    "CanonicalTtPair", "ConfigError", "DimensionError", "ExactTangentConeProjector",
    "InadmissibleFrameError", "NumericalError", "OracleResult", "ProjectionResult",
    "RankDeficientError", "RankError", "T3DFormatError", "TTProjError", "TangentConeProjector",
    "TangentParams", "Ttd", "ZeroTensorError", "alternating_uv", "angle_value",
    "approx_project", "assemble", "assemble_block", "canonicalize", "closed_form_params",
    "exact_project_grid", "exact_project_multistart", "extract_params", "kutschan_omega",
    "omega_bound", "omega_ratio", "project_tangent_space", "random_tt", "tt_rank", "tt_svd",
    "y_parallel",
]
