"""Abelian geometric phases of three-level systems and a two-spin NMR simulator."""

from geophase.statespace import (
    ParamPoint,
    embed,
    extract,
    overlap,
    param_to_state,
    projector,
    state_to_param,
)
from geophase.geometry import (
    GeodesicArc,
    PhaseReport,
    QuadratureConfig,
    arc_point,
    bargmann_gp,
    dynamical_phase,
    geometric_phase,
    make_geodesic,
    total_phase,
)
from geophase.evolution import CycleParams, beta_bargmann, beta_predicted, run_cycle

__version__ = "0.1.0"

__all__ = [
    "CycleParams",
    "GeodesicArc",
    "ParamPoint",
    "PhaseReport",
    "QuadratureConfig",
    "arc_point",
    "bargmann_gp",
    "beta_bargmann",
    "beta_predicted",
    "dynamical_phase",
    "embed",
    "extract",
    "geometric_phase",
    "make_geodesic",
    "overlap",
    "param_to_state",
    "projector",
    "run_cycle",
    "state_to_param",
    "total_phase",
]
