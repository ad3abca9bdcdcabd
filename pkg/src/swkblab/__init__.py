"""Numerical checks of SWKB exactness for shape-invariant superpotentials."""
from .errors import (
    BoxTooSmall,
    DomainError,
    MultipleRegionError,
    NegativityError,
    NoConvergence,
    NoRootError,
    ParamError,
    QuadratureDivergence,
    ShiftMismatch,
    SwkbLabError,
)
from .invariance import hbar_scaling_check, shape_invariance_residual
from .model import Kind, PhysParams, SuperpotentialModel
from .spectrum import solve_level
from .swkb import SwkbConfig, find_turning_points, swkb_integral, swkb_integral_scaled

__version__ = "0.1.0"

__all__ = [
    "BoxTooSmall", "DomainError", "MultipleRegionError", "NegativityError", "NoConvergence",
    "NoRootError", "ParamError", "QuadratureDivergence", "ShiftMismatch", "SwkbLabError",
    "Kind", "PhysParams", "SuperpotentialModel", "SwkbConfig", "find_turning_points",
    "swkb_integral", "swkb_integral_scaled", "shape_invariance_residual", "hbar_scaling_check",
    "solve_level",
]
