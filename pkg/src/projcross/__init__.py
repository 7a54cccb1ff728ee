"""Parametric projective-plane drawings of K_n and their crossing counts."""

from .core import Params, VertexId, angle_of, make_params, signed_offset
from .drawing import build_auxiliary, project
from .engine import count_crossings, responsibility
from .formulas import f_eval, hill_value, pcr_exact, type_count

__all__ = [
    "Params",
    "VertexId",
    "angle_of",
    "build_auxiliary",
    "count_crossings",
    "f_eval",
    "hill_value",
    "make_params",
    "pcr_exact",
    "project",
    "responsibility",
    "signed_offset",
    "type_count",
]
