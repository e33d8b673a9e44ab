"""Exact constructions and checks for mixed-integer convex formulations."""
from .convex import Cone, ConicSet, PolyhedronH, PolyhedronV
from .errors import DeskScaleError, MicpError
from .formulations import MicpFormulation, check_ideal, enumerate_slices, slice_set
from .rational import hermite_normal_form, unimodular_completion

__all__ = [
    "Cone",
    "ConicSet",
    "DeskScaleError",
    "MicpError",
    "MicpFormulation",
    "PolyhedronH",
    "PolyhedronV",
    "check_ideal",
    "enumerate_slices",
    "hermite_normal_form",
    "slice_set",
    "unimodular_completion",
]
