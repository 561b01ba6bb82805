"""Exact verification of Seiberg-duality identities for A_n quiver I-functions."""

__version__ = "0.1.0"

from .exact import LaurentSeries, PoleError, VariableChange, WindowError
from .quiver import AnQuiverSpec, enumerate_fixed_points, iota, mutate, sample_params
from .duality import CaseTag, classify_case, verify_pair

__all__ = [
    "AnQuiverSpec", "CaseTag", "LaurentSeries", "PoleError", "VariableChange", "WindowError",
    "classify_case", "enumerate_fixed_points", "iota", "mutate", "sample_params", "verify_pair",
]
