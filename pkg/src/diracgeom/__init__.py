"""Exact computations with Dirac structures, lagrangian relations and constrained dynamics."""

from . import constraints, field_dirac, linalg, linear_dirac, scalar
from .errors import DiracError

__version__ = "0.1.0"

__all__ = ["constraints", "field_dirac", "linalg", "linear_dirac", "scalar", "DiracError", "__version__"]
