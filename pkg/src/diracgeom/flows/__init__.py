"""Numerical Dirac-bracket dynamics with energy and constraint drift monitoring."""

from ._kernels import available_backends, resolve_backend
from .integrate import (
    CompiledFlow,
    FlowConfig,
    Trajectory,
    casimir_derivative,
    compile_flow,
    integrate,
    step_sizes,
    vector_field_numeric,
)

__all__ = [
    "CompiledFlow",
    "FlowConfig",
    "Trajectory",
    "available_backends",
    "casimir_derivative",
    "compile_flow",
    "integrate",
    "resolve_backend",
    "step_sizes",
    "vector_field_numeric",
]
