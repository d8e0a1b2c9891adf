"""
Connection constants and tau-function of the nu-modified radial sinh-Gordon equation.
"""
from .connect import coefficient_A, coefficient_B, connection_constants
from .errors import ConfigError, ConvergenceError, DomainError, FitError, SolverError
from .sg_types import ModelParams
from .sinhg import solve_backward
from .tau import tau_exact

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FitError",
    "ModelParams",
    "SolverError",
    "__version__",
    "coefficient_A",
    "coefficient_B",
    "connection_constants",
    "solve_backward",
    "tau_exact",
]
__version__ = "0.2.0"
