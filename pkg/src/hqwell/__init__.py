"""Quaternion-valued square-well quantum mechanics in a real Hilbert space."""
from .errors import NumericFailure, UnsupportedBoundary, UsageError
from .quaternion import Quaternion, is_parallel, qconj, qmul, qnorm
from .wavefunction import PhysicsParams, StationaryState

__all__ = [
    "NumericFailure", "UnsupportedBoundary", "UsageError",
    "Quaternion", "is_parallel", "qconj", "qmul", "qnorm",
    "PhysicsParams", "StationaryState",
]
__version__ = "0.1.0"
