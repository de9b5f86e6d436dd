"""Finite orthogonal polynomial families on the solid cone and conic
surface: construction, evaluation, and numerical certification."""

__version__ = "0.1.0"

from . import (  # noqa: F401
    ball,
    cone_solid,
    cone_surface,
    errors,
    harmonics,
    polyalg,
    quadrature,
    scalars,
    univariate,
    verifier,
)
from .errors import FiniteConeError  # noqa: F401
