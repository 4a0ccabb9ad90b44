"""Exact geodesics of the homogeneous H^1 metric via square-root lifting.

The library represents orientation-preserving diffeomorphisms of the line
(and lifts of circle diffeomorphisms) on uniform grids, maps them through
the square-root lift under which the metric becomes flat, and exploits the
resulting straight-line geodesics: closed-form boundary-value and
initial-value solvers, sharp blow-up prediction, analytic Hunter-Saxton
and two-component solutions, piecewise-linear soliton dynamics, and the
spherical picture on the circle.
"""

__version__ = "0.1.0"

from .errors import (
    HsgeoError,
    GridTooSmall,
    NotIntegrable,
    TailNotSettled,
    RangeExceedsWindow,
    DerivativeTooSmall,
    ConstraintViolated,
    BranchCutAmbiguity,
    PastBlowup,
    SolitonBlowup,
    WindowTooSmall,
    AntipodalPoints,
    PositivityLost,
)
from .funcspace import (
    Grid,
    GridFunction,
    Quadrature,
    TRAPEZOID,
    SIMPSON,
    integrate,
    derivative,
    antiderivative_from_minus_infinity,
    limit_at_plus_infinity,
    limit_at_minus_infinity,
    family,
    family_with_derivative,
    gridfunction_from_csv,
    gridfunction_to_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
